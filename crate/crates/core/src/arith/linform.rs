use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{self, Rat};
use super::ArithError;

/// Homogeneous linear form `sum_j c_j z_j` over `nvars` variables.
///
/// There is no constant slot, so every value of this type is homogeneous of
/// degree one (or the zero form).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    coeffs: Vec<Rat>,
}

impl LinForm {
    pub fn zero(nvars: usize) -> Self {
        LinForm {
            coeffs: vec![Rat::zero(); nvars],
        }
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut f = Self::zero(nvars);
        f.coeffs[j] = Rat::one();
        f
    }

    pub fn new(coeffs: Vec<Rat>) -> Self {
        LinForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinForm {
            coeffs: coeffs.iter().map(|&c| rat::int(c)).collect(),
        }
    }

    /// Builds a form from `(variable, coefficient)` pairs.
    pub fn from_terms(nvars: usize, terms: &[(usize, i64)]) -> Self {
        let mut f = Self::zero(nvars);
        for &(j, c) in terms {
            f.coeffs[j] += rat::int(c);
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Rat {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn involves(&self, j: usize) -> bool {
        !self.coeffs[j].is_zero()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        LinForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Replaces `z_var` by `point`. `point` must not involve `var`.
    pub fn subst(&self, var: usize, point: &LinForm) -> Result<Self, ArithError> {
        if point.involves(var) {
            return Err(ArithError::SelfReferentialPoint { var });
        }
        let c = &self.coeffs[var];
        if c.is_zero() {
            return Ok(self.clone());
        }
        let mut out = self.add(&point.scale(c));
        out.coeffs[var] = Rat::zero();
        Ok(out)
    }

    /// The point `z_var = p` on which this form vanishes, if the form
    /// involves `var`.
    pub fn solve_for(&self, var: usize) -> Option<LinForm> {
        let c = &self.coeffs[var];
        if c.is_zero() {
            return None;
        }
        let scale = -c.recip();
        let mut p = self.scale(&scale);
        p.coeffs[var] = Rat::zero();
        Some(p)
    }

    /// Splits `self = scalar * canonical` where `canonical` has coprime
    /// integer coefficients and a positive first nonzero coefficient.
    /// Fails on the zero form.
    pub fn canonical(&self) -> Result<(Rat, LinForm), ArithError> {
        let first = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(ArithError::ZeroLinearForm)?;
        let mut content = rat::content(self.coeffs.iter());
        if first.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        Ok((content, self.scale(&inv)))
    }

    pub fn is_canonical(&self) -> bool {
        match self.canonical() {
            Ok((s, _)) => s.is_one(),
            Err(_) => false,
        }
    }

    /// If `other = ratio * self`, returns `ratio`.
    pub fn proportional(&self, other: &LinForm) -> Option<Rat> {
        let pivot = self.coeffs.iter().position(|c| !c.is_zero())?;
        if other.coeffs[pivot].is_zero() {
            return None;
        }
        let ratio = &other.coeffs[pivot] / &self.coeffs[pivot];
        let ok = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| &(a * &ratio) == b);
        ok.then_some(ratio)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(point)
            .fold(Rat::zero(), |acc, (c, x)| acc + c * x)
    }

    /// Integer coefficients, when every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.denom().is_one().then(|| c.numer().clone()))
            .collect()
    }

    /// Common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "z{j}")?;
            } else {
                write!(f, "{mag}*z{j}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_extracts_content_and_sign() {
        let f = LinForm::new(vec![rat::frac(-2, 3), rat::frac(4, 3), Rat::zero()]);
        let (s, c) = f.canonical().unwrap();
        assert_eq!(s, rat::frac(-2, 3));
        assert_eq!(c, LinForm::from_ints(&[1, -2, 0]));
        assert!(c.is_canonical());
        assert!(LinForm::zero(2).canonical().is_err());
    }

    #[test]
    fn solve_and_subst() {
        // 2 z1 - z2 = 0  <=>  z1 = z2 / 2
        let f = LinForm::from_ints(&[0, 2, -1]);
        let p = f.solve_for(1).unwrap();
        assert_eq!(
            p,
            LinForm::new(vec![Rat::zero(), Rat::zero(), rat::frac(1, 2)])
        );
        assert!(f.subst(1, &p).unwrap().is_zero());
        assert!(f.subst(1, &LinForm::var(3, 1)).is_err());
    }

    #[test]
    fn proportionality() {
        let a = LinForm::from_ints(&[2, -1, 0]);
        let b = LinForm::from_ints(&[-4, 2, 0]);
        assert_eq!(a.proportional(&b), Some(rat::int(-2)));
        assert_eq!(a.proportional(&LinForm::from_ints(&[2, 1, 0])), None);
    }

    #[test]
    fn display() {
        assert_eq!(
            LinForm::from_ints(&[-1, 2, -1]).to_string(),
            "-z0 + 2*z1 - z2"
        );
        assert_eq!(LinForm::zero(2).to_string(), "0");
    }
}
