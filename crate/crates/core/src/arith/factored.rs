use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use super::linform::LinForm;
use super::mpoly::{Homogeneity, MPoly};
use super::rat::{self, Rat};
use super::ArithError;

/// A linear denominator factor raised to `multiplicity`, together with the
/// set of variables whose contour encloses its zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaggedFactor {
    pub form: LinForm,
    pub multiplicity: u32,
    pub allowed: BTreeSet<usize>,
}

impl TaggedFactor {
    pub fn new(form: LinForm, multiplicity: u32, allowed: impl IntoIterator<Item = usize>) -> Self {
        TaggedFactor {
            form,
            multiplicity,
            allowed: allowed.into_iter().collect(),
        }
    }

    /// Factor whose zero is never enclosed by any contour.
    pub fn excluded(form: LinForm, multiplicity: u32) -> Self {
        Self::new(form, multiplicity, [])
    }

    pub fn is_allowed_for(&self, var: usize) -> bool {
        self.allowed.contains(&var)
    }
}

/// `scalar * num / prod(form_i ^ multiplicity_i)`.
///
/// Denominator factors are kept canonical (coprime integer coefficients,
/// positive leading coefficient) and pairwise distinct, so proportional
/// factors are always merged. A zero numerator collapses the whole value to
/// the zero function with an empty denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRat {
    scalar: Rat,
    num: MPoly,
    den: Vec<TaggedFactor>,
}

impl FactoredRat {
    pub fn new(scalar: Rat, num: MPoly, den: Vec<TaggedFactor>) -> Result<Self, ArithError> {
        let nvars = num.nvars();
        if scalar.is_zero() || num.is_zero() {
            return Ok(Self::zero(nvars));
        }
        let mut scalar = scalar;
        let mut merged: Vec<TaggedFactor> = Vec::with_capacity(den.len());
        for f in den {
            if f.form.nvars() != nvars {
                return Err(ArithError::VariableCount {
                    expected: nvars,
                    found: f.form.nvars(),
                });
            }
            if f.multiplicity == 0 {
                continue;
            }
            let (s, form) = f.form.canonical()?;
            scalar /= rat::pow(&s, f.multiplicity as i64);
            let allowed: BTreeSet<usize> = f
                .allowed
                .into_iter()
                .filter(|&j| form.involves(j))
                .collect();
            match merged.iter_mut().find(|g| g.form == form) {
                Some(g) => {
                    g.multiplicity += f.multiplicity;
                    g.allowed.extend(allowed);
                }
                None => merged.push(TaggedFactor {
                    form,
                    multiplicity: f.multiplicity,
                    allowed,
                }),
            }
        }
        merged.sort_by(|a, b| a.form.cmp(&b.form));
        Ok(FactoredRat {
            scalar,
            num,
            den: merged,
        })
    }

    pub fn zero(nvars: usize) -> Self {
        FactoredRat {
            scalar: Rat::zero(),
            num: MPoly::zero(nvars),
            den: Vec::new(),
        }
    }

    pub fn from_poly(num: MPoly) -> Self {
        FactoredRat {
            scalar: Rat::one(),
            num,
            den: Vec::new(),
        }
        .normalize_zero()
    }

    fn normalize_zero(self) -> Self {
        if self.num.is_zero() || self.scalar.is_zero() {
            Self::zero(self.num.nvars())
        } else {
            self
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &[TaggedFactor] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero() || self.scalar.is_zero()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.iter().any(|f| f.form.involves(var))
    }

    pub fn den_degree(&self) -> u32 {
        self.den.iter().map(|f| f.multiplicity).sum()
    }

    /// Total degree as a rational function, if the numerator is homogeneous.
    pub fn degree(&self) -> Option<i64> {
        match self.num.homogeneity() {
            Homogeneity::Degree(d) => Some(d as i64 - self.den_degree() as i64),
            _ => None,
        }
    }

    /// The constant value when nothing depends on any variable.
    pub fn as_constant(&self) -> Option<Rat> {
        if !self.den.is_empty() {
            return None;
        }
        self.num.as_constant().map(|c| c * &self.scalar)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        FactoredRat {
            scalar: &self.scalar * s,
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .normalize_zero()
    }

    /// Replaces the numerator, keeping scalar and denominator.
    pub fn with_num(&self, num: MPoly) -> Self {
        FactoredRat {
            scalar: self.scalar.clone(),
            num,
            den: self.den.clone(),
        }
        .normalize_zero()
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let mut den = Rat::one();
        for f in &self.den {
            let v = f.form.eval(point);
            if v.is_zero() {
                return None;
            }
            den *= rat::pow(&v, f.multiplicity as i64);
        }
        Some(&self.scalar * self.num.eval(point) / den)
    }

    /// Exact partial derivative in `z_var`.
    ///
    /// With `I` the factors involving `z_var`, uses
    /// `d(N / prod f^m) = (N' prod_I f - N sum_I m_i f_i' prod_{I \ i} f) / prod f^(m + [i in I])`.
    pub fn derivative(&self, var: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let n = self.nvars();
        let involved: Vec<usize> = (0..self.den.len())
            .filter(|&i| self.den[i].form.involves(var))
            .collect();
        let polys: Vec<MPoly> = involved
            .iter()
            .map(|&i| MPoly::from_linform(&self.den[i].form))
            .collect();
        let all = polys.iter().fold(MPoly::one(n), |acc, p| &acc * p);
        let mut num = &self.num.derivative(var) * &all;
        for (k, &i) in involved.iter().enumerate() {
            let f = &self.den[i];
            let weight = f.form.coeff(var) * rat::int(f.multiplicity as i64);
            let others = polys
                .iter()
                .enumerate()
                .filter(|(k2, _)| *k2 != k)
                .fold(MPoly::one(n), |acc, (_, p)| &acc * p);
            num = &num - &(&self.num * &others).scale(&weight);
        }
        let mut den = self.den.clone();
        for &i in &involved {
            den[i].multiplicity += 1;
        }
        FactoredRat {
            scalar: self.scalar.clone(),
            num,
            den,
        }
        .normalize_zero()
    }

    /// Cancels every denominator factor that divides the numerator exactly.
    /// Value-preserving and idempotent.
    pub fn reduce(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = self.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for f in &self.den {
            let mut f = f.clone();
            while f.multiplicity > 0 {
                match num.div_linear(&f.form) {
                    Some(q) => {
                        num = q;
                        f.multiplicity -= 1;
                    }
                    None => break,
                }
            }
            if f.multiplicity > 0 {
                den.push(f);
            }
        }
        FactoredRat {
            scalar: self.scalar.clone(),
            num,
            den,
        }
    }

    /// Substitutes `z_var := point` everywhere. Fails if a denominator
    /// factor vanishes identically. Tags lose `var`.
    pub fn subst(&self, var: usize, point: &LinForm) -> Result<Self, ArithError> {
        let num = self.num.subst_linear(var, point)?;
        let mut den = Vec::with_capacity(self.den.len());
        for f in &self.den {
            let form = f.form.subst(var, point)?;
            if form.is_zero() {
                return Err(ArithError::PoleOnSubstitution { var });
            }
            let mut allowed = f.allowed.clone();
            allowed.remove(&var);
            den.push(TaggedFactor {
                form,
                multiplicity: f.multiplicity,
                allowed,
            });
        }
        FactoredRat::new(self.scalar.clone(), num, den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        FactoredRat::new(&self.scalar * &other.scalar, &self.num * &other.num, den)
            .expect("factors of valid FactoredRats stay valid")
    }

    /// Sum over the least common denominator.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let n = self.nvars();
        let mut lcm: Vec<TaggedFactor> = self.den.clone();
        for g in &other.den {
            match lcm.iter_mut().find(|f| f.form == g.form) {
                Some(f) => {
                    f.multiplicity = f.multiplicity.max(g.multiplicity);
                    f.allowed.extend(g.allowed.iter().copied());
                }
                None => lcm.push(g.clone()),
            }
        }
        let lift = |x: &FactoredRat| -> MPoly {
            let mut p = x.num.scale(&x.scalar);
            for f in &lcm {
                let have = x
                    .den
                    .iter()
                    .find(|g| g.form == f.form)
                    .map_or(0, |g| g.multiplicity);
                if f.multiplicity > have {
                    p = &p * &MPoly::from_linform(&f.form).pow(f.multiplicity - have);
                }
            }
            p
        };
        let num = &lift(self) + &lift(other);
        if num.is_zero() {
            return Self::zero(n);
        }
        FactoredRat::new(Rat::one(), num, lcm).expect("canonical factors stay valid")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Equality as rational functions.
    pub fn value_eq(&self, other: &Self) -> bool {
        self.add(&other.neg()).is_zero()
    }

    /// Structural invariants: canonical, pairwise distinct, positive
    /// multiplicities, tags inside each factor's support.
    pub fn check_invariants(&self) -> bool {
        if self.is_zero() {
            return self.den.is_empty();
        }
        self.den.iter().enumerate().all(|(i, f)| {
            f.multiplicity >= 1
                && f.form.is_canonical()
                && f.allowed.iter().all(|&j| f.form.involves(j))
                && self.den[i + 1..].iter().all(|g| g.form != f.form)
        })
    }
}

impl fmt::Display for FactoredRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * ({})", self.scalar, self.num)?;
        for t in &self.den {
            write!(f, " / ({})^{}", t.form, t.multiplicity)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(c: &[i64]) -> LinForm {
        LinForm::from_ints(c)
    }

    #[test]
    fn derivative_examples() {
        // d/dz0 [1/(2z1 - z0 - z2)] = 1/(2z1 - z0 - z2)^2
        let f = FactoredRat::new(
            Rat::one(),
            MPoly::one(3),
            vec![TaggedFactor::new(lf(&[-1, 2, -1]), 1, [1])],
        )
        .unwrap();
        let expected = FactoredRat::new(
            Rat::one(),
            MPoly::one(3),
            vec![TaggedFactor::new(lf(&[-1, 2, -1]), 2, [1])],
        )
        .unwrap();
        assert!(f.derivative(0).value_eq(&expected));

        let g = FactoredRat::from_poly(MPoly::var(2, 1));
        assert!(g.derivative(0).is_zero());

        // d/dz0 [z0^2 / z1] = 2 z0 / z1
        let h = FactoredRat::new(
            Rat::one(),
            MPoly::var(2, 0).pow(2),
            vec![TaggedFactor::new(lf(&[0, 1]), 1, [1])],
        )
        .unwrap();
        let expected = FactoredRat::new(
            rat::int(2),
            MPoly::var(2, 0),
            vec![TaggedFactor::new(lf(&[0, 1]), 1, [1])],
        )
        .unwrap();
        let got = h.derivative(0);
        assert_eq!(got.den()[0].multiplicity, 1);
        assert!(got.value_eq(&expected));
    }

    #[test]
    fn reduce_examples() {
        let num = MPoly::from_terms(2, &[(1, &[2, 0]), (-1, &[0, 2])]);
        let f = FactoredRat::new(
            Rat::one(),
            num,
            vec![TaggedFactor::excluded(lf(&[1, 1]), 1)],
        )
        .unwrap();
        let r = f.reduce();
        assert!(r.den().is_empty());
        assert_eq!(r.num(), &(&MPoly::var(2, 0) - &MPoly::var(2, 1)));
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn merges_proportional_factors() {
        let f = FactoredRat::new(
            Rat::one(),
            MPoly::one(2),
            vec![
                TaggedFactor::new(lf(&[2, -4]), 1, [0]),
                TaggedFactor::new(lf(&[-1, 2]), 2, [1]),
            ],
        )
        .unwrap();
        assert_eq!(f.den().len(), 1);
        assert_eq!(f.den()[0].multiplicity, 3);
        assert_eq!(f.den()[0].form, lf(&[1, -2]));
        assert_eq!(f.den()[0].allowed, [0, 1].into_iter().collect());
        // 1 / (2(z0 - 2z1) * (z0 - 2z1)^2) since -1 squared is 1.
        assert_eq!(f.scalar(), &rat::frac(1, 2));
        assert!(f.check_invariants());
    }

    #[test]
    fn zero_numerator_is_zero_function() {
        let f = FactoredRat::new(
            rat::int(5),
            MPoly::zero(2),
            vec![TaggedFactor::excluded(lf(&[1, 0]), 2)],
        )
        .unwrap();
        assert!(f.is_zero());
        assert!(f.den().is_empty());
    }

    #[test]
    fn substitution_pole_is_error() {
        let f = FactoredRat::new(
            Rat::one(),
            MPoly::one(2),
            vec![TaggedFactor::excluded(lf(&[1, -1]), 1)],
        )
        .unwrap();
        assert!(matches!(
            f.subst(0, &LinForm::var(2, 1)),
            Err(ArithError::PoleOnSubstitution { var: 0 })
        ));
    }
}
