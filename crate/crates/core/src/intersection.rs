//! Intersection numbers on the quasi-map moduli space, evaluated as iterated
//! residues over `z_0..z_d`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::rat::{self, Rat};
use crate::arith::{FactoredRat, LinForm, MPoly, TaggedFactor};
use crate::residue::{iterated_residue, ResidueError, ResiduePlan};
use crate::series;
use crate::toric::wall_form;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("degree must be at least {min}, got {d}")]
    InvalidDegree { d: usize, min: usize },
    #[error("f = {f} is outside 1..{d}")]
    InvalidSplit { d: usize, f: usize },
    #[error("class has {found} variables, expected {expected}")]
    VariableCount { expected: usize, found: usize },
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

/// Which product is used for the Euler-class factor `e6(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum E6Form {
    /// `prod_{j=0}^{6} ((6 - j) x + j y)`.
    #[default]
    Factorized,
    /// `prod_{j=0}^{6} ((6 - j) x + y)`; kept as a negative control.
    Printed,
}

/// The seven linear factors of `e6(z_x, z_y)` in `nvars` variables.
pub fn e6(nvars: usize, x: usize, y: usize, form: E6Form) -> Vec<LinForm> {
    (0..=6i64)
        .map(|j| {
            let cy = match form {
                E6Form::Factorized => j,
                E6Form::Printed => 1,
            };
            LinForm::from_terms(nvars, &[(x, 6 - j), (y, cy)])
        })
        .collect()
}

/// `432 x y (x + y)(5x + y)(x + 5y)`.
pub fn e6_reduced(nvars: usize, x: usize, y: usize) -> MPoly {
    let forms = [
        LinForm::var(nvars, x),
        LinForm::var(nvars, y),
        LinForm::from_terms(nvars, &[(x, 1), (y, 1)]),
        LinForm::from_terms(nvars, &[(x, 5), (y, 1)]),
        LinForm::from_terms(nvars, &[(x, 1), (y, 5)]),
    ];
    MPoly::product_of(nvars, &forms).scale(&rat::int(432))
}

/// Tagged factors of `R`, the product of the Stanley–Reisner generators:
/// `3^(d+1) prod z_i^4 prod (2z_i + z_{i+1})(z_i + 2z_{i+1}) prod wall_j`.
/// Every factor is tagged with the index of the generator it belongs to.
pub fn r_denominator(d: usize) -> (Rat, Vec<TaggedFactor>) {
    let n = d + 1;
    let mut den = Vec::with_capacity(4 * d + 1);
    for i in 0..=d {
        den.push(TaggedFactor::new(LinForm::var(n, i), 4, [i]));
    }
    for i in 0..d {
        den.push(TaggedFactor::new(
            LinForm::from_terms(n, &[(i, 2), (i + 1, 1)]),
            1,
            [i],
        ));
        den.push(TaggedFactor::new(
            LinForm::from_terms(n, &[(i, 1), (i + 1, 2)]),
            1,
            [i + 1],
        ));
    }
    for j in 1..d {
        den.push(TaggedFactor::new(wall_form(n, j), 1, [j]));
    }
    (rat::pow(&rat::int(3), n as i64), den)
}

/// `numerator_extra * prod e6(z_{i-1}, z_i) / prod_{0<i<d} 6 z_i / R`, with
/// `z_j^(-k)` entries of `inverse_powers` moved into the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrandSpec {
    pub d: usize,
    pub numerator_extra: MPoly,
    pub inverse_powers: Vec<(usize, u32)>,
    pub e6: Option<E6Form>,
}

impl IntegrandSpec {
    /// Assembles the integrand. Linear numerator factors proportional to a
    /// denominator factor are cancelled before anything is expanded.
    pub fn build(&self) -> Result<FactoredRat, IntersectionError> {
        let d = self.d;
        if d < 1 {
            return Err(IntersectionError::InvalidDegree { d, min: 1 });
        }
        let n = d + 1;
        if self.numerator_extra.nvars() != n {
            return Err(IntersectionError::VariableCount {
                expected: n,
                found: self.numerator_extra.nvars(),
            });
        }
        let (r_scalar, mut den) = r_denominator(d);
        let mut scalar = r_scalar.recip();
        let mut num_forms = Vec::new();
        if let Some(form) = self.e6 {
            for i in 1..=d {
                num_forms.extend(e6(n, i - 1, i, form));
            }
            for i in 1..d {
                den.push(TaggedFactor::new(LinForm::var(n, i), 1, [i]));
            }
            scalar /= rat::pow(&rat::int(6), d as i64 - 1);
        }
        for &(j, k) in &self.inverse_powers {
            den.push(TaggedFactor::new(LinForm::var(n, j), k, [j]));
        }
        let mut kept = MPoly::one(n);
        for form in num_forms {
            let hit = den
                .iter_mut()
                .filter(|f| f.multiplicity > 0)
                .find_map(|f| f.form.proportional(&form).map(|r| (f, r)));
            match hit {
                Some((f, r)) => {
                    f.multiplicity -= 1;
                    scalar *= r;
                }
                None => kept = &kept * &MPoly::from_linform(&form),
            }
        }
        let num = &kept * &self.numerator_extra;
        Ok(FactoredRat::new(scalar, num, den)
            .map_err(ResidueError::from)?
            .reduce())
    }

    pub fn evaluate(&self, plan: &ResiduePlan) -> Result<Rat, IntersectionError> {
        Ok(iterated_residue(&self.build()?, plan)?)
    }
}

/// `z_0^a z_d^b` split into a polynomial part and inverse powers.
fn boundary_insertion(d: usize, a: i64, b: i64) -> (MPoly, Vec<(usize, u32)>) {
    let n = d + 1;
    let mut exps = vec![0u32; n];
    let mut inverse = Vec::new();
    for (idx, e) in [(0, a), (d, b)] {
        if e >= 0 {
            exps[idx] += e as u32;
        } else {
            inverse.push((idx, (-e) as u32));
        }
    }
    (MPoly::monomial(n, Rat::one(), &exps), inverse)
}

pub fn w_integrand(d: usize, a: i64, b: i64, form: E6Form) -> IntegrandSpec {
    let (numerator_extra, inverse_powers) = boundary_insertion(d, a, b);
    IntegrandSpec {
        d,
        numerator_extra,
        inverse_powers,
        e6: Some(form),
    }
}

/// `w(O_{z^a} O_{z^b})_{0,d}`.
pub fn compute_w(d: usize, a: i64, b: i64) -> Result<Rat, IntersectionError> {
    compute_w_with(d, a, b, E6Form::Factorized, &ResiduePlan::ascending(d))
}

pub fn compute_w_with(
    d: usize,
    a: i64,
    b: i64,
    form: E6Form,
    plan: &ResiduePlan,
) -> Result<Rat, IntersectionError> {
    w_integrand(d, a, b, form).evaluate(plan)
}

/// `int Omega` over the degree-`d` moduli space, with `H_i` read as `z_i`.
pub fn integrate_class(d: usize, omega: &MPoly) -> Result<Rat, IntersectionError> {
    integrate_class_with(d, omega, &ResiduePlan::ascending(d))
}

pub fn integrate_class_with(
    d: usize,
    omega: &MPoly,
    plan: &ResiduePlan,
) -> Result<Rat, IntersectionError> {
    if d < 1 {
        return Err(IntersectionError::InvalidDegree { d, min: 1 });
    }
    let comps = omega.homogeneous_components();
    let Some(top) = comps.get(&plan.degree_target) else {
        return Ok(Rat::zero());
    };
    IntegrandSpec {
        d,
        numerator_extra: top.clone(),
        inverse_powers: Vec::new(),
        e6: None,
    }
    .evaluate(plan)
}

/// `1/2 * residue` of the `w`-type integrand with `extra` in the numerator
/// and one inverse power of `z_d`.
fn half_boundary_residue(d: usize, extra: MPoly) -> Result<Rat, IntersectionError> {
    let spec = IntegrandSpec {
        d,
        numerator_extra: extra,
        inverse_powers: vec![(d, 1)],
        e6: Some(E6Form::Factorized),
    };
    Ok(spec.evaluate(&ResiduePlan::ascending(d))? / rat::int(2))
}

/// Residue with numerator insertion `z_0 z_1 / z_d`, halved.
pub fn lemma_second_value(d: usize) -> Result<Rat, IntersectionError> {
    if d < 1 {
        return Err(IntersectionError::InvalidDegree { d, min: 1 });
    }
    let n = d + 1;
    half_boundary_residue(d, &MPoly::var(n, 0) * &MPoly::var(n, 1))
}

/// `(1/d) A_d (1 - 1/d + harmonic_part(d))`.
pub fn lemma_second_closed_form(d: usize) -> Rat {
    let dd = rat::int(d as i64);
    series::f0_coeff(d) * (Rat::one() - dd.recip() + series::harmonic_part(d)) / dd
}

/// Both sides of the splitting identity for `(d, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaLast {
    pub d: usize,
    pub f: usize,
    /// `1/4 w(O_{z^1} O_{z^0})_{0,d-f} * w(O_{z^2} O_{z^-1})_{0,f}`, the
    /// normalization under which the weighted sum over `f` telescopes into
    /// `R_d`.
    pub product: Rat,
    /// `1/2` residue with numerator `z_0 wall_{d-f} / z_d`.
    pub residue: Rat,
}

impl LemmaLast {
    pub fn holds(&self) -> bool {
        self.product == self.residue
    }
}

pub fn lemma_last_residue(d: usize, f: usize) -> Result<Rat, IntersectionError> {
    if d < 2 {
        return Err(IntersectionError::InvalidDegree { d, min: 2 });
    }
    if f < 1 || f >= d {
        return Err(IntersectionError::InvalidSplit { d, f });
    }
    let n = d + 1;
    let extra = &MPoly::var(n, 0) * &MPoly::from_linform(&wall_form(n, d - f));
    half_boundary_residue(d, extra)
}

pub fn lemma_last(d: usize, f: usize) -> Result<LemmaLast, IntersectionError> {
    let residue = lemma_last_residue(d, f)?;
    let product = compute_w(d - f, 1, 0)? * compute_w(f, 2, -1)? / rat::int(4);
    Ok(LemmaLast {
        d,
        f,
        product,
        residue,
    })
}

pub fn lemma_last_check(d: usize, f: usize) -> Result<bool, IntersectionError> {
    Ok(lemma_last(d, f)?.holds())
}

/// `d (z_1 - z_0) + z_0` in `d + 1` variables.
pub fn telescoped_form(d: usize) -> LinForm {
    let n = d + 1;
    let di = d as i64;
    LinForm::from_terms(n, &[(0, 1 - di), (1, di)])
}

/// `sum_{f=1}^{d-1} f * wall_{d-f}` as a polynomial.
pub fn weighted_wall_sum(d: usize) -> MPoly {
    let n = d + 1;
    (1..d).fold(MPoly::zero(n), |acc, f| {
        &acc + &MPoly::from_linform(&wall_form(n, d - f)).scale(&rat::int(f as i64))
    })
}

/// `R_d`: halved residue with numerator `z_0 (d (z_1 - z_0) + z_0) / z_d`.
pub fn main_theorem_rd(d: usize) -> Result<Rat, IntersectionError> {
    if d < 1 {
        return Err(IntersectionError::InvalidDegree { d, min: 1 });
    }
    let n = d + 1;
    half_boundary_residue(
        d,
        &MPoly::var(n, 0) * &MPoly::from_linform(&telescoped_form(d)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(forms: &[LinForm]) -> MPoly {
        MPoly::product_of(forms[0].nvars(), forms)
    }

    #[test]
    fn e6_identities() {
        let f = e6(2, 0, 1, E6Form::Factorized);
        assert_eq!(f.len(), 7);
        let full = expand(&f);
        assert_eq!(full.total_degree(), Some(7));
        let pair = expand(&[LinForm::from_ints(&[2, 1]), LinForm::from_ints(&[1, 2])]);
        assert_eq!(full, &e6_reduced(2, 0, 1) * &pair);
        assert_eq!(full.eval(&[rat::int(1), rat::int(0)]), Rat::zero());
        assert_eq!(
            full.eval(&[rat::int(1), rat::int(1)]),
            rat::int(6i64.pow(7))
        );
        // 2^4 3^2 * 3 from the (2i + 1, 5 - 2i) factors
        assert_eq!(16 * 9 * 3, 432);
        let printed = expand(&e6(2, 0, 1, E6Form::Printed));
        assert_ne!(printed, full);
        assert!(printed.div_linear(&LinForm::from_ints(&[1, 2])).is_none());
    }

    #[test]
    fn degree_one_integrand_is_reduced_form() {
        let built = w_integrand(1, 1, 0, E6Form::Factorized).build().unwrap();
        let num = expand(&[
            LinForm::from_ints(&[1, 1]),
            LinForm::from_ints(&[5, 1]),
            LinForm::from_ints(&[1, 5]),
        ]);
        let expected = FactoredRat::new(
            rat::int(48),
            num,
            vec![
                TaggedFactor::new(LinForm::var(2, 0), 2, [0]),
                TaggedFactor::new(LinForm::var(2, 1), 3, [1]),
            ],
        )
        .unwrap();
        assert!(built.value_eq(&expected));
        assert_eq!(built.den(), expected.den());
    }

    #[test]
    fn small_values() {
        assert_eq!(compute_w(1, 1, 0).unwrap(), rat::int(1488));
        assert_eq!(compute_w(1, 2, -1).unwrap(), rat::int(240));
        assert_eq!(compute_w(1, 0, 0).unwrap(), Rat::zero());
        assert_eq!(compute_w(2, 1, 0).unwrap(), rat::int(2 * 473652));
        assert!(matches!(
            compute_w(0, 1, 0),
            Err(IntersectionError::InvalidDegree { .. })
        ));
    }

    #[test]
    fn printed_variant_misses() {
        let w = compute_w_with(1, 1, 0, E6Form::Printed, &ResiduePlan::ascending(1)).unwrap();
        assert_ne!(w, rat::int(1488));
    }

    #[test]
    fn lemma_values_low_degree() {
        assert_eq!(lemma_second_value(1).unwrap(), rat::int(744));
        assert_eq!(lemma_second_closed_form(1), rat::int(744));
        for d in 1..=2 {
            assert_eq!(lemma_second_value(d).unwrap(), lemma_second_closed_form(d));
            assert_eq!(main_theorem_rd(d).unwrap(), series::f1_hat_coeff(d));
        }
        let l = lemma_last(2, 1).unwrap();
        assert!(l.holds());
        // 744 * 240 / 2, halved once more
        assert_eq!(l.residue, rat::int(89280));
        assert_eq!(
            main_theorem_rd(2).unwrap(),
            compute_w(2, 1, 0).unwrap() / rat::int(2) + &l.residue
        );
        assert!(matches!(
            lemma_last(2, 2),
            Err(IntersectionError::InvalidSplit { .. })
        ));
    }

    #[test]
    fn telescoping_identity() {
        for d in 1..=8 {
            let n = d + 1;
            let rhs = &MPoly::from_linform(&telescoped_form(d)) - &MPoly::var(n, d);
            assert_eq!(weighted_wall_sum(d), rhs, "d = {d}");
        }
    }
}
