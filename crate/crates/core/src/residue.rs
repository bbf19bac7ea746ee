//! Iterated residues of rational functions with linear denominators.
//!
//! Every denominator factor carries the set of variables whose contour
//! encloses its zero. Integrating out `z_j` visits, for each live term, the
//! distinct points `z_j = p` cut out by factors tagged with `j`; at each
//! point the residue uses the full local pole order, i.e. every factor that
//! vanishes there, tagged or not. Terms from different branches are never
//! combined until the final scalar sum.

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::rat::{self, Rat};
use crate::arith::{ArithError, FactoredRat, LinForm, MPoly, TaggedFactor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("z{var} = {point} is not a pole of the integrand")]
    NotAPole { var: usize, point: String },
    #[error("ill-formed point for z{var}: {point} involves z{var}")]
    IllFormedPoint { var: usize, point: String },
    #[error("non-scalar remainder after the last integration: {0}")]
    NonScalarRemainder(String),
    #[error("residue plan {order:?} is not a permutation of 0..{nvars}")]
    InvalidPlan { order: Vec<usize>, nvars: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Integration order plus the form degree it is meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePlan {
    pub order: Vec<usize>,
    /// Degree of the numerator class this plan integrates (`6d + 2` for the
    /// degree-`d` moduli space). Classes of any other degree integrate to 0.
    pub degree_target: u32,
}

impl ResiduePlan {
    pub fn ascending(d: usize) -> Self {
        ResiduePlan {
            order: (0..=d).collect(),
            degree_target: 6 * d as u32 + 2,
        }
    }

    pub fn descending(d: usize) -> Self {
        ResiduePlan {
            order: (0..=d).rev().collect(),
            degree_target: 6 * d as u32 + 2,
        }
    }

    pub fn with_order(d: usize, order: Vec<usize>) -> Self {
        ResiduePlan {
            order,
            degree_target: 6 * d as u32 + 2,
        }
    }

    fn validate(&self, nvars: usize) -> Result<(), ResidueError> {
        let mut seen = vec![false; nvars];
        let ok = self.order.len() == nvars
            && self
                .order
                .iter()
                .all(|&j| j < nvars && !std::mem::replace(&mut seen[j], true));
        if ok {
            Ok(())
        } else {
            Err(ResidueError::InvalidPlan {
                order: self.order.clone(),
                nvars,
            })
        }
    }
}

/// A live term of the iterated integration.
#[derive(Clone, Debug)]
pub struct BranchTerm {
    pub value: FactoredRat,
    pub remaining: Vec<usize>,
}

/// `Res_{z_var = point} f`.
///
/// With `m` the total multiplicity of the factors vanishing on
/// `z_var = point` (each equal to `c (z_var - point)`), this is the
/// coefficient of `t^(m-1)` in `(z_var - point)^m f` expanded at
/// `z_var = point + t`. Non-vanishing factors `A + c t` are expanded as
/// binomial series over the common denominator `A^(k + m - 1)`.
pub fn residue_at_point(
    f: &FactoredRat,
    var: usize,
    point: &LinForm,
) -> Result<FactoredRat, ResidueError> {
    if point.involves(var) {
        return Err(ResidueError::IllFormedPoint {
            var,
            point: point.to_string(),
        });
    }
    let nvars = f.nvars();
    let mut scalar = f.scalar().clone();
    let mut order = 0u32;
    // (A, c, k, allowed) for factors involving var that do not vanish.
    let mut moving: Vec<(LinForm, Rat, u32, Vec<usize>)> = Vec::new();
    let mut fixed: Vec<TaggedFactor> = Vec::new();
    for factor in f.den() {
        let c = factor.form.coeff(var);
        if c.is_zero() {
            fixed.push(factor.clone());
            continue;
        }
        let a = factor.form.subst(var, point)?;
        if a.is_zero() {
            order += factor.multiplicity;
            scalar /= rat::pow(c, factor.multiplicity as i64);
        } else {
            let allowed = factor
                .allowed
                .iter()
                .copied()
                .filter(|&j| j != var)
                .collect();
            moving.push((a, c.clone(), factor.multiplicity, allowed));
        }
    }
    if order == 0 || f.is_zero() {
        if order == 0 {
            return Err(ResidueError::NotAPole {
                var,
                point: point.to_string(),
            });
        }
        return Ok(FactoredRat::zero(nvars));
    }
    let m = order as usize;

    let mut series = taylor_coefficients(f.num(), var, point, m);
    for (a, c, k, _) in &moving {
        if m == 1 {
            break;
        }
        let g = inverse_power_series(a, c, *k, m);
        series = truncated_product(&series, &g, m);
    }
    let num = series.pop().expect("m >= 1");

    let mut den = fixed;
    for (a, _, k, allowed) in moving {
        den.push(TaggedFactor::new(a, k + order - 1, allowed));
    }
    let out = FactoredRat::new(scalar, num, den)?;
    Ok(out.reduce())
}

/// `[t^n] num(z_var = point + t)` for `n < m`.
fn taylor_coefficients(num: &MPoly, var: usize, point: &LinForm, m: usize) -> Vec<MPoly> {
    let nvars = num.nvars();
    let parts = num.coefficients_in(var);
    let p = MPoly::from_linform(point);
    let mut powers = vec![MPoly::one(nvars)];
    for _ in 1..parts.len() {
        let next = powers.last().unwrap() * &p;
        powers.push(next);
    }
    (0..m)
        .map(|n| {
            let mut acc = MPoly::zero(nvars);
            for (e, part) in parts.iter().enumerate().skip(n) {
                if part.is_zero() {
                    continue;
                }
                let b = rat::big(rat::binomial(e as u64, n as u64));
                let term = &(part * &powers[e - n]).scale(&b);
                acc = &acc + term;
            }
            acc
        })
        .collect()
}

/// `A^(k + m - 1) (A + c t)^(-k)` truncated below `t^m`:
/// `sum_n binom(-k, n) c^n A^(m - 1 - n) t^n`.
fn inverse_power_series(a: &LinForm, c: &Rat, k: u32, m: usize) -> Vec<MPoly> {
    let nvars = a.nvars();
    let ap = MPoly::from_linform(a);
    let mut powers = vec![MPoly::one(nvars)];
    for _ in 1..m {
        let next = powers.last().unwrap() * &ap;
        powers.push(next);
    }
    (0..m)
        .map(|n| {
            // binom(-k, n) = (-1)^n binom(k + n - 1, n)
            let mut b = rat::big(rat::binomial((k as usize + n - 1) as u64, n as u64));
            if n % 2 == 1 {
                b = -b;
            }
            let coeff = b * rat::pow(c, n as i64);
            powers[m - 1 - n].scale(&coeff)
        })
        .collect()
}

fn truncated_product(a: &[MPoly], b: &[MPoly], m: usize) -> Vec<MPoly> {
    let nvars = a[0].nvars();
    (0..m)
        .map(|n| {
            let mut acc = MPoly::zero(nvars);
            for i in 0..=n {
                if a[i].is_zero() || b[n - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&a[i] * &b[n - i]);
            }
            acc
        })
        .collect()
}

/// Keeps only the homogeneous numerator component that can survive the
/// iterated residue over `d + 1` variables: numerator degree equal to
/// denominator degree minus `d + 1`.
pub fn homogeneity_filter(f: &FactoredRat, d: usize) -> FactoredRat {
    let target = f.den_degree() as i64 - (d as i64 + 1);
    if target < 0 {
        return FactoredRat::zero(f.nvars());
    }
    let comps = f.num().homogeneous_components();
    match comps.get(&(target as u32)) {
        Some(p) => f.with_num(p.clone()),
        None => FactoredRat::zero(f.nvars()),
    }
}

/// The distinct residue points for `z_var`, from factors tagged with `var`.
pub fn residue_points(f: &FactoredRat, var: usize) -> Vec<LinForm> {
    let mut points: Vec<LinForm> = Vec::new();
    for factor in f.den() {
        if !factor.is_allowed_for(var) {
            continue;
        }
        if let Some(p) = factor.form.solve_for(var) {
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    points
}

/// One integration step applied to a single branch.
pub fn integrate_out(term: &BranchTerm, var: usize) -> Result<Vec<BranchTerm>, ResidueError> {
    let remaining: Vec<usize> = term
        .remaining
        .iter()
        .copied()
        .filter(|&j| j != var)
        .collect();
    if term.value.is_zero() || !term.value.depends_on(var) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in residue_points(&term.value, var) {
        let r = residue_at_point(&term.value, var, &p)?;
        if !r.is_zero() {
            out.push(BranchTerm {
                value: r,
                remaining: remaining.clone(),
            });
        }
    }
    Ok(out)
}

/// Sum of iterated residues of `f` over all variables in `plan.order`.
///
/// `f` is first passed through [`homogeneity_filter`]. Branches of each step
/// are processed in parallel; collection order and the final exact sum are
/// independent of scheduling.
pub fn iterated_residue(f: &FactoredRat, plan: &ResiduePlan) -> Result<Rat, ResidueError> {
    let nvars = f.nvars();
    plan.validate(nvars)?;
    let start = homogeneity_filter(f, nvars - 1);
    if start.is_zero() {
        return Ok(Rat::zero());
    }
    let mut terms = vec![BranchTerm {
        value: start,
        remaining: plan.order.clone(),
    }];
    for &var in &plan.order {
        let next: Result<Vec<Vec<BranchTerm>>, ResidueError> =
            terms.par_iter().map(|t| integrate_out(t, var)).collect();
        terms = next?.into_iter().flatten().collect();
        if terms.is_empty() {
            return Ok(Rat::zero());
        }
    }
    let mut total = Rat::zero();
    for t in &terms {
        match t.value.as_constant() {
            Some(c) => total += c,
            None => return Err(ResidueError::NonScalarRemainder(t.value.to_string())),
        }
    }
    Ok(total)
}

/// Number of live branches after each step (diagnostics).
pub fn branch_profile(f: &FactoredRat, plan: &ResiduePlan) -> Result<Vec<usize>, ResidueError> {
    let nvars = f.nvars();
    plan.validate(nvars)?;
    let mut terms = vec![BranchTerm {
        value: homogeneity_filter(f, nvars - 1),
        remaining: plan.order.clone(),
    }];
    let mut profile = Vec::new();
    for &var in &plan.order {
        let next: Result<Vec<Vec<BranchTerm>>, ResidueError> =
            terms.par_iter().map(|t| integrate_out(t, var)).collect();
        terms = next?.into_iter().flatten().collect();
        profile.push(terms.len());
    }
    Ok(profile)
}

/// `prod_j 1/z_j` with each factor tagged for its own variable.
pub fn standard_volume(nvars: usize) -> FactoredRat {
    let den = (0..nvars)
        .map(|j| TaggedFactor::new(LinForm::var(nvars, j), 1, [j]))
        .collect();
    FactoredRat::new(Rat::one(), MPoly::one(nvars), den).expect("coordinate forms are nonzero")
}
