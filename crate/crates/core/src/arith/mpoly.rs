use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::linform::LinForm;
use super::rat::{self, Rat};
use super::ArithError;

pub type Exponents = Vec<u32>;

/// Sparse polynomial over `Rat` in a fixed number of variables.
///
/// Terms are keyed by dense exponent vectors of length `nvars`; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rat>,
}

/// Result of a homogeneity query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Mixed,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::monomial(nvars, Rat::one(), &unit(nvars, j, 1))
    }

    pub fn monomial(nvars: usize, c: Rat, exps: &[u32]) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    pub fn from_linform(f: &LinForm) -> Self {
        let n = f.nvars();
        let mut p = Self::zero(n);
        for j in f.support() {
            p.terms.insert(unit(n, j, 1), f.coeff(j).clone());
        }
        p
    }

    /// Product of linear forms.
    pub fn product_of<'a, I: IntoIterator<Item = &'a LinForm>>(nvars: usize, forms: I) -> Self {
        forms
            .into_iter()
            .fold(Self::one(nvars), |acc, f| &acc * &Self::from_linform(f))
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn from_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            p.add_term(e.to_vec(), rat::int(*c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, exps: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// The constant value, if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|x| x == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d)
                .or_insert_with(|| MPoly::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `z^exps`.
    pub fn shift(&self, exps: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Coefficients of `self` viewed as a polynomial in `z_var`:
    /// `self = sum_k z_var^k * out[k]`, with `out[k]` free of `z_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        if self.terms.is_empty() {
            out.truncate(1);
        }
        out
    }

    /// Replaces `z_var` by the linear form `point` (which must not involve
    /// `var`).
    pub fn subst_linear(&self, var: usize, point: &LinForm) -> Result<Self, ArithError> {
        if point.involves(var) {
            return Err(ArithError::SelfReferentialPoint { var });
        }
        let coeffs = self.coefficients_in(var);
        let p = MPoly::from_linform(point);
        // Horner in z_var.
        let mut acc = MPoly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &p) + c;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= rat::pow(x, k as i64);
                }
            }
            total += t;
        }
        total
    }

    /// Exact quotient by a nonzero linear form, or `None` if the form does
    /// not divide `self`.
    ///
    /// Synthetic division in the form's first variable: with
    /// `form = c z_v + rest` and `self = sum_k z_v^k N_k`, the quotient
    /// coefficients satisfy `Q_{k-1} = (N_k - rest * Q_k) / c`, and the
    /// remainder `N_0 - rest * Q_0` must vanish.
    pub fn div_linear(&self, form: &LinForm) -> Option<MPoly> {
        let v = form.support().next()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.depends_on(v) {
            return None;
        }
        let c_inv = form.coeff(v).recip();
        let mut rest_form = form.clone();
        rest_form = rest_form.sub(&LinForm::var(form.nvars(), v).scale(form.coeff(v)));
        let rest = MPoly::from_linform(&rest_form);
        let n = self.coefficients_in(v);
        let top = n.len() - 1;
        let mut q: Vec<MPoly> = vec![MPoly::zero(self.nvars); top];
        let mut carry = MPoly::zero(self.nvars);
        for k in (1..=top).rev() {
            let qk = (&n[k] - &carry).scale(&c_inv);
            carry = &rest * &qk;
            q[k - 1] = qk;
        }
        if !(&n[0] - &carry).is_zero() {
            return None;
        }
        let mut out = MPoly::zero(self.nvars);
        for (k, qk) in q.into_iter().enumerate() {
            for (e, c) in qk.terms {
                let mut e = e;
                e[v] += k as u32;
                out.terms.insert(e, c);
            }
        }
        Some(out)
    }

    /// Partial derivative with respect to `z_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * rat::int(e[var] as i64));
        }
        out
    }

    /// Renames variables: variable `j` of `self` becomes variable `map[j]` in
    /// a ring with `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (j, &k) in e.iter().enumerate() {
                e2[map[j]] += k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Formats with a custom variable prefix (e.g. `"H"`).
    pub fn display_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        // Highest monomials first.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("{prefix}{j}")
                    } else {
                        format!("{prefix}{j}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                s.push_str(&format!("{}*{}", mag, mono.join("*")));
            }
        }
        s
    }
}

fn unit(nvars: usize, j: usize, k: u32) -> Exponents {
    let mut e = vec![0; nvars];
    e[j] = k;
    e
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("z"))
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}
