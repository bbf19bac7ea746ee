//! Picard–Fuchs solutions, the mirror-map coefficients `w_d`, and the
//! reconstruction of `j`-invariant coefficients from them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("exp needs a series without constant term")]
    ExpConstantTerm,
    #[error("order must be at least 1")]
    InvalidOrder,
}

/// Dense power series `sum_{i <= N} c_i z^i`, exact through order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesQ {
    coeffs: Vec<Rat>,
}

impl SeriesQ {
    pub fn zero(order: usize) -> Self {
        SeriesQ {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    /// Pads or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        SeriesQ { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        SeriesQ {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SeriesQ {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rat::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out.coeffs[k - i];
            }
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `exp(self)` for a series without constant term, via `E' = S' E`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        let n = self.order();
        let mut e = Self::zero(n);
        e.coeffs[0] = Rat::one();
        for m in 1..=n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                acc += rat::int(k as i64) * &self.coeffs[k] * &e.coeffs[m - k];
            }
            e.coeffs[m] = acc / rat::int(m as i64);
        }
        Ok(e)
    }

    /// `z d/dz`.
    pub fn theta(&self) -> Self {
        SeriesQ {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat::int(i as i64))
                .collect(),
        }
    }

    /// Multiplication by `z`, dropping the term that leaves the window.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Rat::zero());
        coeffs.extend(self.coeffs[..self.coeffs.len() - 1].iter().cloned());
        SeriesQ { coeffs }
    }
}

/// `p(z) log z + g(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    pub p: SeriesQ,
    pub g: SeriesQ,
}

impl LogSeries {
    pub fn holomorphic(g: SeriesQ) -> Self {
        LogSeries {
            p: SeriesQ::zero(g.order()),
            g,
        }
    }

    /// `theta(p log z + g) = theta(p) log z + p + theta(g)`.
    pub fn theta(&self) -> Self {
        LogSeries {
            p: self.p.theta(),
            g: self.p.add(&self.g.theta()),
        }
    }

    pub fn mul_z(&self) -> Self {
        LogSeries {
            p: self.p.mul_z(),
            g: self.g.mul_z(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LogSeries {
            p: self.p.add(&other.p),
            g: self.g.add(&other.g),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LogSeries {
            p: self.p.sub(&other.p),
            g: self.g.sub(&other.g),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        LogSeries {
            p: self.p.scale(s),
            g: self.g.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.g.is_zero()
    }

    /// Lowest order at which either part is nonzero.
    pub fn first_nonzero(&self) -> Option<usize> {
        (0..=self.p.order()).find(|&i| !self.p.coeff(i).is_zero() || !self.g.coeff(i).is_zero())
    }
}

/// `A_n = 2^(3n) (6n-1)!! / (n!)^3`.
pub fn f0_coeff(n: usize) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    let num = BigInt::from(2).pow(3 * n as u32) * rat::odd_double_factorial(6 * n as i64 - 1);
    let den = rat::factorial(n as u64).pow(3);
    Rat::new(num, den)
}

/// `(6n)! / ((n!)^3 (3n)!)`, the gamma-quotient form of `A_n`.
pub fn f0_coeff_factorial(n: usize) -> Rat {
    let n = n as u64;
    Rat::new(
        rat::factorial(6 * n),
        rat::factorial(n).pow(3) * rat::factorial(3 * n),
    )
}

/// `sum_{j=1}^{3n} 6/(2j-1) - sum_{j=1}^{n} 3/j`.
pub fn harmonic_part(n: usize) -> Rat {
    let odd: Rat = (1..=3 * n as i64).map(|j| rat::frac(6, 2 * j - 1)).sum();
    let whole: Rat = (1..=n as i64).map(|j| rat::frac(3, j)).sum();
    odd - whole
}

/// `B_n = A_n * harmonic_part(n)`; `B_0 = 0`.
pub fn f1_hat_coeff(n: usize) -> Rat {
    f0_coeff(n) * harmonic_part(n)
}

pub fn f0_series(order: usize) -> SeriesQ {
    SeriesQ::from_coeffs((0..=order).map(f0_coeff).collect(), order)
}

pub fn f1_hat_series(order: usize) -> SeriesQ {
    SeriesQ::from_coeffs((0..=order).map(f1_hat_coeff).collect(), order)
}

/// `f_1 = f_0 log z + sum B_n z^n`.
pub fn f1_series(order: usize) -> LogSeries {
    LogSeries {
        p: f0_series(order),
        g: f1_hat_series(order),
    }
}

/// `theta^3 f - 8 z (6 theta + 1)(6 theta + 3)(6 theta + 5) f`.
pub fn apply_picard_fuchs(f: &LogSeries) -> LogSeries {
    let t1 = f.theta();
    let t2 = t1.theta();
    let t3 = t2.theta();
    let six = rat::int(6);
    let lin = |x: &LogSeries, c: i64| x.theta().scale(&six).add(&x.scale(&rat::int(c)));
    let inner = lin(&lin(&lin(f, 5), 3), 1);
    t3.sub(&inner.mul_z().scale(&rat::int(8)))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PicardFuchsFailure {
    #[error("coefficient recursion fails at n = {0}")]
    Recursion(usize),
    #[error("operator does not annihilate f_0 at order {0}")]
    HolomorphicSolution(usize),
    #[error("operator does not annihilate f_1 at order {0}")]
    LogSolution(usize),
}

/// `A_n = 8 (6n-5)(6n-3)(6n-1) / n^3 * A_{n-1}` for every `n` in range.
pub fn check_recursion(a: &[Rat]) -> Result<(), PicardFuchsFailure> {
    for n in 1..a.len() {
        let k = n as i64;
        let ratio = rat::frac(8 * (6 * k - 5) * (6 * k - 3) * (6 * k - 1), k * k * k);
        if a[n] != ratio * &a[n - 1] {
            return Err(PicardFuchsFailure::Recursion(n));
        }
    }
    Ok(())
}

/// Recursion plus annihilation of `f_0` and `f_1` through order `order`.
pub fn pf_recursion_check(order: usize) -> Result<(), PicardFuchsFailure> {
    let a: Vec<Rat> = (0..=order).map(f0_coeff).collect();
    check_recursion(&a)?;
    let f0 = LogSeries::holomorphic(f0_series(order));
    if let Some(i) = apply_picard_fuchs(&f0).first_nonzero() {
        return Err(PicardFuchsFailure::HolomorphicSolution(i));
    }
    if let Some(i) = apply_picard_fuchs(&f1_series(order)).first_nonzero() {
        return Err(PicardFuchsFailure::LogSolution(i));
    }
    Ok(())
}

/// `w_1..w_N` from `sum w_d z^d = B(z) / A(z)`.
///
/// `w_1..w_4` are integers but `w_5 = 3169342733223744/5`; only `d * w_d`
/// is integral in general.
pub fn mirror_w(order: usize) -> Result<Vec<Rat>, SeriesError> {
    if order < 1 {
        return Err(SeriesError::InvalidOrder);
    }
    let q = f1_hat_series(order).div(&f0_series(order))?;
    Ok(q.coeffs()[1..].to_vec())
}

/// Ordered partition of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    pub parts: Vec<usize>,
}

impl Composition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// All `2^(d-1)` compositions of `d`; bit `i` of the mask cuts after
/// position `i + 1`.
pub fn compositions(d: usize) -> Vec<Composition> {
    assert!(d >= 1, "compositions of a positive integer");
    (0u64..1 << (d - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut run = 1;
            for i in 0..d - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            Composition { parts }
        })
        .collect()
}

/// `j_d = sum_{compositions} (-(d-1))^(l-1) / l! * prod w_{d_j}` for
/// `d = 1..=w.len()`, with `w[k]` holding `w_{k+1}`.
pub fn j_from_w(w: &[Rat]) -> Vec<Rat> {
    (1..=w.len())
        .map(|d| {
            compositions(d)
                .iter()
                .map(|c| {
                    let l = c.len();
                    let sign = rat::pow(&rat::int(-(d as i64 - 1)), l as i64 - 1);
                    let prod: Rat = c.parts.iter().map(|&p| w[p - 1].clone()).product();
                    sign * prod / rat::big(rat::factorial(l as u64))
                })
                .sum()
        })
        .collect()
}

/// `j_1..j_N` by the composition formula.
pub fn j_coefficients(order: usize) -> Result<Vec<Rat>, SeriesError> {
    Ok(j_from_w(&mirror_w(order)?))
}

/// Independent route to `j_1..j_N`: with `u = 1/j`, `q = u exp(W(u))`;
/// Lagrange inversion gives `[q^n] u = (1/n) [u^(n-1)] exp(-n W)`, and
/// `q j = q / u(q)` is then a plain series inverse.
pub fn lagrange_oracle(w: &[Rat]) -> Result<Vec<Rat>, SeriesError> {
    let order = w.len();
    if order < 1 {
        return Err(SeriesError::InvalidOrder);
    }
    let mut wc = vec![Rat::zero()];
    wc.extend(w.iter().cloned());
    let big_w = SeriesQ::from_coeffs(wc, order);
    // u(q)/q through q^order needs [q^n] u for n = 1..=order+1.
    let mut u_over_q = Vec::with_capacity(order + 1);
    for n in 1..=order + 1 {
        let e = big_w.scale(&rat::int(-(n as i64))).exp()?;
        u_over_q.push(e.coeff(n - 1) / rat::int(n as i64));
    }
    let jq = SeriesQ::from_coeffs(u_over_q, order).inverse()?;
    Ok(jq.coeffs()[1..].to_vec())
}
