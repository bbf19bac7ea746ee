//! The fan of the degree-`d` quasi-map space to P(1,1,1,3): rays, primitive
//! collections, divisor classes, Stanley–Reisner generators, the volume
//! class, and the finite determinant checks behind completeness.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rat::{self, Rat};
use crate::arith::{LinForm, MPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("expected {expected} coordinates, got {found}")]
    Dimension { expected: usize, found: usize },
}

/// Label of a ray: `v_{i,j}` (`i` in 0..=3) or `u_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RayLabel {
    V(usize, usize),
    U(usize),
}

impl fmt::Display for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayLabel::V(i, j) => write!(f, "v_{{{i},{j}}}"),
            RayLabel::U(k) => write!(f, "u_{{{k}}}"),
        }
    }
}

/// Rays (as integer columns) and primitive collections of the fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    pub d: usize,
    pub labels: Vec<RayLabel>,
    pub rays: Vec<Vec<i64>>,
    pub primitive_collections: Vec<Vec<RayLabel>>,
}

const P: [[i64; 2]; 3] = [[-1, -1], [1, 0], [0, 1]];

fn w_column(d: usize, j: usize) -> Vec<i64> {
    let mut col = vec![0; 3 * d + 1];
    col[3 * j] = 3;
    if j < d {
        col[3 * j + 1] = 2;
        col[3 * j + 2] = 1;
    }
    if j > 0 {
        col[3 * j - 1] = 2;
        col[3 * j - 2] = 1;
    }
    col
}

fn v_prime_column(d: usize, j: usize) -> Vec<i64> {
    // Row k has -1, 2, -1 in columns k, k+1, k+2.
    (0..d.saturating_sub(1))
        .map(|k| {
            if j == k || j == k + 2 {
                -1
            } else if j == k + 1 {
                2
            } else {
                0
            }
        })
        .collect()
}

pub fn build_fan(d: usize) -> Result<FanData, ToricError> {
    if d < 1 {
        return Err(ToricError::InvalidDegree(d));
    }
    let h = 6 * d + 2;
    let off3 = 2 * (d + 1);
    let offu = off3 + 3 * d + 1;
    let mut labels = Vec::with_capacity(7 * d + 3);
    let mut rays = Vec::with_capacity(7 * d + 3);
    for (i, p) in P.iter().enumerate() {
        for j in 0..=d {
            let mut col = vec![0i64; h];
            col[2 * j] = p[0];
            col[2 * j + 1] = p[1];
            if i == 0 {
                for (r, x) in w_column(d, j).into_iter().enumerate() {
                    col[off3 + r] = -x;
                }
                for (r, x) in v_prime_column(d, j).into_iter().enumerate() {
                    col[offu + r] = x;
                }
            }
            labels.push(RayLabel::V(i, j));
            rays.push(col);
        }
    }
    for j in 0..=3 * d {
        let mut col = vec![0i64; h];
        col[off3 + j] = 1;
        labels.push(RayLabel::V(3, j));
        rays.push(col);
    }
    for k in 1..d {
        let mut col = vec![0i64; h];
        col[offu + k - 1] = -1;
        labels.push(RayLabel::U(k));
        rays.push(col);
    }
    Ok(FanData {
        d,
        labels,
        rays,
        primitive_collections: primitive_collections(d),
    })
}

pub fn primitive_collections(d: usize) -> Vec<Vec<RayLabel>> {
    use RayLabel::{U, V};
    let mut out = vec![vec![V(0, 0), V(1, 0), V(2, 0), V(3, 0), V(3, 1)]];
    for i in 1..d {
        out.push(vec![
            V(0, i),
            V(1, i),
            V(2, i),
            V(3, 3 * i - 1),
            V(3, 3 * i),
            V(3, 3 * i + 1),
            U(i),
        ]);
    }
    out.push(vec![
        V(0, d),
        V(1, d),
        V(2, d),
        V(3, 3 * d - 1),
        V(3, 3 * d),
    ]);
    out
}

impl FanData {
    pub fn height(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn ray(&self, label: RayLabel) -> Option<&[i64]> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.rays[i].as_slice())
    }

    /// Maximal cones omit exactly one ray from each primitive collection.
    pub fn max_cone_count(&self) -> BigInt {
        self.primitive_collections
            .iter()
            .fold(BigInt::one(), |acc, p| acc * p.len())
    }

    pub fn to_document(&self) -> FanDocument {
        FanDocument {
            degree: self.d,
            dimension: self.height(),
            rays: self
                .labels
                .iter()
                .zip(&self.rays)
                .map(|(l, r)| RayEntry {
                    label: l.to_string(),
                    vector: r.clone(),
                })
                .collect(),
            primitive_collections: self
                .primitive_collections
                .iter()
                .map(|p| p.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

/// Serializable export of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub degree: usize,
    pub dimension: usize,
    pub rays: Vec<RayEntry>,
    pub primitive_collections: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayEntry {
    pub label: String,
    pub vector: Vec<i64>,
}

/// The `d + 1` linear relations among the rays, one per primitive
/// collection. The `u` terms use `u_0 = u_d = 0`, and the last relation ends
/// in `-u_{d-1}`.
pub fn ray_relations(d: usize) -> Vec<Vec<(RayLabel, i64)>> {
    use RayLabel::{U, V};
    let u = |k: usize, c: i64, out: &mut Vec<(RayLabel, i64)>| {
        if (1..d).contains(&k) {
            out.push((U(k), c));
        }
    };
    let mut rels = Vec::with_capacity(d + 1);
    let mut first = vec![
        (V(0, 0), 1),
        (V(1, 0), 1),
        (V(2, 0), 1),
        (V(3, 0), 3),
        (V(3, 1), 2),
        (V(3, 2), 1),
    ];
    u(1, -1, &mut first);
    rels.push(first);
    for i in 1..d {
        let mut r = vec![
            (V(0, i), 1),
            (V(1, i), 1),
            (V(2, i), 1),
            (V(3, 3 * i - 2), 1),
            (V(3, 3 * i - 1), 2),
            (V(3, 3 * i), 3),
            (V(3, 3 * i + 1), 2),
            (V(3, 3 * i + 2), 1),
        ];
        u(i - 1, -1, &mut r);
        u(i, 2, &mut r);
        u(i + 1, -1, &mut r);
        rels.push(r);
    }
    let mut last = vec![
        (V(0, d), 1),
        (V(1, d), 1),
        (V(2, d), 1),
        (V(3, 3 * d - 2), 1),
        (V(3, 3 * d - 1), 2),
        (V(3, 3 * d), 3),
    ];
    u(d - 1, -1, &mut last);
    rels.push(last);
    rels
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationCheck {
    Holds,
    /// Index of the first relation whose sum is not the zero vector.
    Fails(usize),
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        *self == RelationCheck::Holds
    }
}

pub fn relation_check(fan: &FanData) -> RelationCheck {
    for (idx, rel) in ray_relations(fan.d).iter().enumerate() {
        let mut sum = vec![0i64; fan.height()];
        for &(label, c) in rel {
            let Some(ray) = fan.ray(label) else {
                return RelationCheck::Fails(idx);
            };
            for (s, x) in sum.iter_mut().zip(ray) {
                *s += c * x;
            }
        }
        if sum.iter().any(|&x| x != 0) {
            return RelationCheck::Fails(idx);
        }
    }
    RelationCheck::Holds
}

/// Divisor class of a ray in terms of `H_0..H_d`.
pub fn divisor_class(d: usize, label: RayLabel) -> LinForm {
    let n = d + 1;
    match label {
        RayLabel::V(i, j) if i < 3 => LinForm::var(n, j),
        RayLabel::V(_, j) => {
            let q = j / 3;
            match j % 3 {
                0 => LinForm::from_terms(n, &[(q, 3)]),
                1 => LinForm::from_terms(n, &[(q, 2), (q + 1, 1)]),
                _ => LinForm::from_terms(n, &[(q, 1), (q + 1, 2)]),
            }
        }
        RayLabel::U(k) => wall_form(n, k),
    }
}

/// `-z_{k-1} + 2 z_k - z_{k+1}`.
pub fn wall_form(nvars: usize, k: usize) -> LinForm {
    LinForm::from_terms(nvars, &[(k - 1, -1), (k, 2), (k + 1, -1)])
}

/// Linear factors (with repetition) of the `i`-th Stanley–Reisner
/// generator: `H_i^4` times the non-trivial classes of the collection.
pub fn sr_generator_factors(d: usize, i: usize) -> Vec<LinForm> {
    let n = d + 1;
    let mut f = vec![LinForm::var(n, i); 4];
    if i > 0 {
        f.push(LinForm::from_terms(n, &[(i - 1, 1), (i, 2)]));
    }
    if i < d {
        f.push(LinForm::from_terms(n, &[(i, 2), (i + 1, 1)]));
    }
    if i > 0 && i < d {
        f.push(wall_form(n, i));
    }
    f
}

pub fn sr_ideal(d: usize) -> Vec<MPoly> {
    (0..=d)
        .map(|i| MPoly::product_of(d + 1, &sr_generator_factors(d, i)))
        .collect()
}

/// Product of divisor classes over each primitive collection of `fan`.
pub fn sr_from_collections(fan: &FanData) -> Vec<MPoly> {
    let classes: Vec<Vec<LinForm>> = fan
        .primitive_collections
        .iter()
        .map(|p| p.iter().map(|&l| divisor_class(fan.d, l)).collect())
        .collect();
    classes
        .iter()
        .map(|c| MPoly::product_of(fan.d + 1, c))
        .collect()
}

/// Scalar and linear factors of the volume class: the product of the
/// classes of every ray except the `v_{0,j}`.
pub fn volume_factors(d: usize) -> (Rat, Vec<LinForm>) {
    let n = d + 1;
    let mut forms = Vec::new();
    for i in 0..=d {
        forms.extend(std::iter::repeat_n(LinForm::var(n, i), 3));
    }
    for i in 0..d {
        forms.push(LinForm::from_terms(n, &[(i, 2), (i + 1, 1)]));
        forms.push(LinForm::from_terms(n, &[(i, 1), (i + 1, 2)]));
    }
    for k in 1..d {
        forms.push(wall_form(n, k));
    }
    (rat::pow(&rat::int(3), n as i64), forms)
}

pub fn volume_form(d: usize) -> MPoly {
    let (s, forms) = volume_factors(d);
    MPoly::product_of(d + 1, &forms).scale(&s)
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `(k+1) x (k+1)` matrix: first row `(2, 1, 0, ...)`, interior rows
/// `(-1, 2, -1)`, last row `(..., 1, 2)`.
pub fn b_matrix(k: usize) -> Vec<Vec<BigInt>> {
    let n = k + 1;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(2);
        if i == 0 {
            row[1] = BigInt::one();
        } else if i == n - 1 {
            row[i - 1] = BigInt::one();
        } else {
            row[i - 1] = BigInt::from(-1);
            row[i + 1] = BigInt::from(-1);
        }
    }
    m
}

pub fn det_bk(k: usize) -> BigInt {
    bareiss_det(b_matrix(k.max(1)))
}

/// Linear pieces of row `i` of the recession map, as coefficient rows.
pub fn recession_pieces(d: usize, i: usize) -> Vec<Vec<i64>> {
    let n = d + 1;
    let row = |terms: &[(usize, i64)]| {
        let mut r = vec![0; n];
        for &(j, c) in terms {
            r[j] = c;
        }
        r
    };
    if i == 0 {
        vec![row(&[(0, 1)]), row(&[(0, 2), (1, 1)])]
    } else if i == d {
        vec![row(&[(d, 1)]), row(&[(d - 1, 1), (d, 2)])]
    } else {
        vec![
            row(&[(i, 1)]),
            row(&[(i - 1, 1), (i, 2)]),
            row(&[(i, 2), (i + 1, 1)]),
            row(&[(i - 1, -1), (i, 2), (i + 1, -1)]),
        ]
    }
}

/// Componentwise minimum over the linear pieces.
pub fn eval_recession(d: usize, alpha: &[Rat]) -> Result<Vec<Rat>, ToricError> {
    if alpha.len() != d + 1 {
        return Err(ToricError::Dimension {
            expected: d + 1,
            found: alpha.len(),
        });
    }
    Ok((0..=d)
        .map(|i| {
            recession_pieces(d, i)
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(alpha)
                        .fold(Rat::zero(), |acc, (&c, a)| acc + rat::int(c) * a)
                })
                .min()
                .expect("every row has pieces")
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationReport {
    pub regions: usize,
    pub min_det: BigInt,
    pub max_det: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("non-positive determinant {det} for piece selection {pattern:?}")]
pub struct OrientationFailure {
    pub pattern: Vec<usize>,
    pub det: BigInt,
}

/// Determinant of the coefficient matrix for one choice of linear piece per
/// row.
pub fn region_det(d: usize, pattern: &[usize]) -> BigInt {
    let m = (0..=d)
        .map(|i| {
            recession_pieces(d, i)[pattern[i]]
                .iter()
                .map(|&c| BigInt::from(c))
                .collect()
        })
        .collect();
    bareiss_det(m)
}

/// Visits every linearity region of the recession map and requires a
/// positive determinant on each.
pub fn orientation_enumeration(d: usize) -> Result<OrientationReport, OrientationFailure> {
    assert!(d >= 1, "degree must be at least 1");
    let sizes: Vec<usize> = (0..=d).map(|i| recession_pieces(d, i).len()).collect();
    let mut pattern = vec![0usize; d + 1];
    let mut regions = 0usize;
    let mut min_det: Option<BigInt> = None;
    let mut max_det: Option<BigInt> = None;
    loop {
        let det = region_det(d, &pattern);
        if !det.is_positive() {
            return Err(OrientationFailure {
                pattern: pattern.clone(),
                det,
            });
        }
        regions += 1;
        if min_det.as_ref().is_none_or(|m| det < *m) {
            min_det = Some(det.clone());
        }
        if max_det.as_ref().is_none_or(|m| det > *m) {
            max_det = Some(det);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i > d {
                return Ok(OrientationReport {
                    regions,
                    min_det: min_det.unwrap(),
                    max_det: max_det.unwrap(),
                });
            }
            pattern[i] += 1;
            if pattern[i] < sizes[i] {
                break;
            }
            pattern[i] = 0;
            i += 1;
        }
    }
}
