//! Exact integer and rational matrix arithmetic, residue systems and lattices.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type IntVector = Vec<BigInt>;
pub type RatVector = Vec<BigRational>;

/// Eigenvalue moduli closer than this to 1 are not classified numerically.
pub const EPS_EIG: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigenvalue modulus within {EPS_EIG} of the unit circle")]
    BorderlineSpectrum,
    #[error("generators do not span a full-rank lattice")]
    RankDeficient,
}

pub fn int_vec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat(v: &[BigInt]) -> RatVector {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Returns the integer vector if every entry is integral.
pub fn as_integral(v: &[BigRational]) -> Option<IntVector> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn rat_sub(a: &[BigRational], b: &[BigRational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn rat_add(a: &[BigRational], b: &[BigRational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn int_add(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn int_sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Fractional part of every coordinate, in `[0, 1)`.
pub fn frac_part(v: &[BigRational]) -> RatVector {
    v.iter().map(|x| x - x.floor()).collect()
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_vec_to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

pub fn int_vec_to_f64(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

pub fn norm2_f64(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Square integer matrix, row-major, arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(LinalgError::NotSquare);
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::new(rows.iter().map(|r| int_vec(r)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn scalar(dim: usize, c: BigInt) -> Self {
        let mut m = Self::identity(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<IntVector> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).clone());
            }
        }
        Self { dim: d, entries }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut s = BigInt::zero();
                for k in 0..d {
                    s += self.get(i, k) * other.get(k, j);
                }
                entries.push(s);
            }
        }
        IntMatrix { dim: d, entries }
    }

    pub fn pow(&self, n: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> RatVector {
        self.entries
            .chunks(self.dim)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + b * a)
            })
            .collect()
    }

    pub fn det(&self) -> BigInt {
        det(self)
    }

    /// Classical adjugate: `m * adj(m) = det(m) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        let d = self.dim;
        if d == 1 {
            return IntMatrix::identity(1);
        }
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let minor: Vec<Vec<BigInt>> = (0..d)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..d)
                            .filter(|&c| c != j)
                            .map(|c| self.get(r, c).clone())
                            .collect()
                    })
                    .collect();
                let cof = det(&IntMatrix::new(minor).expect("square minor"));
                // adj[j][i] = (-1)^(i+j) minor(i,j)
                entries[j * d + i] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        IntMatrix { dim: d, entries }
    }

    /// Solves `self * x = rhs` over the rationals.
    pub fn solve_rat(&self, rhs: &[BigRational]) -> Result<RatVector, LinalgError> {
        let det = self.det();
        if det.is_zero() {
            return Err(LinalgError::Singular);
        }
        let adj = self.adjugate();
        let den = BigRational::from_integer(det);
        Ok(adj.mul_rat_vec(rhs).into_iter().map(|x| x / &den).collect())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Characteristic polynomial coefficients `c_0..c_d` of `det(xI - m)`, with `c_d = 1`.
    pub fn char_poly(&self) -> Vec<BigInt> {
        // Faddeev-LeVerrier; every division is exact over the integers.
        let d = self.dim;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut mk = IntMatrix::scalar(d, BigInt::zero());
        for k in 1..=d {
            let shifted = {
                let mut t = mk.clone();
                for i in 0..d {
                    t.entries[i * d + i] += &coeffs[d - k + 1];
                }
                t
            };
            mk = self.mul(&shifted);
            let trace: BigInt = (0..d).map(|i| mk.get(i, i).clone()).sum();
            coeffs[d - k] = -trace / BigInt::from(k);
        }
        coeffs
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", s.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.dim;
    let mut a: Vec<Vec<BigInt>> = m.rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn poly_eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Remainder of integer polynomial division by a monic divisor (coefficients low to high).
fn poly_rem_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().expect("non-empty");
        if lead.is_zero() {
            continue;
        }
        let shift = r.len() - dd;
        for (i, c) in den.iter().take(dd).enumerate() {
            r[shift + i] -= &lead * c;
        }
    }
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    r
}

fn poly_div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); num.len() - dd];
    while r.len() > dd {
        let lead = r.pop().expect("non-empty");
        let shift = r.len() - dd;
        for (i, c) in den.iter().take(dd).enumerate() {
            r[shift + i] -= &lead * c;
        }
        q[shift] = lead;
    }
    q
}

/// n-th cyclotomic polynomial, coefficients low to high.
pub fn cyclotomic(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(-1);
    p[n] = BigInt::one();
    for k in 1..n {
        if n.is_multiple_of(k) {
            p = poly_div_exact_monic(&p, &cyclotomic(k));
        }
    }
    p
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// True if some eigenvalue of `m` is a root of unity.
pub fn has_root_of_unity_eigenvalue(m: &IntMatrix) -> bool {
    let cp = m.char_poly();
    let d = m.dim();
    (1..=2 * d * d + 6)
        .filter(|&n| euler_phi(n) <= d)
        .any(|n| poly_rem_monic(&cp, &cyclotomic(n)).is_empty())
}

/// Integer (hence all rational) eigenvalues of `m`.
pub fn rational_eigenvalues(m: &IntMatrix) -> Vec<BigInt> {
    let cp = m.char_poly();
    let c0 = cp[0].abs();
    if c0.is_zero() {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::new();
    let bound = c0.to_u64().unwrap_or(u64::MAX);
    let mut k: u64 = 1;
    while k * k <= bound {
        if bound.is_multiple_of(k) {
            for cand in [k, bound / k] {
                for s in [BigInt::from(cand), -BigInt::from(cand)] {
                    if poly_eval(&cp, &s).is_zero() && !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        k += 1;
    }
    out.sort();
    out
}

/// Eigenvalue moduli computed in floating point.
pub fn eigenvalue_moduli(m: &IntMatrix) -> Vec<f64> {
    m.to_f64()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect()
}

/// True iff every eigenvalue lies strictly outside the unit circle.
///
/// Moduli within [`EPS_EIG`] of 1 are settled exactly when the eigenvalue is
/// a root of unity; anything else that close is rejected as borderline.
pub fn is_expansive(m: &IntMatrix) -> Result<bool, LinalgError> {
    if m.det().is_zero() {
        return Err(LinalgError::Singular);
    }
    let moduli = eigenvalue_moduli(m);
    if moduli.iter().any(|&r| r < 1.0 - EPS_EIG) {
        return Ok(false);
    }
    if moduli.iter().any(|&r| (r - 1.0).abs() <= EPS_EIG) {
        if has_root_of_unity_eigenvalue(m) {
            return Ok(false);
        }
        return Err(LinalgError::BorderlineSpectrum);
    }
    Ok(true)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().max()
}

/// Echelon basis of the integer span of `gens`, of any rank.
///
/// Returns basis columns together with their pivot rows; column `k` vanishes
/// above its pivot row and has a positive pivot entry.
pub fn echelon_columns(
    gens: &[IntVector],
    dim: usize,
) -> Result<(Vec<IntVector>, Vec<usize>), LinalgError> {
    if let Some(bad) = gens.iter().find(|c| c.len() != dim) {
        return Err(LinalgError::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let mut cols: Vec<IntVector> = gens
        .iter()
        .filter(|c| c.iter().any(|v| !v.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<IntVector> = Vec::new();
    let mut pivots = Vec::new();
    for row in 0..dim {
        // gcd-combine all remaining columns on this row into one pivot column
        let mut pivot: Option<IntVector> = None;
        let mut rest: Vec<IntVector> = Vec::new();
        for c in cols.drain(..) {
            if c[row].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(c),
                Some(p) => {
                    let e = p[row].extended_gcd(&c[row]);
                    let g = e.gcd;
                    let pa = &p[row] / &g;
                    let ca = &c[row] / &g;
                    let new_p: IntVector =
                        p.iter().zip(&c).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let new_c: IntVector =
                        p.iter().zip(&c).map(|(x, y)| &ca * x - &pa * y).collect();
                    if new_c.iter().any(|v| !v.is_zero()) {
                        rest.push(new_c);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        if let Some(mut p) = pivot {
            if p[row].is_negative() {
                p = p.iter().map(|x| -x).collect();
            }
            out.push(p);
            pivots.push(row);
        }
        cols = rest;
    }
    Ok((out, pivots))
}

/// Column Hermite normal form of the lattice spanned by the columns of `gens`
/// (each inner vector is one generator of length `dim`).
///
/// The result is lower triangular with positive diagonal and
/// `0 <= h[i][j] < h[i][i]` for `j < i`; columns are returned.
pub fn hnf_columns(gens: &[IntVector], dim: usize) -> Result<Vec<IntVector>, LinalgError> {
    let (mut out, pivots) = echelon_columns(gens, dim)?;
    if pivots.len() < dim {
        return Err(LinalgError::RankDeficient);
    }
    for i in 0..dim {
        for j in 0..i {
            let q = out[j][i].div_floor(&out[i][i]);
            if !q.is_zero() {
                let ci = out[i].clone();
                for (a, b) in out[j].iter_mut().zip(&ci) {
                    *a -= &q * b;
                }
            }
        }
    }
    Ok(out)
}

/// Rank of the integer span of `gens`.
pub fn integer_rank(gens: &[IntVector], dim: usize) -> usize {
    echelon_columns(gens, dim)
        .map(|(b, _)| b.len())
        .unwrap_or(0)
}

/// Reduces `v` modulo the lattice spanned by HNF columns `h` into the box `prod [0, h_ii)`.
pub fn reduce_mod_hnf(h: &[IntVector], v: &[BigInt]) -> IntVector {
    let mut r = v.to_vec();
    for (i, col) in h.iter().enumerate() {
        let q = r[i].div_floor(&col[i]);
        if !q.is_zero() {
            for (a, b) in r.iter_mut().zip(col) {
                *a -= &q * b;
            }
        }
    }
    r
}

fn matrix_columns(m: &IntMatrix) -> Vec<IntVector> {
    (0..m.dim()).map(|j| m.column(j)).collect()
}

/// Canonical representative of `v + m Z^d`.
pub fn residue_canon(m: &IntMatrix, v: &[BigInt]) -> IntVector {
    let h = hnf_columns(&matrix_columns(m), m.dim()).expect("nonsingular matrix");
    reduce_mod_hnf(&h, v)
}

/// One canonical representative per coset of `Z^d / m Z^d`.
pub fn residues_enumerate(m: &IntMatrix) -> Vec<IntVector> {
    let h = hnf_columns(&matrix_columns(m), m.dim()).expect("nonsingular matrix");
    let diag: Vec<BigInt> = (0..m.dim()).map(|i| h[i][i].clone()).collect();
    let mut out: Vec<IntVector> = vec![vec![]];
    for di in &diag {
        let n = di.to_u64().expect("residue box too large");
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(BigInt::from(k));
                    p
                })
            })
            .collect();
    }
    out
}

/// Full-rank lattice `(1/q) M Z^d` with `M` in column HNF and `gcd(q, M) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    denom: BigInt,
    basis: Vec<IntVector>,
}

/// Serialized lattice: denominator and HNF basis columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub denom: i64,
    pub basis: Vec<Vec<i64>>,
}

impl Lattice {
    /// Lattice generated by rational vectors; must have full rank.
    pub fn from_generators(gens: &[RatVector], dim: usize) -> Result<Lattice, LinalgError> {
        let q = gens
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<IntVector> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| x.numer() * (&q / x.denom()))
                    .collect::<IntVector>()
            })
            .collect();
        let h = hnf_columns(&ints, dim)?;
        let g = h.iter().flatten().fold(q.clone(), |acc, x| acc.gcd(x));
        let basis = h
            .into_iter()
            .map(|c| c.into_iter().map(|x| x / &g).collect())
            .collect();
        Ok(Lattice {
            denom: q / g,
            basis,
        })
    }

    pub fn integer(dim: usize) -> Lattice {
        Lattice {
            denom: BigInt::one(),
            basis: matrix_columns(&IntMatrix::identity(dim)),
        }
    }

    /// Axis-aligned lattice with the given rational spacings.
    pub fn diagonal(spacings: &[BigRational]) -> Result<Lattice, LinalgError> {
        let d = spacings.len();
        let gens: Vec<RatVector> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            spacings[i].clone()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Lattice::from_generators(&gens, d)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// HNF columns of the integer matrix `M`.
    pub fn basis_columns(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn generators(&self) -> Vec<RatVector> {
        self.basis
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| BigRational::new(x.clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    /// Volume of a fundamental domain.
    pub fn covolume(&self) -> BigRational {
        let diag = (0..self.dim()).fold(BigInt::one(), |acc, i| acc * &self.basis[i][i]);
        BigRational::new(diag, num_traits::pow(self.denom.clone(), self.dim()))
    }

    /// True if the lattice is contained in `Z^d`.
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        lattice_contains(self, v)
    }

    /// Image under an integer matrix.
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice, LinalgError> {
        let gens: Vec<RatVector> = self.generators().iter().map(|g| m.mul_rat_vec(g)).collect();
        Lattice::from_generators(&gens, self.dim())
    }

    /// Lattice points with every coordinate in `[-r, r]`, exactly.
    pub fn points_in_cube_exact(&self, r: f64) -> Vec<RatVector> {
        let q = BigRational::from_integer(self.denom.clone());
        self.points_in_cube(r)
            .iter()
            .map(|p| {
                // recover integer coefficients by back substitution on the triangular basis
                let mut rest: Vec<f64> = p.clone();
                let mut acc = vec![BigInt::zero(); self.dim()];
                for (i, col) in self.basis.iter().enumerate() {
                    let h = col[i].to_f64().unwrap_or(f64::NAN)
                        / self.denom.to_f64().unwrap_or(f64::NAN);
                    let y = (rest[i] / h).round() as i64;
                    for (k, c) in col.iter().enumerate() {
                        acc[k] += c * BigInt::from(y);
                        rest[k] -= y as f64 * c.to_f64().unwrap_or(f64::NAN)
                            / self.denom.to_f64().unwrap_or(f64::NAN);
                    }
                }
                acc.into_iter()
                    .map(|a| BigRational::from_integer(a) / &q)
                    .collect()
            })
            .collect()
    }

    /// Lattice points with every coordinate in `[-r, r]`, as floats.
    pub fn points_in_cube(&self, r: f64) -> Vec<Vec<f64>> {
        let q = self.denom.to_f64().unwrap_or(f64::NAN);
        let cols: Vec<Vec<f64>> = self
            .basis
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_f64().unwrap_or(f64::NAN) / q)
                    .collect()
            })
            .collect();
        let d = self.dim();
        let mut out = Vec::new();
        // column i vanishes above row i, so coordinate i fixes the range of y_i
        fn rec(
            cols: &[Vec<f64>],
            d: usize,
            i: usize,
            acc: Vec<f64>,
            r: f64,
            out: &mut Vec<Vec<f64>>,
        ) {
            if i == d {
                out.push(acc);
                return;
            }
            let h = cols[i][i];
            let lo = ((-r - acc[i]) / h).ceil() as i64;
            let hi = ((r - acc[i]) / h).floor() as i64;
            for y in lo..=hi {
                let next: Vec<f64> = acc
                    .iter()
                    .zip(&cols[i])
                    .map(|(a, c)| a + y as f64 * c)
                    .collect();
                rec(cols, d, i + 1, next, r, out);
            }
        }
        rec(&cols, d, 0, vec![0.0; d], r, &mut out);
        out
    }

    /// Side lengths of the half-open box `prod [0, h_ii / q)`, a fundamental domain.
    pub fn fundamental_box(&self) -> Vec<f64> {
        let q = self.denom.to_f64().unwrap_or(f64::NAN);
        (0..self.dim())
            .map(|i| self.basis[i][i].to_f64().unwrap_or(f64::NAN) / q)
            .collect()
    }

    pub fn to_json(&self) -> Option<LatticeJson> {
        Some(LatticeJson {
            denom: self.denom.to_i64()?,
            basis: self
                .basis
                .iter()
                .map(|c| c.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
                .collect::<Option<Vec<_>>>()?,
        })
    }

    pub fn from_json(j: &LatticeJson) -> Result<Lattice, LinalgError> {
        let d = j.basis.len();
        let gens: Vec<RatVector> = j
            .basis
            .iter()
            .map(|c| c.iter().map(|&x| rat(x, j.denom)).collect())
            .collect();
        Lattice::from_generators(&gens, d)
    }
}

impl Lattice {
    /// Product notation such as `ℤ×(1/2)ℤ` for axis-aligned lattices, the
    /// spanning vectors otherwise.
    pub fn describe(&self) -> String {
        let d = self.dim();
        let diagonal = (0..d).all(|j| (0..d).all(|i| i == j || self.basis[j][i].is_zero()));
        if !diagonal {
            return self.to_string();
        }
        let factors: Vec<String> = (0..d)
            .map(|i| {
                let s = BigRational::new(self.basis[i][i].clone(), self.denom.clone());
                if s.is_one() {
                    "ℤ".to_string()
                } else if s.is_integer() {
                    format!("{s}ℤ")
                } else {
                    format!("({s})ℤ")
                }
            })
            .collect();
        if d > 1 && factors.iter().all(|f| f == "ℤ") {
            const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
            let exp: String = d
                .to_string()
                .chars()
                .map(|c| SUP[c.to_digit(10).unwrap_or(0) as usize])
                .collect();
            return format!("ℤ{exp}");
        }
        factors.join("×")
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .generators()
            .iter()
            .map(|c| {
                let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", s.join(","))
            })
            .collect();
        write!(f, "span{{{}}}", cols.join(", "))
    }
}

/// Dual lattice `{y : y . x in Z for all x in L}`.
pub fn lattice_dual(l: &Lattice) -> Lattice {
    let d = l.dim();
    let m = IntMatrix::new(
        (0..d)
            .map(|i| (0..d).map(|j| l.basis[j][i].clone()).collect())
            .collect(),
    )
    .expect("square basis");
    // dual basis = q * (M^T)^{-1} = q * adj(M^T) / det(M)
    let mt = m.transpose();
    let det_m = m.det();
    let adj = mt.adjugate();
    let gens: Vec<RatVector> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| BigRational::new(adj.get(i, j) * &l.denom, det_m.clone()))
                .collect()
        })
        .collect();
    Lattice::from_generators(&gens, d).expect("dual of a full-rank lattice")
}

/// Smallest lattice containing both.
pub fn lattice_join(a: &Lattice, b: &Lattice) -> Lattice {
    let mut gens = a.generators();
    gens.extend(b.generators());
    Lattice::from_generators(&gens, a.dim()).expect("join of full-rank lattices")
}

pub fn lattice_contains(l: &Lattice, v: &[BigRational]) -> bool {
    // forward substitution in M y = q v, integral solution required
    let d = l.dim();
    let target: Vec<BigRational> = v
        .iter()
        .map(|x| x * BigRational::from_integer(l.denom.clone()))
        .collect();
    let mut y: Vec<BigInt> = Vec::with_capacity(d);
    for i in 0..d {
        let mut r = target[i].clone();
        for (j, yj) in y.iter().enumerate() {
            r -= BigRational::from_integer(&l.basis[j][i] * yj);
        }
        let yi = r / BigRational::from_integer(l.basis[i][i].clone());
        if !yi.is_integer() {
            return false;
        }
        y.push(yi.to_integer());
    }
    true
}

pub fn lattice_equal(a: &Lattice, b: &Lattice) -> bool {
    a == b
}
