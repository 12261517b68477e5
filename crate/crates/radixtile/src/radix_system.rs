//! Radix systems `(B, D)`: division with remainder, integer expansions and integer cycles.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{
    self, hnf_columns, int_sub, int_vec_to_f64, is_expansive, norm2_f64, reduce_mod_hnf,
    residue_canon, spectral_norm, IntMatrix, IntVector, LinalgError, RatVector,
};

/// Safety factor applied to the escape radius.
const RADIUS_SAFETY: f64 = 1.001;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadixError {
    #[error("radix matrix is not expansive")]
    NotExpansive,
    #[error("expected {expected} digits, got {got}")]
    WrongDigitCount { expected: String, got: usize },
    #[error("digits {0} and {1} are congruent modulo B Z^d")]
    IncompleteDigitSet(usize, usize),
    #[error("digit {index} has dimension {got}, expected {expected}")]
    DigitDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("word does not end in the zero digit")]
    NotFinitelyRepresentable,
    #[error("word period must be non-empty")]
    EmptyPeriod,
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A validated radix pair with derived constants.
#[derive(Clone, Debug)]
pub struct RadixSystem {
    base: IntMatrix,
    adj: IntMatrix,
    det: BigInt,
    digits: Vec<IntVector>,
    hnf: Vec<IntVector>,
    residue_index: HashMap<IntVector, usize>,
    escape_radius: f64,
    step_power: usize,
    inv_f64: DMatrix<f64>,
}

/// Builds and validates a radix system.
pub fn new_system(base: IntMatrix, digits: Vec<IntVector>) -> Result<RadixSystem, RadixError> {
    RadixSystem::new(base, digits)
}

impl RadixSystem {
    pub fn new(base: IntMatrix, digits: Vec<IntVector>) -> Result<Self, RadixError> {
        let d = base.dim();
        let det = base.det();
        if det.is_zero() || !is_expansive(&base)? {
            return Err(RadixError::NotExpansive);
        }
        if det.magnitude() != &num_bigint::BigUint::from(digits.len()) {
            return Err(RadixError::WrongDigitCount {
                expected: det.magnitude().to_string(),
                got: digits.len(),
            });
        }
        for (index, dg) in digits.iter().enumerate() {
            if dg.len() != d {
                return Err(RadixError::DigitDimension {
                    index,
                    expected: d,
                    got: dg.len(),
                });
            }
        }
        let cols: Vec<IntVector> = (0..d).map(|j| base.column(j)).collect();
        let hnf = hnf_columns(&cols, d)?;
        let mut residue_index = HashMap::new();
        for (i, dg) in digits.iter().enumerate() {
            if let Some(&j) = residue_index.get(&reduce_mod_hnf(&hnf, dg)) {
                return Err(RadixError::IncompleteDigitSet(j, i));
            }
            residue_index.insert(reduce_mod_hnf(&hnf, dg), i);
        }
        let inv_f64 = base.to_f64().try_inverse().ok_or(LinalgError::Singular)?;
        let max_digit = digits
            .iter()
            .map(|dg| norm2_f64(&int_vec_to_f64(dg)))
            .fold(0.0, f64::max);
        let (escape_radius, step_power) = escape_radius_bound(&inv_f64, max_digit);
        Ok(Self {
            adj: base.adjugate(),
            base,
            det,
            digits,
            hnf,
            residue_index,
            escape_radius,
            step_power,
            inv_f64,
        })
    }

    pub fn base(&self) -> &IntMatrix {
        &self.base
    }

    pub fn adjugate(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn det_abs(&self) -> usize {
        self.digits.len()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn digits(&self) -> &[IntVector] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> &IntVector {
        &self.digits[i]
    }

    pub fn digit_index(&self, v: &[BigInt]) -> Option<usize> {
        self.digits.iter().position(|d| d.as_slice() == v)
    }

    pub fn zero_digit(&self) -> Option<usize> {
        self.digits
            .iter()
            .position(|d| d.iter().all(|x| x.is_zero()))
    }

    /// Radius of a ball containing the attractor and every integer cycle.
    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }

    /// Smallest `m` with `||B^-m|| < 1`.
    pub fn step_power(&self) -> usize {
        self.step_power
    }

    pub fn inverse_f64(&self) -> &DMatrix<f64> {
        &self.inv_f64
    }

    /// Spectral radius of `B^-1`.
    pub fn inverse_spectral_radius(&self) -> f64 {
        self.inv_f64
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Index of the digit congruent to `x` modulo `B Z^d`.
    pub fn digit_of_residue(&self, x: &[BigInt]) -> usize {
        self.residue_index[&reduce_mod_hnf(&self.hnf, x)]
    }

    /// Applies `B^-1` to a vector known to lie in `B Z^d`.
    pub fn exact_div(&self, v: &[BigInt]) -> IntVector {
        self.adj
            .mul_vec(v)
            .into_iter()
            .map(|x| {
                debug_assert!((&x % &self.det).is_zero());
                x / &self.det
            })
            .collect()
    }

    /// `tau_d(x) = B^-1 (x + d)` exactly.
    pub fn tau(&self, digit: usize, x: &[BigRational]) -> RatVector {
        let shifted: RatVector = x
            .iter()
            .zip(&self.digits[digit])
            .map(|(a, b)| a + BigRational::from_integer(b.clone()))
            .collect();
        let den = BigRational::from_integer(self.det.clone());
        self.adj
            .mul_rat_vec(&shifted)
            .into_iter()
            .map(|v| v / &den)
            .collect()
    }

    /// `tau_d(x)` in floating point.
    pub fn tau_f64(&self, digit: usize, x: &[f64]) -> Vec<f64> {
        let shifted = DVector::from_iterator(
            x.len(),
            x.iter()
                .zip(&self.digits[digit])
                .map(|(a, b)| a + b.to_f64().unwrap_or(f64::NAN)),
        );
        (&self.inv_f64 * shifted).iter().copied().collect()
    }

    /// Unique `(d, q)` with `x = d + B q`.
    pub fn divide_step(&self, x: &[BigInt]) -> (usize, IntVector) {
        let di = self.digit_of_residue(x);
        (di, self.exact_div(&int_sub(x, &self.digits[di])))
    }

    /// Eventually periodic digit expansion of an integer vector.
    pub fn encode_integer(&self, x: &[BigInt]) -> EventuallyPeriodicWord {
        let mut seen: HashMap<IntVector, usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut cur = x.to_vec();
        loop {
            if let Some(&s) = seen.get(&cur) {
                return EventuallyPeriodicWord::new(digits[..s].to_vec(), digits[s..].to_vec())
                    .expect("non-empty period");
            }
            seen.insert(cur.clone(), digits.len());
            let (d, q) = self.divide_step(&cur);
            digits.push(d);
            cur = q;
        }
    }

    /// Finite radix sum of a word ending in the zero digit.
    pub fn eval_finite(&self, w: &EventuallyPeriodicWord) -> Result<IntVector, RadixError> {
        let zero = self
            .zero_digit()
            .ok_or(RadixError::NotFinitelyRepresentable)?;
        if w.period() != [zero] {
            return Err(RadixError::NotFinitelyRepresentable);
        }
        Ok(self.horner(w.prefix(), &vec![BigInt::zero(); self.dim()]))
    }

    /// `sum_i B^i d_{w_i} + B^n tail`.
    pub fn horner(&self, word: &[usize], tail: &[BigInt]) -> IntVector {
        word.iter().rev().fold(tail.to_vec(), |acc, &d| {
            exact_linalg::int_add(&self.digits[d], &self.base.mul_vec(&acc))
        })
    }

    /// Integer points of the closed ball of radius `r` around `center`.
    pub fn ball_points(&self, center: &[f64], r: f64) -> Vec<IntVector> {
        ball_points(center, r)
    }

    /// All cycles of the quotient map `x -> q`, each with its periodic digit word.
    ///
    /// Every cycle lies in the escape ball, so iterating from each ball point
    /// reaches all of them.
    pub fn integer_cycles(&self) -> Vec<(Vec<IntVector>, EventuallyPeriodicWord)> {
        let origin = vec![0.0; self.dim()];
        let mut known: HashMap<IntVector, ()> = HashMap::new();
        let mut cycles: Vec<Vec<IntVector>> = Vec::new();
        for start in self.ball_points(&origin, self.escape_radius) {
            let mut path: Vec<IntVector> = Vec::new();
            let mut index: HashMap<IntVector, usize> = HashMap::new();
            let mut cur = start;
            loop {
                if known.contains_key(&cur) {
                    break;
                }
                if let Some(&s) = index.get(&cur) {
                    cycles.push(path[s..].to_vec());
                    break;
                }
                index.insert(cur.clone(), path.len());
                path.push(cur.clone());
                cur = self.divide_step(&cur).1;
            }
            for p in path {
                known.insert(p, ());
            }
        }
        let mut out: Vec<(Vec<IntVector>, EventuallyPeriodicWord)> = cycles
            .into_iter()
            .map(|c| {
                let k = (0..c.len()).min_by(|&a, &b| c[a].cmp(&c[b])).unwrap_or(0);
                let mut pts = c[k..].to_vec();
                pts.extend_from_slice(&c[..k]);
                let labels: Vec<usize> = pts.iter().map(|p| self.divide_step(p).0).collect();
                let w = EventuallyPeriodicWord::new(vec![], labels).expect("non-empty cycle");
                (pts, w)
            })
            .collect();
        out.sort_by(|a, b| (a.0.len(), &a.0[0]).cmp(&(b.0.len(), &b.0[0])));
        out
    }

    pub fn render_digit(&self, i: usize) -> String {
        let parts: Vec<String> = self.digits[i].iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }

    pub fn parse_digit(&self, s: &str) -> Result<usize, RadixError> {
        let v: Result<IntVector, _> = s.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
        let v = v.map_err(|e| RadixError::Parse(format!("digit `{s}`: {e}")))?;
        self.digit_index(&v)
            .ok_or_else(|| RadixError::Parse(format!("`{s}` is not a digit of the system")))
    }

    /// Parses a `;`-separated digit sequence (empty string gives the empty sequence).
    pub fn parse_digits(&self, s: &str) -> Result<Vec<usize>, RadixError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(vec![]);
        }
        s.split(';').map(|t| self.parse_digit(t)).collect()
    }

    pub fn render_digits(&self, w: &[usize]) -> String {
        let parts: Vec<String> = w.iter().map(|&i| self.render_digit(i)).collect();
        parts.join(";")
    }

    pub fn render_word(&self, w: &EventuallyPeriodicWord) -> String {
        format!(
            "{}|{}",
            self.render_digits(w.prefix()),
            self.render_digits(w.period())
        )
    }

    pub fn parse_word(&self, s: &str) -> Result<EventuallyPeriodicWord, RadixError> {
        let (pre, per) = s
            .split_once('|')
            .ok_or_else(|| RadixError::Parse("missing `|` between prefix and period".into()))?;
        if per.contains('|') {
            return Err(RadixError::Parse("more than one `|`".into()));
        }
        EventuallyPeriodicWord::new(self.parse_digits(pre)?, self.parse_digits(per)?)
    }
}

/// True when `digits` has one representative of each class of `Z^d / M Z^d`.
pub fn is_complete_digit_set(m: &IntMatrix, digits: &[IntVector]) -> bool {
    let det = m.det();
    if det.is_zero() || digits.iter().any(|d| d.len() != m.dim()) {
        return false;
    }
    if BigInt::from(digits.len()) != det.abs() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    digits.iter().all(|d| seen.insert(residue_canon(m, d)))
}

/// Escape radius and the step power used to bound it.
///
/// Every attractor point is a sum of `B^-j d_j`; grouping the terms in blocks
/// of `m` gives `||x|| <= max||d|| * sum_{r=1..m} ||B^-r|| / (1 - ||B^-m||)`.
pub fn escape_radius_bound(inv: &DMatrix<f64>, max_digit: f64) -> (f64, usize) {
    let mut power = inv.clone();
    let mut partial = 0.0;
    for m in 1..=4096 {
        let c = spectral_norm(&power);
        partial += c;
        if c < 1.0 {
            return (RADIUS_SAFETY * max_digit * partial / (1.0 - c), m);
        }
        power = &power * inv;
    }
    (f64::INFINITY, 4096)
}

/// Integer points of the closed ball of radius `r` around `center`.
pub fn ball_points(center: &[f64], r: f64) -> Vec<IntVector> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for &c in center {
        let lo = (c - r).floor() as i64;
        let hi = (c + r).ceil() as i64;
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    let tol = r * (1.0 + 1e-12) + 1e-12;
    out.into_iter()
        .filter(|p| {
            let d2: f64 = p
                .iter()
                .zip(center)
                .map(|(&x, &c)| (x as f64 - c).powi(2))
                .sum();
            d2.sqrt() <= tol
        })
        .map(|p| p.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Finite prefix followed by a repeated block, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicWord {
    prefix: Vec<usize>,
    period: Vec<usize>,
}

/// Shortest block whose repetition gives `w`.
pub fn primitive_root(w: &[usize]) -> &[usize] {
    let n = w.len();
    for r in 1..=n {
        if n.is_multiple_of(r) && (r..n).all(|i| w[i] == w[i - r]) {
            return &w[..r];
        }
    }
    w
}

/// True if `b` is a cyclic rotation of `a`.
pub fn is_rotation(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|k| a[k..].iter().chain(&a[..k]).eq(b)))
}

impl EventuallyPeriodicWord {
    pub fn new(mut prefix: Vec<usize>, period: Vec<usize>) -> Result<Self, RadixError> {
        if period.is_empty() {
            return Err(RadixError::EmptyPeriod);
        }
        let mut period = primitive_root(&period).to_vec();
        while !prefix.is_empty() && prefix.last() == period.last() {
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(Self { prefix, period })
    }

    /// Purely periodic word.
    pub fn periodic(period: Vec<usize>) -> Result<Self, RadixError> {
        Self::new(vec![], period)
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// First `n` letters.
    pub fn take(&self, n: usize) -> Vec<usize> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// The word with its first letter removed.
    pub fn tail(&self) -> Self {
        if self.prefix.is_empty() {
            let mut p = self.period.clone();
            p.rotate_left(1);
            Self {
                prefix: vec![],
                period: p,
            }
        } else {
            Self::new(self.prefix[1..].to_vec(), self.period.clone()).expect("non-empty period")
        }
    }

    /// The word `d` followed by `self`.
    pub fn cons(&self, d: usize) -> Self {
        let mut prefix = vec![d];
        prefix.extend_from_slice(&self.prefix);
        Self::new(prefix, self.period.clone()).expect("non-empty period")
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.prefix.iter().map(|x| x.to_string()).collect();
        let q: Vec<String> = self.period.iter().map(|x| x.to_string()).collect();
        write!(f, "{}|{}", p.join(";"), q.join(";"))
    }
}
