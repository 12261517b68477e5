//! Cycles of the maps `tau_d`, the division map on `Z^d - C`, companion cycles,
//! and the encode/decode pair between `(k, j)` and eventually periodic words.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exact_linalg::{
    as_integral, int_add, rat_sub, rat_vec_to_f64, to_rat, IntMatrix, IntVector, RatVector,
};
use crate::radix_system::{ball_points, primitive_root, EventuallyPeriodicWord, RadixSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("cycle word must be non-empty")]
    EmptyWord,
    #[error("cycle composition is singular")]
    SingularComposition,
    #[error("cycle is not simple: two points are congruent modulo Z^d")]
    NotSimple,
    #[error("slot {slot} out of range for a cycle of length {period}")]
    BadSlot { slot: usize, period: usize },
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("word period is not the label word of a companion cycle")]
    PeriodNotCompanion,
    #[error("cycle point of the word period matches no cycle slot modulo Z^d")]
    NoSlotMatch,
}

/// Ordered cycle `theta_0 .. theta_{p-1}` with `tau_{l_j}(theta_j) = theta_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    points: Vec<RatVector>,
    labels: Vec<usize>,
    simple: bool,
}

impl Cycle {
    pub fn points(&self) -> &[RatVector] {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// `theta_{j mod p}`.
    pub fn point(&self, j: usize) -> &RatVector {
        &self.points[j % self.points.len()]
    }

    /// Slot `j` with `x - theta_j` integral.
    pub fn slot_of(&self, x: &[BigRational]) -> Option<usize> {
        self.points
            .iter()
            .position(|t| as_integral(&rat_sub(x, t)).is_some())
    }

    /// Same cycle, possibly started at another point.
    pub fn same_up_to_rotation(&self, other: &Cycle) -> bool {
        let p = self.period();
        p == other.period()
            && (0..p).any(|k| {
                (0..p).all(|i| {
                    self.points[(i + k) % p] == other.points[i]
                        && self.labels[(i + k) % p] == other.labels[i]
                })
            })
    }

    /// The cycle started at `theta_k`.
    pub fn rotated(&self, k: usize) -> Cycle {
        let mut points = self.points.clone();
        let mut labels = self.labels.clone();
        points.rotate_left(k % self.period());
        labels.rotate_left(k % self.period());
        Cycle {
            points,
            labels,
            simple: self.simple,
        }
    }

    fn starting_at_min(self) -> Cycle {
        let k = (0..self.period())
            .min_by(|&a, &b| self.points[a].cmp(&self.points[b]))
            .unwrap_or(0);
        self.rotated(k)
    }
}

fn is_simple(points: &[RatVector]) -> bool {
    let mut seen: HashSet<RatVector> = HashSet::new();
    points
        .iter()
        .all(|p| seen.insert(p.iter().map(|x| x - x.floor()).collect()))
}

/// The cycle whose label word is the primitive root of `word`.
pub fn cycle_from_word(s: &RadixSystem, word: &[usize]) -> Result<Cycle, CodecError> {
    if word.is_empty() {
        return Err(CodecError::EmptyWord);
    }
    let labels = primitive_root(word).to_vec();
    let p = labels.len() as u32;
    let d = s.dim();
    // (B^p - I) theta_0 = sum_i B^i l_i
    let lhs: IntMatrix = s.base().pow(p).sub(&IntMatrix::identity(d));
    let rhs = s.horner(&labels, &vec![BigInt::zero(); d]);
    let theta0 = lhs
        .solve_rat(&to_rat(&rhs))
        .map_err(|_| CodecError::SingularComposition)?;
    let mut points = vec![theta0];
    for &l in &labels[..labels.len() - 1] {
        let next = s.tau(l, points.last().expect("non-empty"));
        points.push(next);
    }
    debug_assert_eq!(
        &s.tau(
            *labels.last().expect("non-empty"),
            &points[points.len() - 1]
        ),
        &points[0]
    );
    let simple = is_simple(&points);
    Ok(Cycle {
        points,
        labels,
        simple,
    })
}

/// The point `a - theta_slot` of `Z^d - C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleRelativePoint {
    pub base: IntVector,
    pub slot: usize,
}

impl CycleRelativePoint {
    pub fn new(base: IntVector, slot: usize) -> Self {
        Self { base, slot }
    }

    /// `a - theta_slot` as a rational vector.
    pub fn value(&self, c: &Cycle) -> RatVector {
        rat_sub(&to_rat(&self.base), c.point(self.slot))
    }
}

fn check_simple(c: &Cycle) -> Result<(), CodecError> {
    if c.is_simple() {
        Ok(())
    } else {
        Err(CodecError::NotSimple)
    }
}

fn check_point(s: &RadixSystem, c: &Cycle, k: &[BigInt], j: usize) -> Result<(), CodecError> {
    if k.len() != s.dim() {
        return Err(CodecError::DimensionMismatch {
            expected: s.dim(),
            got: k.len(),
        });
    }
    if j >= c.period() {
        return Err(CodecError::BadSlot {
            slot: j,
            period: c.period(),
        });
    }
    Ok(())
}

/// One division step `a - theta_j = B (b - theta_{j+1}) + d`.
///
/// Since `B theta_{j+1} = theta_j + l_j` this is integer division of `a + l_j`.
pub fn r_c_step(
    s: &RadixSystem,
    c: &Cycle,
    pt: &CycleRelativePoint,
) -> (CycleRelativePoint, usize) {
    let x = int_add(&pt.base, s.digit(c.labels[pt.slot]));
    let (d, b) = s.divide_step(&x);
    (CycleRelativePoint::new(b, (pt.slot + 1) % c.period()), d)
}

/// Cycles lying in `(C - Z^d) ∩ X`, each once, sorted by length then first point.
pub fn companion_cycles(s: &RadixSystem, c: &Cycle) -> Result<Vec<Cycle>, CodecError> {
    check_simple(c)?;
    let r = s.escape_radius();
    let mut known: HashSet<CycleRelativePoint> = HashSet::new();
    let mut found: Vec<Cycle> = Vec::new();
    for j in 0..c.period() {
        let center = rat_vec_to_f64(c.point(j));
        for a in ball_points(&center, r) {
            let mut path: Vec<(CycleRelativePoint, usize)> = Vec::new();
            let mut index: HashMap<CycleRelativePoint, usize> = HashMap::new();
            let mut cur = CycleRelativePoint::new(a, j);
            loop {
                if known.contains(&cur) {
                    break;
                }
                if let Some(&start) = index.get(&cur) {
                    let orbit = &path[start..];
                    let points: Vec<RatVector> = orbit
                        .iter()
                        .map(|(q, _)| rat_sub(c.point(q.slot), &to_rat(&q.base)))
                        .collect();
                    let labels: Vec<usize> = orbit.iter().map(|(_, d)| *d).collect();
                    let simple = is_simple(&points);
                    found.push(
                        Cycle {
                            points,
                            labels,
                            simple,
                        }
                        .starting_at_min(),
                    );
                    break;
                }
                let (next, d) = r_c_step(s, c, &cur);
                index.insert(cur.clone(), path.len());
                path.push((cur, d));
                cur = next;
            }
            for (q, _) in path {
                known.insert(q);
            }
        }
    }
    found.sort_by(|a, b| (a.period(), &a.points[0]).cmp(&(b.period(), &b.points[0])));
    Ok(found)
}

/// The word of `(k, j)`: digits emitted by iterating the division map from `k - theta_j`.
pub fn encode_e_c(
    s: &RadixSystem,
    c: &Cycle,
    k: &[BigInt],
    j: usize,
) -> Result<EventuallyPeriodicWord, CodecError> {
    check_simple(c)?;
    check_point(s, c, k, j)?;
    let mut seen: HashMap<CycleRelativePoint, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut cur = CycleRelativePoint::new(k.to_vec(), j);
    loop {
        if let Some(&start) = seen.get(&cur) {
            return Ok(EventuallyPeriodicWord::new(
                digits[..start].to_vec(),
                digits[start..].to_vec(),
            )
            .expect("non-empty period"));
        }
        let (next, d) = r_c_step(s, c, &cur);
        seen.insert(cur, digits.len());
        digits.push(d);
        cur = next;
    }
}

/// Inverse of [`encode_e_c`] on words whose period is a companion label word.
pub fn decode_d_c(
    s: &RadixSystem,
    c: &Cycle,
    w: &EventuallyPeriodicWord,
) -> Result<(IntVector, usize), CodecError> {
    check_simple(c)?;
    let p = c.period();
    let mut prefix = w.prefix().to_vec();
    let mut period = w.period().to_vec();
    // the period length is a multiple of p, so only single letters move the prefix length mod p
    while !prefix.len().is_multiple_of(p) {
        prefix.push(period[0]);
        period.rotate_left(1);
    }
    let eta = cycle_from_word(s, &period)?;
    let j = c.slot_of(&eta.points[0]).ok_or(CodecError::NoSlotMatch)?;
    for (i, e) in eta.points.iter().enumerate() {
        if as_integral(&rat_sub(e, c.point(j + i))).is_none() {
            return Err(CodecError::PeriodNotCompanion);
        }
    }
    // k = sum_{i<n} B^i w_i + theta_j - B^n eta_0
    let tail: RatVector = eta.points[0].iter().map(|x| -x).collect();
    let s0 = prefix.iter().rev().fold(tail, |acc, &d| {
        let scaled = s.base().mul_rat_vec(&acc);
        scaled
            .into_iter()
            .zip(s.digit(d))
            .map(|(a, b)| a + BigRational::from_integer(b.clone()))
            .collect()
    });
    let k: RatVector = s0.iter().zip(c.point(j)).map(|(a, b)| a + b).collect();
    let k = as_integral(&k).ok_or(CodecError::PeriodNotCompanion)?;
    Ok((k, j))
}

/// The trivial cycle `{0}` labelled by the zero digit, when present.
pub fn zero_cycle(s: &RadixSystem) -> Option<Cycle> {
    s.zero_digit().map(|z| Cycle {
        points: vec![vec![BigRational::zero(); s.dim()]],
        labels: vec![z],
        simple: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{int_vec, rat};

    fn rat_point(num: i64, den: i64) -> RatVector {
        vec![rat(num, den)]
    }

    fn one_d(b: i64, ds: &[i64]) -> RadixSystem {
        RadixSystem::new(
            IntMatrix::from_rows(&[vec![b]]).unwrap(),
            ds.iter().map(|&x| int_vec(&[x])).collect(),
        )
        .unwrap()
    }

    fn third_cycle(s: &RadixSystem) -> Cycle {
        cycle_from_word(s, &s.parse_digits("1;0").unwrap()).unwrap()
    }

    #[test]
    fn cycle_from_word_examples() {
        let s = one_d(2, &[0, 1]);
        let c = third_cycle(&s);
        assert_eq!(c.points(), &[rat_point(1, 3), rat_point(2, 3)]);
        assert!(c.is_simple());
        let z = cycle_from_word(&s, &[0]).unwrap();
        assert_eq!(z.points(), &[rat_point(0, 1)]);
        let c4 = cycle_from_word(&s, &[1, 0, 1, 0]).unwrap();
        assert_eq!(c4, c);
    }

    #[test]
    fn r_c_step_table() {
        let s = one_d(2, &[0, 1]);
        let c = third_cycle(&s);
        let (n, d) = r_c_step(&s, &c, &CycleRelativePoint::new(int_vec(&[15]), 0));
        assert_eq!((n, d), (CycleRelativePoint::new(int_vec(&[8]), 1), 0));
        let (n, d) = r_c_step(&s, &c, &CycleRelativePoint::new(int_vec(&[1]), 1));
        assert_eq!((n, d), (CycleRelativePoint::new(int_vec(&[0]), 0), 1));
        // identity a - theta_j = B (b - theta_{j+1}) + d, checked by hand arithmetic
        let lhs = CycleRelativePoint::new(int_vec(&[15]), 0).value(&c);
        let rhs = CycleRelativePoint::new(int_vec(&[8]), 1).value(&c);
        assert_eq!(
            lhs[0].clone(),
            rhs[0].clone() * BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn companions_one_dimensional() {
        let s = one_d(2, &[0, 1]);
        let z = zero_cycle(&s).unwrap();
        let comp = companion_cycles(&s, &z).unwrap();
        let pts: Vec<&RatVector> = comp.iter().map(|c| &c.points()[0]).collect();
        assert_eq!(pts, vec![&rat_point(0, 1), &rat_point(1, 1)]);
        let c = third_cycle(&s);
        let comp = companion_cycles(&s, &c).unwrap();
        assert_eq!(comp.len(), 1);
        assert!(comp[0].same_up_to_rotation(&c));

        let s = one_d(2, &[0, 3]);
        let z = zero_cycle(&s).unwrap();
        let comp: Vec<Vec<RatVector>> = companion_cycles(&s, &z)
            .unwrap()
            .into_iter()
            .map(|c| c.points().to_vec())
            .collect();
        assert_eq!(
            comp,
            vec![
                vec![rat_point(0, 1)],
                vec![rat_point(3, 1)],
                vec![rat_point(1, 1), rat_point(2, 1)],
            ]
        );
    }

    #[test]
    fn encode_decode_examples() {
        let s = one_d(2, &[0, 1]);
        let c = third_cycle(&s);
        let w = encode_e_c(&s, &c, &int_vec(&[15]), 0).unwrap();
        assert_eq!(s.render_word(&w), "0;0;1;0;0;1|1;0");
        assert_eq!(decode_d_c(&s, &c, &w).unwrap(), (int_vec(&[15]), 0));
        let w = s.parse_word("|1;0").unwrap();
        assert_eq!(decode_d_c(&s, &c, &w).unwrap(), (int_vec(&[0]), 0));
        let z = zero_cycle(&s).unwrap();
        let w = encode_e_c(&s, &z, &int_vec(&[0]), 0).unwrap();
        assert_eq!(s.render_word(&w), "|0");

        let s = one_d(2, &[0, 3]);
        let z = zero_cycle(&s).unwrap();
        let w = s.parse_word("0;3;3|0").unwrap();
        assert_eq!(decode_d_c(&s, &z, &w).unwrap(), (int_vec(&[18]), 0));
    }

    #[test]
    fn decode_rejects_foreign_periods() {
        let s = one_d(2, &[0, 1]);
        let c = third_cycle(&s);
        let w = s.parse_word("1|0").unwrap();
        assert_eq!(decode_d_c(&s, &c, &w), Err(CodecError::NoSlotMatch));
    }

    #[test]
    fn bad_slot_rejected() {
        let s = one_d(2, &[0, 1]);
        let c = third_cycle(&s);
        assert!(matches!(
            encode_e_c(&s, &c, &int_vec(&[1]), 2),
            Err(CodecError::BadSlot { .. })
        ));
    }
}
