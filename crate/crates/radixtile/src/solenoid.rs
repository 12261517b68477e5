//! Truncated solenoid points, the embeddings of `R^d` into the solenoid, the
//! symbolic decode map and the shift dynamics on both sides.
//!
//! A point is stored as its first `N` coordinates `x_n` in `[0,1)^d`, standing
//! for `exp(2 pi i x_n)`; consecutive levels satisfy `B x_{n+1} = x_n mod Z^d`
//! where `B = A^T` is the base of the radix system.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::attractor::{membership, Membership};
use crate::cycle_codec::{companion_cycles, decode_d_c, CodecError, Cycle};
use crate::exact_linalg::{
    frac_part, rat_add, rat_sub, rat_to_f64, rat_vec_to_f64, to_rat, IntMatrix, RatVector,
};
use crate::radix_system::{EventuallyPeriodicWord, RadixSystem};

/// Float-mode tolerance on compatibility and diagram checks.
pub const TAU_SOL: f64 = 1e-9;

/// Node budget for membership queries made by [`rho_inverse`].
pub const RHO_MEMBERSHIP_LIMIT: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolenoidError {
    #[error("word supplies {got} digits, need {need}")]
    WordTooShort { need: usize, got: usize },
    #[error("depth must be at least {0}")]
    DepthTooSmall(usize),
    #[error("could not decide which branch of the attractor contains the point")]
    MembershipUndecided,
    #[error("point is not in the attractor")]
    NotInAttractor,
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Exact truncation: levels are rational vectors in `[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSolenoidPoint {
    levels: Vec<RatVector>,
}

impl TruncatedSolenoidPoint {
    pub fn from_levels(levels: Vec<RatVector>) -> Self {
        Self {
            levels: levels.iter().map(|l| frac_part(l)).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[RatVector] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &RatVector {
        &self.levels[n]
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self {
            levels: self.levels[..n.min(self.depth())].to_vec(),
        }
    }

    /// True when `B x_{n+1} = x_n mod Z^d` holds exactly at every level.
    pub fn is_compatible(&self, base: &IntMatrix) -> bool {
        self.levels
            .windows(2)
            .all(|w| torus_gap(&base.mul_rat_vec(&w[1]), &w[0]).is_zero())
    }

    /// Largest torus distance between corresponding levels of the common depth.
    pub fn deviation(&self, other: &Self) -> f64 {
        self.levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| rat_to_f64(&torus_gap(a, b)))
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> FloatSolenoidPoint {
        FloatSolenoidPoint {
            levels: self.levels.iter().map(|l| rat_vec_to_f64(l)).collect(),
        }
    }
}

/// Floating truncation, for pictures and error budgets.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSolenoidPoint {
    levels: Vec<Vec<f64>>,
}

impl FloatSolenoidPoint {
    pub fn from_levels(levels: Vec<Vec<f64>>) -> Self {
        Self {
            levels: levels
                .into_iter()
                .map(|l| l.into_iter().map(|v| v - v.floor()).collect())
                .collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn compatibility_defect(&self, base: &IntMatrix) -> f64 {
        let b = base.to_f64();
        self.levels
            .windows(2)
            .map(|w| {
                let up: Vec<f64> = (0..w[1].len())
                    .map(|i| (0..w[1].len()).map(|k| b[(i, k)] * w[1][k]).sum())
                    .collect();
                torus_gap_f64(&up, &w[0])
            })
            .fold(0.0, f64::max)
    }

    pub fn deviation(&self, other: &Self) -> f64 {
        self.levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| torus_gap_f64(a, b))
            .fold(0.0, f64::max)
    }
}

/// Max over coordinates of the distance from `a - b` to the nearest integer.
fn torus_gap(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            let f = &d - d.floor();
            let g = BigRational::from_integer(1.into()) - &f;
            if f < g {
                f
            } else {
                g
            }
        })
        .fold(BigRational::zero(), |acc, v| if v > acc { v } else { acc })
}

fn torus_gap_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            (d - d.round()).abs()
        })
        .fold(0.0, f64::max)
}

fn inverse_power_apply(s: &RadixSystem, x: &[BigRational], n: usize) -> RatVector {
    (0..n).fold(x.to_vec(), |acc, _| {
        let den = BigRational::from_integer(s.det().clone());
        s.adjugate()
            .mul_rat_vec(&acc)
            .into_iter()
            .map(|v| v / &den)
            .collect()
    })
}

fn mat_vec_f64(m: &nalgebra::DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| (0..x.len()).map(|k| m[(i, k)] * x[k]).sum())
        .collect()
}

/// `(B^-n x mod Z^d)_{n < N}`.
pub fn embed_i_hat(s: &RadixSystem, x: &[BigRational], depth: usize) -> TruncatedSolenoidPoint {
    let mut levels = Vec::with_capacity(depth);
    let mut cur = x.to_vec();
    for n in 0..depth {
        if n > 0 {
            cur = inverse_power_apply(s, &cur, 1);
        }
        levels.push(cur.clone());
    }
    TruncatedSolenoidPoint::from_levels(levels)
}

pub fn embed_i_hat_f64(s: &RadixSystem, x: &[f64], depth: usize) -> FloatSolenoidPoint {
    let mut levels = Vec::with_capacity(depth);
    let mut cur = x.to_vec();
    for n in 0..depth {
        if n > 0 {
            cur = mat_vec_f64(s.inverse_f64(), &cur);
        }
        levels.push(cur.clone());
    }
    FloatSolenoidPoint::from_levels(levels)
}

/// Prepends `B x_0` and drops the last level.
pub fn shift_sigma(base: &IntMatrix, p: &TruncatedSolenoidPoint) -> TruncatedSolenoidPoint {
    let mut levels = Vec::with_capacity(p.depth());
    if let Some(first) = p.levels.first() {
        levels.push(base.mul_rat_vec(first));
        levels.extend(p.levels[..p.depth() - 1].iter().cloned());
    }
    TruncatedSolenoidPoint::from_levels(levels)
}

pub fn shift_sigma_f64(base: &IntMatrix, p: &FloatSolenoidPoint) -> FloatSolenoidPoint {
    let mut levels = Vec::with_capacity(p.depth());
    if let Some(first) = p.levels.first() {
        levels.push(mat_vec_f64(&base.to_f64(), first));
        levels.extend(p.levels[..p.depth() - 1].iter().cloned());
    }
    FloatSolenoidPoint::from_levels(levels)
}

/// Drops the first level.
pub fn shift_sigma_inverse(
    p: &TruncatedSolenoidPoint,
) -> Result<TruncatedSolenoidPoint, SolenoidError> {
    if p.depth() < 2 {
        return Err(SolenoidError::DepthTooSmall(2));
    }
    Ok(TruncatedSolenoidPoint {
        levels: p.levels[1..].to_vec(),
    })
}

/// A point `x` together with an infinite digit word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolState {
    pub x: RatVector,
    pub word: EventuallyPeriodicWord,
}

/// Levels `tau_{w_{n-1}} ... tau_{w_0} x` for a finite word prefix.
pub fn decode_map_d_prefix(
    s: &RadixSystem,
    x: &[BigRational],
    word: &[usize],
    depth: usize,
) -> Result<TruncatedSolenoidPoint, SolenoidError> {
    let need = depth.saturating_sub(1);
    if word.len() < need {
        return Err(SolenoidError::WordTooShort {
            need,
            got: word.len(),
        });
    }
    let mut levels = Vec::with_capacity(depth);
    let mut cur = x.to_vec();
    for n in 0..depth {
        if n > 0 {
            cur = s.tau(word[n - 1], &cur);
        }
        levels.push(cur.clone());
    }
    Ok(TruncatedSolenoidPoint::from_levels(levels))
}

pub fn decode_map_d(s: &RadixSystem, st: &SymbolState, depth: usize) -> TruncatedSolenoidPoint {
    let word = st.word.take(depth.saturating_sub(1));
    decode_map_d_prefix(s, &st.x, &word, depth).expect("infinite word")
}

pub fn decode_map_d_f64(
    s: &RadixSystem,
    x: &[f64],
    word: &EventuallyPeriodicWord,
    depth: usize,
) -> FloatSolenoidPoint {
    let mut levels = Vec::with_capacity(depth);
    let mut cur = x.to_vec();
    for n in 0..depth {
        if n > 0 {
            cur = s.tau_f64(word.letter(n - 1), &cur);
        }
        levels.push(cur.clone());
    }
    FloatSolenoidPoint::from_levels(levels)
}

/// `(x, w_0 w_1 ...) -> (tau_{w_0} x, w_1 ...)`.
pub fn rho(s: &RadixSystem, st: &SymbolState) -> SymbolState {
    SymbolState {
        x: s.tau(st.word.letter(0), &st.x),
        word: st.word.tail(),
    }
}

/// `(x, w) -> (B x - d, d w)` for the digit `d` whose branch contains `x`.
///
/// On the measure-zero overlap of two branches the lowest digit index wins.
pub fn rho_inverse(s: &RadixSystem, st: &SymbolState) -> Result<SymbolState, SolenoidError> {
    let bx = s.base().mul_rat_vec(&st.x);
    let mut undecided = false;
    for d in 0..s.digits().len() {
        let y = rat_sub(&bx, &to_rat(s.digit(d)));
        match membership(s, &y, RHO_MEMBERSHIP_LIMIT) {
            Membership::Inside => {
                return Ok(SymbolState {
                    x: y,
                    word: st.word.cons(d),
                })
            }
            Membership::Undecided => undecided = true,
            Membership::Outside => {}
        }
    }
    if undecided {
        Err(SolenoidError::MembershipUndecided)
    } else {
        Err(SolenoidError::NotInAttractor)
    }
}

/// `(B^-n x + theta_{n+j} mod Z^d)_{n < N}`.
pub fn embed_i_c(
    s: &RadixSystem,
    c: &Cycle,
    x: &[BigRational],
    j: usize,
    depth: usize,
) -> TruncatedSolenoidPoint {
    let hat = embed_i_hat(s, x, depth);
    TruncatedSolenoidPoint::from_levels(
        hat.levels
            .iter()
            .enumerate()
            .map(|(n, l)| rat_add(l, c.point(n + j)))
            .collect(),
    )
}

pub fn embed_i_c_f64(
    s: &RadixSystem,
    c: &Cycle,
    x: &[f64],
    j: usize,
    depth: usize,
) -> FloatSolenoidPoint {
    let hat = embed_i_hat_f64(s, x, depth);
    FloatSolenoidPoint::from_levels(
        hat.levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                l.iter()
                    .zip(rat_vec_to_f64(c.point(n + j)))
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect(),
    )
}

/// `(x, j) -> (B x, j - 1 mod p)`.
pub fn alpha(s: &RadixSystem, x: &[BigRational], j: usize, p: usize) -> (RatVector, usize) {
    (s.base().mul_rat_vec(x), (j + p - 1) % p)
}

/// The preimage of `decode_map_d(x, w)` under `embed_i_c`, computed from the
/// cycle decoder: `(x - theta_j + k, j)` with `(k, j)` the decoded word.
pub fn i_c_preimage(
    s: &RadixSystem,
    c: &Cycle,
    st: &SymbolState,
) -> Result<(RatVector, usize), SolenoidError> {
    let (k, j) = decode_d_c(s, c, &st.word)?;
    Ok((rat_add(&rat_sub(&st.x, c.point(j)), &to_rat(&k)), j))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorsumReport {
    pub samples: usize,
    pub depth: usize,
    /// Exact-mode deviations; every entry should be exactly zero.
    pub exact_max_deviation: f64,
    /// Same diagrams evaluated in floating point.
    pub float_max_deviation: f64,
    pub max_compatibility_defect: f64,
    /// Samples where the decoded slot shifted by one under the inverse shift.
    pub slot_shift_agreements: usize,
    /// Samples whose base point sat on a branch overlap.
    pub overlap_samples: usize,
}

impl CorsumReport {
    pub fn passes(&self) -> bool {
        self.exact_max_deviation == 0.0
            && self.float_max_deviation < TAU_SOL
            && self.max_compatibility_defect < TAU_SOL
            && self.slot_shift_agreements == self.samples
    }
}

/// A random state `(x, w)` with `x` in the attractor and `w` ending in a
/// companion label word of `c`.
pub fn random_state(
    s: &RadixSystem,
    c: &Cycle,
    companions: &[Cycle],
    rng: &mut ChaCha8Rng,
) -> SymbolState {
    let n = s.digits().len();
    let len = rng.gen_range(0..6);
    let mut x = c.point(rng.gen_range(0..c.period())).clone();
    for _ in 0..len {
        x = s.tau(rng.gen_range(0..n), &x);
    }
    let comp = &companions[rng.gen_range(0..companions.len())];
    let prefix: Vec<usize> = (0..rng.gen_range(0..8))
        .map(|_| rng.gen_range(0..n))
        .collect();
    let rot = rng.gen_range(0..comp.period());
    let mut period = comp.labels().to_vec();
    period.rotate_left(rot);
    SymbolState {
        x,
        word: EventuallyPeriodicWord::new(prefix, period).expect("non-empty period"),
    }
}

/// Checks the two commuting squares and the decoded preimage formula on
/// random states, in exact and in floating arithmetic.
pub fn verify_corsum(
    s: &RadixSystem,
    c: &Cycle,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<CorsumReport, SolenoidError> {
    if depth < 2 {
        return Err(SolenoidError::DepthTooSmall(2));
    }
    let companions = companion_cycles(s, c)?;
    let p = c.period();
    let base = s.base();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CorsumReport {
        samples,
        depth,
        ..Default::default()
    };
    let mut exact = 0.0f64;
    let mut float = 0.0f64;
    for _ in 0..samples {
        let st = random_state(s, c, &companions, &mut rng);
        let dx = decode_map_d(s, &st, depth);
        rep.max_compatibility_defect = rep
            .max_compatibility_defect
            .max(if dx.is_compatible(base) { 0.0 } else { 1.0 });

        // preimage under the cycle embedding
        let (y, j) = i_c_preimage(s, c, &st)?;
        exact = exact.max(embed_i_c(s, c, &y, j, depth).deviation(&dx));

        // left square: decode after inverse shift equals shift after decode
        let back = rho_inverse(s, &st)?;
        let mut hits = 0;
        for d in 0..s.digits().len() {
            let cand = rat_sub(&base.mul_rat_vec(&st.x), &to_rat(s.digit(d)));
            if matches!(
                membership(s, &cand, RHO_MEMBERSHIP_LIMIT),
                Membership::Inside
            ) {
                hits += 1;
            }
        }
        if hits > 1 {
            rep.overlap_samples += 1;
        }
        let lhs = decode_map_d(s, &back, depth);
        let rhs = shift_sigma(base, &dx);
        exact = exact.max(lhs.deviation(&rhs));
        let (_, j_back) = decode_d_c(s, c, &back.word)?;
        if (j_back + 1) % p == j {
            rep.slot_shift_agreements += 1;
        }

        // right square: embedding after alpha equals shift after embedding
        let (ay, aj) = alpha(s, &y, j, p);
        let lhs = embed_i_c(s, c, &ay, aj, depth);
        let rhs = shift_sigma(base, &embed_i_c(s, c, &y, j, depth));
        exact = exact.max(lhs.deviation(&rhs));

        // forward shift conjugacy
        let fwd = decode_map_d(s, &rho(s, &st), depth - 1);
        exact = exact.max(fwd.deviation(&shift_sigma_inverse(&dx)?));

        // float paths
        let xf = rat_vec_to_f64(&st.x);
        let df = decode_map_d_f64(s, &xf, &st.word, depth);
        rep.max_compatibility_defect = rep
            .max_compatibility_defect
            .max(df.compatibility_defect(base));
        let cf = embed_i_c_f64(s, c, &rat_vec_to_f64(&y), j, depth);
        float = float.max(cf.deviation(&df));
        let lf = decode_map_d_f64(s, &rat_vec_to_f64(&back.x), &back.word, depth);
        float = float.max(lf.deviation(&shift_sigma_f64(base, &df)));
    }
    rep.exact_max_deviation = exact;
    rep.float_max_deviation = float;
    Ok(rep)
}

/// Integer vector helper for callers building states by hand.
pub fn int_state(x: &[i64], word: EventuallyPeriodicWord) -> SymbolState {
    SymbolState {
        x: x.iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect(),
        word,
    }
}
