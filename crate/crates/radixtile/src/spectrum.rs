//! Hadamard triples, modulus-one cycles of the dual system and the spectrum
//! and tiling lattices they generate.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_linalg::{
    echelon_columns, int_sub, lattice_dual, lattice_join, norm2_f64, rat_add, rat_to_f64,
    rat_vec_to_f64, rational_eigenvalues, to_rat, IntMatrix, IntVector, Lattice, LinalgError,
    RatVector,
};
use crate::radix_system::escape_radius_bound;

/// Unitarity tolerance.
pub const HADAMARD_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("need |D| = |L| = |det A| = {det}, got |D| = {d}, |L| = {l}")]
    CountMismatch { det: usize, d: usize, l: usize },
    #[error("vector dimension does not match the matrix")]
    DimensionMismatch,
    #[error("digit set needs at least two digits")]
    TooFewDigits,
    #[error("not a Hadamard triple (defect {0:.3e})")]
    NotHadamard(f64),
    #[error("digit differences span rank {rank} < {dim}; criterion set is {{x : v.x in Z for v in {constraints}}}")]
    DegenerateDigitSpan {
        rank: usize,
        dim: usize,
        constraints: String,
    },
    #[error("matrix has a rational eigenvalue or invariant rational subspace")]
    InvariantSubspacePresent,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardTriple {
    pub a: IntMatrix,
    pub d: Vec<IntVector>,
    pub l: Vec<IntVector>,
}

impl HadamardTriple {
    pub fn new(a: IntMatrix, d: Vec<IntVector>, l: Vec<IntVector>) -> Result<Self, SpectrumError> {
        let det = a.det().magnitude().clone();
        let n = det.to_string().parse::<usize>().unwrap_or(usize::MAX);
        if d.len() != n || l.len() != n {
            return Err(SpectrumError::CountMismatch {
                det: n,
                d: d.len(),
                l: l.len(),
            });
        }
        if d.iter().chain(&l).any(|v| v.len() != a.dim()) {
            return Err(SpectrumError::DimensionMismatch);
        }
        Ok(Self { a, d, l })
    }
}

#[derive(Clone, Debug)]
pub struct HadamardReport {
    pub unitary: bool,
    /// `max |H*H - I|`.
    pub defect: f64,
    /// Entrywise distance to the order-`N` Fourier matrix after matching rows
    /// and columns, if such a matching exists.
    pub fourier_distance: Option<f64>,
    /// Phases in `[0, 1)`: `H[d][l] = exp(2 pi i phase) / sqrt(N)`.
    pub phases: Vec<Vec<BigRational>>,
}

impl HadamardReport {
    pub fn matrix(&self) -> Vec<Vec<Complex<f64>>> {
        let s = 1.0 / (self.phases.len() as f64).sqrt();
        self.phases
            .iter()
            .map(|row| row.iter().map(|p| phase_entry(p) * s).collect())
            .collect()
    }
}

fn phase_entry(p: &BigRational) -> Complex<f64> {
    let t = 2.0 * PI * rat_to_f64(p);
    Complex::new(t.cos(), t.sin())
}

fn frac(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// Builds the matrix `exp(2 pi i ((A^T)^-1 d) . l) / sqrt(N)` and measures its
/// distance from unitarity.
pub fn check_hadamard(
    a: &IntMatrix,
    d: &[IntVector],
    l: &[IntVector],
) -> Result<HadamardReport, SpectrumError> {
    let t = HadamardTriple::new(a.clone(), d.to_vec(), l.to_vec())?;
    let at = t.a.transpose();
    let phases: Vec<Vec<BigRational>> =
        t.d.iter()
            .map(|dv| {
                let u = at.solve_rat(&to_rat(dv))?;
                Ok(t.l
                    .iter()
                    .map(|lv| {
                        let dot = u
                            .iter()
                            .zip(lv)
                            .fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
                        frac(dot)
                    })
                    .collect())
            })
            .collect::<Result<_, LinalgError>>()?;
    let n = phases.len();
    let h: Vec<Vec<Complex<f64>>> = phases
        .iter()
        .map(|row| row.iter().map(phase_entry).collect())
        .collect();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex::new(0.0, 0.0);
            for r in h.iter() {
                s += r[i].conj() * r[j];
            }
            s /= n as f64;
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((s - target).norm());
        }
    }
    let fourier_distance = fourier_match_distance(&phases);
    Ok(HadamardReport {
        unitary: defect < HADAMARD_TOL,
        defect,
        fourier_distance,
        phases,
    })
}

/// Matches rows and columns of a phase matrix against `jk/N mod 1` and returns
/// the entrywise distance between the matched matrices.
pub fn fourier_match_distance(phases: &[Vec<BigRational>]) -> Option<f64> {
    let n = phases.len();
    if n == 0 || phases.iter().any(|r| r.len() != n) {
        return None;
    }
    let nn = BigInt::from(n);
    let step = |x: &BigRational| -> Option<usize> {
        let y = x * BigRational::from_integer(nn.clone());
        y.is_integer().then(|| {
            y.to_integer()
                .mod_floor(&nn)
                .to_string()
                .parse()
                .unwrap_or(0)
        })
    };
    let e: Vec<Vec<usize>> = phases
        .iter()
        .map(|r| r.iter().map(step).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let s = 1.0 / (n as f64).sqrt();
    for r1 in 0..n {
        for c1 in 0..n {
            // row j is the one whose entry in column c1 is j; likewise for columns
            let mut rows = vec![usize::MAX; n];
            let mut cols = vec![usize::MAX; n];
            let mut ok = true;
            for (r, er) in e.iter().enumerate() {
                let j = er[c1];
                ok &= rows[j] == usize::MAX;
                rows[j] = r;
            }
            for (c, &k) in e[r1].iter().enumerate() {
                ok &= cols[k] == usize::MAX;
                cols[k] = c;
            }
            if !ok {
                continue;
            }
            if (0..n).all(|j| (0..n).all(|k| e[rows[j]][cols[k]] == (j * k) % n)) {
                let mut dist = 0.0f64;
                for j in 0..n {
                    for k in 0..n {
                        let want =
                            Complex::new(0.0, 2.0 * PI * ((j * k) % n) as f64 / n as f64).exp() * s;
                        let got = phase_entry(&phases[rows[j]][cols[k]]) * s;
                        dist = dist.max((want - got).norm());
                    }
                }
                return Some(dist);
            }
        }
    }
    None
}

fn differences(d: &[IntVector]) -> Vec<IntVector> {
    d.iter().skip(1).map(|v| int_sub(v, &d[0])).collect()
}

fn render_constraints(basis: &[IntVector]) -> String {
    let parts: Vec<String> = basis
        .iter()
        .map(|v| {
            let xs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", xs.join(","))
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// The set where `|m_D| = 1`, i.e. the dual of the lattice spanned by `D - D`.
pub fn m_d_modulus_one_lattice(d: &[IntVector]) -> Result<Lattice, SpectrumError> {
    if d.len() < 2 {
        return Err(SpectrumError::TooFewDigits);
    }
    let dim = d[0].len();
    let diffs = differences(d);
    let (basis, _) = echelon_columns(&diffs, dim)?;
    if basis.len() < dim {
        return Err(SpectrumError::DegenerateDigitSpan {
            rank: basis.len(),
            dim,
            constraints: render_constraints(&basis),
        });
    }
    let span = Lattice::from_generators(&basis.iter().map(|v| to_rat(v)).collect::<Vec<_>>(), dim)?;
    Ok(lattice_dual(&span))
}

/// Points `x` with `A^n x` in the modulus-one set for every `n >= 0`.
///
/// This is the dual of the smallest `A^T`-invariant lattice containing
/// `D - D`. Every point of an extreme cycle lies here, because the cycle is
/// carried into itself by `x -> Ax - l` and the modulus-one set is invariant
/// under integer translations.
pub fn orbit_criterion_lattice(a: &IntMatrix, d: &[IntVector]) -> Result<Lattice, SpectrumError> {
    if d.len() < 2 {
        return Err(SpectrumError::TooFewDigits);
    }
    let dim = a.dim();
    let at = a.transpose();
    let (mut basis, _) = echelon_columns(&differences(d), dim)?;
    loop {
        let mut gens = basis.clone();
        gens.extend(basis.iter().map(|v| at.mul_vec(v)));
        let (next, _) = echelon_columns(&gens, dim)?;
        if next.len() == dim {
            basis = next;
            break;
        }
        if next.len() == basis.len() {
            return Err(SpectrumError::InvariantSubspacePresent);
        }
        basis = next;
    }
    let mut lat =
        Lattice::from_generators(&basis.iter().map(|v| to_rat(v)).collect::<Vec<_>>(), dim)?;
    loop {
        let next = lattice_join(&lat, &lat.image(&at)?);
        if next == lat {
            break;
        }
        lat = next;
    }
    Ok(lattice_dual(&lat))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeCycle {
    pub points: Vec<RatVector>,
    pub labels: Vec<usize>,
}

impl ExtremeCycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }
}

/// `sigma_l(x) = A^-1 (x + l)`.
pub fn sigma(a: &IntMatrix, l: &[BigInt], x: &[BigRational]) -> Result<RatVector, SpectrumError> {
    Ok(a.solve_rat(&rat_add(x, &to_rat(l)))?)
}

/// All cycles of the dual system whose points satisfy the modulus-one criterion.
pub fn extreme_cycles(
    a: &IntMatrix,
    d: &[IntVector],
    l: &[IntVector],
) -> Result<Vec<ExtremeCycle>, SpectrumError> {
    let report = check_hadamard(a, d, l)?;
    if !report.unitary {
        return Err(SpectrumError::NotHadamard(report.defect));
    }
    // a rational eigenvalue spans a proper rational invariant line once d >= 2
    if a.dim() > 1 && !rational_eigenvalues(a).is_empty() {
        return Err(SpectrumError::InvariantSubspacePresent);
    }
    let crit = orbit_criterion_lattice(a, d)?;
    let inv = a.to_f64().try_inverse().ok_or(LinalgError::Singular)?;
    let max_l = l
        .iter()
        .map(|v| norm2_f64(&crate::exact_linalg::int_vec_to_f64(v)))
        .fold(0.0, f64::max);
    let (radius, _) = escape_radius_bound(&inv, max_l);
    let candidates: Vec<RatVector> = crit
        .points_in_cube_exact(radius)
        .into_iter()
        .filter(|p| norm2_f64(&rat_vec_to_f64(p)) <= radius)
        .collect();
    let index: HashMap<RatVector, usize> = candidates
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let adj = a.adjugate();
    let det = BigRational::from_integer(a.det());
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); candidates.len()];
    for (i, x) in candidates.iter().enumerate() {
        for (li, lv) in l.iter().enumerate() {
            let y: RatVector = adj
                .mul_rat_vec(&rat_add(x, &to_rat(lv)))
                .into_iter()
                .map(|v| v / &det)
                .collect();
            if let Some(&j) = index.get(&y) {
                edges[i].push((li, j));
            }
        }
    }
    let mut cycles = Vec::new();
    for (start, label_path, node_path) in elementary_cycles(&edges) {
        debug_assert_eq!(node_path[0], start);
        cycles.push(ExtremeCycle {
            points: node_path.iter().map(|&i| candidates[i].clone()).collect(),
            labels: label_path,
        });
    }
    cycles.sort_by(|x, y| {
        (x.period(), rat_vec_to_f64(&x.points[0]))
            .partial_cmp(&(y.period(), rat_vec_to_f64(&y.points[0])))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(cycles)
}

/// Elementary circuits of a small labelled graph, each reported once starting
/// at its smallest node.
fn elementary_cycles(edges: &[Vec<(usize, usize)>]) -> Vec<(usize, Vec<usize>, Vec<usize>)> {
    let n = edges.len();
    // drop nodes that cannot lie on a cycle
    let mut alive = vec![true; n];
    loop {
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for (i, es) in edges.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for &(_, j) in es {
                if alive[j] {
                    outdeg[i] += 1;
                    indeg[j] += 1;
                }
            }
        }
        let mut changed = false;
        for i in 0..n {
            if alive[i] && (indeg[i] == 0 || outdeg[i] == 0) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for s in (0..n).filter(|&s| alive[s]) {
        let mut nodes = vec![s];
        let mut labels = Vec::new();
        on_path[s] = true;
        walk(
            edges,
            &alive,
            s,
            s,
            &mut nodes,
            &mut labels,
            &mut on_path,
            &mut out,
        );
        on_path[s] = false;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    edges: &[Vec<(usize, usize)>],
    alive: &[bool],
    start: usize,
    at: usize,
    nodes: &mut Vec<usize>,
    labels: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<(usize, Vec<usize>, Vec<usize>)>,
) {
    for &(label, next) in &edges[at] {
        if !alive[next] || next < start {
            continue;
        }
        if next == start {
            let mut ls = labels.clone();
            ls.push(label);
            out.push((start, ls, nodes.clone()));
        } else if !on_path[next] {
            on_path[next] = true;
            nodes.push(next);
            labels.push(label);
            walk(edges, alive, start, next, nodes, labels, on_path, out);
            labels.pop();
            nodes.pop();
            on_path[next] = false;
        }
    }
}

/// Generators in echelon form over a common denominator; any rank.
fn rational_echelon(
    gens: &[RatVector],
    dim: usize,
) -> Result<(BigInt, Vec<IntVector>), LinalgError> {
    let q = gens
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<IntVector> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.numer() * (&q / x.denom())).collect())
        .collect();
    Ok((q, echelon_columns(&ints, dim)?.0))
}

/// Smallest lattice containing every `-c` and `L` that is invariant under `x -> Ax`.
pub fn spectrum_lattice(
    a: &IntMatrix,
    l: &[IntVector],
    cycles: &[ExtremeCycle],
) -> Result<Lattice, SpectrumError> {
    let dim = a.dim();
    let mut gens: Vec<RatVector> = cycles
        .iter()
        .flat_map(|c| {
            c.points
                .iter()
                .map(|p| p.iter().map(|x| -x).collect::<RatVector>())
        })
        .chain(l.iter().map(|v| to_rat(v)))
        .collect();
    // grow the span until it has full rank
    let mut rank = 0;
    loop {
        let (q, basis) = rational_echelon(&gens, dim)?;
        let qr = BigRational::from_integer(q);
        gens = basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| BigRational::from_integer(x.clone()) / &qr)
                    .collect()
            })
            .collect();
        if basis.len() == dim {
            break;
        }
        if basis.len() == rank && rank > 0 {
            return Err(SpectrumError::InvariantSubspacePresent);
        }
        rank = basis.len();
        let images: Vec<RatVector> = gens.iter().map(|g| a.mul_rat_vec(g)).collect();
        gens.extend(images);
        if rank == 0 {
            return Err(SpectrumError::InvariantSubspacePresent);
        }
    }
    let mut lat = Lattice::from_generators(&gens, dim)?;
    loop {
        let next = lattice_join(&lat, &lat.image(a)?);
        if next == lat {
            return Ok(lat);
        }
        lat = next;
    }
}

/// Checks `A Lambda + L` inside `Lambda` and `-C` inside `Lambda`.
pub fn is_spectrum_closed(
    a: &IntMatrix,
    l: &[IntVector],
    cycles: &[ExtremeCycle],
    lat: &Lattice,
) -> bool {
    let invariant = lat
        .generators()
        .iter()
        .all(|g| lat.contains(&a.mul_rat_vec(g)));
    let digits = l.iter().all(|v| lat.contains(&to_rat(v)));
    let cyc = cycles.iter().all(|c| {
        c.points
            .iter()
            .all(|p| lat.contains(&p.iter().map(|x| -x).collect::<Vec<_>>()))
    });
    invariant && digits && cyc
}

/// Spectrum lattice, its dual and the cycles that produced them.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub hadamard: HadamardReport,
    pub cycles: Vec<ExtremeCycle>,
    pub spectrum: Lattice,
    pub tiling: Lattice,
}

pub fn analyze(
    a: &IntMatrix,
    d: &[IntVector],
    l: &[IntVector],
) -> Result<SpectrumReport, SpectrumError> {
    let hadamard = check_hadamard(a, d, l)?;
    let cycles = extreme_cycles(a, d, l)?;
    let spectrum = spectrum_lattice(a, l, &cycles)?;
    let tiling = lattice_dual(&spectrum);
    Ok(SpectrumReport {
        hadamard,
        cycles,
        spectrum,
        tiling,
    })
}

/// Dual of the spectrum lattice: translations by it make the attractor of
/// `(A^T, D)` tile.
pub fn tiling_lattice(
    a: &IntMatrix,
    d: &[IntVector],
    l: &[IntVector],
) -> Result<Lattice, SpectrumError> {
    Ok(analyze(a, d, l)?.tiling)
}

/// Whether `x` lies in the modulus-one set: `(d - d0) . x` integral for all `d`.
pub fn is_modulus_one(d: &[IntVector], x: &[BigRational]) -> bool {
    differences(d).iter().all(|v| {
        v.iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, b)| acc + b * a)
            .is_integer()
    })
}

/// `|m_D(x)|` in floating point, for cross-checks only.
pub fn m_d_abs(d: &[IntVector], x: &[f64]) -> f64 {
    let mut s = Complex::new(0.0, 0.0);
    for v in d {
        let t: f64 = v
            .iter()
            .zip(x)
            .map(|(a, b)| a.to_string().parse::<f64>().unwrap_or(f64::NAN) * b)
            .sum();
        s += Complex::new(0.0, 2.0 * PI * t).exp();
    }
    s.norm() / d.len() as f64
}
