//! Finite approximations of the attractor `X = { sum_j B^-j d_j }`: point clouds,
//! exact occupancy on rational sample grids, rasters, measure, membership and tiling checks.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_linalg::{int_vec_to_f64, norm2_f64, IntVector, Lattice, RatVector};
use crate::radix_system::RadixSystem;

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Upper bound on the number of sample-grid nodes held in memory.
pub const MAX_SAMPLE_NODES: usize = 400_000_000;

/// Largest dimension handled by sample grids.
pub const MAX_GRID_DIM: usize = 6;

#[derive(Debug, Error)]
pub enum AttractorError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("sample grid of {0} nodes exceeds the limit")]
    GridTooLarge(usize),
    #[error("sample grids support at most {MAX_GRID_DIM} dimensions, got {0}")]
    GridDimension(usize),
    #[error("matrix or digit entries do not fit in 64-bit integers")]
    Overflow,
    #[error("rasters of dimension {0} cannot be written as images")]
    ImageDimension(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Points `sum_{j=1..n} B^-j d_j` over all (or sampled) words of length `n`.
#[derive(Clone, Debug)]
pub struct PointCloud {
    pub depth: usize,
    pub dim: usize,
    coords: Vec<f64>,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    /// Lower and upper corners of the bounding box.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    }
}

/// Depth-`n` cloud: exhaustive when `|D|^n <= cap`, otherwise `cap` random words.
pub fn build_cloud(
    s: &RadixSystem,
    depth: usize,
    cap: usize,
    seed: u64,
) -> Result<PointCloud, AttractorError> {
    if depth == 0 {
        return Err(AttractorError::ZeroDepth);
    }
    let dim = s.dim();
    let nd = s.det_abs();
    let total = (nd as f64).powi(depth as i32);
    let inv = s.inverse_f64();
    let digits: Vec<Vec<f64>> = s.digits().iter().map(|d| int_vec_to_f64(d)).collect();
    let tau = |d: &[f64], x: &[f64], out: &mut Vec<f64>| {
        for i in 0..dim {
            let mut v = 0.0;
            for j in 0..dim {
                v += inv[(i, j)] * (x[j] + d[j]);
            }
            out.push(v);
        }
    };
    if total <= cap as f64 {
        let mut coords = vec![0.0; dim];
        for _ in 0..depth {
            coords = coords
                .par_chunks(dim)
                .flat_map_iter(|x| {
                    let mut out = Vec::with_capacity(nd * dim);
                    for d in &digits {
                        tau(d, x, &mut out);
                    }
                    out
                })
                .collect();
        }
        return Ok(PointCloud {
            depth,
            dim,
            coords,
            exhaustive: true,
            seed: None,
        });
    }
    let coords: Vec<f64> = (0..cap)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut x = vec![0.0; dim];
            for _ in 0..depth {
                let mut next = Vec::with_capacity(dim);
                tau(&digits[rng.gen_range(0..nd)], &x, &mut next);
                x = next;
            }
            x
        })
        .collect();
    Ok(PointCloud {
        depth,
        dim,
        coords,
        exhaustive: false,
        seed: Some(seed),
    })
}

/// Smallest `n` with `rho(B^-1)^n R < h / 2`.
pub fn default_depth(s: &RadixSystem, cells_per_unit: u32) -> usize {
    let rho = s.inverse_spectral_radius();
    let h = 1.0 / cells_per_unit as f64;
    let mut n = 1;
    while rho.powi(n as i32) * s.escape_radius() >= h / 2.0 && n < 10_000 {
        n += 1;
    }
    n
}

/// Axis-aligned grid of cells of side `1 / cells_per_unit` with occupancy flags.
///
/// Cell `idx` covers `[(origin + idx) h, (origin + idx + 1) h)`; axis 0 varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub origin: Vec<i64>,
    pub cells_per_unit: u32,
    pub dims: Vec<usize>,
    pub occupancy: Vec<bool>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub sample_denominator: Option<i64>,
}

/// Metadata written next to an image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterMeta {
    pub origin: Vec<f64>,
    pub h: f64,
    pub dims: Vec<usize>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub sample_denominator: Option<i64>,
    pub occupied: usize,
}

impl Raster {
    pub fn empty(origin: Vec<i64>, dims: Vec<usize>, cells_per_unit: u32) -> Self {
        let n = dims.iter().product();
        Self {
            origin,
            cells_per_unit,
            dims,
            occupancy: vec![false; n],
            depth: None,
            seed: None,
            sample_denominator: None,
        }
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells_per_unit as f64
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// Flat index of absolute cell coordinates, if inside the raster.
    pub fn index_of(&self, cell: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for i in 0..self.dim() {
            let local = cell[i] - self.origin[i];
            if local < 0 || local as usize >= self.dims[i] {
                return None;
            }
            idx += local as usize * stride;
            stride *= self.dims[i];
        }
        Some(idx)
    }

    /// Absolute cell coordinates of a flat index.
    pub fn cell_of(&self, mut idx: usize) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            out.push(self.origin[i] + (idx % self.dims[i]) as i64);
            idx /= self.dims[i];
        }
        out
    }

    pub fn is_occupied(&self, cell: &[i64]) -> bool {
        self.index_of(cell).is_some_and(|i| self.occupancy[i])
    }

    /// Cell containing a point.
    pub fn cell_containing(&self, x: &[f64]) -> Vec<i64> {
        x.iter()
            .map(|v| (v * self.cells_per_unit as f64).floor() as i64)
            .collect()
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    pub fn meta(&self) -> RasterMeta {
        RasterMeta {
            origin: self.origin.iter().map(|&o| o as f64 * self.h()).collect(),
            h: self.h(),
            dims: self.dims.clone(),
            depth: self.depth,
            seed: self.seed,
            sample_denominator: self.sample_denominator,
            occupied: self.occupied_count(),
        }
    }
}

/// Marks every cell hit by a cloud point.
pub fn rasterize_cloud(cloud: &PointCloud, cells_per_unit: u32) -> Raster {
    let n = cells_per_unit as f64;
    let (lo, hi) = cloud.bounding_box();
    let origin: Vec<i64> = lo.iter().map(|v| (v * n).floor() as i64 - 1).collect();
    let dims: Vec<usize> = hi
        .iter()
        .zip(&origin)
        .map(|(v, o)| ((v * n).floor() as i64 - o + 2) as usize)
        .collect();
    let mut r = Raster::empty(origin, dims, cells_per_unit);
    for p in cloud.points() {
        let c = r.cell_containing(p);
        if let Some(i) = r.index_of(&c) {
            r.occupancy[i] = true;
        }
    }
    r.depth = Some(cloud.depth);
    r.seed = cloud.seed;
    r
}

/// Occupied cells times `h^d`.
pub fn measure_estimate(r: &Raster) -> f64 {
    r.occupied_count() as f64 * r.h().powi(r.dim() as i32)
}

/// Attractor points on the grid `(1/q) Z^d`, decided exactly.
///
/// `y` lies in `X` iff `B y - d` lies in `X` for some digit `d`, and on the grid
/// this map reads `g -> B g - q d`, which keeps `(1/q) Z^d` inside itself. So
/// `X ∩ (1/q) Z^d` is the largest set of ball nodes each having a successor in
/// the set, obtained by peeling off nodes whose successors have all been removed.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub q: i64,
    pub half_width: i64,
    pub dim: usize,
    alive: Vec<bool>,
    successors: Vec<u8>,
}

impl SampleGrid {
    fn side(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    fn index(&self, g: &[i64]) -> Option<usize> {
        let side = self.side() as i64;
        let mut idx = 0i64;
        let mut stride = 1i64;
        for &v in g {
            let local = v + self.half_width;
            if local < 0 || local >= side {
                return None;
            }
            idx += local * stride;
            stride *= side;
        }
        Some(idx as usize)
    }

    fn coords_array(&self, mut idx: usize) -> [i64; MAX_GRID_DIM] {
        let side = self.side();
        let mut out = [0i64; MAX_GRID_DIM];
        for v in out.iter_mut().take(self.dim) {
            *v = (idx % side) as i64 - self.half_width;
            idx /= side;
        }
        out
    }

    fn coords(&self, mut idx: usize) -> Vec<i64> {
        let side = self.side();
        (0..self.dim)
            .map(|_| {
                let v = (idx % side) as i64 - self.half_width;
                idx /= side;
                v
            })
            .collect()
    }

    /// True if `g / q` lies in the attractor.
    pub fn contains(&self, g: &[i64]) -> bool {
        self.index(g).is_some_and(|i| self.alive[i])
    }

    pub fn count(&self) -> usize {
        self.alive.iter().filter(|&&b| b).count()
    }

    /// Grid points of `X` in integer coordinates.
    pub fn members(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| self.coords(i))
    }

    /// `#(X ∩ (1/q) Z^d) / q^d`.
    pub fn measure(&self) -> f64 {
        self.count() as f64 / (self.q as f64).powi(self.dim as i32)
    }

    /// Fraction of attractor samples lying in two or more images `tau_d(X)`.
    pub fn overlap_fraction(&self) -> f64 {
        let members = self.count();
        if members == 0 {
            return 0.0;
        }
        let multi = self
            .alive
            .iter()
            .zip(&self.successors)
            .filter(|(&a, &s)| a && s >= 2)
            .count();
        multi as f64 / members as f64
    }
}

fn to_i64_system(
    s: &RadixSystem,
) -> Result<(Vec<i64>, Vec<i64>, i64, Vec<Vec<i64>>), AttractorError> {
    let d = s.dim();
    let conv = |x: &BigInt| x.to_i64().ok_or(AttractorError::Overflow);
    let mut b = Vec::with_capacity(d * d);
    let mut adj = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            b.push(conv(s.base().get(i, j))?);
            adj.push(conv(s.adjugate().get(i, j))?);
        }
    }
    let det = conv(s.det())?;
    let digits = s
        .digits()
        .iter()
        .map(|v| v.iter().map(conv).collect::<Result<Vec<i64>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok((b, adj, det, digits))
}

fn mat_vec_array(m: &[i64], v: &[i64; MAX_GRID_DIM], d: usize) -> [i64; MAX_GRID_DIM] {
    let mut out = [0i64; MAX_GRID_DIM];
    for i in 0..d {
        out[i] = (0..d).map(|j| m[i * d + j] * v[j]).sum();
    }
    out
}

/// Exact membership of every point of `(1/q) Z^d` in the escape ball.
pub fn sample_grid(s: &RadixSystem, q: i64) -> Result<SampleGrid, AttractorError> {
    let d = s.dim();
    if d > MAX_GRID_DIM {
        return Err(AttractorError::GridDimension(d));
    }
    let (b, adj, det, digits) = to_i64_system(s)?;
    let r = s.escape_radius() * q as f64;
    let half_width = r.ceil() as i64;
    let side = (2 * half_width + 1) as usize;
    let n = side
        .checked_pow(d as u32)
        .filter(|&n| n <= MAX_SAMPLE_NODES)
        .ok_or(AttractorError::GridTooLarge(side.saturating_pow(d as u32)))?;
    let mut grid = SampleGrid {
        q,
        half_width,
        dim: d,
        alive: Vec::new(),
        successors: Vec::new(),
    };
    let r2 = r * r * (1.0 + 1e-12);
    let alive: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let g = grid.coords_array(i);
            g[..d].iter().map(|&v| (v * v) as f64).sum::<f64>() <= r2
        })
        .collect();
    grid.alive = alive;
    let shifts: Vec<[i64; MAX_GRID_DIM]> = digits
        .iter()
        .map(|dg| {
            let mut a = [0i64; MAX_GRID_DIM];
            for (x, v) in a.iter_mut().zip(dg) {
                *x = v * q;
            }
            a
        })
        .collect();
    let successors: Vec<u8> = (0..n)
        .into_par_iter()
        .map(|i| {
            if !grid.alive[i] {
                return 0;
            }
            let bg = mat_vec_array(&b, &grid.coords_array(i), d);
            shifts
                .iter()
                .filter(|sh| {
                    let mut z = bg;
                    for k in 0..d {
                        z[k] -= sh[k];
                    }
                    grid.contains(&z[..d])
                })
                .count() as u8
        })
        .collect();
    grid.successors = successors;
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&i| grid.alive[i] && grid.successors[i] == 0)
        .collect();
    for &i in &queue {
        grid.alive[i] = false;
    }
    while let Some(i) = queue.pop_front() {
        let z = grid.coords_array(i);
        // predecessors y with B y - q d = z, i.e. y = B^-1 (z + q d)
        for sh in &shifts {
            let mut t = z;
            for k in 0..d {
                t[k] += sh[k];
            }
            let mut y = mat_vec_array(&adj, &t, d);
            if y[..d].iter().any(|v| v % det != 0) {
                continue;
            }
            for v in y[..d].iter_mut() {
                *v /= det;
            }
            if let Some(j) = grid.index(&y[..d]) {
                if grid.alive[j] {
                    grid.successors[j] -= 1;
                    if grid.successors[j] == 0 {
                        grid.alive[j] = false;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    Ok(grid)
}

/// Sample denominator used for a raster with `cells_per_unit` cells per unit length.
///
/// Grid points with denominator `q` are periodic under `x -> Bx mod Z^d` with
/// period the order of `B` modulo `q`. When that order is small the grid meets
/// the boundary of `X` in many points and the raster overcounts, so the search
/// starts near twice the cell frequency and takes the first `q` coprime to
/// `det B` on which `B` has order at least `q / 2`.
pub fn sample_denominator(s: &RadixSystem, cells_per_unit: u32) -> i64 {
    let det = s.det().to_i64().unwrap_or(1).abs();
    let start = 2 * cells_per_unit as i64 + 1;
    let coprime = (start..).filter(|q| q.gcd(&det) == 1);
    let mut best = (0, start);
    for q in coprime.take_while(|&q| q <= 2 * start) {
        let order = order_mod(s, q, q / 2);
        if order >= q / 2 {
            return q;
        }
        if order > best.0 {
            best = (order, q);
        }
    }
    best.1
}

/// Order of `B` modulo `q`, or `limit` if it is at least that large.
fn order_mod(s: &RadixSystem, q: i64, limit: i64) -> i64 {
    let d = s.dim();
    let b: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    s.base()
                        .get(i, j)
                        .mod_floor(&BigInt::from(q))
                        .to_i64()
                        .unwrap()
                })
                .collect()
        })
        .collect();
    let mut m = b.clone();
    for t in 1..limit {
        if (0..d).all(|i| (0..d).all(|j| m[i][j] == i64::from(i == j))) {
            return t;
        }
        m = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|k| m[i][k] as i128 * b[k][j] as i128)
                            .sum::<i128>()
                            .rem_euclid(q as i128) as i64
                    })
                    .collect()
            })
            .collect();
    }
    limit
}

/// Raster whose cells are occupied when their representative grid sample lies in `X`.
pub fn rasterize_exact(s: &RadixSystem, cells_per_unit: u32) -> Result<Raster, AttractorError> {
    let q = sample_denominator(s, cells_per_unit);
    let grid = sample_grid(s, q)?;
    Ok(raster_from_grid(&grid, cells_per_unit))
}

/// Exact raster at `cells_per_unit` checked against translates by `l` over one
/// fundamental box.
pub fn tiling_check_exact(
    s: &RadixSystem,
    l: &Lattice,
    cells_per_unit: u32,
) -> Result<TilingReport, AttractorError> {
    let r = rasterize_exact(s, cells_per_unit)?;
    Ok(tiling_check(&r, l, &Window::fundamental(l, cells_per_unit)))
}

/// Grid coordinate of the sample nearest the centre of cell `i`.
///
/// Shifting a cell by `n` cells along an axis shifts its sample by exactly `q`,
/// so integer translates of the raster agree with integer translates of `X`.
pub fn representative_sample(i: i64, q: i64, cells_per_unit: u32) -> i64 {
    let n = cells_per_unit as i64;
    ((2 * i + 1) * q + n).div_euclid(2 * n)
}

/// Raster over the sample box, each cell decided by its representative sample.
pub fn raster_from_grid(grid: &SampleGrid, cells_per_unit: u32) -> Raster {
    let n = cells_per_unit as i64;
    let lo = (-grid.half_width * n).div_euclid(grid.q);
    let hi = (grid.half_width * n).div_euclid(grid.q);
    let dims = vec![(hi - lo + 1) as usize; grid.dim];
    let mut r = Raster::empty(vec![lo; grid.dim], dims, cells_per_unit);
    let occupancy: Vec<bool> = (0..r.occupancy.len())
        .into_par_iter()
        .map(|k| {
            let g: Vec<i64> = r
                .cell_of(k)
                .iter()
                .map(|&c| representative_sample(c, grid.q, cells_per_unit))
                .collect();
            grid.contains(&g)
        })
        .collect();
    r.occupancy = occupancy;
    r.sample_denominator = Some(grid.q);
    r
}

/// Region of cells, in absolute cell coordinates `lo <= c < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    /// The half-open fundamental box of a lattice, in cells.
    pub fn fundamental(l: &Lattice, cells_per_unit: u32) -> Window {
        let n = cells_per_unit as f64;
        Window {
            lo: vec![0; l.dim()],
            hi: l
                .fundamental_box()
                .iter()
                .map(|s| (s * n).round() as i64)
                .collect(),
        }
    }

    fn cells(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for i in 0..self.lo.len() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (self.lo[i]..self.hi[i]).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Multiplicity statistics of lattice translates of a raster over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub cells: usize,
    /// `histogram[m]` = number of window cells covered exactly `m` times.
    pub histogram: Vec<usize>,
}

/// Allowed distance of the mean multiplicity from 1.
pub const TILING_MEAN_TOL: f64 = 0.05;
/// Share of window cells that must be covered exactly once.
pub const TILING_UNIT_SHARE: f64 = 0.95;

impl TilingReport {
    /// Mean near 1 alone cannot certify a tiling (it equals measure over
    /// covolume), so most cells must also be covered exactly once.
    pub fn certifies_tiling(&self) -> bool {
        (self.mean - 1.0).abs() <= TILING_MEAN_TOL && self.fraction_at(1) >= TILING_UNIT_SHARE
    }

    /// Fraction of window cells with multiplicity exactly `m`.
    pub fn fraction_at(&self, m: usize) -> f64 {
        self.histogram.get(m).copied().unwrap_or(0) as f64 / self.cells.max(1) as f64
    }
}

/// Counts, for every window cell, the lattice translates `X + gamma` covering it.
pub fn tiling_check(r: &Raster, l: &Lattice, window: &Window) -> TilingReport {
    let n = r.cells_per_unit as f64;
    let h = r.h();
    // translates that can reach the window
    let mut reach = 0.0f64;
    for i in 0..r.dim() {
        let a = r.origin[i] as f64 * h;
        let b = (r.origin[i] + r.dims[i] as i64) as f64 * h;
        let wa = window.lo[i] as f64 * h;
        let wb = window.hi[i] as f64 * h;
        reach = reach.max((wb - a).abs()).max((wa - b).abs());
    }
    let shifts: Vec<Vec<i64>> = l
        .points_in_cube(reach + 1.0)
        .into_iter()
        .map(|g| g.iter().map(|v| (v * n).round() as i64).collect())
        .collect();
    let counts: Vec<usize> = window
        .cells()
        .par_iter()
        .map(|c| {
            shifts
                .iter()
                .filter(|s| {
                    let src: Vec<i64> = c.iter().zip(s.iter()).map(|(a, b)| a - b).collect();
                    r.is_occupied(&src)
                })
                .count()
        })
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0usize; max + 1];
    for &c in &counts {
        histogram[c] += 1;
    }
    TilingReport {
        min: counts.iter().copied().min().unwrap_or(0),
        max,
        mean: counts.iter().sum::<usize>() as f64 / counts.len().max(1) as f64,
        cells: counts.len(),
        histogram,
    }
}

/// Outcome of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

/// Decides `x ∈ X` by searching expansions `y -> B y - d` inside the escape ball.
///
/// Rational orbits stay on the grid of the common denominator of `x`, so the
/// search graph is finite and `x ∈ X` iff some path from `x` reaches a cycle.
/// At most `limit` states are explored.
pub fn membership(s: &RadixSystem, x: &[BigRational], limit: usize) -> Membership {
    let q = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let start: IntVector = x.iter().map(|v| v.numer() * (&q / v.denom())).collect();
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let r = s.escape_radius() * qf * (1.0 + 1e-9);
    let shifts: Vec<IntVector> = s
        .digits()
        .iter()
        .map(|d| d.iter().map(|v| v * &q).collect())
        .collect();
    let in_ball = |g: &IntVector| norm2_f64(&int_vec_to_f64(g)) <= r;
    if !in_ball(&start) {
        return Membership::Outside;
    }
    let mut index: HashMap<IntVector, usize> = HashMap::new();
    let mut nodes: Vec<IntVector> = vec![start.clone()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    index.insert(start, 0);
    let mut complete = true;
    let mut k = 0;
    while k < nodes.len() {
        if nodes.len() > limit {
            complete = false;
            break;
        }
        let bg = s.base().mul_vec(&nodes[k]);
        let mut out = Vec::new();
        for sh in &shifts {
            let z: IntVector = bg.iter().zip(sh).map(|(a, b)| a - b).collect();
            if !in_ball(&z) {
                continue;
            }
            let id = match index.get(&z) {
                Some(&id) => id,
                None => {
                    nodes.push(z.clone());
                    index.insert(z, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            out.push(id);
        }
        succ.push(out);
        k += 1;
    }
    // peel nodes without live successors; unexplored nodes count as dead
    let explored = succ.len();
    let mut alive: Vec<bool> = (0..nodes.len()).map(|i| i < explored).collect();
    let mut live_succ: Vec<usize> = succ
        .iter()
        .map(|o| o.iter().filter(|&&t| t < explored).count())
        .collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, o) in succ.iter().enumerate() {
        for &t in o {
            preds[t].push(i);
        }
    }
    let mut queue: VecDeque<usize> = (0..explored).filter(|&i| live_succ[i] == 0).collect();
    for &i in &queue {
        alive[i] = false;
    }
    while let Some(i) = queue.pop_front() {
        for &p in &preds[i] {
            if alive[p] {
                live_succ[p] -= 1;
                if live_succ[p] == 0 {
                    alive[p] = false;
                    queue.push_back(p);
                }
            }
        }
    }
    match (alive[0], complete) {
        (true, _) => Membership::Inside,
        (false, true) => Membership::Outside,
        (false, false) => Membership::Undecided,
    }
}

/// Membership of a rational point given as exact coordinates.
pub fn membership_default(s: &RadixSystem, x: &RatVector) -> Membership {
    membership(s, x, 1_000_000)
}

/// Binary greyscale image: occupied cells black, rows top to bottom.
pub fn write_pgm(r: &Raster, path: &Path) -> Result<(), AttractorError> {
    let (w, h) = match r.dim() {
        1 => (r.dims[0], 1),
        2 => (r.dims[0], r.dims[1]),
        d => return Err(AttractorError::ImageDimension(d)),
    };
    let mut f = BufWriter::new(File::create(path)?);
    write!(f, "P5\n{w} {h}\n255\n")?;
    let mut row = vec![0u8; w];
    for y in (0..h).rev() {
        for (x, px) in row.iter_mut().enumerate() {
            *px = if r.occupancy[y * w + x] { 0 } else { 255 };
        }
        f.write_all(&row)?;
    }
    f.flush()?;
    Ok(())
}

/// JSON sidecar with origin, cell size, dimensions, depth and seed.
pub fn write_sidecar(r: &Raster, path: &Path) -> Result<(), AttractorError> {
    let json = serde_json::to_string_pretty(&r.meta()).map_err(io::Error::other)?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

/// Draws a random word of length `n`.
pub fn random_word<R: Rng>(rng: &mut R, s: &RadixSystem, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..s.det_abs())).collect()
}
