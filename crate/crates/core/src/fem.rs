//! Q1 finite elements for `-Δu = f` on the unit square.
//!
//! A refinement level `L` gives an `m x m` tensor grid with `m = 2^L + 1`
//! and mesh width `h = 2^-L`. Node `(i, j)` (x index `i`, y index `j`) has
//! number `j * m + i`, so the stiffness matrix carries the nine Q1 bands.
//! Dirichlet nodes are eliminated by unit rows and zeroed columns, their
//! couplings moved to the right-hand side; the assembled matrix is
//! symmetric.

use crate::solvers::{
    mixed_defect_correct, multigrid_solve, CoarseParams, GridHierarchy, SmootherParams, SolverReport,
};
use crate::{linalg, Backend, BandLayout, BandedMatrix, DenseVector, Error, Real, Result};

pub const MIN_LEVEL: usize = 1;
pub const MAX_LEVEL: usize = 12;

/// 2-point Gauss abscissae on `[0, 1]`; both weights are 1/2.
const GAUSS: [f64; 2] = [0.5 - 0.288_675_134_594_812_9, 0.5 + 0.288_675_134_594_812_9];

/// Scalar field on the unit square.
pub type Field<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

/// Which sides of the unit square carry Dirichlet conditions. The other
/// sides get the natural homogeneous Neumann condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl Boundary {
    pub fn dirichlet() -> Self {
        Self {
            left: true,
            right: true,
            bottom: true,
            top: true,
        }
    }

    /// Dirichlet on the left side only, Neumann elsewhere.
    pub fn mixed() -> Self {
        Self {
            left: true,
            right: false,
            bottom: false,
            top: false,
        }
    }

    pub fn is_dirichlet(&self, i: usize, j: usize, m: usize) -> bool {
        (self.left && i == 0) || (self.right && i == m - 1) || (self.bottom && j == 0) || (self.top && j == m - 1)
    }
}

impl Default for Boundary {
    fn default() -> Self {
        Self::dirichlet()
    }
}

pub fn grid_side(level: usize) -> usize {
    (1 << level) + 1
}

fn check_level(level: usize) -> Result<usize> {
    if !(MIN_LEVEL..=MAX_LEVEL).contains(&level) {
        return Err(Error::LevelOutOfRange {
            level,
            min: MIN_LEVEL,
            max: MAX_LEVEL,
        });
    }
    Ok(grid_side(level))
}

/// Bilinear shape functions on the reference square, local node order
/// (0,0), (1,0), (0,1), (1,1).
fn shape(s: f64, t: f64) -> [f64; 4] {
    [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t]
}

/// Reference-square gradients `(d/ds, d/dt)`.
fn shape_grad(s: f64, t: f64) -> [(f64, f64); 4] {
    [(-(1.0 - t), -(1.0 - s)), (1.0 - t, -s), (-t, 1.0 - s), (t, s)]
}

/// Element stiffness matrix. For square elements the Jacobian factors
/// cancel, so it does not depend on `h`.
pub fn element_stiffness() -> [[f64; 4]; 4] {
    let mut k = [[0.0; 4]; 4];
    for &s in &GAUSS {
        for &t in &GAUSS {
            let g = shape_grad(s, t);
            for a in 0..4 {
                for b in 0..4 {
                    k[a][b] += 0.25 * (g[a].0 * g[b].0 + g[a].1 * g[b].1);
                }
            }
        }
    }
    k
}

fn element_nodes(ex: usize, ey: usize, m: usize) -> [usize; 4] {
    let base = ey * m + ex;
    [base, base + 1, base + m, base + m + 1]
}

/// Stiffness matrix before boundary conditions.
fn assemble_unfiltered(level: usize) -> Result<BandedMatrix<f64>> {
    let m = check_level(level)?;
    let n = m * m;
    let mut bands: Vec<Vec<f64>> = vec![vec![0.0; n]; 9];
    let offsets = crate::containers::q1_offsets(m);
    let slot = |k: isize| offsets.iter().position(|&o| o == k).unwrap_or_else(|| unreachable!());
    let ke = element_stiffness();
    for ey in 0..m - 1 {
        for ex in 0..m - 1 {
            let nodes = element_nodes(ex, ey, m);
            for a in 0..4 {
                for b in 0..4 {
                    let k = nodes[b] as isize - nodes[a] as isize;
                    bands[slot(k)][nodes[a]] += ke[a][b];
                }
            }
        }
    }
    let mut a = BandedMatrix::new(n, BandLayout::Q1Fixed)?;
    for (k, band) in offsets.into_iter().zip(bands) {
        a.insert_band(k, band)?;
    }
    Ok(a)
}

fn dirichlet_mask(m: usize, boundary: &Boundary) -> Vec<bool> {
    (0..m * m).map(|p| boundary.is_dirichlet(p % m, p / m, m)).collect()
}

/// Q1 Laplacian with pure Dirichlet boundaries.
pub fn assemble_q1_stiffness(level: usize) -> Result<BandedMatrix<f64>> {
    assemble_q1_stiffness_with(level, &Boundary::dirichlet())
}

pub fn assemble_q1_stiffness_with(level: usize, boundary: &Boundary) -> Result<BandedMatrix<f64>> {
    let full = assemble_unfiltered(level)?;
    let m = grid_side(level);
    let n = m * m;
    let mask = dirichlet_mask(m, boundary);
    let mut a = BandedMatrix::new(n, BandLayout::Q1Fixed)?;
    for (k, band) in full.bands() {
        let mut filtered = band.to_vec();
        for i in crate::containers::banded_rows(n, k) {
            let j = (i as isize + k) as usize;
            if mask[i] || mask[j] {
                filtered[i] = if k == 0 { 1.0 } else { 0.0 };
            }
        }
        a.insert_band(k, filtered)?;
    }
    Ok(a)
}

/// Load vector for `f` by 2x2 Gauss quadrature per element, with Dirichlet
/// values `bc` on boundary nodes and their couplings moved to the free rows.
pub fn assemble_rhs(level: usize, f: Field<'_>, bc: Field<'_>) -> Result<DenseVector<f64>> {
    assemble_rhs_with(level, f, bc, &Boundary::dirichlet())
}

pub fn assemble_rhs_with(level: usize, f: Field<'_>, bc: Field<'_>, boundary: &Boundary) -> Result<DenseVector<f64>> {
    let m = check_level(level)?;
    let n = m * m;
    let h = 1.0 / (m - 1) as f64;
    let mut rhs = vec![0.0; n];
    let weight = 0.25 * h * h;
    for ey in 0..m - 1 {
        for ex in 0..m - 1 {
            let nodes = element_nodes(ex, ey, m);
            for &s in &GAUSS {
                for &t in &GAUSS {
                    let fv = f((ex as f64 + s) * h, (ey as f64 + t) * h) * weight;
                    for (node, phi) in nodes.iter().zip(shape(s, t)) {
                        rhs[*node] += fv * phi;
                    }
                }
            }
        }
    }
    let mask = dirichlet_mask(m, boundary);
    let g: Vec<f64> = (0..n)
        .map(|p| if mask[p] { bc((p % m) as f64 * h, (p / m) as f64 * h) } else { 0.0 })
        .collect();
    let full = assemble_unfiltered(level)?;
    for (k, band) in full.bands() {
        for i in crate::containers::banded_rows(n, k) {
            let j = (i as isize + k) as usize;
            if !mask[i] && mask[j] {
                rhs[i] -= band[i] * g[j];
            }
        }
    }
    for p in 0..n {
        if mask[p] {
            rhs[p] = g[p];
        }
    }
    DenseVector::from_vec(rhs)
}

/// Integral L2 norm of `u_h - u`, with `u_h` the bilinear interpolant of
/// the nodal values, by 2x2 Gauss quadrature per element.
pub fn l2_error<T: Real>(u_h: &DenseVector<T>, u_exact: Field<'_>, level: usize) -> Result<f64> {
    let m = check_level(level)?;
    u_h.check_len(m * m)?;
    let h = 1.0 / (m - 1) as f64;
    let weight = 0.25 * h * h;
    let mut sum = 0.0;
    for ey in 0..m - 1 {
        for ex in 0..m - 1 {
            let nodes = element_nodes(ex, ey, m);
            for &s in &GAUSS {
                for &t in &GAUSS {
                    let uh: f64 = nodes.iter().zip(shape(s, t)).map(|(p, phi)| u_h[*p].as_f64() * phi).sum();
                    let e = uh - u_exact((ex as f64 + s) * h, (ey as f64 + t) * h);
                    sum += weight * e * e;
                }
            }
        }
    }
    Ok(sum.sqrt())
}

/// Stiffness matrices for levels `1..=max_level` in precision `T`, rounded
/// from double-precision assembly.
pub fn build_hierarchy<T: Real>(
    max_level: usize,
    boundary: &Boundary,
    smoother: SmootherParams,
    coarse: CoarseParams,
) -> Result<GridHierarchy<T>> {
    check_level(max_level)?;
    let levels = (MIN_LEVEL..=max_level)
        .map(|l| assemble_q1_stiffness_with(l, boundary).map(|a| a.convert::<T>()))
        .collect::<Result<Vec<_>>>()?;
    GridHierarchy::new(levels, smoother, coarse)
}

/// Poisson problem with a known polynomial solution.
pub struct PoissonProblem {
    pub level: usize,
    pub m: usize,
    pub h: f64,
    pub f: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub u_exact: Option<Box<dyn Fn(f64, f64) -> f64 + Sync>>,
}

impl PoissonProblem {
    /// `u = x(1-x)(1+x) * y(1-y)(1+2y)`, zero on the whole boundary.
    pub fn polynomial(level: usize) -> Self {
        let m = grid_side(level);
        let xp = |x: f64| x * (1.0 - x) * (1.0 + x);
        let xpp = |x: f64| -6.0 * x;
        let yp = |y: f64| y * (1.0 - y) * (1.0 + 2.0 * y);
        let ypp = |y: f64| 2.0 - 12.0 * y;
        Self {
            level,
            m,
            h: 1.0 / (m - 1) as f64,
            f: Box::new(move |x, y| -(xpp(x) * yp(y) + xp(x) * ypp(y))),
            u_exact: Some(Box::new(move |x, y| xp(x) * yp(y))),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.m * self.m
    }

    /// Load vector with Dirichlet data taken from `u_exact` (zero if absent).
    pub fn rhs(&self) -> Result<DenseVector<f64>> {
        match &self.u_exact {
            Some(u) => assemble_rhs(self.level, &*self.f, &**u),
            None => assemble_rhs(self.level, &*self.f, &|_, _| 0.0),
        }
    }

    pub fn error(&self, u_h: &DenseVector<f64>) -> Result<Option<f64>> {
        self.u_exact.as_ref().map(|u| l2_error(u_h, &**u, self.level)).transpose()
    }
}

/// Arithmetic used to solve a Poisson problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionMode {
    Single,
    Double,
    /// Double-precision defect correction around single-precision V-cycles.
    Mixed,
}

impl std::str::FromStr for PrecisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Self::Single),
            "double" => Ok(Self::Double),
            "mixed" => Ok(Self::Mixed),
            _ => Err(Error::InvalidParameter(format!("unknown precision mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Single => "single",
            Self::Double => "double",
            Self::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_cycles: usize,
    pub smoother: SmootherParams,
    pub coarse: CoarseParams,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_cycles: 100,
            smoother: SmootherParams::default(),
            coarse: CoarseParams::default(),
        }
    }
}

/// Assembles and solves `problem` in the requested arithmetic. The
/// solution is returned in double precision.
pub fn solve(
    be: &Backend,
    problem: &PoissonProblem,
    mode: PrecisionMode,
    opts: &SolveOptions,
) -> Result<(DenseVector<f64>, SolverReport)> {
    let b = problem.rhs()?;
    let n = b.len();
    let hd = build_hierarchy::<f64>(problem.level, &Boundary::dirichlet(), opts.smoother, opts.coarse)?;
    match mode {
        PrecisionMode::Double => {
            let mut x = DenseVector::zeros(n)?;
            let rep = multigrid_solve(be, &hd, &mut x, &b, opts.tol, opts.max_cycles)?;
            Ok((x, rep))
        }
        PrecisionMode::Single => {
            let hs = hd.convert::<f32>();
            let bs: DenseVector<f32> = linalg::convert_precision(be, &b);
            let mut xs = DenseVector::<f32>::zeros(n)?;
            let rep = multigrid_solve(be, &hs, &mut xs, &bs, opts.tol, opts.max_cycles)?;
            Ok((linalg::convert_precision(be, &xs), rep))
        }
        PrecisionMode::Mixed => {
            let hs = hd.convert::<f32>();
            let mut x = DenseVector::zeros(n)?;
            let rep = mixed_defect_correct(be, &hd, &hs, &mut x, &b, opts.tol, opts.max_cycles)?;
            Ok((x, rep))
        }
    }
}

/// One line of an accuracy table.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub level: usize,
    pub unknowns: usize,
    pub error: f64,
    /// `error(level - 1) / error(level)`; `None` on the first row.
    pub reduction: Option<f64>,
    pub report: SolverReport,
}

/// Solves the polynomial test problem on each level and records the L2
/// error and its reduction per refinement.
pub fn accuracy_study(
    be: &Backend,
    levels: impl IntoIterator<Item = usize>,
    mode: PrecisionMode,
    opts: &SolveOptions,
) -> Result<Vec<AccuracyRow>> {
    let mut rows: Vec<AccuracyRow> = Vec::new();
    for level in levels {
        let problem = PoissonProblem::polynomial(level);
        let (u, report) = solve(be, &problem, mode, opts)?;
        let error = problem.error(&u)?.unwrap_or(f64::NAN);
        let reduction = rows.last().map(|prev| prev.error / error);
        rows.push(AccuracyRow {
            level,
            unknowns: problem.unknowns(),
            error,
            reduction,
            report,
        });
    }
    Ok(rows)
}
