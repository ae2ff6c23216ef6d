//! Dirichlet and Neumann eigenvalues of `−Δ` on star-shaped domains by the
//! method of particular solutions.
//!
//! For a trial wavenumber `k` the Fourier–Bessel functions
//! `J_m(k r̃) {cos, sin}(m φ̃)` about the anchor solve `−Δu = k²u` exactly.
//! They are sampled at boundary collocation points (value or normal
//! derivative) and at interior points; after an orthonormal column basis
//! `Q = [Q_B; Q_I]` is formed, `σ_min(Q_B)` vanishes exactly when some
//! combination has zero boundary data without vanishing inside. Eigenvalues
//! are the local minima of that function below a threshold.

use crate::bessel::{bessel_j_sequence, disk_spectrum};
use crate::curve::{BoundaryCurve, TraceData};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Largest number of eigenvalues one call may request.
pub const MAX_COUNT: usize = 20;
/// Relative SVD truncation of the scaled basis matrix.
const RANK_TOL: f64 = 1e-13;
/// Relative width at which golden-section refinement stops.
const REFINE_WIDTH: f64 = 1e-10;
/// Eigenvalues closer than this (relative) are one cluster.
const CLUSTER_TOL: f64 = 1e-6;
/// Second singular value below which a minimum is probed at finer scale.
const PROBE_SIGMA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn is_neumann(self) -> bool {
        self == BoundaryCondition::Neumann
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Highest Fourier–Bessel order `M`; `2M + 1` basis functions.
    pub angular_order: usize,
    /// Boundary collocation points; `0` picks `3(2M + 1)`.
    pub n_collocation: usize,
    /// Interior regularization points; `0` picks `2M + 1`.
    pub n_interior: usize,
    /// Lower end of the λ search interval.
    pub search_min: f64,
    /// Upper end of the λ search interval; `None` picks `1.2×` the
    /// `count`-th eigenvalue of the disk of equal area.
    pub search_max: Option<f64>,
    /// Acceptance threshold on `σ_min` at a refined minimum.
    pub sv_threshold: f64,
    /// Sweep step in `k`, in units of `1 / R_eff` with `π R_eff² = area`.
    pub sweep_step: f64,
    /// Accepted boundary residual of a normalized eigenfunction.
    pub residual_tol: f64,
    /// Grid points used for the interior L² normalization.
    pub n_cloud: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            angular_order: 30,
            n_collocation: 0,
            n_interior: 0,
            search_min: 1e-6,
            search_max: None,
            sv_threshold: 1e-6,
            sweep_step: 0.01,
            residual_tol: 1e-6,
            n_cloud: 4000,
        }
    }
}

impl SolverConfig {
    fn n_basis(&self) -> usize {
        2 * self.angular_order + 1
    }

    fn collocation(&self) -> usize {
        if self.n_collocation == 0 {
            3 * self.n_basis()
        } else {
            self.n_collocation
        }
    }

    fn interior(&self) -> usize {
        if self.n_interior == 0 {
            self.n_basis()
        } else {
            self.n_interior
        }
    }

    fn validate(&self) -> Result<()> {
        if self.angular_order == 0 || self.angular_order > 45 {
            return Err(Error::OutOfRange(format!(
                "angular_order {} not in 1..=45",
                self.angular_order
            )));
        }
        if self.collocation() < self.n_basis() {
            return Err(Error::OutOfRange(format!(
                "n_collocation {} below basis size {}",
                self.collocation(),
                self.n_basis()
            )));
        }
        let positive = [self.sv_threshold, self.sweep_step, self.residual_tol];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || self.search_min < 0.0 {
            return Err(Error::OutOfRange(
                "solver tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One eigenfunction: a real Fourier–Bessel expansion about the anchor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Eigenmode {
    pub value: f64,
    pub wavenumber: f64,
    /// `[a_0, a_1, b_1, …, a_M, b_M]` for `a_m cos(mφ̃) + b_m sin(mφ̃)` times `J_m(k r̃)`.
    pub coefficients: Vec<f64>,
    /// Sup-norm of the violated trace after normalization.
    pub residual: f64,
    pub certified: bool,
    /// `σ_min` at the refined minimum.
    pub singular_value: f64,
    pub cluster: usize,
}

/// Eigenvalues that coincide to within the clustering tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    pub diameter: f64,
    /// Positions of the members in the eigenvalue list.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenResult {
    pub boundary_condition: BoundaryCondition,
    pub anchor: [f64; 2],
    pub angular_order: usize,
    pub search_interval: [f64; 2],
    pub eigenvalues: Vec<f64>,
    pub modes: Vec<Eigenmode>,
    pub clusters: Vec<Cluster>,
    pub warnings: Vec<String>,
    pub sweep_evaluations: usize,
    #[serde(skip)]
    curve: BoundaryCurve,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.residual).collect()
    }

    pub fn cluster_of(&self, index: usize) -> Option<&Cluster> {
        self.modes.get(index).map(|m| &self.clusters[m.cluster])
    }

    /// True when positions `index` and `index + 1` share a cluster, so that
    /// conclusions depending on their order are ambiguous.
    pub fn split_inside_cluster(&self, index: usize) -> bool {
        match (self.modes.get(index), self.modes.get(index + 1)) {
            (Some(a), Some(b)) => a.cluster == b.cluster,
            _ => false,
        }
    }

    pub fn all_certified(&self) -> bool {
        self.modes.iter().all(|m| m.certified)
    }

    /// CSV rows `index,value,multiplicity,residual` (1-based index).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value,multiplicity,residual\n");
        for (i, m) in self.modes.iter().enumerate() {
            let mult = self.clusters[m.cluster].multiplicity;
            let _ = writeln!(
                out,
                "{},{:.12e},{},{:.3e}",
                i + 1,
                m.value,
                mult,
                m.residual
            );
        }
        out
    }

    /// The boundary the spectrum was computed on.
    pub fn curve(&self) -> &BoundaryCurve {
        &self.curve
    }

    pub(crate) fn anchor(&self) -> Complex64 {
        Complex64::new(self.anchor[0], self.anchor[1])
    }

    pub(crate) fn mode(&self, index: usize) -> Result<&Eigenmode> {
        self.modes.get(index).ok_or_else(|| {
            Error::OutOfRange(format!(
                "eigenfunction index {index} of {}",
                self.modes.len()
            ))
        })
    }

    fn check_inside(&self, p: Complex64) -> Result<()> {
        let ds = self.curve.ds();
        let kmax = self
            .curve
            .kappa()
            .iter()
            .fold(0.0f64, |a, k| a.max(k.abs()));
        let tol = 0.25 * ds * ds * kmax + 1e-12 * self.curve.length();
        if self.curve.contains(p, tol) {
            Ok(())
        } else {
            Err(Error::ExteriorPoint { x: p.re, y: p.im })
        }
    }

    /// Values of eigenfunction `index` at points of the closed domain.
    pub fn evaluate(&self, index: usize, points: &[Complex64]) -> Result<Vec<f64>> {
        let mode = self.mode(index)?;
        points
            .iter()
            .map(|&p| {
                self.check_inside(p)?;
                Ok(expansion_value(mode, p - self.anchor()))
            })
            .collect()
    }

    /// Gradients `(u_x, u_y)` of eigenfunction `index`.
    pub fn evaluate_gradient(&self, index: usize, points: &[Complex64]) -> Result<Vec<[f64; 2]>> {
        let mode = self.mode(index)?;
        points
            .iter()
            .map(|&p| {
                self.check_inside(p)?;
                Ok(expansion_gradient(mode, p - self.anchor()))
            })
            .collect()
    }

    /// `(u|, ∂u/∂n|)` sampled on the arclength grid of `curve`.
    pub fn trace_of(&self, index: usize, curve: &BoundaryCurve) -> Result<TraceData> {
        let mode = self.mode(index)?;
        let a = self.anchor();
        let mut d = Vec::with_capacity(curve.len());
        let mut n = Vec::with_capacity(curve.len());
        for j in 0..curve.len() {
            let rel = curve.point(j) - a;
            let (nx, ny) = curve.normal(j);
            let g = expansion_gradient(mode, rel);
            d.push(Complex64::new(expansion_value(mode, rel), 0.0));
            n.push(Complex64::new(g[0] * nx + g[1] * ny, 0.0));
        }
        Ok(TraceData::new(d, n))
    }
}

pub fn evaluate_eigenfunction(
    result: &EigenResult,
    index: usize,
    points: &[Complex64],
) -> Result<Vec<f64>> {
    result.evaluate(index, points)
}

pub fn trace_of(result: &EigenResult, index: usize, curve: &BoundaryCurve) -> Result<TraceData> {
    result.trace_of(index, curve)
}

/// Values of all `2M + 1` basis functions (and optionally gradients) at
/// `rel = p − anchor`.
fn basis_at(
    k: f64,
    rel: Complex64,
    order: usize,
    with_gradient: bool,
) -> (Vec<f64>, Vec<[f64; 2]>) {
    let r = rel.norm();
    let phi = if r > 0.0 { rel.arg() } else { 0.0 };
    let j = bessel_j_sequence(order + 1, k * r);
    // E_m = J_m(kr) e^{imφ}, with E_{-1} = -J_1 e^{-iφ}
    let e = |m: i64| -> Complex64 {
        if m < 0 {
            -Complex64::from_polar(j[1], -phi)
        } else {
            Complex64::from_polar(j[m as usize], m as f64 * phi)
        }
    };
    let n = 2 * order + 1;
    let mut vals = Vec::with_capacity(n);
    let mut grads = Vec::with_capacity(if with_gradient { n } else { 0 });
    for m in 0..=order as i64 {
        let em = e(m);
        let (dx, dy) = if with_gradient {
            let (lo, hi) = (e(m - 1), e(m + 1));
            (
                0.5 * k * (lo - hi),
                Complex64::new(0.0, 0.5 * k) * (lo + hi),
            )
        } else {
            (Complex64::default(), Complex64::default())
        };
        vals.push(em.re);
        if with_gradient {
            grads.push([dx.re, dy.re]);
        }
        if m > 0 {
            vals.push(em.im);
            if with_gradient {
                grads.push([dx.im, dy.im]);
            }
        }
    }
    (vals, grads)
}

pub(crate) fn expansion_value(mode: &Eigenmode, rel: Complex64) -> f64 {
    let order = (mode.coefficients.len() - 1) / 2;
    let (v, _) = basis_at(mode.wavenumber, rel, order, false);
    v.iter().zip(&mode.coefficients).map(|(a, c)| a * c).sum()
}

pub(crate) fn expansion_gradient(mode: &Eigenmode, rel: Complex64) -> [f64; 2] {
    let order = (mode.coefficients.len() - 1) / 2;
    let (_, g) = basis_at(mode.wavenumber, rel, order, true);
    g.iter()
        .zip(&mode.coefficients)
        .fold([0.0, 0.0], |acc, (g, c)| {
            [acc[0] + g[0] * c, acc[1] + g[1] * c]
        })
}

/// Collocation geometry and the detection function.
struct Discretization {
    bc: BoundaryCondition,
    order: usize,
    anchor: Complex64,
    /// (point − anchor, outward normal) on the boundary
    boundary: Vec<(Complex64, Complex64)>,
    interior: Vec<Complex64>,
}

/// Orthonormal column basis of the scaled matrix, split into boundary rows.
struct Factored {
    /// Singular values of `Q_B`, ascending.
    sv: Vec<f64>,
    /// Matching right singular vectors mapped back to basis coefficients.
    coefficients: Vec<Vec<f64>>,
}

impl Discretization {
    fn new(curve: &BoundaryCurve, bc: BoundaryCondition, cfg: &SolverConfig) -> Result<Self> {
        let spec = curve.spec();
        let anchor = curve.centroid();
        let nb = cfg.collocation();
        let check = 4096.max(8 * nb);
        for i in 0..check {
            let t = 2.0 * PI * i as f64 / check as f64;
            let z = spec.z(t);
            if ((z - anchor).conj() * spec.dz(t)).im <= 0.0 {
                return Err(Error::NotStarShaped { x: z.re, y: z.im });
            }
        }
        // collocation: equal steps in the curve parameter, offset by half a step
        let boundary = (0..nb)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / nb as f64;
                let dz = spec.dz(t);
                (spec.z(t) - anchor, -Complex64::i() * dz / dz.norm())
            })
            .collect();
        // interior: Halton points in the star map, kept away from the boundary
        let ni = cfg.interior();
        let interior = (1..=ni)
            .map(|i| {
                let rho = 0.85 * halton(i, 2).sqrt();
                let t = 2.0 * PI * halton(i, 3);
                (spec.z(t) - anchor) * rho
            })
            .collect();
        Ok(Self {
            bc,
            order: cfg.angular_order,
            anchor,
            boundary,
            interior,
        })
    }

    fn n_basis(&self) -> usize {
        2 * self.order + 1
    }

    fn factor(&self, k: f64, want_vectors: usize) -> Factored {
        let nb = self.boundary.len();
        let ni = self.interior.len();
        let nc = self.n_basis();
        let neumann = self.bc.is_neumann();
        let mut a = DMatrix::<f64>::zeros(nb + ni, nc);
        for (i, &(rel, nrm)) in self.boundary.iter().enumerate() {
            let (v, g) = basis_at(k, rel, self.order, neumann);
            for c in 0..nc {
                a[(i, c)] = if neumann {
                    (g[c][0] * nrm.re + g[c][1] * nrm.im) / k
                } else {
                    v[c]
                };
            }
        }
        for (i, &rel) in self.interior.iter().enumerate() {
            let (v, _) = basis_at(k, rel, self.order, false);
            for c in 0..nc {
                a[(nb + i, c)] = v[c];
            }
        }
        let scale: Vec<f64> = (0..nc)
            .map(|c| {
                let s = a.column(c).norm();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        for c in 0..nc {
            a.column_mut(c).scale_mut(1.0 / scale[c]);
        }
        let svd = a.svd(true, true);
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let smax = svd.singular_values.max();
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
            .collect();
        let r = keep.len();
        let qb = DMatrix::from_fn(nb, r, |i, j| u[(i, keep[j])]);
        let inner = qb.svd(false, want_vectors > 0);
        let mut order: Vec<usize> = (0..inner.singular_values.len()).collect();
        order.sort_by(|&x, &y| inner.singular_values[x].total_cmp(&inner.singular_values[y]));
        let sv: Vec<f64> = order.iter().map(|&i| inner.singular_values[i]).collect();
        let mut coefficients = Vec::new();
        if want_vectors > 0 {
            let wt = inner.v_t.expect("v_t requested");
            for &idx in order.iter().take(want_vectors) {
                // x = V Σ⁻¹ y in the scaled basis, then undo column scaling
                let mut x = DVector::<f64>::zeros(nc);
                for (jj, &kk) in keep.iter().enumerate() {
                    let w = wt[(idx, jj)] / svd.singular_values[kk];
                    for c in 0..nc {
                        x[c] += vt[(kk, c)] * w;
                    }
                }
                coefficients.push((0..nc).map(|c| x[c] / scale[c]).collect());
            }
        }
        Factored { sv, coefficients }
    }

    fn sigma(&self, k: f64) -> [f64; 2] {
        let f = self.factor(k, 0);
        [f.sv[0], f.sv.get(1).copied().unwrap_or(1.0)]
    }
}

fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Golden-section minimization of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_width: f64) -> (f64, f64, usize) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while (b - a) > rel_width * 0.5 * (a + b).abs() && evals < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// A refined minimum of the detection function.
#[derive(Debug, Clone, Copy)]
struct Root {
    k: f64,
    sigma: f64,
    multiplicity: usize,
}

/// Singular values counted toward multiplicity at a minimizer: those within
/// ten times the minimum, with an absolute floor near round-off.
fn multiplicity(sv: &[f64], sv_threshold: f64) -> usize {
    let floor = 10.0 * sv[0].max(1e-13);
    sv.iter()
        .take_while(|&&s| s <= floor && s <= sv_threshold)
        .count()
        .max(1)
}

struct Search<'a> {
    disc: &'a Discretization,
    cfg: &'a SolverConfig,
    step: f64,
    evals: std::sync::atomic::AtomicUsize,
}

impl Search<'_> {
    fn sigma(&self, k: f64) -> [f64; 2] {
        self.evals
            .fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        self.disc.sigma(k)
    }

    fn local_minima(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        let vals: Vec<f64> = grid.par_iter().map(|&k| self.sigma(k)[0]).collect();
        (1..grid.len().saturating_sub(1))
            .filter(|&i| vals[i] < vals[i - 1] && vals[i] <= vals[i + 1])
            .map(|i| (grid[i - 1], grid[i + 1]))
            .collect()
    }

    fn refine(&self, lo: f64, hi: f64) -> Option<Root> {
        let (k, s, _) = golden_min(|k| self.sigma(k)[0], lo, hi, REFINE_WIDTH);
        if s > self.cfg.sv_threshold {
            return None;
        }
        let f = self.disc.factor(k, 0);
        Some(Root {
            k,
            sigma: s,
            multiplicity: multiplicity(&f.sv, self.cfg.sv_threshold),
        })
    }

    /// Searches `[ka, kb]`. Every accepted minimum is followed by a finer
    /// sweep of its neighbourhood, since two eigenvalues within one coarse
    /// step produce a single coarse minimum.
    fn roots_in(&self, ka: f64, kb: f64) -> Vec<Root> {
        let n = ((kb - ka) / self.step).ceil().max(2.0) as usize;
        let grid: Vec<f64> = (0..=n)
            .map(|i| ka + (kb - ka) * i as f64 / n as f64)
            .collect();
        let brackets = self.local_minima(&grid);
        let mut roots: Vec<Root> = brackets
            .par_iter()
            .filter_map(|&(a, b)| self.refine(a, b))
            .collect();
        let extra: Vec<Root> = roots
            .par_iter()
            .flat_map(|r| self.probe(r.k, self.step))
            .collect();
        roots.extend(extra);
        dedupe(roots)
    }

    /// Minima within `1.5 h` of `k` on a grid of spacing `h / 20`, recursing
    /// while a found minimum has a small second singular value.
    fn probe(&self, k: f64, h: f64) -> Vec<Root> {
        let fine: Vec<f64> = (0..=60)
            .map(|i| k - 1.5 * h + 3.0 * h * i as f64 / 60.0)
            .collect();
        let found: Vec<Root> = self
            .local_minima(&fine)
            .iter()
            .filter_map(|&(a, b)| self.refine(a, b))
            .collect();
        let mut out = found.clone();
        let hh = h / 20.0;
        if hh > 1e-9 * k {
            for r in &found {
                if r.multiplicity == 1 && self.sigma(r.k)[1] < PROBE_SIGMA {
                    out.extend(self.probe(r.k, hh));
                }
            }
        }
        out
    }
}

fn dedupe(mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    let mut out: Vec<Root> = Vec::new();
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.k - last.k).abs() <= 1e-8 * r.k => {
                if r.sigma < last.sigma {
                    last.k = r.k;
                    last.sigma = r.sigma;
                }
                last.multiplicity = last.multiplicity.max(r.multiplicity);
            }
            _ => out.push(r),
        }
    }
    out
}

/// Quasi-uniform interior grid used for L² normalization; returns the
/// points relative to `anchor` and the cell weight `area / count`.
fn normalization_cloud(
    curve: &BoundaryCurve,
    anchor: Complex64,
    n: usize,
) -> (Vec<Complex64>, f64) {
    let area = curve.area();
    let h = (area / n as f64).sqrt();
    let (x0, x1, y0, y1) = curve.bounding_box();
    let nx = ((x1 - x0) / h).ceil() as usize;
    let ny = ((y1 - y0) / h).ceil() as usize;
    let mut pts = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            let p = Complex64::new(x0 + (i as f64 + 0.5) * h, y0 + (j as f64 + 0.5) * h);
            if curve.contains(p, 0.0) {
                pts.push(p - anchor);
            }
        }
    }
    let w = area / pts.len().max(1) as f64;
    (pts, w)
}

/// Orthonormalizes a multiplet in the discrete interior inner product and
/// fixes signs so the largest-magnitude cloud value is positive.
fn normalize_multiplet(
    k: f64,
    mut coefs: Vec<Vec<f64>>,
    cloud: &[Complex64],
    w: f64,
    order: usize,
) -> Vec<Vec<f64>> {
    let basis: Vec<Vec<f64>> = cloud
        .par_iter()
        .map(|&p| basis_at(k, p, order, false).0)
        .collect();
    let values = |c: &[f64]| -> Vec<f64> {
        basis
            .iter()
            .map(|b| b.iter().zip(c).map(|(x, y)| x * y).sum())
            .collect()
    };
    let dot =
        |a: &[f64], b: &[f64]| -> f64 { w * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() };
    let mut done: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for c in coefs.iter_mut() {
        let mut v = values(c);
        for (pc, pv) in &done {
            let proj = dot(&v, pv);
            c.iter_mut().zip(pc).for_each(|(a, b)| *a -= proj * b);
            v.iter_mut().zip(pv).for_each(|(a, b)| *a -= proj * b);
        }
        let norm = dot(&v, &v).sqrt();
        let peak = v
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let s = if peak < 0.0 { -1.0 / norm } else { 1.0 / norm };
        c.iter_mut().for_each(|a| *a *= s);
        v.iter_mut().for_each(|a| *a *= s);
        done.push((c.clone(), v));
    }
    done.into_iter().map(|(c, _)| c).collect()
}

/// Counts of disk eigenvalues below `lam` for radius `r`.
fn disk_count(r: f64, neumann: bool, lam: f64) -> usize {
    let mut count = 4;
    loop {
        let spec = disk_spectrum(r, neumann, count);
        if spec.len() < count || spec[count - 1] > lam || count > 400 {
            return spec.iter().filter(|&&v| v <= lam).count();
        }
        count *= 2;
    }
}

/// First `count` eigenvalues (with multiplicity) of `−Δ` on the domain
/// bounded by `curve`, with eigenfunctions.
///
/// `search` bounds the λ interval; `None` uses the configured default.
pub fn solve_spectrum(
    curve: &BoundaryCurve,
    bc: BoundaryCondition,
    count: usize,
    search: Option<(f64, f64)>,
    cfg: &SolverConfig,
) -> Result<EigenResult> {
    cfg.validate()?;
    if count == 0 || count > MAX_COUNT {
        return Err(Error::OutOfRange(format!(
            "eigenvalue count {count} not in 1..={MAX_COUNT}"
        )));
    }
    let disc = Discretization::new(curve, bc, cfg)?;
    let area = curve.area();
    let r_eff = (area / PI).sqrt();
    let neumann = bc.is_neumann();
    let (x0, x1, y0, y1) = curve.bounding_box();
    let diam = (x1 - x0).hypot(y1 - y0);
    let default_hi = 1.2 * disk_spectrum(r_eff, neumann, count)[count - 1];
    let (lo, hi) = search.unwrap_or((cfg.search_min, cfg.search_max.unwrap_or(default_hi)));
    if !(hi > lo && lo >= 0.0) {
        return Err(Error::OutOfRange(format!("search interval ({lo}, {hi})")));
    }
    let search = Search {
        disc: &disc,
        cfg,
        step: cfg.sweep_step / r_eff,
        evals: Default::default(),
    };
    let wanted = if neumann { count - 1 } else { count };
    let mut ka = lo.sqrt().max(0.3 / diam);
    let mut kb = hi.sqrt();
    let mut roots: Vec<Root> = Vec::new();
    let mut warnings = Vec::new();
    let fixed_interval =
        search.step > 0.0 && (cfg.search_max.is_some() || search_given(lo, hi, cfg, default_hi));
    let mut extensions = 0;
    if wanted > 0 {
        loop {
            roots.extend(search.roots_in(ka, kb));
            roots = dedupe(roots);
            let found: usize = roots.iter().map(|r| r.multiplicity).sum();
            if found >= wanted {
                break;
            }
            if fixed_interval || extensions >= 8 {
                warnings.push(format!(
                    "found {found} of {wanted} eigenvalues below {:.6e}",
                    kb * kb
                ));
                break;
            }
            ka = kb - 2.0 * search.step;
            kb *= 1.25;
            extensions += 1;
        }
    }
    let k_top = kb;

    // expand multiplicities and attach eigenfunctions
    let (cloud, w) = normalization_cloud(curve, disc.anchor, cfg.n_cloud);
    let mut modes: Vec<Eigenmode> = Vec::new();
    if neumann {
        let mut c = vec![0.0; disc.n_basis()];
        c[0] = 1.0 / area.sqrt();
        modes.push(Eigenmode {
            value: 0.0,
            wavenumber: 0.0,
            coefficients: c,
            residual: 0.0,
            certified: true,
            singular_value: 0.0,
            cluster: 0,
        });
    }
    for r in &roots {
        if modes.len() >= count {
            break;
        }
        let f = disc.factor(r.k, r.multiplicity);
        let coefs = normalize_multiplet(r.k, f.coefficients, &cloud, w, disc.order);
        for (idx, c) in coefs.into_iter().enumerate() {
            if modes.len() >= count {
                break;
            }
            modes.push(Eigenmode {
                value: r.k * r.k,
                wavenumber: r.k,
                coefficients: c,
                residual: 0.0,
                certified: false,
                singular_value: f.sv[idx.min(f.sv.len() - 1)],
                cluster: 0,
            });
        }
    }
    let boundary_residual = |m: &Eigenmode| -> f64 {
        (0..curve.len())
            .map(|j| {
                let rel = curve.point(j) - disc.anchor;
                if neumann {
                    let (nx, ny) = curve.normal(j);
                    let g = expansion_gradient(m, rel);
                    (g[0] * nx + g[1] * ny).abs()
                } else {
                    expansion_value(m, rel).abs()
                }
            })
            .fold(0.0, f64::max)
    };
    let residuals: Vec<f64> = modes.par_iter().map(boundary_residual).collect();
    for (m, res) in modes.iter_mut().zip(residuals) {
        if m.wavenumber > 0.0 {
            m.residual = res;
            m.certified = res <= cfg.residual_tol;
            if !m.certified {
                warnings.push(format!(
                    "eigenvalue {:.10e} has boundary residual {:.2e}",
                    m.value, res
                ));
            }
        }
    }

    // clusters
    let mut clusters: Vec<Cluster> = Vec::new();
    for i in 0..modes.len() {
        let v = modes[i].value;
        let joins = clusters.last().is_some_and(|c| {
            let first = modes[c.members[0]].value;
            (v - first).abs() <= CLUSTER_TOL * v.abs().max(1e-300) && v > 0.0
        });
        if joins {
            let c = clusters.last_mut().expect("nonempty");
            c.members.push(i);
            c.multiplicity += 1;
            c.diameter = v - modes[c.members[0]].value;
        } else {
            clusters.push(Cluster {
                value: v,
                multiplicity: 1,
                diameter: 0.0,
                members: vec![i],
            });
        }
        modes[i].cluster = clusters.len() - 1;
    }
    for c in clusters.iter_mut() {
        c.value = c.members.iter().map(|&i| modes[i].value).sum::<f64>() / c.members.len() as f64;
    }

    // a-posteriori count checks
    let lam_top = k_top * k_top;
    let below = roots
        .iter()
        .filter(|r| r.k <= k_top)
        .map(|r| r.multiplicity)
        .sum::<usize>()
        + neumann as usize;
    let rel: Vec<f64> = curve
        .points()
        .iter()
        .map(|p| (p - disc.anchor).norm())
        .collect();
    let r_in = rel.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_out = rel.iter().cloned().fold(0.0, f64::max);
    if neumann {
        let weyl = area * lam_top / (4.0 * PI) + curve.length() * lam_top.sqrt() / (4.0 * PI);
        if (below as f64) < weyl - (3.0f64).max(0.25 * weyl) {
            warnings.push(format!("possible missed eigenvalues: {below} found below {lam_top:.6e}, Weyl estimate {weyl:.1}"));
        }
    } else {
        let lower = disk_count(r_in, false, lam_top);
        let upper = disk_count(r_out, false, lam_top);
        if below < lower {
            warnings.push(format!(
                "missed eigenvalues: {below} found below {lam_top:.6e}, inscribed disk has {lower}"
            ));
        }
        if below > upper {
            warnings.push(format!(
                "spurious eigenvalues: {below} found below {lam_top:.6e}, enclosing disk has {upper}"
            ));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    Ok(EigenResult {
        boundary_condition: bc,
        anchor: [disc.anchor.re, disc.anchor.im],
        angular_order: cfg.angular_order,
        search_interval: [lo, lam_top.max(hi)],
        eigenvalues: modes.iter().map(|m| m.value).collect(),
        modes,
        clusters,
        warnings,
        sweep_evaluations: search.evals.into_inner(),
        curve: curve.clone(),
    })
}

fn search_given(lo: f64, hi: f64, cfg: &SolverConfig, default_hi: f64) -> bool {
    lo != cfg.search_min || hi != default_hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j;
    use crate::curve::{build_curve, CurveSpec};

    fn disk(r: f64) -> BoundaryCurve {
        build_curve(&CurveSpec::circle(r).unwrap(), 256).unwrap()
    }

    fn cfg(order: usize) -> SolverConfig {
        SolverConfig {
            angular_order: order,
            ..Default::default()
        }
    }

    #[test]
    fn basis_gradient_matches_finite_difference() {
        let k = 2.3;
        let p = Complex64::new(0.31, -0.57);
        let h = 1e-6;
        let (_, g) = basis_at(k, p, 6, true);
        let (vxp, _) = basis_at(k, p + h, 6, false);
        let (vxm, _) = basis_at(k, p - h, 6, false);
        let (vyp, _) = basis_at(k, p + Complex64::new(0.0, h), 6, false);
        let (vym, _) = basis_at(k, p - Complex64::new(0.0, h), 6, false);
        for c in 0..13 {
            assert!((g[c][0] - (vxp[c] - vxm[c]) / (2.0 * h)).abs() < 1e-8);
            assert!((g[c][1] - (vyp[c] - vym[c]) / (2.0 * h)).abs() < 1e-8);
        }
    }

    #[test]
    fn disk_dirichlet_ground_state() {
        let c = disk(1.0);
        let res = solve_spectrum(&c, BoundaryCondition::Dirichlet, 3, None, &cfg(12)).unwrap();
        assert!(
            (res.eigenvalues[0] - 5.783_185_962_946_784).abs() < 1e-8,
            "{:?}",
            res.eigenvalues
        );
        assert!((res.eigenvalues[1] - 14.681_970_642_123_893).abs() < 1e-8);
        assert_eq!(res.clusters[1].multiplicity, 2);
        // radial profile ∝ J0(j01 r), maximal at the center
        let pts: Vec<Complex64> = (0..20)
            .map(|i| Complex64::new(0.05 * i as f64, 0.0))
            .collect();
        let u = res.evaluate(0, &pts).unwrap();
        let k = res.modes[0].wavenumber;
        let ratio = u[0] / bessel_j(0, 0.0).unwrap();
        for (p, v) in pts.iter().zip(&u) {
            assert!((v - ratio * bessel_j(0, k * p.re).unwrap()).abs() < 1e-8);
            assert!(v.abs() <= u[0].abs() + 1e-12);
        }
        let t = res.trace_of(0, &c).unwrap();
        assert!(t.re().dirichlet.iter().all(|v| v.norm() < 1e-8));
        let sign = t.neumann[0].re.signum();
        assert!(t.neumann.iter().all(|v| v.re * sign != 0.0));
        assert!(res.evaluate(0, &[Complex64::new(1.2, 0.0)]).is_err());
    }

    #[test]
    fn disk_neumann_starts_at_zero() {
        let c = disk(1.0);
        let res = solve_spectrum(&c, BoundaryCondition::Neumann, 5, None, &cfg(12)).unwrap();
        assert_eq!(res.eigenvalues[0], 0.0);
        assert!(
            (res.eigenvalues[1] - 1.841_183_781_340_659_3f64.powi(2)).abs() < 1e-8,
            "{:?}",
            res.eigenvalues
        );
        assert!((res.eigenvalues[2] - 1.841_183_781_340_659_3f64.powi(2)).abs() < 1e-8);
        assert!((res.eigenvalues[3] - 3.054_236_928_227_140_3f64.powi(2)).abs() < 1e-8);
        assert!(
            res.all_certified(),
            "{:?} {:?}",
            res.residuals(),
            res.warnings
        );
    }

    #[test]
    fn ellipse_residual_and_gradient() {
        let c = build_curve(&CurveSpec::ellipse(1.2, 1.0).unwrap(), 256).unwrap();
        let res = solve_spectrum(&c, BoundaryCondition::Dirichlet, 2, None, &cfg(24)).unwrap();
        assert!(res.modes[0].residual < 1e-7, "{:?}", res.residuals());
        let p = Complex64::new(0.3, 0.2);
        let h = 1e-5;
        let g = res.evaluate_gradient(0, &[p]).unwrap()[0];
        let v = |q: Complex64| res.evaluate(0, &[q]).unwrap()[0];
        assert!((g[0] - (v(p + h) - v(p - h)) / (2.0 * h)).abs() < 1e-6);
        assert!(
            (g[1] - (v(p + Complex64::new(0.0, h)) - v(p - Complex64::new(0.0, h))) / (2.0 * h))
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn rejects_bad_requests() {
        let c = disk(1.0);
        assert!(solve_spectrum(&c, BoundaryCondition::Dirichlet, 0, None, &cfg(8)).is_err());
        assert!(solve_spectrum(&c, BoundaryCondition::Dirichlet, 21, None, &cfg(8)).is_err());
    }

    #[test]
    fn golden_section_finds_kink() {
        let (x, _, _) = golden_min(|x| (x - 1.234_567_891).abs(), 1.0, 1.5, 1e-12);
        assert!((x - 1.234_567_891).abs() < 1e-11);
    }
}
