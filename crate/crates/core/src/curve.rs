//! Smooth closed boundary curves given by trigonometric coefficients,
//! resampled uniformly in arclength.
//!
//! Sign convention: the curve runs counterclockwise, the tangent is
//! `dz/ds = exp(i theta(s))` and the curvature is `kappa = -dtheta/ds`, so a
//! convex curve has `kappa < 0` everywhere. The outward normal is
//! `(sin theta, -cos theta)`.

use crate::error::{Error, Result};
use crate::spectral::{self, TrigInterpolant};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Fourier description `z(t) = sum_k c_k exp(i k t)`, `t in [0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    coefficients: Vec<(i32, Complex64)>,
}

const CHECK_SAMPLES: usize = 1024;

impl CurveSpec {
    /// Builds and validates a spec: nonvanishing speed, simple, counterclockwise.
    pub fn new(coefficients: impl IntoIterator<Item = (i32, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(i32, Complex64)> = Vec::new();
        for (k, c) in coefficients {
            match merged.iter_mut().find(|(kk, _)| *kk == k) {
                Some(slot) => slot.1 += c,
                None => merged.push((k, c)),
            }
        }
        merged.retain(|(_, c)| c.norm() > 0.0);
        merged.sort_by_key(|(k, _)| *k);
        if merged.iter().all(|(k, _)| *k == 0) {
            return Err(Error::InvalidCurve(
                "no nonzero oscillating coefficient".into(),
            ));
        }
        let spec = Self {
            coefficients: merged,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Circle of radius `r` centered at the origin.
    pub fn circle(r: f64) -> Result<Self> {
        Self::new([(1, Complex64::new(r, 0.0))])
    }

    /// Axis-aligned ellipse `a cos t + i b sin t`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new([
            (1, Complex64::new(0.5 * (a + b), 0.0)),
            (-1, Complex64::new(0.5 * (a - b), 0.0)),
        ])
    }

    pub fn coefficients(&self) -> &[(i32, Complex64)] {
        &self.coefficients
    }

    pub fn max_mode(&self) -> i32 {
        self.coefficients
            .iter()
            .map(|(k, _)| k.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn z(&self, t: f64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * t))
            .sum()
    }

    pub fn dz(&self, t: f64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| {
                c * Complex64::new(0.0, k as f64) * Complex64::from_polar(1.0, k as f64 * t)
            })
            .sum()
    }

    pub fn d2z(&self, t: f64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| {
                c * (-(k as f64) * (k as f64)) * Complex64::from_polar(1.0, k as f64 * t)
            })
            .sum()
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.dz(t).norm()
    }

    /// Signed curvature in this crate's convention, from the parametrization
    /// directly: `-Im(conj(z') z'') / |z'|^3`.
    pub fn curvature_at(&self, t: f64) -> f64 {
        let d1 = self.dz(t);
        let d2 = self.d2z(t);
        -(d1.conj() * d2).im / d1.norm().powi(3)
    }

    /// Multiplies every coefficient (uniform scaling about the origin).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|&(k, c)| (k, c * factor))
                .collect(),
        }
    }

    /// Rotation about the origin by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        let r = Complex64::from_polar(1.0, angle);
        Self {
            coefficients: self.coefficients.iter().map(|&(k, c)| (k, c * r)).collect(),
        }
    }

    pub fn translated(&self, shift: Complex64) -> Self {
        let mut coeffs = self.coefficients.clone();
        match coeffs.iter_mut().find(|(k, _)| *k == 0) {
            Some(slot) => slot.1 += shift,
            None => coeffs.push((0, shift)),
        }
        coeffs.retain(|(_, c)| c.norm() > 0.0);
        coeffs.sort_by_key(|(k, _)| *k);
        Self {
            coefficients: coeffs,
        }
    }

    /// `z(t + pi) = -z(t)` holds iff only odd modes are present.
    pub fn is_centrally_symmetric(&self) -> bool {
        self.coefficients.iter().all(|(k, _)| k.rem_euclid(2) == 1)
    }

    fn validate(&self) -> Result<()> {
        let m = CHECK_SAMPLES * (1 + self.max_mode() as usize / 64);
        let ts: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
        let speeds: Vec<f64> = ts.iter().map(|&t| self.speed(t)).collect();
        let vmax = speeds.iter().cloned().fold(0.0, f64::max);
        for (&t, &v) in ts.iter().zip(&speeds) {
            if !(v > 1e-8 * vmax) {
                return Err(Error::VanishingSpeed { t, speed: v });
            }
        }
        let pts: Vec<Complex64> = ts.iter().map(|&t| self.z(t)).collect();
        let area = polygon_area(&pts);
        if area <= 0.0 {
            return Err(Error::InvalidCurve(format!(
                "curve must be counterclockwise (signed area {area:.3e})"
            )));
        }
        if let Some((i, j, p)) = first_self_intersection(&pts) {
            return Err(Error::SelfIntersection {
                x: p.re,
                y: p.im,
                t1: ts[i],
                t2: ts[j],
            });
        }
        Ok(())
    }
}

fn polygon_area(pts: &[Complex64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            a.re * b.im - a.im * b.re
        })
        .sum::<f64>()
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> Option<Complex64> {
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = cross(r, s);
    if denom.abs() < 1e-300 {
        return None;
    }
    let t = cross(q1 - p1, s) / denom;
    let u = cross(q1 - p1, r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(p1 + r * t)
    } else {
        None
    }
}

fn first_self_intersection(pts: &[Complex64]) -> Option<(usize, usize, Complex64)> {
    let n = pts.len();
    // bounding boxes prune almost every pair
    let boxes: Vec<[f64; 4]> = (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            [
                a.re.min(b.re),
                a.re.max(b.re),
                a.im.min(b.im),
                a.im.max(b.im),
            ]
        })
        .collect();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (boxes[i], boxes[j]);
            if a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2] {
                continue;
            }
            if let Some(p) = segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return Some((i, j, p));
            }
        }
    }
    None
}

/// Named geometric functions of the boundary, sampled on the arclength grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometricFactor {
    ConstOne,
    SinTheta,
    CosTheta,
    Cos2Theta,
    Sin2Theta,
    Sin3Theta,
    Cos3Theta,
    Kappa,
    /// `d(r^2)/ds`
    DrsqDs,
    /// `d^2(r^2)/ds^2`
    D2rsqDs2,
    /// `-y x' + x y'`
    AngularMomentum,
}

/// Arclength-uniform samples of a smooth closed curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryCurve {
    spec: CurveSpec,
    length: f64,
    params: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    theta: Vec<f64>,
    kappa: Vec<f64>,
    r2: Vec<f64>,
}

/// Dirichlet/Neumann boundary data on a curve's arclength grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceData {
    pub dirichlet: Vec<Complex64>,
    pub neumann: Vec<Complex64>,
}

/// Default number of arclength samples.
pub const DEFAULT_SAMPLES: usize = 512;

/// Arclength reparametrization: Fourier coefficients of the speed.
struct ArclengthMap {
    mean_speed: f64,
    modes: Vec<Complex64>, // a_k for k = 1..
}

impl ArclengthMap {
    fn new(spec: &CurveSpec) -> Self {
        let mut m = 2048usize
            .max(16 * spec.max_mode() as usize)
            .next_power_of_two();
        loop {
            let vals: Vec<Complex64> = (0..m)
                .map(|j| Complex64::new(spec.speed(2.0 * PI * j as f64 / m as f64), 0.0))
                .collect();
            let spec_f = spectral::fft(&vals);
            let inv = 1.0 / m as f64;
            let a0 = spec_f[0].re * inv;
            let tail = spec_f[m / 2 - 8..m / 2]
                .iter()
                .map(|c| c.norm() * inv)
                .fold(0.0, f64::max);
            if tail < 1e-15 * a0 || m >= 1 << 18 {
                let mut modes: Vec<Complex64> = spec_f[1..m / 2].iter().map(|c| c * inv).collect();
                while modes.last().is_some_and(|c| c.norm() < 1e-18 * a0) {
                    modes.pop();
                }
                return Self {
                    mean_speed: a0,
                    modes,
                };
            }
            m *= 2;
        }
    }

    fn length(&self) -> f64 {
        2.0 * PI * self.mean_speed
    }

    fn s_of_t(&self, t: f64) -> f64 {
        let mut s = self.mean_speed * t;
        for (idx, a) in self.modes.iter().enumerate() {
            let k = (idx + 1) as f64;
            let e = Complex64::from_polar(1.0, k * t) - 1.0;
            s += 2.0 * (a * e / Complex64::new(0.0, k)).re;
        }
        s
    }
}

/// Builds the arclength-uniform sampling of `spec` with `n_samples` nodes.
pub fn build_curve(spec: &CurveSpec, n_samples: usize) -> Result<BoundaryCurve> {
    if n_samples < 64 || !n_samples.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "n_samples must be even and at least 64, got {n_samples}"
        )));
    }
    let map = ArclengthMap::new(spec);
    let length = map.length();
    let n = n_samples;
    let mut params = Vec::with_capacity(n);
    let mut t_prev = 0.0;
    for j in 0..n {
        let target = length * j as f64 / n as f64;
        let t = if j == 0 {
            0.0
        } else {
            invert_arclength(spec, &map, target, t_prev)
        };
        params.push(t);
        t_prev = t;
    }

    let z: Vec<Complex64> = params.iter().map(|&t| spec.z(t)).collect();
    let x: Vec<f64> = z.iter().map(|p| p.re).collect();
    let y: Vec<f64> = z.iter().map(|p| p.im).collect();
    let r2: Vec<f64> = z.iter().map(|p| p.norm_sqr()).collect();

    // continuous lift of arg z'
    let mut theta = Vec::with_capacity(n);
    let mut prev = spec.dz(params[0]).arg();
    theta.push(prev);
    for &t in &params[1..] {
        let mut d = spec.dz(t).arg() - prev;
        d -= 2.0 * PI * (d / (2.0 * PI)).round();
        let next = prev + d;
        theta.push(next);
        prev = next;
    }
    let mut closing = theta[0] - theta[n - 1];
    closing -= 2.0 * PI * (closing / (2.0 * PI)).round();
    let turning = theta[n - 1] - theta[0] + closing;
    if (turning - 2.0 * PI).abs() > 1e-6 {
        return Err(Error::InvalidCurve(format!(
            "total tangent turning {turning:.6} differs from 2 pi; curve not simple counterclockwise or undersampled"
        )));
    }

    let slope = 2.0 * PI / length;
    let periodic: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(j, th)| th - slope * length * j as f64 / n as f64)
        .collect();
    let dperiodic = spectral::derivative_real(&periodic, length, 1);
    let kappa: Vec<f64> = dperiodic.iter().map(|d| -(slope + d)).collect();

    Ok(BoundaryCurve {
        spec: spec.clone(),
        length,
        params,
        x,
        y,
        theta,
        kappa,
        r2,
    })
}

/// Safeguarded Newton for `s(t) = target`; bisection fallback on a bracket.
fn invert_arclength(spec: &CurveSpec, map: &ArclengthMap, target: f64, t_prev: f64) -> f64 {
    let mut lo = t_prev;
    let mut hi = 2.0 * PI;
    let mut t = (t_prev + (target - map.s_of_t(t_prev)) / spec.speed(t_prev)).clamp(lo, hi);
    for _ in 0..100 {
        let f = map.s_of_t(t) - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let step = f / spec.speed(t);
        let mut next = t - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - t).abs() < 1e-14 || hi - lo < 1e-13;
        t = next;
        if done {
            break;
        }
    }
    t
}

impl BoundaryCurve {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Total arclength `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn ds(&self) -> f64 {
        self.length / self.len() as f64
    }

    pub fn s(&self, j: usize) -> f64 {
        self.length * j as f64 / self.len() as f64
    }

    pub fn s_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.s(j)).collect()
    }

    /// Original Fourier parameter of each arclength node.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn r2(&self) -> &[f64] {
        &self.r2
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::new(self.x[j], self.y[j])
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.len()).map(|j| self.point(j)).collect()
    }

    /// Outward unit normal `(sin theta, -cos theta)`.
    pub fn normal(&self, j: usize) -> (f64, f64) {
        let th = self.theta[j];
        (th.sin(), -th.cos())
    }

    /// Enclosed area, `1/2 * closed integral of (x y' - y x') ds`.
    pub fn area(&self) -> f64 {
        let integrand: Vec<f64> = (0..self.len())
            .map(|j| 0.5 * (self.x[j] * self.theta[j].sin() - self.y[j] * self.theta[j].cos()))
            .collect();
        spectral::trapezoid(&integrand, self.length)
    }

    /// Area centroid of the enclosed domain.
    pub fn centroid(&self) -> Complex64 {
        // Green: A*cx = closed integral of x^2/2 dy, A*cy = -closed integral of y^2/2 dx
        let gx: Vec<f64> = (0..self.len())
            .map(|j| 0.5 * self.x[j] * self.x[j] * self.theta[j].sin())
            .collect();
        let gy: Vec<f64> = (0..self.len())
            .map(|j| -0.5 * self.y[j] * self.y[j] * self.theta[j].cos())
            .collect();
        let a = self.area();
        Complex64::new(
            spectral::trapezoid(&gx, self.length) / a,
            spectral::trapezoid(&gy, self.length) / a,
        )
    }

    /// Largest distance from `p` to the boundary samples.
    pub fn max_radius_from(&self, p: Complex64) -> f64 {
        self.points()
            .iter()
            .map(|q| (q - p).norm())
            .fold(0.0, f64::max)
    }

    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let fold = |v: &[f64]| {
            v.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| {
                    (lo.min(a), hi.max(a))
                })
        };
        let (x0, x1) = fold(&self.x);
        let (y0, y1) = fold(&self.y);
        (x0, x1, y0, y1)
    }

    /// Sample of a named geometric function on the arclength grid.
    pub fn geometric(&self, kind: GeometricFactor) -> Vec<f64> {
        let th = &self.theta;
        match kind {
            GeometricFactor::ConstOne => vec![1.0; self.len()],
            GeometricFactor::SinTheta => th.iter().map(|t| t.sin()).collect(),
            GeometricFactor::CosTheta => th.iter().map(|t| t.cos()).collect(),
            GeometricFactor::Cos2Theta => th.iter().map(|t| (2.0 * t).cos()).collect(),
            GeometricFactor::Sin2Theta => th.iter().map(|t| (2.0 * t).sin()).collect(),
            GeometricFactor::Sin3Theta => th.iter().map(|t| (3.0 * t).sin()).collect(),
            GeometricFactor::Cos3Theta => th.iter().map(|t| (3.0 * t).cos()).collect(),
            GeometricFactor::Kappa => self.kappa.clone(),
            GeometricFactor::DrsqDs => spectral::derivative_real(&self.r2, self.length, 1),
            GeometricFactor::D2rsqDs2 => spectral::derivative_real(&self.r2, self.length, 2),
            GeometricFactor::AngularMomentum => (0..self.len())
                .map(|j| -self.y[j] * th[j].cos() + self.x[j] * th[j].sin())
                .collect(),
        }
    }

    /// `kappa < 0` at every sample.
    pub fn is_strictly_convex(&self) -> bool {
        self.kappa.iter().all(|&k| k < 0.0)
    }

    pub fn require_strictly_convex(&self) -> Result<()> {
        match self.kappa.iter().enumerate().find(|(_, &k)| k >= 0.0) {
            Some((j, &k)) => Err(Error::NotConvex {
                s: self.s(j),
                kappa: k,
            }),
            None => Ok(()),
        }
    }

    /// Max deviation of `z(s + L/2) + z(s)` over the grid, relative to `L`.
    pub fn central_symmetry_defect(&self) -> f64 {
        let n = self.len();
        let h = n / 2;
        (0..n)
            .map(|j| (self.point(j) + self.point((j + h) % n)).norm())
            .fold(0.0, f64::max)
            / self.length
    }

    pub fn require_centrally_symmetric(&self, tol: f64) -> Result<()> {
        let defect = self.central_symmetry_defect();
        if defect > tol {
            Err(Error::NotCentrallySymmetric { defect })
        } else {
            Ok(())
        }
    }

    /// Is the curve (numerically) a circle about the origin?
    pub fn is_centered_circle(&self, tol: f64) -> bool {
        let r2max = self.r2.iter().cloned().fold(0.0, f64::max);
        let r2min = self.r2.iter().cloned().fold(f64::INFINITY, f64::min);
        (r2max - r2min) <= tol * r2max
    }

    /// Even-odd test against the sampled polygon, accepting points within
    /// `tol` of the boundary.
    pub fn contains(&self, p: Complex64, tol: f64) -> bool {
        let n = self.len();
        let mut inside = false;
        let mut min_d = f64::INFINITY;
        for i in 0..n {
            let a = self.point(i);
            let b = self.point((i + 1) % n);
            if (a.im > p.im) != (b.im > p.im) {
                let xint = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
                if p.re < xint {
                    inside = !inside;
                }
            }
            if tol > 0.0 {
                let ab = b - a;
                let u = (((p - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
                min_d = min_d.min((p - (a + ab * u)).norm());
            }
        }
        inside || min_d <= tol
    }

    /// Arclength positions `s` at which `theta(s) = theta(0) + 2 pi j / m`.
    /// Requires a strictly convex curve so that `theta` is monotone.
    pub fn angle_nodes(&self, m: usize) -> Result<Vec<f64>> {
        self.require_strictly_convex()?;
        let n = self.len();
        let slope = 2.0 * PI / self.length;
        let periodic: Vec<f64> = (0..n).map(|j| self.theta[j] - slope * self.s(j)).collect();
        let interp = TrigInterpolant::from_real(&periodic, self.length);
        let theta_at = |s: f64| slope * s + interp.eval(s).re;
        let dtheta_at = |s: f64| slope + interp.eval_derivative(s).re;
        let th0 = self.theta[0];
        let mut out = Vec::with_capacity(m);
        for j in 0..m {
            let target = th0 + 2.0 * PI * j as f64 / m as f64;
            let mut s = self.length * j as f64 / m as f64;
            let (mut lo, mut hi) = (0.0, self.length);
            for _ in 0..100 {
                let f = theta_at(s) - target;
                if f > 0.0 {
                    hi = s;
                } else {
                    lo = s;
                }
                let mut next = s - f / dtheta_at(s);
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                let done = (next - s).abs() < 1e-14 * self.length;
                s = next;
                if done {
                    break;
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Trigonometric interpolation of grid data at arbitrary arclength.
    pub fn interpolant(&self, values: &[f64]) -> TrigInterpolant {
        TrigInterpolant::from_real(values, self.length)
    }

    /// CSV rows `s,x,y,theta,kappa,r2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x,y,theta,kappa,r2\n");
        for j in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.s(j),
                self.x[j],
                self.y[j],
                self.theta[j],
                self.kappa[j],
                self.r2[j]
            );
        }
        out
    }

    pub fn check_trace(&self, t: &TraceData) -> Result<()> {
        for got in [t.dirichlet.len(), t.neumann.len()] {
            if got != self.len() {
                return Err(Error::GridMismatch {
                    expected: self.len(),
                    got,
                });
            }
        }
        Ok(())
    }
}

impl TraceData {
    pub fn new(dirichlet: Vec<Complex64>, neumann: Vec<Complex64>) -> Self {
        Self { dirichlet, neumann }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(
            vec![Complex64::new(0.0, 0.0); n],
            vec![Complex64::new(0.0, 0.0); n],
        )
    }

    pub fn from_real(dirichlet: &[f64], neumann: &[f64]) -> Self {
        let c = |v: &[f64]| v.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Self::new(c(dirichlet), c(neumann))
    }

    pub fn len(&self) -> usize {
        self.dirichlet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirichlet.is_empty()
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::new(
            self.dirichlet.iter().map(|&v| f(v)).collect(),
            self.neumann.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Componentwise real part, as complex data.
    pub fn re(&self) -> Self {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    /// Componentwise imaginary part, as complex data.
    pub fn im(&self) -> Self {
        self.map(|v| Complex64::new(v.im, 0.0))
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|v| v * a)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.dirichlet
                .iter()
                .zip(&other.dirichlet)
                .map(|(a, b)| a + b)
                .collect(),
            self.neumann
                .iter()
                .zip(&other.neumann)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Sup norm over both components.
    pub fn sup_norm(&self) -> f64 {
        self.dirichlet
            .iter()
            .chain(&self.neumann)
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.sub(other).sup_norm()
    }

    /// CSV rows `s,re_dirichlet,im_dirichlet,re_neumann,im_neumann`.
    pub fn to_csv(&self, curve: &BoundaryCurve) -> String {
        let mut out = String::from("s,re_dirichlet,im_dirichlet,re_neumann,im_neumann\n");
        for j in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                curve.s(j),
                self.dirichlet[j].re,
                self.dirichlet[j].im,
                self.neumann[j].re,
                self.neumann[j].im
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_circle_geometry() {
        let curve = build_curve(&CurveSpec::circle(1.0).unwrap(), 256).unwrap();
        assert!((curve.length() - 2.0 * PI).abs() < 1e-13);
        for j in 0..curve.len() {
            let s = curve.s(j);
            assert!((curve.theta()[j] - (s + PI / 2.0)).abs() < 1e-12);
            assert!((curve.kappa()[j] + 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn rescaled_disk_radius() {
        let r = 3.831_705_970_207_512;
        let curve = build_curve(&CurveSpec::circle(r).unwrap(), 256).unwrap();
        assert!((curve.length() - 2.0 * PI * r).abs() < 1e-12);
        assert!(curve.kappa().iter().all(|k| (k + 1.0 / r).abs() < 1e-12));
    }

    #[test]
    fn rejects_vanishing_speed() {
        // z = e^{it} + e^{2it}/2 has z'(pi) = 0 (a cusp)
        let err = CurveSpec::new([(1, c(1.0, 0.0)), (2, c(0.5, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::VanishingSpeed { .. }), "{err}");
    }

    #[test]
    fn rejects_self_intersection() {
        // limacon with an inner loop
        let err = CurveSpec::new([(1, c(1.0, 0.0)), (2, c(0.8, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::SelfIntersection { .. }), "{err}");
    }

    #[test]
    fn rejects_clockwise() {
        let err = CurveSpec::new([(-1, c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::InvalidCurve(_)), "{err}");
    }

    #[test]
    fn rejects_bad_sample_count() {
        let spec = CurveSpec::circle(1.0).unwrap();
        assert!(build_curve(&spec, 63).is_err());
        assert!(build_curve(&spec, 32).is_err());
    }

    #[test]
    fn circle_geometric_factors() {
        let curve = build_curve(&CurveSpec::circle(1.0).unwrap(), 256).unwrap();
        let d = curve.geometric(GeometricFactor::DrsqDs);
        assert!(d.iter().all(|v| v.abs() < 1e-12));
        let c2 = curve.geometric(GeometricFactor::Cos2Theta);
        for j in 0..curve.len() {
            assert!((c2[j] + (2.0 * curve.s(j)).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_drsq_ds_matches_finite_difference() {
        let curve = build_curve(&CurveSpec::ellipse(1.2, 1.0).unwrap(), 4096).unwrap();
        let d = curve.geometric(GeometricFactor::DrsqDs);
        let n = curve.len();
        let h = curve.ds();
        let r2 = curve.r2();
        for j in 0..n {
            // fourth-order central difference
            let fd = (-r2[(j + 2) % n] + 8.0 * r2[(j + 1) % n] - 8.0 * r2[(j + n - 1) % n]
                + r2[(j + n - 2) % n])
                / (12.0 * h);
            assert!((fd - d[j]).abs() < 1e-8, "j={j} fd={fd} spec={}", d[j]);
        }
    }

    #[test]
    fn curvature_matches_parametric_formula() {
        let spec =
            CurveSpec::new([(1, c(1.0, 0.0)), (-2, c(0.1, 0.05)), (3, c(0.02, 0.0))]).unwrap();
        let curve = build_curve(&spec, 512).unwrap();
        for (j, &t) in curve.params().iter().enumerate() {
            assert!((curve.kappa()[j] - spec.curvature_at(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn arclength_is_uniform() {
        let spec = CurveSpec::ellipse(1.5, 1.0).unwrap();
        let curve = build_curve(&spec, 512).unwrap();
        for (j, &t) in curve.params().iter().enumerate() {
            assert!((spec.z(t) - curve.point(j)).norm() < 1e-14);
        }
        let expected = curve.ds();
        let n = curve.len();
        // chord vs arc: |chord - ds| ~ kappa^2 ds^3 / 24, so compare with the
        // exact arclength of each step instead.
        let map = ArclengthMap::new(&spec);
        for j in 0..n {
            let t0 = curve.params()[j];
            let t1 = if j + 1 == n {
                2.0 * PI
            } else {
                curve.params()[j + 1]
            };
            let step = map.s_of_t(t1) - map.s_of_t(t0);
            assert!((step - expected).abs() <= 1e-8 * expected);
        }
    }

    #[test]
    fn area_and_centroid() {
        let spec = CurveSpec::ellipse(1.2, 1.0)
            .unwrap()
            .translated(c(0.3, -0.2));
        let curve = build_curve(&spec, 256).unwrap();
        assert!((curve.area() - PI * 1.2).abs() < 1e-12);
        assert!((curve.centroid() - c(0.3, -0.2)).norm() < 1e-12);
    }

    #[test]
    fn angle_nodes_invert_theta() {
        let curve = build_curve(&CurveSpec::ellipse(1.5, 1.0).unwrap(), 512).unwrap();
        let nodes = curve.angle_nodes(64).unwrap();
        let spec = curve.spec();
        let map = ArclengthMap::new(spec);
        let th0 = curve.theta()[0];
        for (j, &s) in nodes.iter().enumerate() {
            // recover t from s by bisection on the exact arclength map
            let (mut lo, mut hi) = (0.0, 2.0 * PI);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if map.s_of_t(mid) < s {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            let th = spec.dz(0.5 * (lo + hi)).arg();
            let target = th0 + 2.0 * PI * j as f64 / 64.0;
            let mut d = th - target;
            d -= 2.0 * PI * (d / (2.0 * PI)).round();
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn contains_works() {
        let curve = build_curve(&CurveSpec::ellipse(1.5, 1.0).unwrap(), 256).unwrap();
        assert!(curve.contains(c(1.4, 0.0), 0.0));
        assert!(!curve.contains(c(1.6, 0.0), 0.0));
        assert!(!curve.contains(c(0.0, 1.01), 0.0));
        assert!(curve.contains(c(1.5000001, 0.0), 1e-6));
    }
}
