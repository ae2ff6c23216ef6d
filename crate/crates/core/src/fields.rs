//! Closed-form solutions of `-Δu = k² u` with analytic derivatives.
//!
//! These are reference fields: their boundary traces and the traces of
//! their derivatives are computed pointwise from Cartesian derivatives,
//! never through the boundary operators they are used to check.

use crate::bessel::bessel_j_sequence;
use crate::curve::{BoundaryCurve, TraceData};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A smooth solution of `-Δu = k² u` with exact first and second derivatives.
pub trait HelmholtzField: Sync {
    fn wavenumber(&self) -> f64;
    fn value(&self, p: Complex64) -> Complex64;
    /// `[u_x, u_y]`
    fn gradient(&self, p: Complex64) -> [Complex64; 2];
    /// `[u_xx, u_xy, u_yy]`
    fn hessian(&self, p: Complex64) -> [Complex64; 3];
}

/// Superposition `sum_j a_j exp(i k (x cos α_j + y sin α_j))`.
#[derive(Debug, Clone)]
pub struct PlaneWaves {
    pub k: f64,
    pub waves: Vec<(Complex64, f64)>,
}

impl PlaneWaves {
    pub fn single(k: f64, angle: f64) -> Self {
        Self {
            k,
            waves: vec![(Complex64::new(1.0, 0.0), angle)],
        }
    }

    /// `cos(k (x cos α + y sin α) + phase)`, a real field.
    pub fn cosine(k: f64, angle: f64, phase: f64) -> Self {
        let a = Complex64::from_polar(0.5, phase);
        Self {
            k,
            waves: vec![(a, angle), (a.conj(), angle + std::f64::consts::PI)],
        }
    }

    fn each(&self, p: Complex64) -> impl Iterator<Item = (Complex64, f64, f64)> + '_ {
        self.waves.iter().map(move |&(a, ang)| {
            let (s, c) = ang.sin_cos();
            let u = a * Complex64::from_polar(1.0, self.k * (p.re * c + p.im * s));
            (u, c, s)
        })
    }
}

impl HelmholtzField for PlaneWaves {
    fn wavenumber(&self) -> f64 {
        self.k
    }

    fn value(&self, p: Complex64) -> Complex64 {
        self.each(p).map(|(u, _, _)| u).sum()
    }

    fn gradient(&self, p: Complex64) -> [Complex64; 2] {
        let mut g = [Complex64::new(0.0, 0.0); 2];
        for (u, c, s) in self.each(p) {
            g[0] += I * self.k * c * u;
            g[1] += I * self.k * s * u;
        }
        g
    }

    fn hessian(&self, p: Complex64) -> [Complex64; 3] {
        let k2 = self.k * self.k;
        let mut h = [Complex64::new(0.0, 0.0); 3];
        for (u, c, s) in self.each(p) {
            h[0] -= k2 * c * c * u;
            h[1] -= k2 * c * s * u;
            h[2] -= k2 * s * s * u;
        }
        h
    }
}

/// `sum_m c_m J_m(k r) exp(i m φ)` in polar coordinates about the origin.
///
/// Derivatives use the ladder identities
/// `∇(J_m e^{imφ}) = -k J_{m+1} e^{i(m+1)φ}` and
/// `∇̄(J_m e^{imφ}) = k J_{m-1} e^{i(m-1)φ}` with `∇ = ∂x + i∂y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBesselField {
    pub k: f64,
    pub terms: Vec<(i32, Complex64)>,
}

impl FourierBesselField {
    pub fn new(k: f64, terms: Vec<(i32, Complex64)>) -> Self {
        let mut f = Self {
            k,
            terms: Vec::new(),
        };
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    /// `J_m(k r) cos(m φ)`
    pub fn cos_mode(k: f64, m: i32) -> Self {
        if m == 0 {
            return Self::new(k, vec![(0, Complex64::new(1.0, 0.0))]);
        }
        // J_{-m} e^{-imφ} = (-1)^m J_m e^{-imφ}
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Self::new(
            k,
            vec![
                (m, Complex64::new(0.5, 0.0)),
                (-m, Complex64::new(0.5 * sign, 0.0)),
            ],
        )
    }

    /// `J_m(k r) sin(m φ)`
    pub fn sin_mode(k: f64, m: i32) -> Self {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Self::new(
            k,
            vec![
                (m, Complex64::new(0.0, -0.5)),
                (-m, Complex64::new(0.0, 0.5 * sign)),
            ],
        )
    }

    fn add_term(&mut self, m: i32, c: Complex64) {
        match self.terms.iter_mut().find(|(mm, _)| *mm == m) {
            Some(slot) => slot.1 += c,
            None => self.terms.push((m, c)),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            k: self.k,
            terms: self.terms.iter().map(|&(m, c)| (m, c * a)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    /// `∇ = ∂x + i∂y`
    pub fn nabla(&self) -> Self {
        Self::new(
            self.k,
            self.terms
                .iter()
                .map(|&(m, c)| (m + 1, -self.k * c))
                .collect(),
        )
    }

    /// `∇̄ = ∂x - i∂y`
    pub fn nabla_bar(&self) -> Self {
        Self::new(
            self.k,
            self.terms
                .iter()
                .map(|&(m, c)| (m - 1, self.k * c))
                .collect(),
        )
    }

    pub fn dx(&self) -> Self {
        self.nabla()
            .add(&self.nabla_bar())
            .scale(Complex64::new(0.5, 0.0))
    }

    pub fn dy(&self) -> Self {
        self.nabla()
            .add(&self.nabla_bar().scale(Complex64::new(-1.0, 0.0)))
            .scale(Complex64::new(0.0, -0.5))
    }

    /// Rotation generator `R = -y∂x + x∂y = ∂φ`.
    pub fn rotation(&self) -> Self {
        Self::new(
            self.k,
            self.terms
                .iter()
                .map(|&(m, c)| (m, I * m as f64 * c))
                .collect(),
        )
    }

    /// Radial derivative `∂r`, evaluated directly (used for normals on centered circles).
    pub fn radial_derivative(&self, p: Complex64) -> Complex64 {
        // ∂r = cos φ ∂x + sin φ ∂y
        let g = self.gradient(p);
        let phi = p.arg();
        g[0] * phi.cos() + g[1] * phi.sin()
    }
}

impl HelmholtzField for FourierBesselField {
    fn wavenumber(&self) -> f64 {
        self.k
    }

    fn value(&self, p: Complex64) -> Complex64 {
        let mmax = self
            .terms
            .iter()
            .map(|(m, _)| m.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let r = p.norm();
        let phi = if r > 0.0 { p.arg() } else { 0.0 };
        let j = bessel_j_sequence(mmax, self.k * r);
        self.terms
            .iter()
            .map(|&(m, c)| {
                let am = m.unsigned_abs() as usize;
                let jm = if m < 0 && am % 2 == 1 { -j[am] } else { j[am] };
                c * jm * Complex64::from_polar(1.0, m as f64 * phi)
            })
            .sum()
    }

    fn gradient(&self, p: Complex64) -> [Complex64; 2] {
        [self.dx().value(p), self.dy().value(p)]
    }

    fn hessian(&self, p: Complex64) -> [Complex64; 3] {
        let dx = self.dx();
        let dy = self.dy();
        [dx.dx().value(p), dx.dy().value(p), dy.dy().value(p)]
    }
}

/// `T(u)` sampled on the curve grid.
pub fn trace_of_field<F: HelmholtzField + ?Sized>(curve: &BoundaryCurve, f: &F) -> TraceData {
    let n = curve.len();
    let mut d = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let p = curve.point(j);
        let (n1, n2) = curve.normal(j);
        let grad = f.gradient(p);
        d.push(f.value(p));
        g.push(grad[0] * n1 + grad[1] * n2);
    }
    TraceData::new(d, g)
}

/// `T(∇u)` (or `T(∇̄u)` when `conjugate` is set) from Cartesian derivatives.
pub fn trace_of_gradient<F: HelmholtzField + ?Sized>(
    curve: &BoundaryCurve,
    f: &F,
    conjugate: bool,
) -> TraceData {
    let sgn = if conjugate { -1.0 } else { 1.0 };
    let n = curve.len();
    let mut d = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let p = curve.point(j);
        let (n1, n2) = curve.normal(j);
        let [ux, uy] = f.gradient(p);
        let [uxx, uxy, uyy] = f.hessian(p);
        d.push(ux + sgn * I * uy);
        let phi_x = uxx + sgn * I * uxy;
        let phi_y = uxy + sgn * I * uyy;
        g.push(phi_x * n1 + phi_y * n2);
    }
    TraceData::new(d, g)
}

/// `T((R + iS)u)` with `R = -y∂x + x∂y`, `S = x∂x + y∂y`, from Cartesian derivatives.
pub fn trace_of_rotation_scaling<F: HelmholtzField + ?Sized>(
    curve: &BoundaryCurve,
    f: &F,
) -> TraceData {
    let n = curve.len();
    let mut d = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let p = curve.point(j);
        let (x, y) = (p.re, p.im);
        let (n1, n2) = curve.normal(j);
        let [ux, uy] = f.gradient(p);
        let [uxx, uxy, uyy] = f.hessian(p);
        let ru = -y * ux + x * uy;
        let su = x * ux + y * uy;
        let ru_x = -y * uxx + uy + x * uxy;
        let ru_y = -ux - y * uxy + x * uyy;
        let su_x = ux + x * uxx + y * uxy;
        let su_y = x * uxy + uy + y * uyy;
        d.push(ru + I * su);
        g.push((ru_x + I * su_x) * n1 + (ru_y + I * su_y) * n2);
    }
    TraceData::new(d, g)
}
