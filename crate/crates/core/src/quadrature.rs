//! Interior quadrature, used as an independent oracle for boundary reductions.

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Integrates `f` over the region bounded by a curve that is star-shaped
/// about `center`, via the map `(ρ, t) ↦ center + ρ (z(t) − center)`:
/// Gauss–Legendre in `ρ`, trapezoid in `t`.
pub fn star_integral<F>(
    spec: &CurveSpec,
    center: Complex64,
    n_radial: usize,
    n_angular: usize,
    f: F,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let (x, w) = gauss_legendre(n_radial);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n_angular {
        let t = 2.0 * PI * j as f64 / n_angular as f64;
        let rel = spec.z(t) - center;
        let jac = (rel.conj() * spec.dz(t)).im;
        if jac <= 0.0 {
            return Err(Error::NotStarShaped {
                x: spec.z(t).re,
                y: spec.z(t).im,
            });
        }
        let mut line = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            let rho = 0.5 * (xi + 1.0);
            line += f(center + rel * rho) * (0.5 * wi * rho);
        }
        total += line * jac;
    }
    Ok(total * (2.0 * PI / n_angular as f64))
}
