//! Periodic spectral calculus on uniform grids.
//!
//! All routines assume `n` samples of one period `[0, period)` taken at
//! `s_j = j * period / n`. Differentiation is done in Fourier space; the
//! Nyquist mode is dropped for odd derivative orders and kept for even ones.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Signed integer wavenumber of FFT bin `j` on an `n`-point grid.
#[inline]
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Forward DFT (unnormalized).
pub fn fft(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Inverse DFT, normalized so that `ifft(fft(v)) == v`.
pub fn ifft(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    let mut buf = spectrum.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// `order`-th derivative of periodic complex samples.
pub fn derivative(values: &[Complex64], period: f64, order: u32) -> Vec<Complex64> {
    let n = values.len();
    if order == 0 || n == 0 {
        return values.to_vec();
    }
    let mut spec = fft(values);
    let omega = 2.0 * PI / period;
    for (j, c) in spec.iter_mut().enumerate() {
        let k = wavenumber(j, n);
        if n.is_multiple_of(2) && j == n / 2 && order % 2 == 1 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let ik = Complex64::new(0.0, k as f64 * omega);
        *c *= ik.powu(order);
    }
    ifft(&spec)
}

/// `order`-th derivative of periodic real samples.
pub fn derivative_real(values: &[f64], period: f64, order: u32) -> Vec<f64> {
    let cv: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    derivative(&cv, period, order)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Periodic trapezoidal rule over one period.
pub fn trapezoid(values: &[f64], period: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() * period / values.len() as f64
}

/// Periodic trapezoidal rule for complex integrands.
pub fn trapezoid_complex(values: &[Complex64], period: f64) -> Complex64 {
    if values.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    values.iter().sum::<Complex64>() * (period / values.len() as f64)
}

/// Trigonometric interpolant of periodic samples, evaluable anywhere.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    period: f64,
    /// (wavenumber, coefficient) pairs; the Nyquist mode is split evenly
    /// between +n/2 and -n/2 so that real data stays real.
    modes: Vec<(i64, Complex64)>,
}

impl TrigInterpolant {
    pub fn new(values: &[Complex64], period: f64) -> Self {
        let n = values.len();
        let spec = fft(values);
        let inv = 1.0 / n as f64;
        let mut modes = Vec::with_capacity(n + 1);
        for (j, c) in spec.iter().enumerate() {
            let c = *c * inv;
            if n.is_multiple_of(2) && j == n / 2 {
                let half = c * 0.5;
                modes.push((j as i64, half));
                modes.push((-(j as i64), half));
            } else {
                modes.push((wavenumber(j, n), c));
            }
        }
        Self { period, modes }
    }

    pub fn from_real(values: &[f64], period: f64) -> Self {
        let cv: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::new(&cv, period)
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        let omega = 2.0 * PI / self.period;
        self.modes
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(1.0, k as f64 * omega * s))
            .sum()
    }

    /// First derivative of the interpolant.
    pub fn eval_derivative(&self, s: f64) -> Complex64 {
        let omega = 2.0 * PI / self.period;
        self.modes
            .iter()
            .map(|&(k, c)| {
                c * Complex64::new(0.0, k as f64 * omega)
                    * Complex64::from_polar(1.0, k as f64 * omega * s)
            })
            .sum()
    }
}
