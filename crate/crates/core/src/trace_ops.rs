//! Boundary matrix operators realizing `∇`, `∇̄` and `R + iS` on trace data,
//! and closed-form traces of derivatives of the overdetermined solution ω.
//!
//! For a solution of `-Δu = μu` with trace `T(u) = (u|, ∂u/∂n|)`:
//!
//! ```text
//! T(∇u)        = M T(u),   M  = e^{iθ} [[d/ds, -i], [κ d/ds + i(d²/ds² + μ), -iκ + d/ds]]
//! T(∇̄u)        = M̄ T(u),   M̄  = e^{-iθ}[[d/ds,  i], [κ d/ds - i(d²/ds² + μ),  iκ + d/ds]]
//! T((R + iS)u) = N T(u),   N  = (-y + ix) M̄ + [[0, 0], [d/ds, i]]
//! ```
//!
//! The tables for ω assume the normalization `μ = 1`, `ω|∂Ω = 1`,
//! `∂ω/∂n|∂Ω = 0`.

use crate::curve::{BoundaryCurve, GeometricFactor, TraceData};
use crate::error::Result;
use crate::fields::{trace_of_field, trace_of_gradient, trace_of_rotation_scaling, HelmholtzField};
use crate::spectral;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `a0 f + a1 f' + a2 f''`, coefficients sampled on the arclength grid.
#[derive(Debug, Clone)]
pub struct ScalarOde {
    pub a0: Vec<Complex64>,
    pub a1: Vec<Complex64>,
    pub a2: Vec<Complex64>,
}

impl ScalarOde {
    fn zero(n: usize) -> Self {
        Self {
            a0: vec![ZERO; n],
            a1: vec![ZERO; n],
            a2: vec![ZERO; n],
        }
    }

    fn order(&self) -> u32 {
        let nz = |v: &[Complex64]| v.iter().any(|c| c.norm() > 0.0);
        if nz(&self.a2) {
            2
        } else if nz(&self.a1) {
            1
        } else {
            0
        }
    }

    fn scaled(&self, w: &[Complex64]) -> Self {
        let m = |v: &[Complex64]| v.iter().zip(w).map(|(a, b)| a * b).collect();
        Self {
            a0: m(&self.a0),
            a1: m(&self.a1),
            a2: m(&self.a2),
        }
    }
}

/// A 2×2 matrix of second-order ordinary differential operators in `s`,
/// times a pointwise prefactor.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    length: f64,
    pub prefactor: Vec<Complex64>,
    pub entries: [[ScalarOde; 2]; 2],
}

impl BoundaryOperator {
    /// Matrix `M` for `∇` on solutions of `-Δu = μu`.
    pub fn nabla(curve: &BoundaryCurve, mu: f64) -> Self {
        Self::gradient_like(curve, mu, 1.0)
    }

    /// Matrix `M̄` for `∇̄`.
    pub fn nabla_bar(curve: &BoundaryCurve, mu: f64) -> Self {
        Self::gradient_like(curve, mu, -1.0)
    }

    fn gradient_like(curve: &BoundaryCurve, mu: f64, sign: f64) -> Self {
        let n = curve.len();
        let si = I * sign;
        let kappa: Vec<Complex64> = curve
            .kappa()
            .iter()
            .map(|&k| Complex64::new(k, 0.0))
            .collect();
        let mut e = [
            [ScalarOde::zero(n), ScalarOde::zero(n)],
            [ScalarOde::zero(n), ScalarOde::zero(n)],
        ];
        e[0][0].a1 = vec![ONE; n];
        e[0][1].a0 = vec![-si; n];
        e[1][0].a0 = vec![si * mu; n];
        e[1][0].a1 = kappa.clone();
        e[1][0].a2 = vec![si; n];
        e[1][1].a0 = kappa.iter().map(|k| -si * k).collect();
        e[1][1].a1 = vec![ONE; n];
        let prefactor = curve
            .theta()
            .iter()
            .map(|&t| Complex64::from_polar(1.0, sign * t))
            .collect();
        Self {
            length: curve.length(),
            prefactor,
            entries: e,
        }
    }

    /// Matrix `N` for `R + iS = (-y + ix) ∇̄`.
    pub fn rotation_scaling(curve: &BoundaryCurve, mu: f64) -> Self {
        let bar = Self::nabla_bar(curve, mu);
        let n = curve.len();
        let w: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(-curve.y()[j], curve.x()[j]) * bar.prefactor[j])
            .collect();
        let [[a, b], [c, d]] = &bar.entries;
        let mut entries = [[a.scaled(&w), b.scaled(&w)], [c.scaled(&w), d.scaled(&w)]];
        entries[1][0].a1.iter_mut().for_each(|v| *v += ONE);
        entries[1][1].a0.iter_mut().for_each(|v| *v += I);
        Self {
            length: curve.length(),
            prefactor: vec![ONE; n],
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.prefactor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefactor.is_empty()
    }

    /// Highest derivative order present.
    pub fn order(&self) -> u32 {
        self.entries
            .iter()
            .flatten()
            .map(ScalarOde::order)
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, t: &TraceData) -> Result<TraceData> {
        let n = self.len();
        for got in [t.dirichlet.len(), t.neumann.len()] {
            if got != n {
                return Err(crate::Error::GridMismatch { expected: n, got });
            }
        }
        let inputs = [&t.dirichlet, &t.neumann];
        let derivs: Vec<[Vec<Complex64>; 3]> = inputs
            .iter()
            .map(|f| {
                [
                    f.to_vec(),
                    spectral::derivative(f, self.length, 1),
                    spectral::derivative(f, self.length, 2),
                ]
            })
            .collect();
        let mut out = [vec![ZERO; n], vec![ZERO; n]];
        for (r, row) in self.entries.iter().enumerate() {
            for (c, op) in row.iter().enumerate() {
                let [f, f1, f2] = &derivs[c];
                for j in 0..n {
                    out[r][j] += op.a0[j] * f[j] + op.a1[j] * f1[j] + op.a2[j] * f2[j];
                }
            }
            for j in 0..n {
                out[r][j] *= self.prefactor[j];
            }
        }
        let [d, g] = out;
        Ok(TraceData::new(d, g))
    }
}

/// `T(∇u)` from `T(u)` for solutions of `-Δu = u`.
pub fn apply_m(curve: &BoundaryCurve, t: &TraceData) -> Result<TraceData> {
    apply_m_mu(curve, t, 1.0)
}

/// `T(∇̄u)` from `T(u)` for solutions of `-Δu = u`.
pub fn apply_mbar(curve: &BoundaryCurve, t: &TraceData) -> Result<TraceData> {
    apply_mbar_mu(curve, t, 1.0)
}

/// `T((R + iS)u)` from `T(u)` for solutions of `-Δu = u`.
pub fn apply_n(curve: &BoundaryCurve, t: &TraceData) -> Result<TraceData> {
    apply_n_mu(curve, t, 1.0)
}

pub fn apply_m_mu(curve: &BoundaryCurve, t: &TraceData, mu: f64) -> Result<TraceData> {
    curve.check_trace(t)?;
    BoundaryOperator::nabla(curve, mu).apply(t)
}

pub fn apply_mbar_mu(curve: &BoundaryCurve, t: &TraceData, mu: f64) -> Result<TraceData> {
    curve.check_trace(t)?;
    BoundaryOperator::nabla_bar(curve, mu).apply(t)
}

pub fn apply_n_mu(curve: &BoundaryCurve, t: &TraceData, mu: f64) -> Result<TraceData> {
    curve.check_trace(t)?;
    BoundaryOperator::rotation_scaling(curve, mu).apply(t)
}

/// Derivatives of ω whose traces are tabulated in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaTrace {
    Wx,
    Wy,
    Wxx,
    Wxy,
    Wyy,
    Rw,
    RRw,
    GradRw,
    GradBarRw,
}

impl OmegaTrace {
    pub const TABLE: [OmegaTrace; 8] = [
        OmegaTrace::Wx,
        OmegaTrace::Wy,
        OmegaTrace::Wxx,
        OmegaTrace::Wxy,
        OmegaTrace::Wyy,
        OmegaTrace::Rw,
        OmegaTrace::RRw,
        OmegaTrace::GradRw,
    ];

    pub fn label(self) -> &'static str {
        match self {
            OmegaTrace::Wx => "wx",
            OmegaTrace::Wy => "wy",
            OmegaTrace::Wxx => "wxx",
            OmegaTrace::Wxy => "wxy",
            OmegaTrace::Wyy => "wyy",
            OmegaTrace::Rw => "Rw",
            OmegaTrace::RRw => "RRw",
            OmegaTrace::GradRw => "gradRw",
            OmegaTrace::GradBarRw => "gradbarRw",
        }
    }
}

/// Closed-form geometric trace of a derivative of ω.
pub fn omega_trace_table(curve: &BoundaryCurve, which: OmegaTrace) -> TraceData {
    let n = curve.len();
    let th = curve.theta();
    let kappa = curve.kappa();
    let half = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|a| 0.5 * a).collect() };
    let zeros = vec![0.0; n];
    match which {
        OmegaTrace::Wx => {
            TraceData::from_real(&zeros, &th.iter().map(|t| -t.sin()).collect::<Vec<_>>())
        }
        OmegaTrace::Wy => {
            TraceData::from_real(&zeros, &th.iter().map(|t| t.cos()).collect::<Vec<_>>())
        }
        OmegaTrace::Wxx => TraceData::from_real(
            &th.iter()
                .map(|t| -0.5 * (1.0 - (2.0 * t).cos()))
                .collect::<Vec<_>>(),
            &(0..n)
                .map(|j| kappa[j] * (2.0 * th[j]).cos())
                .collect::<Vec<_>>(),
        ),
        OmegaTrace::Wxy => TraceData::from_real(
            &th.iter().map(|t| 0.5 * (2.0 * t).sin()).collect::<Vec<_>>(),
            &(0..n)
                .map(|j| kappa[j] * (2.0 * th[j]).sin())
                .collect::<Vec<_>>(),
        ),
        OmegaTrace::Wyy => TraceData::from_real(
            &th.iter()
                .map(|t| -0.5 * (1.0 + (2.0 * t).cos()))
                .collect::<Vec<_>>(),
            &(0..n)
                .map(|j| -kappa[j] * (2.0 * th[j]).cos())
                .collect::<Vec<_>>(),
        ),
        OmegaTrace::Rw => {
            TraceData::from_real(&zeros, &half(curve.geometric(GeometricFactor::DrsqDs)))
        }
        OmegaTrace::RRw => {
            let h = half(curve.geometric(GeometricFactor::DrsqDs));
            let hp = half(curve.geometric(GeometricFactor::D2rsqDs2));
            let am = curve.geometric(GeometricFactor::AngularMomentum);
            TraceData::from_real(
                &h.iter().map(|v| -v * v).collect::<Vec<_>>(),
                &(0..n)
                    .map(|j| hp[j] * am[j] - kappa[j] * h[j] * h[j])
                    .collect::<Vec<_>>(),
            )
        }
        OmegaTrace::GradRw | OmegaTrace::GradBarRw => {
            let h = half(curve.geometric(GeometricFactor::DrsqDs));
            let hp = half(curve.geometric(GeometricFactor::D2rsqDs2));
            let t = TraceData::new(
                (0..n)
                    .map(|j| -I * Complex64::from_polar(1.0, th[j]) * h[j])
                    .collect(),
                (0..n)
                    .map(|j| -I * Complex64::from_polar(1.0, th[j]) * (kappa[j] * h[j] + I * hp[j]))
                    .collect(),
            );
            if which == OmegaTrace::GradBarRw {
                t.conj()
            } else {
                t
            }
        }
    }
}

/// The same traces obtained by composing `M` and `N` on `T(ω) = (1, 0)`.
///
/// For real `v`: `T(∂x v) = Re M T(v)`, `T(∂y v) = Im M T(v)`, `T(Rv) = Re N T(v)`.
pub fn omega_trace_by_composition(curve: &BoundaryCurve, which: OmegaTrace) -> Result<TraceData> {
    let n = curve.len();
    let omega = TraceData::from_real(&vec![1.0; n], &vec![0.0; n]);
    let dx = |t: &TraceData| apply_m(curve, t).map(|r| r.re());
    let dy = |t: &TraceData| apply_m(curve, t).map(|r| r.im());
    let rot = |t: &TraceData| apply_n(curve, t).map(|r| r.re());
    Ok(match which {
        OmegaTrace::Wx => dx(&omega)?,
        OmegaTrace::Wy => dy(&omega)?,
        OmegaTrace::Wxx => dx(&dx(&omega)?)?,
        OmegaTrace::Wxy => dy(&dx(&omega)?)?,
        OmegaTrace::Wyy => dy(&dy(&omega)?)?,
        OmegaTrace::Rw => rot(&omega)?,
        OmegaTrace::RRw => rot(&rot(&omega)?)?,
        OmegaTrace::GradRw => apply_m(curve, &rot(&omega)?)?,
        OmegaTrace::GradBarRw => apply_mbar(curve, &rot(&omega)?)?,
    })
}

/// Sup-norm residuals of the three commutative diagrams for one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub nabla: f64,
    pub nabla_bar: f64,
    pub rotation_scaling: f64,
}

impl CommutationReport {
    pub fn max(&self) -> f64 {
        self.nabla.max(self.nabla_bar).max(self.rotation_scaling)
    }
}

/// Compares `M T(u)`, `M̄ T(u)`, `N T(u)` with directly sampled traces of
/// `∇u`, `∇̄u`, `(R + iS)u`. The field may have any wavenumber `k`; the
/// operators are built with `μ = k²`.
pub fn verify_commutation<F: HelmholtzField + ?Sized>(
    curve: &BoundaryCurve,
    field: &F,
) -> Result<CommutationReport> {
    let mu = field.wavenumber().powi(2);
    let t = trace_of_field(curve, field);
    let m = apply_m_mu(curve, &t, mu)?;
    let mb = apply_mbar_mu(curve, &t, mu)?;
    let nn = apply_n_mu(curve, &t, mu)?;
    Ok(CommutationReport {
        nabla: m.sup_distance(&trace_of_gradient(curve, field, false)),
        nabla_bar: mb.sup_distance(&trace_of_gradient(curve, field, true)),
        rotation_scaling: nn.sup_distance(&trace_of_rotation_scaling(curve, field)),
    })
}
