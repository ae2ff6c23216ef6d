//! The form `B(φ, ψ; μ) = ∬ ∇φ·∇ψ̄ − μ φ ψ̄` on solution subspaces, evaluated
//! through its boundary reduction, and Gram-matrix verdicts on the
//! subspaces `W₁`, `W₂`, `V₁`, `V₂`.

use crate::curve::{BoundaryCurve, GeometricFactor, TraceData};
use crate::error::{Error, Result};
use crate::spectral;
use crate::trace_ops::{omega_trace_table, OmegaTrace};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative tolerance for the semi-negative verdict.
pub const DEFAULT_GRAM_TOL: f64 = 1e-8;
/// Smallest admissible singular value of the normalized member matrix.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// `∮ φ_D · conj(ψ_N) ds`, which equals `B(φ, ψ; μ)` when `ψ` solves `−Δψ = μψ`.
pub fn boundary_b(curve: &BoundaryCurve, phi: &TraceData, psi: &TraceData) -> Result<Complex64> {
    curve.check_trace(phi)?;
    curve.check_trace(psi)?;
    let f: Vec<Complex64> = phi
        .dirichlet
        .iter()
        .zip(&psi.neumann)
        .map(|(a, b)| a * b.conj())
        .collect();
    Ok(spectral::trapezoid_complex(&f, curve.length()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceName {
    #[serde(rename = "W1_thm31")]
    W1Thm31,
    #[serde(rename = "W2_thm31")]
    W2Thm31,
    #[serde(rename = "W1_thm34")]
    W1Thm34,
    #[serde(rename = "W2_thm34")]
    W2Thm34,
    V1,
    V2,
    #[serde(rename = "W1W2_thm31")]
    W1W2Thm31,
    #[serde(rename = "W1W2_thm34")]
    W1W2Thm34,
    #[serde(rename = "custom")]
    Custom,
}

/// One basis function, represented by its trace.
#[derive(Debug, Clone)]
pub struct Member {
    pub label: String,
    pub trace: TraceData,
    /// Vanishing Dirichlet trace; such entries are zeroed exactly.
    pub dirichlet_bc: bool,
    /// `Some(λ)` for an L²-normalized Dirichlet eigenfunction with eigenvalue
    /// `λ`; `None` for a solution of `−Δu = μu` at the form's own `μ`.
    pub eigenvalue: Option<f64>,
}

impl Member {
    pub fn solution(label: impl Into<String>, trace: TraceData) -> Self {
        Self {
            label: label.into(),
            trace,
            dirichlet_bc: false,
            eigenvalue: None,
        }
    }

    pub fn dirichlet_solution(label: impl Into<String>, trace: TraceData) -> Self {
        Self::solution(label, trace).with_dirichlet_bc()
    }

    pub fn eigenfunction(label: impl Into<String>, trace: TraceData, lambda: f64) -> Self {
        Self {
            label: label.into(),
            trace,
            dirichlet_bc: true,
            eigenvalue: Some(lambda),
        }
        .with_dirichlet_bc()
    }

    pub fn omega(curve: &BoundaryCurve, which: OmegaTrace) -> Self {
        let m = Self::solution(which.label(), omega_trace_table(curve, which));
        match which {
            OmegaTrace::Wx | OmegaTrace::Wy | OmegaTrace::Rw => m.with_dirichlet_bc(),
            _ => m,
        }
    }

    fn with_dirichlet_bc(mut self) -> Self {
        self.dirichlet_bc = true;
        self.trace
            .dirichlet
            .iter_mut()
            .for_each(|v| *v = Complex64::new(0.0, 0.0));
        self
    }

    fn is_solution_at(&self, mu: f64) -> bool {
        match self.eigenvalue {
            None => true,
            Some(l) => (l - mu).abs() <= 1e-12 * mu.abs().max(1.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub name: SubspaceName,
    pub members: Vec<Member>,
}

impl SubspaceBasis {
    pub fn new(name: SubspaceName, members: Vec<Member>) -> Result<Self> {
        let basis = Self { name, members };
        basis.validate()?;
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|m| m.label.clone()).collect()
    }

    /// `W₂` of the first theorem, equal to `V₁`: `{ω_xx, ω_xy, ω_yy}`.
    pub fn w2_thm31(curve: &BoundaryCurve) -> Result<Self> {
        let m =
            [OmegaTrace::Wxx, OmegaTrace::Wxy, OmegaTrace::Wyy].map(|w| Member::omega(curve, w));
        Self::new(SubspaceName::W2Thm31, m.to_vec())
    }

    pub fn v1(curve: &BoundaryCurve) -> Result<Self> {
        Ok(Self {
            name: SubspaceName::V1,
            ..Self::w2_thm31(curve)?
        })
    }

    /// `{∇Rω, ∇̄Rω}`.
    pub fn v2(curve: &BoundaryCurve) -> Result<Self> {
        let m = [OmegaTrace::GradRw, OmegaTrace::GradBarRw].map(|w| Member::omega(curve, w));
        Self::new(SubspaceName::V2, m.to_vec())
    }

    /// `V₁ ⊕ V₂`.
    pub fn w2_thm34(curve: &BoundaryCurve) -> Result<Self> {
        let mut members = Self::v1(curve)?.members;
        members.extend(Self::v2(curve)?.members);
        Self::new(SubspaceName::W2Thm34, members)
    }

    /// Dirichlet eigenfunction traces plus `ω_x`, `ω_y`, `Rω`.
    pub fn w1(name: SubspaceName, curve: &BoundaryCurve, eigen: Vec<Member>) -> Result<Self> {
        let mut members = eigen;
        for w in [OmegaTrace::Wx, OmegaTrace::Wy, OmegaTrace::Rw] {
            members.push(Member::omega(curve, w));
        }
        Self::new(name, members)
    }

    /// Direct sum of two bases under a new name.
    pub fn join(name: SubspaceName, a: &Self, b: &Self) -> Result<Self> {
        let members = a.members.iter().chain(&b.members).cloned().collect();
        Self::new(name, members)
    }

    /// Members must share a grid and be linearly independent as sampled
    /// (Dirichlet, Neumann) vectors after normalization.
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.members.first() else {
            return Err(Error::InvalidCurve("empty subspace basis".into()));
        };
        let n = first.trace.len();
        for m in &self.members {
            for got in [m.trace.dirichlet.len(), m.trace.neumann.len()] {
                if got != n {
                    return Err(Error::GridMismatch { expected: n, got });
                }
            }
        }
        independence_check(&self.members)
    }
}

/// Rejects the first member whose inclusion drops the smallest normalized
/// singular value below [`INDEPENDENCE_TOL`].
fn independence_check(members: &[Member]) -> Result<()> {
    let n = members[0].trace.len();
    let stacked = |m: &Member| -> Vec<Complex64> {
        m.trace
            .dirichlet
            .iter()
            .chain(&m.trace.neumann)
            .copied()
            .collect()
    };
    let l2 = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    // members are O(1) in size; a trace that is pure rounding noise is a zero member
    let floor = 1e-10 * (2.0 * n as f64).sqrt();
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for m in members {
        let mut v = stacked(m);
        let norm = l2(&v);
        if norm <= floor {
            return Err(Error::LinearDependence {
                member: m.label.clone(),
                sigma: norm / (2.0 * n as f64).sqrt(),
            });
        }
        v.iter_mut().for_each(|c| *c /= norm);
        cols.push(v);
        let a = DMatrix::from_fn(2 * n, cols.len(), |i, j| cols[j][i]);
        let sv = a.singular_values();
        let sigma = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if sigma < INDEPENDENCE_TOL {
            return Err(Error::LinearDependence {
                member: m.label.clone(),
                sigma,
            });
        }
    }
    Ok(())
}

/// `B(φ, ψ; μ)` for basis members, choosing the valid boundary reduction.
///
/// When neither member solves `−Δu = μu` both are Dirichlet eigenfunctions,
/// and `B = ∮ φ_D ψ̄_N ds + (λ_ψ − μ)⟨φ, ψ⟩` with orthonormal members.
pub fn member_b(
    curve: &BoundaryCurve,
    phi: &Member,
    psi: &Member,
    same: bool,
    mu: f64,
) -> Result<Complex64> {
    // For two solutions both reductions agree by Green's formula; prefer the
    // one that integrates against a vanishing Dirichlet trace.
    let psi_side = psi.is_solution_at(mu)
        && !(psi.dirichlet_bc && !phi.dirichlet_bc && phi.is_solution_at(mu));
    if psi_side {
        boundary_b(curve, &phi.trace, &psi.trace)
    } else if phi.is_solution_at(mu) {
        curve.check_trace(&phi.trace)?;
        curve.check_trace(&psi.trace)?;
        let f: Vec<Complex64> = phi
            .trace
            .neumann
            .iter()
            .zip(&psi.trace.dirichlet)
            .map(|(a, b)| a * b.conj())
            .collect();
        Ok(spectral::trapezoid_complex(&f, curve.length()))
    } else {
        let lambda = psi.eigenvalue.unwrap_or(mu);
        let volume = if same { lambda - mu } else { 0.0 };
        Ok(boundary_b(curve, &phi.trace, &psi.trace)? + volume)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramReport {
    pub subspace: SubspaceName,
    pub labels: Vec<String>,
    pub mu: f64,
    /// Hermitian part of the assembled matrix, row-major, `[re, im]` pairs.
    pub gram: Vec<Vec<[f64; 2]>>,
    /// Largest entry of the anti-Hermitian part before symmetrization.
    pub hermitian_defect: f64,
    pub spectrum: Vec<f64>,
    pub max_eigenvalue: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

impl GramReport {
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let [re, im] = self.gram[i][j];
        Complex64::new(re, im)
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.gram.len();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// Largest modulus over the block `rows × cols`.
    pub fn block_max(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> f64 {
        rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
            .map(|(i, j)| self.entry(i, j).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Gram matrix of `B(·,·; μ)` on the basis, its spectrum, and the verdict
/// `max eigenvalue ≤ rel_tol · ‖G‖_F`.
pub fn gram_on_subspace(
    curve: &BoundaryCurve,
    basis: &SubspaceBasis,
    mu: f64,
) -> Result<GramReport> {
    gram_on_subspace_with_tol(curve, basis, mu, DEFAULT_GRAM_TOL)
}

pub fn gram_on_subspace_with_tol(
    curve: &BoundaryCurve,
    basis: &SubspaceBasis,
    mu: f64,
    rel_tol: f64,
) -> Result<GramReport> {
    basis.validate()?;
    let k = basis.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| member_b(curve, &basis.members[i], &basis.members[j], i == j, mu))
        .collect::<Result<Vec<_>>>()?;
    let raw = DMatrix::from_row_slice(k, k, &values);
    let adj = raw.adjoint();
    let herm = (&raw + &adj) * Complex64::new(0.5, 0.0);
    let defect = (&raw - &adj)
        .iter()
        .map(|c| 0.5 * c.norm())
        .fold(0.0, f64::max);
    let norm = herm.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut spectrum = hermitian_eigenvalues(&herm);
    spectrum.sort_by(f64::total_cmp);
    let max_eigenvalue = spectrum.last().copied().unwrap_or(0.0);
    let tolerance = rel_tol * norm;
    Ok(GramReport {
        subspace: basis.name,
        labels: basis.labels(),
        mu,
        gram: (0..k)
            .map(|i| (0..k).map(|j| [herm[(i, j)].re, herm[(i, j)].im]).collect())
            .collect(),
        hermitian_defect: defect,
        spectrum,
        max_eigenvalue,
        tolerance,
        verdict: max_eigenvalue <= tolerance,
    })
}

/// Eigenvalues of a complex Hermitian matrix through its real symmetric
/// embedding `[[A, −B], [B, A]]`, whose spectrum doubles that of `A + iB`.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let c = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => c.re,
            (true, false) => -c.im,
            (false, true) => c.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Which curves an identity is expected to vanish on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityClass {
    /// Vanishes on every closed curve.
    Exact,
    /// Vanishes on centrally symmetric curves.
    Symmetry,
    /// Holds only if an overdetermined solution exists; reported only.
    Formal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub name: String,
    pub class: IdentityClass,
    pub value: [f64; 2],
    pub magnitude: f64,
    pub expected_zero: bool,
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub centrally_symmetric: bool,
    pub convex: bool,
    pub tolerance: f64,
    pub entries: Vec<IdentityEntry>,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// No entry that is expected to vanish fails.
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed != Some(false))
    }
}

/// Evaluates the orthogonality identities built from the trace tables.
///
/// The `ds`-forms are computed on the arclength grid; the `dθ/κ` forms are
/// computed by an independent uniform-θ quadrature and need a strictly
/// convex curve. Tables use the normalization `μ = 1`, `ω| = 1`; every
/// identity is homogeneous, so the vanishing verdicts do not depend on it.
pub fn orthogonality_identities(curve: &BoundaryCurve, tol: f64) -> Result<IdentityReport> {
    curve.require_strictly_convex()?;
    let symmetric = curve.central_symmetry_defect() < 1e-9 * curve.length();
    let len = curve.length();
    let th = curve.theta();
    let h: Vec<f64> = curve
        .geometric(GeometricFactor::DrsqDs)
        .iter()
        .map(|v| 0.5 * v)
        .collect();
    let mut entries = Vec::new();
    let mut push = |name: &str, class: IdentityClass, v: Complex64| {
        let expected_zero = match class {
            IdentityClass::Exact => true,
            IdentityClass::Symmetry => symmetric,
            IdentityClass::Formal => false,
        };
        entries.push(IdentityEntry {
            name: name.into(),
            class,
            value: [v.re, v.im],
            magnitude: v.norm(),
            expected_zero,
            passed: expected_zero.then_some(v.norm() <= tol),
        });
    };
    let ds_integral = |f: &dyn Fn(usize) -> Complex64| {
        let v: Vec<Complex64> = (0..curve.len()).map(f).collect();
        spectral::trapezoid_complex(&v, len)
    };

    for w in [OmegaTrace::Wx, OmegaTrace::Wy, OmegaTrace::Rw] {
        let t = omega_trace_table(curve, w);
        let name = format!("flux_{}", w.label());
        push(&name, IdentityClass::Exact, ds_integral(&|j| t.neumann[j]));
    }
    push(
        "rw_cos2theta_ds",
        IdentityClass::Formal,
        ds_integral(&|j| Complex64::new(h[j] * (2.0 * th[j]).cos(), 0.0)),
    );

    // θ-forms: ∫ (∂Rω/∂n) g(θ) / κ dθ at uniform θ nodes.
    let m = (2 * curve.len()).max(256);
    let nodes = curve.angle_nodes(m)?;
    let h_int = curve.interpolant(&h);
    let k_int = curve.interpolant(curve.kappa());
    let th0 = th[0];
    let theta_form = |g: &dyn Fn(f64) -> f64| -> Complex64 {
        let sum: f64 = nodes
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                let t = th0 + 2.0 * PI * j as f64 / m as f64;
                h_int.eval(s).re * g(t) / k_int.eval(s).re
            })
            .sum();
        Complex64::new(sum * 2.0 * PI / m as f64, 0.0)
    };
    push("rw_theta_mode0", IdentityClass::Exact, theta_form(&|_| 1.0));
    push(
        "rw_theta_cos2",
        IdentityClass::Formal,
        theta_form(&|t| (2.0 * t).cos()),
    );
    push(
        "rw_theta_sin2",
        IdentityClass::Formal,
        theta_form(&|t| (2.0 * t).sin()),
    );
    push(
        "rw_theta_cos1",
        IdentityClass::Symmetry,
        theta_form(&|t| t.cos()),
    );
    push(
        "rw_theta_sin1",
        IdentityClass::Symmetry,
        theta_form(&|t| t.sin()),
    );
    push(
        "rw_theta_cos3",
        IdentityClass::Symmetry,
        theta_form(&|t| (3.0 * t).cos()),
    );
    push(
        "rw_theta_sin3",
        IdentityClass::Symmetry,
        theta_form(&|t| (3.0 * t).sin()),
    );

    // Cross terms between V₁ and V₂.
    let g = omega_trace_table(curve, OmegaTrace::GradRw);
    let gb = omega_trace_table(curve, OmegaTrace::GradBarRw);
    for w in [OmegaTrace::Wxx, OmegaTrace::Wxy, OmegaTrace::Wyy] {
        let t = omega_trace_table(curve, w);
        for (v2, tag) in [(&g, "gradRw"), (&gb, "gradbarRw")] {
            let name = format!("cross_{}_{}", w.label(), tag);
            push(
                &name,
                IdentityClass::Symmetry,
                ds_integral(&|j| t.neumann[j] * v2.dirichlet[j]),
            );
        }
    }
    Ok(IdentityReport {
        centrally_symmetric: symmetric,
        convex: true,
        tolerance: tol,
        entries,
    })
}

/// `−½ ∫₀^{2π} f_i f_j dθ` with `f = (cos 2θ, sin 2θ, −cos 2θ)`: the
/// parametrization-free form of `B` on `{ω_xx, ω_xy, ω_yy}`.
pub fn w2_theta_gram(n_theta: usize) -> DMatrix<f64> {
    let f = |t: f64| [(2.0 * t).cos(), (2.0 * t).sin(), -(2.0 * t).cos()];
    let mut g = DMatrix::zeros(3, 3);
    for j in 0..n_theta {
        let v = f(2.0 * PI * j as f64 / n_theta as f64);
        for a in 0..3 {
            for b in 0..3 {
                g[(a, b)] -= 0.5 * v[a] * v[b] * 2.0 * PI / n_theta as f64;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_curve, CurveSpec};
    use crate::fields::{trace_of_field, HelmholtzField, PlaneWaves};
    use crate::quadrature::star_integral;

    fn curve(coefs: &[(i32, f64)]) -> BoundaryCurve {
        let spec = CurveSpec::new(coefs.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0)))).unwrap();
        build_curve(&spec, 512).unwrap()
    }

    #[test]
    fn dirichlet_member_annihilates() {
        let c = curve(&[(1, 1.0), (-1, 0.2)]);
        let a = Member::dirichlet_solution("a", trace_of_field(&c, &PlaneWaves::single(1.0, 0.3)));
        let b = trace_of_field(&c, &PlaneWaves::single(1.0, 1.3));
        assert_eq!(
            boundary_b(&c, &a.trace, &b).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn w2_gram_on_disk() {
        let c = curve(&[(1, 1.0)]);
        let rep = gram_on_subspace(&c, &SubspaceBasis::w2_thm31(&c).unwrap(), 1.0).unwrap();
        assert!((rep.entry(0, 0).re + PI / 2.0).abs() < 1e-10);
        assert!((rep.entry(0, 2).re - PI / 2.0).abs() < 1e-10);
        assert!(rep.verdict);
        assert!((rep.spectrum[0] + PI).abs() < 1e-10);
        assert!((rep.spectrum[1] + PI / 2.0).abs() < 1e-10);
        assert!(rep.spectrum[2].abs() < 1e-10);
    }

    #[test]
    fn w2_gram_matches_theta_oracle_off_disk() {
        let oracle = w2_theta_gram(64);
        for coefs in [
            &[(1, 1.25), (-1, 0.25)][..],
            &[(1, 1.0), (-2, 0.1)],
            &[(1, 1.0), (-3, 0.05)],
        ] {
            let c = curve(coefs);
            let rep = gram_on_subspace(&c, &SubspaceBasis::w2_thm31(&c).unwrap(), 1.0).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert!((rep.entry(i, j) - oracle[(i, j)]).norm() < 1e-9);
                }
            }
            assert!(rep.hermitian_defect < 1e-10);
            assert!(rep.verdict);
        }
    }

    #[test]
    fn hermitian_spectrum() {
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let ev = hermitian_eigenvalues(&h);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dependence_is_rejected_by_name() {
        let c = curve(&[(1, 1.1), (-1, 0.1)]);
        let a = Member::omega(&c, OmegaTrace::Wxx);
        let mut b = a.clone();
        b.label = "copy".into();
        match SubspaceBasis::new(SubspaceName::Custom, vec![a, b]) {
            Err(Error::LinearDependence { member, .. }) => assert_eq!(member, "copy"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disk_degenerates_rw() {
        let c = curve(&[(1, 1.0)]);
        assert!(SubspaceBasis::v2(&c).is_err());
    }

    #[test]
    fn green_reduction_matches_interior_quadrature() {
        let spec = CurveSpec::ellipse(1.5, 1.0).unwrap();
        let c = build_curve(&spec, 512).unwrap();
        let u = PlaneWaves::single(1.0, 0.2);
        let v = PlaneWaves::single(1.0, 1.9);
        let b = boundary_b(&c, &trace_of_field(&c, &u), &trace_of_field(&c, &v)).unwrap();
        let integrand = |p: Complex64| {
            let gu = u.gradient(p);
            let gv = v.gradient(p);
            gu[0] * gv[0].conj() + gu[1] * gv[1].conj() - u.value(p) * v.value(p).conj()
        };
        let interior = star_integral(&spec, Complex64::new(0.0, 0.0), 24, 256, integrand).unwrap();
        assert!((b - interior).norm() < 1e-6, "{b} {interior}");
    }

    #[test]
    fn identities_on_symmetric_oval() {
        for c in [
            curve(&[(1, 1.0), (-3, 0.05)]),
            curve(&[(1, 1.0), (-1, 0.15), (3, 0.03)]),
        ] {
            let rep = orthogonality_identities(&c, 1e-10).unwrap();
            assert!(rep.centrally_symmetric);
            assert!(rep.all_passed(), "{rep:#?}");
        }
        // the mode-2 identities need a genuine overdetermined solution
        let rep =
            orthogonality_identities(&curve(&[(1, 1.0), (-1, 0.15), (3, 0.03)]), 1e-10).unwrap();
        assert!(
            rep.get("rw_theta_sin2").unwrap().magnitude > 1e-3,
            "{rep:#?}"
        );
    }

    #[test]
    fn identities_require_convexity() {
        let c = curve(&[(1, 1.0), (-2, 0.3)]);
        assert!(matches!(
            orthogonality_identities(&c, 1e-10),
            Err(Error::NotConvex { .. })
        ));
    }
}
