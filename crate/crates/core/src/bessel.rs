//! Bessel functions of the first kind `J_n` for integer order, their
//! derivatives and their positive roots.
//!
//! Evaluation picks one of three routes:
//! - the power series when it does not cancel badly (`x <= 3` or `x^2 <= 4(n+1)`),
//! - Hankel's asymptotic expansion for `x >= 1000` with `n^2 <= x`,
//! - Miller's backward recurrence normalized by `J_0 + 2 sum J_2k = 1` otherwise.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

pub const MAX_ORDER: u32 = 50;
pub const MAX_ARG: f64 = 1e4;

fn check_range(n: u32, x: f64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::OutOfRange(format!(
            "Bessel order {n} exceeds {MAX_ORDER}"
        )));
    }
    if !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "Bessel argument {x} outside [0, {MAX_ARG}]"
        )));
    }
    Ok(())
}

/// `J_n(x)` for `0 <= n <= 50`, `0 <= x <= 1e4`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check_range(n, x)?;
    Ok(j_unchecked(n, x))
}

/// `J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2`, with `J_{-1} = -J_1`.
pub fn bessel_j_prime(n: u32, x: f64) -> Result<f64> {
    check_range(n, x)?;
    Ok(jp_unchecked(n, x))
}

pub(crate) fn j_unchecked(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if x <= 3.0 || x * x <= 4.0 * (nf + 1.0) {
        series(n, x)
    } else if x >= 1000.0 && nf * nf <= x {
        hankel(n, x)
    } else {
        miller(n as usize, x)[n as usize]
    }
}

pub(crate) fn jp_unchecked(n: u32, x: f64) -> f64 {
    if n == 0 {
        -j_unchecked(1, x)
    } else {
        0.5 * (j_unchecked(n - 1, x) - j_unchecked(n + 1, x))
    }
}

/// `J_n''(x)` from Bessel's equation; `x > 0`.
fn jpp_unchecked(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    -jp_unchecked(n, x) / x - (1.0 - nf * nf / (x * x)) * j_unchecked(n, x)
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k as f64 > half {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k / x^k, signs folded in below
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if a.abs() > last {
            break;
        }
        last = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let c = (n as f64 / 2.0 + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sc, cc) = c.sin_cos();
    let cos_chi = cx * cc + sx * sc;
    let sin_chi = sx * cc - cx * sc;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J_0(x), ..., J_max_order(x)` by normalized backward recurrence.
fn miller(max_order: usize, x: f64) -> Vec<f64> {
    let top = (max_order as f64).max(x) + 12.0 * x.cbrt() + 30.0;
    let mut start = top.ceil() as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-30;
    for k in (1..=start).rev() {
        vals[k - 1] = (2.0 * k as f64 / x) * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in &mut vals[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(max_order + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

/// `J_0(x), ..., J_max_order(x)` in one sweep. Any `max_order`, `x >= 0`.
pub fn bessel_j_sequence(max_order: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; max_order + 1];
        v[0] = 1.0;
        return v;
    }
    miller(max_order, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    /// zeros of `J_n`
    RootOfJn,
    /// zeros of `J_n'`
    RootOfJnPrime,
}

impl RootKind {
    fn label(self) -> &'static str {
        match self {
            RootKind::RootOfJn => "root_of_Jn",
            RootKind::RootOfJnPrime => "root_of_Jn_prime",
        }
    }
}

/// Increasing positive roots of `J_n` or `J_n'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselRootTable {
    pub order: u32,
    pub kind: RootKind,
    pub roots: Vec<f64>,
}

impl BesselRootTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("order,kind,index,root,residual\n");
        for (i, r) in self.roots.iter().enumerate() {
            let res = match self.kind {
                RootKind::RootOfJn => j_unchecked(self.order, *r),
                RootKind::RootOfJnPrime => jp_unchecked(self.order, *r),
            };
            let _ = writeln!(
                out,
                "{},{},{},{:.17e},{:.3e}",
                self.order,
                self.kind.label(),
                i + 1,
                r,
                res
            );
        }
        out
    }
}

pub const MAX_ROOT_COUNT: usize = 100;
const ROOT_RESIDUAL: f64 = 1e-12;

/// First `count` positive roots: sign scan on a `pi/4` grid, then safeguarded Newton.
pub fn bessel_roots(n: u32, kind: RootKind, count: usize) -> Result<BesselRootTable> {
    if count > MAX_ROOT_COUNT {
        return Err(Error::OutOfRange(format!(
            "root count {count} exceeds {MAX_ROOT_COUNT}"
        )));
    }
    check_range(n, 0.0)?;
    let (f, df): (fn(u32, f64) -> f64, fn(u32, f64) -> f64) = match kind {
        RootKind::RootOfJn => (j_unchecked, jp_unchecked),
        RootKind::RootOfJnPrime => (jp_unchecked, jpp_unchecked),
    };
    let step = PI / 4.0;
    let mut roots = Vec::with_capacity(count);
    let mut a = step;
    let mut fa = f(n, a);
    while roots.len() < count {
        let b = a + step;
        if b > MAX_ARG {
            return Err(Error::Bracketing {
                order: n,
                kind: kind.label(),
                lo: step,
                hi: a,
            });
        }
        let fb = f(n, b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let r = refine_root(n, f, df, a, b, fa);
            let res = f(n, r).abs();
            if res > ROOT_RESIDUAL {
                return Err(Error::Bracketing {
                    order: n,
                    kind: kind.label(),
                    lo: a,
                    hi: b,
                });
            }
            roots.push(r);
        }
        a = b;
        fa = fb;
    }
    Ok(BesselRootTable {
        order: n,
        kind,
        roots,
    })
}

fn refine_root(
    n: u32,
    f: fn(u32, f64) -> f64,
    df: fn(u32, f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    flo: f64,
) -> f64 {
    let sign_lo = flo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(n, x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / df(n, x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - x).abs() <= 4.0 * f64::EPSILON * x;
        x = next;
        if done || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    x
}

/// Disk eigenvalues `j^2 / R^2` with multiplicities, sorted, for radius `R`.
/// Neumann uses roots of `J_m'` (plus the zero eigenvalue), Dirichlet roots of `J_m`.
pub fn disk_spectrum(radius: f64, neumann: bool, count: usize) -> Vec<f64> {
    let kind = if neumann {
        RootKind::RootOfJnPrime
    } else {
        RootKind::RootOfJn
    };
    let per_order = count.div_ceil(2) + 2;
    let mut vals = Vec::new();
    if neumann {
        vals.push(0.0);
    }
    let mut m = 0u32;
    loop {
        let table = match bessel_roots(m, kind, per_order.min(MAX_ROOT_COUNT)) {
            Ok(t) => t,
            Err(_) => break,
        };
        let first = table.roots[0];
        // the first root of J_m (or J_m') grows past every needed value eventually
        if vals.len() >= count {
            let mut sorted = vals.clone();
            sorted.sort_by(f64::total_cmp);
            if first / radius > sorted[count - 1].sqrt() {
                break;
            }
        }
        for r in table.roots {
            let lam = (r / radius).powi(2);
            vals.push(lam);
            if m > 0 {
                vals.push(lam);
            }
        }
        m += 1;
        if m > MAX_ORDER {
            break;
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.truncate(count);
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values computed with mpmath at 30 digits
    const REFERENCE: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.765_197_686_557_966_6),
        (1, 1.0, 0.440_050_585_744_933_5),
        (0, 10.0, -0.245_935_764_451_348_34),
        (1, 10.0, 0.043_472_746_168_861_44),
        (5, 10.0, -0.234_061_528_186_793_64),
        (10, 10.0, 0.207_486_106_633_358_86),
        (0, 100.0, 0.019_985_850_304_223_122),
        (1, 100.0, -0.077_145_352_014_112_16),
        (50, 30.0, 2.058_165_663_156_417_8e-8),
        (3, 0.001, 2.083_333_203_125_003_4e-11),
        (0, 5000.0, -0.006_648_984_251_448_347_9),
        (7, 9999.5, -0.006_592_503_706_172_133),
        (50, 9999.5, 0.005_267_143_944_097_941_9),
        (20, 12.0, 2.512_132_702_453_995_3e-4),
        (0, 12.0, 0.047_689_310_796_833_537),
    ];

    #[test]
    fn matches_reference_values() {
        for &(n, x, want) in REFERENCE {
            let got = bessel_j(n, x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "J_{n}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(4, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn range_is_enforced() {
        assert!(bessel_j(51, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, 1.5e4).is_err());
        assert!(bessel_roots(0, RootKind::RootOfJn, 101).is_err());
    }

    #[test]
    fn evaluation_routes_agree() {
        for n in 0..=12u32 {
            for i in 0..60 {
                let x = 0.2 + 0.05 * i as f64;
                let s = series(n, x);
                let m = miller(n as usize, x)[n as usize];
                assert!((s - m).abs() < 1e-14, "n={n} x={x}");
            }
        }
        for n in [0u32, 1, 5, 20] {
            for x in [1500.0, 3000.3, 7777.7, 9999.0] {
                let h = hankel(n, x);
                let m = miller(n as usize, x)[n as usize];
                assert!((h - m).abs() < 1e-13, "n={n} x={x} h={h} m={m}");
            }
        }
    }

    #[test]
    fn first_roots() {
        let j0 = bessel_roots(0, RootKind::RootOfJn, 1).unwrap();
        assert!((j0.roots[0] - 2.404_825_557_695_773).abs() < 1e-13);
        let j0p = bessel_roots(0, RootKind::RootOfJnPrime, 1).unwrap();
        assert!((j0p.roots[0] - 3.831_705_970_207_512_3).abs() < 1e-13);
        let j3p = bessel_roots(3, RootKind::RootOfJnPrime, 1).unwrap();
        assert!((j3p.roots[0] - 4.201_188_941_210_528).abs() < 1e-13);
        let j1p = bessel_roots(1, RootKind::RootOfJnPrime, 1).unwrap();
        assert!(bessel_j_prime(1, j1p.roots[0]).unwrap().abs() < 1e-12);
        assert!((j1p.roots[0] - 1.841_183_781_340_659_3).abs() < 1e-13);
        assert!(bessel_j(0, 2.404_825_557_695_77).unwrap().abs() < 1e-12);
        assert!(bessel_j(1, 3.831_705_970_2).unwrap().abs() < 1e-10);
        assert!(bessel_j_prime(0, 3.831_705_970_2).unwrap().abs() < 1e-10);
        assert!(bessel_j_prime(1, 1.841_183_781_340_66).unwrap().abs() < 1e-10);
    }

    #[test]
    fn root_tables_are_certified() {
        for n in [0u32, 1, 2, 7, 25, 50] {
            for kind in [RootKind::RootOfJn, RootKind::RootOfJnPrime] {
                let t = bessel_roots(n, kind, 30).unwrap();
                for w in t.roots.windows(2) {
                    assert!(w[1] > w[0]);
                }
                for r in &t.roots {
                    let res = match kind {
                        RootKind::RootOfJn => bessel_j(n, *r).unwrap(),
                        RootKind::RootOfJnPrime => bessel_j_prime(n, *r).unwrap(),
                    };
                    assert!(res.abs() <= 1e-12);
                }
                // spacing tends to pi from above/below; late gaps are close to it
                let last = t.roots[29] - t.roots[28];
                assert!(last > PI - 0.1, "n={n} {kind:?} gap {last}");
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        for n in [0u32, 1, 3, 10] {
            for x in [0.5, 2.0, 7.3, 15.0, 40.0] {
                let h = 1e-5;
                let fd = (bessel_j(n, x + h).unwrap() - bessel_j(n, x - h).unwrap()) / (2.0 * h);
                assert!((fd - bessel_j_prime(n, x).unwrap()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sequence_matches_single_values() {
        let seq = bessel_j_sequence(30, 17.5);
        for (n, v) in seq.iter().enumerate() {
            assert!((v - bessel_j(n as u32, 17.5).unwrap()).abs() < 1e-14);
        }
        let zero = bessel_j_sequence(3, 0.0);
        assert_eq!(zero, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unit_disk_spectra() {
        let neu = disk_spectrum(1.0, true, 13);
        assert_eq!(neu[0], 0.0);
        assert!((neu[1] - 1.841_183_781_340_659_3f64.powi(2)).abs() < 1e-12);
        assert_eq!(neu[1], neu[2]);
        assert!((neu[5] - 3.831_705_970_207_512_3f64.powi(2)).abs() < 1e-11);
        assert!((neu[7] - 4.201_188_941_210_528_f64.powi(2)).abs() < 1e-11);
        let dir = disk_spectrum(1.0, false, 6);
        assert!((dir[0] - 2.404_825_557_695_773_f64.powi(2)).abs() < 1e-12);
        assert!((dir[1] - 3.831_705_970_207_512_3f64.powi(2)).abs() < 1e-11);
        assert_eq!(dir[1], dir[2]);
    }
}
