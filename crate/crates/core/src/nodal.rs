//! Nodal domains and nodal-set graphs of sampled fields.
//!
//! A field is sampled on the cell centers of a square grid. Cells with
//! `|u| ≤ 2h|∇u|` form the zero band, a thickened copy of the nodal set.
//! Domains are counted two ways: by flood fill over signed cells, and by
//! Euler's formula on the planar graph extracted from the zero band together
//! with the boundary cycle.

use crate::curve::BoundaryCurve;
use crate::eigen::{expansion_gradient, expansion_value, EigenResult};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Minimum number of inside cells.
pub const MIN_INSIDE_CELLS: usize = 10_000;
/// Largest admissible zero-band fraction for flood fill.
pub const MAX_BAND_FRACTION: f64 = 0.2;
/// Zero-band half-width in units of `h|∇u|`.
const BAND_FACTOR: f64 = 2.0;
/// Node threshold factor: `|∇u| < NODE_FACTOR · h · max|D²u|`.
const NODE_FACTOR: f64 = 10.0;
/// Junction-probe ring radius in cells.
const RING_CELLS: f64 = 6.0;

#[derive(Debug, Clone)]
pub struct SampledField {
    pub h: f64,
    pub origin: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub inside: Vec<bool>,
    /// `NaN` outside.
    pub values: Vec<f64>,
    pub gradients: Vec<[f64; 2]>,
}

impl SampledField {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, idx: usize) -> Complex64 {
        let (i, j) = (idx % self.nx, idx / self.nx);
        Complex64::new(
            self.origin[0] + (i as f64 + 0.5) * self.h,
            self.origin[1] + (j as f64 + 0.5) * self.h,
        )
    }

    pub fn inside_count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    fn cell_at(&self, p: Complex64) -> Option<usize> {
        let fi = ((p.re - self.origin[0]) / self.h).floor();
        let fj = ((p.im - self.origin[1]) / self.h).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some(self.index(fi as usize, fj as usize))
    }

    fn neighbors4(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = ((idx % self.nx) as i64, (idx / self.nx) as i64);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .filter_map(move |(di, dj)| self.offset(i + di, j + dj))
    }

    fn neighbors8(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = ((idx % self.nx) as i64, (idx / self.nx) as i64);
        (-1..=1)
            .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
            .filter(|&d| d != (0, 0))
            .filter_map(move |(di, dj)| self.offset(i + di, j + dj))
    }

    fn offset(&self, i: i64, j: i64) -> Option<usize> {
        (i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then(|| self.index(i as usize, j as usize))
    }

    fn grad_norm(&self, idx: usize) -> f64 {
        let g = self.gradients[idx];
        g[0].hypot(g[1])
    }

    /// Inside cells with `|u| ≤ 2h|∇u|`.
    pub fn zero_band(&self) -> Vec<bool> {
        (0..self.inside.len())
            .map(|k| {
                self.inside[k] && self.values[k].abs() <= BAND_FACTOR * self.h * self.grad_norm(k)
            })
            .collect()
    }

    /// Inside cells with an outside 4-neighbour (or on the grid edge).
    pub fn boundary_cells(&self) -> Vec<bool> {
        (0..self.inside.len())
            .map(|k| {
                self.inside[k] && {
                    let nb: Vec<usize> = self.neighbors4(k).collect();
                    nb.len() < 4 || nb.iter().any(|&n| !self.inside[n])
                }
            })
            .collect()
    }

    /// Largest second-derivative magnitude, by differencing gradients.
    pub fn max_second_derivative(&self) -> f64 {
        let mut m = 0.0f64;
        for k in 0..self.inside.len() {
            if !self.inside[k] {
                continue;
            }
            let (i, j) = ((k % self.nx) as i64, (k / self.nx) as i64);
            for (di, dj) in [(1, 0), (0, 1)] {
                if let (Some(a), Some(b)) =
                    (self.offset(i + di, j + dj), self.offset(i - di, j - dj))
                {
                    if self.inside[a] && self.inside[b] {
                        for c in 0..2 {
                            m = m.max(
                                (self.gradients[a][c] - self.gradients[b][c]).abs()
                                    / (2.0 * self.h),
                            );
                        }
                    }
                }
            }
        }
        m
    }

    /// CSV `x,y,component` of zero-band cells, labelled by 8-connected component.
    pub fn zero_set_csv(&self) -> String {
        let band = self.zero_band();
        let (labels, _) = components(self, &band, true);
        let mut out = String::from("x,y,component\n");
        for k in 0..band.len() {
            if band[k] {
                let p = self.center(k);
                let _ = writeln!(out, "{:.8e},{:.8e},{}", p.re, p.im, labels[k]);
            }
        }
        out
    }
}

/// Even–odd scanline mask of cell centers against the sampled boundary.
fn scanline_mask(
    curve: &BoundaryCurve,
    origin: [f64; 2],
    h: f64,
    nx: usize,
    ny: usize,
) -> Vec<bool> {
    let pts = curve.points();
    let n = pts.len();
    let mut mask = vec![false; nx * ny];
    for j in 0..ny {
        let y = origin[1] + (j as f64 + 0.5) * h;
        let mut xs: Vec<f64> = (0..n)
            .filter_map(|e| {
                let (a, b) = (pts[e], pts[(e + 1) % n]);
                ((a.im > y) != (b.im > y))
                    .then(|| a.re + (y - a.im) / (b.im - a.im) * (b.re - a.re))
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks(2) {
            if let [x0, x1] = pair {
                let i0 = ((x0 - origin[0]) / h - 0.5).ceil().max(0.0) as usize;
                let i1 = ((x1 - origin[0]) / h - 0.5).floor();
                if i1 < 0.0 {
                    continue;
                }
                for i in i0..=(i1 as usize).min(nx - 1) {
                    mask[j * nx + i] = true;
                }
            }
        }
    }
    mask
}

/// Samples `value` (and `gradient`, or centered differences of `value`) at
/// the cell centers of an `h`-grid covering the domain.
pub fn sample_field<V, G>(
    curve: &BoundaryCurve,
    value: V,
    gradient: Option<G>,
    h: f64,
) -> Result<SampledField>
where
    V: Fn(Complex64) -> f64 + Sync,
    G: Fn(Complex64) -> [f64; 2] + Sync,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::OutOfRange(format!("grid spacing {h}")));
    }
    let (x0, x1, y0, y1) = curve.bounding_box();
    let origin = [x0 - 2.0 * h, y0 - 2.0 * h];
    let nx = ((x1 - x0) / h).ceil() as usize + 4;
    let ny = ((y1 - y0) / h).ceil() as usize + 4;
    if nx.saturating_mul(ny) > 50_000_000 {
        return Err(Error::OutOfRange(format!("grid {nx}×{ny} too large")));
    }
    let inside = scanline_mask(curve, origin, h, nx, ny);
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(Error::Field("empty interior".into()));
    }
    if count < MIN_INSIDE_CELLS {
        return Err(Error::OutOfRange(format!(
            "only {count} inside cells at h = {h}; need at least {MIN_INSIDE_CELLS}"
        )));
    }
    let center = |k: usize| {
        Complex64::new(
            origin[0] + ((k % nx) as f64 + 0.5) * h,
            origin[1] + ((k / nx) as f64 + 0.5) * h,
        )
    };
    let delta = 1e-5 * h.max(1e-3);
    let samples: Vec<(f64, [f64; 2])> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            if !inside[k] {
                return (f64::NAN, [0.0, 0.0]);
            }
            let p = center(k);
            let g = match &gradient {
                Some(g) => g(p),
                None => [
                    (value(p + delta) - value(p - delta)) / (2.0 * delta),
                    (value(p + Complex64::new(0.0, delta)) - value(p - Complex64::new(0.0, delta)))
                        / (2.0 * delta),
                ],
            };
            (value(p), g)
        })
        .collect();
    if samples
        .iter()
        .zip(&inside)
        .any(|((v, g), &ins)| ins && !(v.is_finite() && g[0].is_finite() && g[1].is_finite()))
    {
        return Err(Error::Field("non-finite sample inside the domain".into()));
    }
    let (values, gradients) = samples.into_iter().unzip();
    Ok(SampledField {
        h,
        origin,
        nx,
        ny,
        inside,
        values,
        gradients,
    })
}

/// Samples eigenfunction `index` of a computed spectrum on its own domain.
pub fn sample_eigenfunction(result: &EigenResult, index: usize, h: f64) -> Result<SampledField> {
    let mode = result.mode(index)?;
    let a = result.anchor();
    sample_field(
        result.curve(),
        |p| expansion_value(mode, p - a),
        Some(|p| expansion_gradient(mode, p - a)),
        h,
    )
}

/// Connected components of `set` (8- or 4-connectivity); labels are
/// `usize::MAX` outside the set.
fn components(f: &SampledField, set: &[bool], eight: bool) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; set.len()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..set.len() {
        if !set[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let nbs: Vec<usize> = if eight {
                f.neighbors8(c).collect()
            } else {
                f.neighbors4(c).collect()
            };
            for n in nbs {
                if set[n] && label[n] == usize::MAX {
                    label[n] = next;
                    queue.push_back(n);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

/// Number of sign regions among inside cells outside the zero band
/// (4-connected flood fill).
pub fn count_nodal_domains(field: &SampledField) -> Result<usize> {
    let band = field.zero_band();
    let inside = field.inside_count();
    let n_band = band.iter().filter(|&&b| b).count();
    if n_band as f64 > MAX_BAND_FRACTION * inside as f64 {
        return Err(Error::Field(format!(
            "zero band covers {n_band} of {inside} cells; refine the grid"
        )));
    }
    let pos: Vec<bool> = (0..band.len())
        .map(|k| field.inside[k] && !band[k] && field.values[k] > 0.0)
        .collect();
    let neg: Vec<bool> = (0..band.len())
        .map(|k| field.inside[k] && !band[k] && field.values[k] < 0.0)
        .collect();
    Ok(components(field, &pos, false).1 + components(field, &neg, false).1)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeInfo {
    pub x: f64,
    pub y: f64,
    pub on_boundary: bool,
    /// Incident segments of the matching graph vertex, if any.
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodalReport {
    /// Gradient zeros on the nodal set inside the domain.
    pub n_interior_nodes: usize,
    /// Gradient zeros on the nodal set at the boundary.
    pub n_boundary_nodes: usize,
    /// Graph edges (segments between vertices).
    pub n_segments: usize,
    /// Components of the nodal set; contains the boundary when requested.
    pub n_components: usize,
    /// Graph vertices: junctions of degree ≥ 3 plus one per vertex-free loop.
    pub n_vertices: usize,
    /// Components of the graph, which always contains the boundary cycle.
    pub n_graph_components: usize,
    pub n_domains_floodfill: usize,
    /// `n_graph_components + n_segments − n_vertices`.
    pub n_domains_euler: i64,
    pub nodes: Vec<NodeInfo>,
    pub vertex_degrees: Vec<usize>,
    /// Every interior node has ≥ 4 segments and every boundary node ≥ 3.
    pub local_structure_ok: bool,
    /// `S ≥ 2n₁ + 1.5n₂`, evaluated when the local structure holds.
    pub segment_bound: Option<bool>,
    pub clean: bool,
    pub flags: Vec<String>,
    pub h: f64,
}

impl NodalReport {
    pub fn euler_matches(&self) -> bool {
        self.n_domains_euler == self.n_domains_floodfill as i64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Number of maximal arcs of `set` met by a circle of radius `rho` about `p`.
fn ring_arcs(f: &SampledField, set: &[bool], p: Complex64, rho: f64) -> usize {
    let m = ((4.0 * PI * rho / f.h).ceil() as usize).max(32);
    let on: Vec<bool> = (0..m)
        .map(|t| {
            let q = p + Complex64::from_polar(rho, 2.0 * PI * t as f64 / m as f64);
            f.cell_at(q).is_some_and(|c| set[c])
        })
        .collect();
    // arcs are separated by gaps; gaps shorter than 2h are raster noise at
    // the ragged band edge
    let max_gap = ((2.0 * f.h) / (2.0 * PI * rho / m as f64)).ceil() as usize;
    let Some(start) = (0..m).find(|&t| on[t]) else {
        return 0;
    };
    let mut arcs = 0;
    let mut gap = 0;
    for step in 1..=m {
        if on[(start + step) % m] {
            if gap > max_gap {
                arcs += 1;
            }
            gap = 0;
        } else {
            gap += 1;
        }
    }
    arcs
}

/// Extracts the nodal graph and both domain counts.
///
/// The graph is built on the zero band plus the boundary cells, so the
/// boundary cycle is always part of it and Euler's formula counts interior
/// faces as `C + S − V`. `boundary_in_nodal_set` only affects which set is
/// reported as the nodal set (`n_components`).
pub fn extract_nodal_graph(
    field: &SampledField,
    boundary_in_nodal_set: bool,
) -> Result<NodalReport> {
    let h = field.h;
    let n_cells = field.inside.len();
    let band = field.zero_band();
    let boundary = field.boundary_cells();
    let graph: Vec<bool> = (0..n_cells).map(|k| band[k] || boundary[k]).collect();
    let d_ff = count_nodal_domains(field)?;
    let mut flags = Vec::new();

    let nodal_set: &[bool] = if boundary_in_nodal_set { &graph } else { &band };
    let (_, n_components) = components(field, nodal_set, true);
    let (_, n_graph_components) = components(field, &graph, true);

    // junction candidates: graph cells whose surrounding ring meets ≥ 3 arcs
    let rho = RING_CELLS * h;
    let cells: Vec<usize> = (0..n_cells).filter(|&k| graph[k]).collect();
    let degrees: Vec<(usize, usize)> = cells
        .par_iter()
        .map(|&k| (k, ring_arcs(field, &graph, field.center(k), rho)))
        .collect();
    let mut junction = vec![false; n_cells];
    for &(k, d) in &degrees {
        if d >= 3 || d == 0 {
            junction[k] = true;
        }
    }
    let (jlabel, n_clusters) = components(field, &junction, true);
    let mut vcenter = vec![Complex64::new(0.0, 0.0); n_clusters];
    let mut vcount = vec![0usize; n_clusters];
    for k in 0..n_cells {
        if junction[k] {
            vcenter[jlabel[k]] += field.center(k);
            vcount[jlabel[k]] += 1;
        }
    }
    for v in 0..n_clusters {
        vcenter[v] /= vcount[v] as f64;
    }
    let mut vradius = vec![0.0f64; n_clusters];
    for k in 0..n_cells {
        if junction[k] {
            let v = jlabel[k];
            vradius[v] = vradius[v].max((field.center(k) - vcenter[v]).norm());
        }
    }
    let mut discs: Vec<(Complex64, f64, usize)> = (0..n_clusters)
        .map(|v| (vcenter[v], vradius[v] + rho, vcount[v]))
        .collect();
    // a flat zero region can split one junction into several clusters
    'merge: loop {
        for a in 0..discs.len() {
            for b in a + 1..discs.len() {
                let (ca, ra, na) = discs[a];
                let (cb, rb, nb) = discs[b];
                if (ca - cb).norm() < ra + rb {
                    let c = (ca * na as f64 + cb * nb as f64) / (na + nb) as f64;
                    let r = ((c - ca).norm() + ra).max((c - cb).norm() + rb);
                    discs[a] = (c, r, na + nb);
                    discs.swap_remove(b);
                    continue 'merge;
                }
            }
        }
        break;
    }
    let n_junctions = discs.len();
    let vcenter: Vec<Complex64> = discs.iter().map(|d| d.0).collect();
    let vradius: Vec<f64> = discs.iter().map(|d| d.1).collect();
    let in_disc = |p: Complex64| (0..n_junctions).any(|v| (p - vcenter[v]).norm() <= vradius[v]);
    for v in 0..n_junctions {
        if vradius[v] > 4.0 * rho {
            flags.push(format!(
                "junction near ({:.4}, {:.4}) spans {:.1} cells; nearby vertices may be merged",
                vcenter[v].re,
                vcenter[v].im,
                vradius[v] / h
            ));
        }
    }
    if degrees
        .iter()
        .any(|&(k, d)| d == 1 && !in_disc(field.center(k)))
    {
        flags.push("dangling nodal arc (ring degree 1)".into());
    }

    // edges: graph cells outside every vertex disc
    let mut removed = vec![false; n_cells];
    for &k in &cells {
        if in_disc(field.center(k)) {
            removed[k] = true;
        }
    }
    let rest: Vec<bool> = (0..n_cells).map(|k| graph[k] && !removed[k]).collect();
    let (elabel, n_edges) = components(field, &rest, true);
    let mut touches = vec![false; n_edges];
    for k in 0..n_cells {
        if rest[k] && field.neighbors8(k).any(|n| removed[n]) {
            touches[elabel[k]] = true;
        }
    }
    let loops = touches.iter().filter(|&&t| !t).count();
    let n_vertices = n_junctions + loops;
    let n_domains_euler = n_graph_components as i64 + n_edges as i64 - n_vertices as i64;

    let vertex_degrees: Vec<usize> = (0..n_junctions)
        .map(|v| ring_arcs(field, &graph, vcenter[v], vradius[v] + 2.0 * h))
        .collect();

    // nodes: zero-band cells with |∇u| below the Taylor bound
    let eps_g = NODE_FACTOR * h * field.max_second_derivative();
    let near_boundary = boundary_layer(field, 2);
    let candidate: Vec<bool> = (0..n_cells)
        .map(|k| band[k] && field.grad_norm(k) < eps_g)
        .collect();
    let (nlabel, n_nodes) = components(field, &candidate, true);
    let mut ncenter = vec![Complex64::new(0.0, 0.0); n_nodes];
    let mut ncount = vec![0usize; n_nodes];
    let mut on_boundary = vec![false; n_nodes];
    for k in 0..n_cells {
        if candidate[k] {
            let c = nlabel[k];
            ncenter[c] += field.center(k);
            ncount[c] += 1;
            on_boundary[c] |= near_boundary[k];
        }
    }
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut local_ok = true;
    for c in 0..n_nodes {
        let p = ncenter[c] / ncount[c] as f64;
        let matched = (0..n_junctions)
            .filter(|&v| (p - vcenter[v]).norm() <= vradius[v] + 2.0 * rho)
            .min_by(|&a, &b| (p - vcenter[a]).norm().total_cmp(&(p - vcenter[b]).norm()));
        let degree = matched.map(|v| vertex_degrees[v]);
        let need = if on_boundary[c] { 3 } else { 4 };
        if degree.is_none_or(|d| d < need) {
            local_ok = false;
        }
        nodes.push(NodeInfo {
            x: p.re,
            y: p.im,
            on_boundary: on_boundary[c],
            degree,
        });
    }
    let n1 = nodes.iter().filter(|n| !n.on_boundary).count();
    let n2 = nodes.len() - n1;
    let segment_bound = local_ok.then_some(n_edges as f64 >= 2.0 * n1 as f64 + 1.5 * n2 as f64);
    if n_domains_euler != d_ff as i64 {
        flags.push(format!(
            "Euler count {n_domains_euler} differs from flood fill {d_ff}"
        ));
    }
    let clean = flags.is_empty();
    Ok(NodalReport {
        n_interior_nodes: n1,
        n_boundary_nodes: n2,
        n_segments: n_edges,
        n_components,
        n_vertices,
        n_graph_components,
        n_domains_floodfill: d_ff,
        n_domains_euler,
        nodes,
        vertex_degrees,
        local_structure_ok: local_ok,
        segment_bound,
        clean,
        flags,
        h,
    })
}

/// Inside cells within `depth` 4-steps of an outside cell.
fn boundary_layer(f: &SampledField, depth: usize) -> Vec<bool> {
    let mut layer = f.boundary_cells();
    for _ in 1..depth {
        let prev = layer.clone();
        for k in 0..prev.len() {
            if f.inside[k] && !prev[k] && f.neighbors4(k).any(|n| prev[n]) {
                layer[k] = true;
            }
        }
    }
    layer
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmReport {
    pub orthogonal: bool,
    pub zero_count: usize,
    pub bound_satisfied: bool,
}

/// Sturm's bound: a periodic function orthogonal to `1, cos kθ, sin kθ`
/// for `k ≤ N` changes sign at least `2(N + 1)` times per period.
pub fn sturm_zero_bound(samples: &[f64], max_mode: usize) -> Result<SturmReport> {
    let n = samples.len();
    if n < 8 * (max_mode + 1) {
        return Err(Error::OutOfRange(format!(
            "{n} samples; need at least {}",
            8 * (max_mode + 1)
        )));
    }
    let norm = (samples.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    let orthogonal = (0..=max_mode).all(|k| {
        let (c, s) = samples
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(c, s), (j, v)| {
                let t = 2.0 * PI * (k * j) as f64 / n as f64;
                (c + v * t.cos(), s + v * t.sin())
            });
        c.hypot(s) / n as f64 <= 1e-8 * norm.max(f64::MIN_POSITIVE)
    });
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let signs: Vec<f64> = samples
        .iter()
        .filter(|v| v.abs() > 1e-12 * peak)
        .map(|v| v.signum())
        .collect();
    let zero_count = if signs.is_empty() {
        0
    } else {
        (0..signs.len())
            .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
            .count()
    };
    Ok(SturmReport {
        orthogonal,
        zero_count,
        bound_satisfied: orthogonal && zero_count >= 2 * (max_mode + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{bessel_j, bessel_roots, RootKind};
    use crate::curve::{build_curve, CurveSpec};

    type Grad = fn(Complex64) -> [f64; 2];

    fn unit_disk() -> BoundaryCurve {
        build_curve(&CurveSpec::circle(1.0).unwrap(), 1024).unwrap()
    }

    fn disk_mode(m: u32, h: f64) -> SampledField {
        let k = bessel_roots(m, RootKind::RootOfJn, 1).unwrap().roots[0];
        let c = unit_disk();
        sample_field(
            &c,
            move |p| bessel_j(m, k * p.norm()).unwrap() * (m as f64 * p.arg()).cos(),
            None::<Grad>,
            h,
        )
        .unwrap()
    }

    #[test]
    fn constant_field_has_one_domain() {
        let f = sample_field(&unit_disk(), |_| 1.0, Some(|_| [0.0, 0.0]), 0.01).unwrap();
        assert!(f.zero_band().iter().all(|&b| !b));
        assert_eq!(count_nodal_domains(&f).unwrap(), 1);
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(sample_field(&unit_disk(), |_| 1.0, None::<Grad>, 0.05).is_err());
    }

    #[test]
    fn field_x_zero_set_is_a_diameter() {
        let f = sample_field(&unit_disk(), |p| p.re, Some(|_| [1.0, 0.0]), 0.01).unwrap();
        let band = f.zero_band();
        for k in 0..band.len() {
            if band[k] {
                assert!(f.center(k).re.abs() <= 0.02 + 1e-12);
            }
        }
        assert_eq!(count_nodal_domains(&f).unwrap(), 2);
    }

    #[test]
    fn disk_mode_one() {
        let f = disk_mode(1, 0.01);
        let rep = extract_nodal_graph(&f, true).unwrap();
        assert_eq!(rep.n_domains_floodfill, 2);
        assert_eq!(rep.n_vertices, 2, "{rep:#?}");
        assert_eq!(rep.n_segments, 3);
        assert_eq!(rep.n_components, 1);
        assert!(rep.euler_matches() && rep.clean, "{rep:#?}");
    }

    #[test]
    fn disk_mode_two() {
        let f = disk_mode(2, 0.01);
        let rep = extract_nodal_graph(&f, true).unwrap();
        assert_eq!(rep.n_domains_floodfill, 4);
        assert_eq!(rep.n_vertices, 5, "{rep:#?}");
        assert_eq!(rep.n_segments, 8);
        assert_eq!(rep.n_interior_nodes, 1);
        assert_eq!(rep.n_boundary_nodes, 4);
        assert_eq!(rep.segment_bound, Some(true));
        assert!(rep.euler_matches() && rep.clean, "{rep:#?}");
    }

    #[test]
    fn counts_stable_under_refinement() {
        for m in [1, 2, 3] {
            let a = extract_nodal_graph(&disk_mode(m, 0.012), true).unwrap();
            let b = extract_nodal_graph(&disk_mode(m, 0.006), true).unwrap();
            assert_eq!(a.n_domains_floodfill, 2 * m as usize);
            assert_eq!(a.n_domains_floodfill, b.n_domains_floodfill);
            assert_eq!((a.n_vertices, a.n_segments), (b.n_vertices, b.n_segments));
            assert!(a.clean && b.clean, "{a:#?}");
        }
    }

    #[test]
    fn zero_set_export() {
        let f = disk_mode(1, 0.01);
        let csv = f.zero_set_csv();
        assert!(csv.starts_with("x,y,component\n"));
        assert!(csv.lines().count() > 100);
    }

    #[test]
    fn disconnected_nodal_set() {
        let c = build_curve(&CurveSpec::circle(2.0).unwrap(), 1024).unwrap();
        let a = Complex64::new(-0.9, 0.0);
        let b = Complex64::new(0.9, 0.2);
        let f = sample_field(
            &c,
            move |p| ((p - a).norm_sqr() - 0.25) * ((p - b).norm_sqr() - 0.36),
            None::<Grad>,
            0.015,
        )
        .unwrap();
        let rep = extract_nodal_graph(&f, false).unwrap();
        assert_eq!(rep.n_components, 2);
        assert_eq!(rep.n_domains_floodfill, 3);
        assert!(rep.euler_matches(), "{rep:#?}");
    }

    #[test]
    fn sturm_examples() {
        let n = 64;
        let th = |j: usize| 2.0 * PI * j as f64 / n as f64;
        let c4: Vec<f64> = (0..n).map(|j| (4.0 * th(j)).cos()).collect();
        let r = sturm_zero_bound(&c4, 3).unwrap();
        assert!(r.orthogonal && r.bound_satisfied);
        assert_eq!(r.zero_count, 8);
        let c2: Vec<f64> = (0..n).map(|j| (2.0 * th(j)).cos()).collect();
        let r = sturm_zero_bound(&c2, 3).unwrap();
        assert!(!r.orthogonal && !r.bound_satisfied);
        assert!(sturm_zero_bound(&c2[..16], 3).is_err());
    }
}
