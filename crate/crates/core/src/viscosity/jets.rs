use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::solver::{Mesh, ScalarField};

/// Gradient and Hessian standing in for a test function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointJet {
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

impl PointJet {
    /// Builds a jet, symmetrizing the Hessian.
    pub fn new(gradient: [f64; 2], hessian: [[f64; 2]; 2]) -> Self {
        let off = 0.5 * (hessian[0][1] + hessian[1][0]);
        Self {
            gradient,
            hessian: [[hessian[0][0], off], [off, hessian[1][1]]],
        }
    }

    pub fn grad_norm(&self) -> f64 {
        self.gradient[0].hypot(self.gradient[1])
    }

    /// `(D²u) ∇u · ∇u`, not normalized.
    pub fn infinity_laplacian(&self) -> f64 {
        let [p, q] = self.gradient;
        let h = &self.hessian;
        h[0][0] * p * p + (h[0][1] + h[1][0]) * p * q + h[1][1] * q * q
    }

    pub fn laplacian(&self) -> f64 {
        self.hessian[0][0] + self.hessian[1][1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRule {
    /// Minimum graph distance to the boundary.
    pub min_hops: usize,
    /// Smallest accepted ratio of extreme singular values of the scaled
    /// design matrix.
    pub min_conditioning: u32,
}

impl Default for SampleRule {
    fn default() -> Self {
        Self {
            min_hops: 2,
            min_conditioning: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledJet {
    pub vertex: usize,
    pub point: [f64; 2],
    pub jet: PointJet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JetSample {
    pub jets: Vec<SampledJet>,
    /// Eligible vertices dropped for a rank-deficient neighbourhood.
    pub skipped: usize,
}

/// Least-squares quadratic fit at `center` over `neigh` (which includes the
/// centre). Coordinates are scaled by the neighbourhood radius.
fn fit_quadratic(
    mesh: &Mesh,
    field: &ScalarField,
    center: usize,
    neigh: &[usize],
    rule: &SampleRule,
) -> Option<PointJet> {
    if neigh.len() < 6 {
        return None;
    }
    let x0 = mesh.vertices[center];
    let radius = neigh
        .iter()
        .map(|&v| (mesh.vertices[v][0] - x0[0]).hypot(mesh.vertices[v][1] - x0[1]))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return None;
    }
    let rows = neigh.len();
    let mut a = DMatrix::<f64>::zeros(rows, 6);
    let mut b = DVector::<f64>::zeros(rows);
    for (i, &v) in neigh.iter().enumerate() {
        let dx = (mesh.vertices[v][0] - x0[0]) / radius;
        let dy = (mesh.vertices[v][1] - x0[1]) / radius;
        let row = [1.0, dx, dy, 0.5 * dx * dx, dx * dy, 0.5 * dy * dy];
        for (j, val) in row.iter().enumerate() {
            a[(i, j)] = *val;
        }
        b[i] = field.values[v];
    }
    let svd = a.svd(true, true);
    let (smax, smin) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    if !(smin > smax * 10f64.powi(-(rule.min_conditioning as i32))) {
        return None;
    }
    let c = svd.solve(&b, 0.0).ok()?;
    let (r1, r2) = (radius, radius * radius);
    Some(PointJet::new(
        [c[1] / r1, c[2] / r1],
        [[c[3] / r2, c[4] / r2], [c[4] / r2, c[5] / r2]],
    ))
}

/// Jets at every vertex at least `rule.min_hops` edges from the boundary,
/// fitted over the vertex's 2-ring.
pub fn jets_from_field(mesh: &Mesh, field: &ScalarField, rule: &SampleRule) -> JetSample {
    let adj = mesh.adjacency();
    let hops = mesh.boundary_hops();
    let mut jets = Vec::new();
    let mut skipped = 0;
    for v in 0..mesh.n_vertices() {
        if hops[v] < rule.min_hops {
            continue;
        }
        let mut ring: Vec<usize> = std::iter::once(v)
            .chain(adj[v].iter().copied())
            .chain(adj[v].iter().flat_map(|&w| adj[w].iter().copied()))
            .collect();
        ring.sort_unstable();
        ring.dedup();
        match fit_quadratic(mesh, field, v, &ring, rule) {
            Some(jet) => jets.push(SampledJet {
                vertex: v,
                point: mesh.vertices[v],
                jet,
            }),
            None => skipped += 1,
        }
    }
    JetSample { jets, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{triangulate, DomainSpec};

    #[test]
    fn quadratic_recovered_exactly() {
        let mesh = triangulate(&DomainSpec::disk(1.0), 0.1).unwrap();
        let q = |p: [f64; 2]| 0.3 + 1.5 * p[0] - 0.7 * p[1] + 2.0 * p[0] * p[0] - 1.2 * p[0] * p[1] + 0.4 * p[1] * p[1];
        let field = ScalarField::from_fn(&mesh, q);
        let sample = jets_from_field(&mesh, &field, &SampleRule::default());
        assert!(!sample.jets.is_empty());
        assert_eq!(sample.skipped, 0);
        for s in &sample.jets {
            let [x, y] = s.point;
            let g = s.jet.gradient;
            assert!((g[0] - (1.5 + 4.0 * x - 1.2 * y)).abs() < 1e-9);
            assert!((g[1] - (-0.7 - 1.2 * x + 0.8 * y)).abs() < 1e-9);
            let h = s.jet.hessian;
            assert!((h[0][0] - 4.0).abs() < 1e-9 && (h[0][1] + 1.2).abs() < 1e-9 && (h[1][1] - 0.8).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_neighbours_never_sampled() {
        let mesh = triangulate(&DomainSpec::rectangle(1.0, 1.0), 0.1).unwrap();
        let hops = mesh.boundary_hops();
        let sample = jets_from_field(&mesh, &ScalarField::zeros(&mesh), &SampleRule::default());
        assert!(sample.jets.iter().all(|s| hops[s.vertex] >= 2));
        assert_eq!(sample.jets.len(), hops.iter().filter(|&&h| h >= 2).count());
    }

    #[test]
    fn jet_operators() {
        let jet = PointJet::new([2.0, 0.0], [[1.0, 0.3], [0.5, 1.0]]);
        assert_eq!(jet.hessian[0][1], jet.hessian[1][0]);
        assert_eq!(jet.infinity_laplacian(), 4.0);
        assert_eq!(jet.laplacian(), 2.0);
    }
}
