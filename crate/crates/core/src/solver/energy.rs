use rayon::prelude::*;

use super::mesh::{Mesh, ScalarField};
use crate::regularization::RegularizedPotential;

/// Flux is dropped below this gradient magnitude.
pub const FLUX_CUTOFF: f64 = 1e-14;

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy)]
struct Element {
    verts: [usize; 3],
    area: f64,
    /// Gradients of the three hat functions.
    grads: [[f64; 2]; 3],
}

/// Precomputed P1 geometry for one mesh: element gradients, lumped load
/// weights and the numbering of interior unknowns.
#[derive(Debug, Clone)]
pub struct Discretization {
    elements: Vec<Element>,
    lumped: Vec<f64>,
    interior: Vec<usize>,
    slot: Vec<Option<usize>>,
    n_vertices: usize,
}

impl Discretization {
    pub fn new(mesh: &Mesh) -> Self {
        let elements: Vec<Element> = mesh
            .triangles
            .iter()
            .map(|&verts| {
                let [a, b, c] = verts.map(|i| mesh.vertices[i]);
                let twice = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                let pts = [a, b, c];
                let mut grads = [[0.0; 2]; 3];
                for k in 0..3 {
                    let (p, q) = (pts[(k + 1) % 3], pts[(k + 2) % 3]);
                    grads[k] = [(p[1] - q[1]) / twice, (q[0] - p[0]) / twice];
                }
                Element {
                    verts,
                    area: 0.5 * twice,
                    grads,
                }
            })
            .collect();
        let mut lumped = vec![0.0; mesh.n_vertices()];
        for e in &elements {
            for &v in &e.verts {
                lumped[v] += e.area / 3.0;
            }
        }
        let interior = mesh.interior_indices();
        let mut slot = vec![None; mesh.n_vertices()];
        for (k, &v) in interior.iter().enumerate() {
            slot[v] = Some(k);
        }
        Self {
            elements,
            lumped,
            interior,
            slot,
            n_vertices: mesh.n_vertices(),
        }
    }

    pub fn n_unknowns(&self) -> usize {
        self.interior.len()
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn lumped(&self) -> &[f64] {
        &self.lumped
    }

    /// Interior values of a field.
    pub fn restrict(&self, field: &ScalarField) -> Vec<f64> {
        self.interior.iter().map(|&v| field.values[v]).collect()
    }

    /// Full field with zero boundary values.
    pub fn extend(&self, x: &[f64]) -> ScalarField {
        let mut values = vec![0.0; self.n_vertices];
        for (&v, &xi) in self.interior.iter().zip(x) {
            values[v] = xi;
        }
        ScalarField { values }
    }

    fn element_gradient(&self, e: &Element, u: &[f64]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for k in 0..3 {
            let val = u[e.verts[k]];
            g[0] += val * e.grads[k][0];
            g[1] += val * e.grads[k][1];
        }
        g
    }

    /// Constant gradient on every triangle.
    pub fn triangle_gradients(&self, field: &ScalarField) -> Vec<[f64; 2]> {
        self.elements
            .iter()
            .map(|e| self.element_gradient(e, &field.values))
            .collect()
    }

    /// Area-weighted average of incident triangle gradients at each vertex.
    pub fn vertex_gradients(&self, field: &ScalarField) -> Vec<[f64; 2]> {
        let mut acc = vec![[0.0; 2]; self.n_vertices];
        let mut weight = vec![0.0; self.n_vertices];
        for e in &self.elements {
            let g = self.element_gradient(e, &field.values);
            for &v in &e.verts {
                acc[v][0] += e.area * g[0];
                acc[v][1] += e.area * g[1];
                weight[v] += e.area;
            }
        }
        acc.iter()
            .zip(&weight)
            .map(|(a, &w)| [a[0] / w, a[1] / w])
            .collect()
    }

    /// Energy contribution and flux of one element.
    fn element_terms(&self, r: &RegularizedPotential, e: &Element, u: &[f64]) -> (f64, f64, [f64; 2]) {
        let g = self.element_gradient(e, u);
        let s = g[0].hypot(g[1]);
        let mean = (u[e.verts[0]] + u[e.verts[1]] + u[e.verts[2]]) / 3.0;
        let flux = if s < FLUX_CUTOFF {
            [0.0; 2]
        } else {
            let c = r.feps_p(s) / s;
            [c * g[0], c * g[1]]
        };
        (e.area * r.feps(s), e.area * mean, flux)
    }

    /// `J_eps` and its gradient with respect to the interior unknowns `x`.
    ///
    /// With `deterministic` set, element terms are computed in parallel but
    /// scattered and summed in element order, so the result does not depend
    /// on the thread count.
    pub fn energy_and_gradient(
        &self,
        r: &RegularizedPotential,
        x: &[f64],
        deterministic: bool,
    ) -> (f64, Vec<f64>) {
        let u = self.extend(x).values;
        let n = self.n_vertices;
        let (energy, grad_full) = if deterministic {
            let terms: Vec<(f64, f64, [f64; 2])> = self
                .elements
                .par_iter()
                .map(|e| self.element_terms(r, e, &u))
                .collect();
            let mut bulk = Neumaier::default();
            let mut load = Neumaier::default();
            let mut grad = vec![0.0; n];
            for (e, (w, l, flux)) in self.elements.iter().zip(&terms) {
                bulk.add(*w);
                load.add(*l);
                for k in 0..3 {
                    grad[e.verts[k]] += e.area * (flux[0] * e.grads[k][0] + flux[1] * e.grads[k][1]);
                }
            }
            (bulk.value() - load.value(), grad)
        } else {
            self.elements
                .par_iter()
                .fold(
                    || (0.0, vec![0.0; n]),
                    |(mut acc, mut grad), e| {
                        let (w, l, flux) = self.element_terms(r, e, &u);
                        acc += w - l;
                        for k in 0..3 {
                            grad[e.verts[k]] +=
                                e.area * (flux[0] * e.grads[k][0] + flux[1] * e.grads[k][1]);
                        }
                        (acc, grad)
                    },
                )
                .reduce(
                    || (0.0, vec![0.0; n]),
                    |(a, mut ga), (b, gb)| {
                        for (x, y) in ga.iter_mut().zip(&gb) {
                            *x += y;
                        }
                        (a + b, ga)
                    },
                )
        };
        let grad = self
            .interior
            .iter()
            .map(|&v| grad_full[v] - self.lumped[v])
            .collect();
        (energy, grad)
    }

    /// Energy only.
    pub fn energy(&self, r: &RegularizedPotential, x: &[f64]) -> f64 {
        let u = self.extend(x).values;
        let mut total = Neumaier::default();
        for e in &self.elements {
            let (w, l, _) = self.element_terms(r, e, &u);
            total.add(w);
            total.add(-l);
        }
        total.value()
    }

    pub fn slot(&self, vertex: usize) -> Option<usize> {
        self.slot[vertex]
    }
}

/// `J_eps(field)` and its gradient, one entry per interior vertex in
/// increasing vertex order.
pub fn energy_and_gradient(r: &RegularizedPotential, mesh: &Mesh, field: &ScalarField) -> (f64, Vec<f64>) {
    let disc = Discretization::new(mesh);
    disc.energy_and_gradient(r, &disc.restrict(field), true)
}
