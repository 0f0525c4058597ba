//! P1 finite-element minimization of `J_eps` and the eps-continuation.

mod domain;
mod energy;
mod lbfgs;
mod mesh;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use domain::{point_in_polygon, segment_distance, DomainSpec, Shape};
pub use energy::{energy_and_gradient, Discretization, Neumaier, FLUX_CUTOFF};
pub use lbfgs::{minimize as lbfgs_minimize, LbfgsOptions, LbfgsOutcome};
pub use mesh::{triangulate, Mesh, ScalarField};

use crate::error::{Error, Result};
use crate::potential::PotentialModel;
use crate::regularization::RegularizedPotential;

/// Default solver tolerance for a domain: `1e-8 · area`.
pub fn default_tol(d: &DomainSpec) -> f64 {
    1e-8 * d.area()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub deterministic: bool,
    pub lbfgs: LbfgsOptions,
}

impl SolverOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            deterministic: true,
            lbfgs: LbfgsOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimized {
    pub field: ScalarField,
    pub iterations: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

/// Minimizes `J_eps` from `init` until `|grad| <= tol · sqrt(#interior)`.
pub fn minimize_with(
    disc: &Discretization,
    r: &RegularizedPotential,
    init: &ScalarField,
    opts: &SolverOptions,
) -> Result<Minimized> {
    let x0 = disc.restrict(init);
    let gtol = opts.tol * (disc.n_unknowns().max(1) as f64).sqrt();
    let det = opts.deterministic;
    let init_energy = disc.energy(r, &x0);
    let out = lbfgs_minimize(|x| disc.energy_and_gradient(r, x, det), x0.clone(), gtol, &opts.lbfgs)?;
    if out.energy > init_energy {
        let (e, g) = disc.energy_and_gradient(r, &x0, det);
        return Ok(Minimized {
            field: disc.extend(&x0),
            iterations: out.iterations,
            energy: e,
            grad_norm: g.iter().map(|v| v * v).sum::<f64>().sqrt(),
        });
    }
    Ok(Minimized {
        field: disc.extend(&out.x),
        iterations: out.iterations,
        energy: out.energy,
        grad_norm: out.grad_norm,
    })
}

/// Convenience form of [`minimize_with`] returning the field and the
/// iteration count.
pub fn minimize(
    r: &RegularizedPotential,
    mesh: &Mesh,
    init: &ScalarField,
    tol: f64,
) -> Result<(ScalarField, usize)> {
    let disc = Discretization::new(mesh);
    let m = minimize_with(&disc, r, init, &SolverOptions::new(tol))?;
    Ok((m.field, m.iterations))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsSchedule {
    List(Vec<f64>),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

impl EpsSchedule {
    pub fn auto() -> Self {
        EpsSchedule::Auto(AutoTag::Auto)
    }

    /// `0.1 · 2^{-k}`, `k = 0..=8`.
    pub fn auto_values() -> Vec<f64> {
        (0..=8).map(|k| 0.1 * 0.5f64.powi(k)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if let EpsSchedule::List(v) = self {
            if v.is_empty() {
                return Err(Error::InvalidParameter("eps schedule is empty".to_string()));
            }
            if v.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
                return Err(Error::InvalidParameter(format!("eps values must be positive: {v:?}")));
            }
            if v.windows(2).any(|w| !(w[0] > w[1])) {
                return Err(Error::InvalidParameter(format!(
                    "eps schedule must be strictly decreasing: {v:?}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsStep {
    pub eps: f64,
    pub iterations: usize,
    pub energy: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub history: Vec<EpsStep>,
    /// Sup-norm change between successive eps solutions.
    pub deltas: Vec<f64>,
    /// Largest triangle gradient of the final field.
    pub max_grad: f64,
    pub sup_u: f64,
    pub min_u: f64,
    pub n_vertices: usize,
    pub n_triangles: usize,
    pub h: f64,
    pub tol: f64,
    /// Seconds; `None` in deterministic mode so reports are reproducible.
    pub wall_time: Option<f64>,
}

/// Runs the continuation from `init` (zero if `None`), warm-starting each
/// eps from the previous solution.
pub fn continuation_with(
    base: &PotentialModel,
    mesh: &Mesh,
    schedule: &EpsSchedule,
    opts: &SolverOptions,
    init: Option<ScalarField>,
) -> Result<(ScalarField, SolveReport)> {
    schedule.validate()?;
    let started = Instant::now();
    let disc = Discretization::new(mesh);
    let (values, auto) = match schedule {
        EpsSchedule::List(v) => (v.clone(), false),
        EpsSchedule::Auto(_) => (EpsSchedule::auto_values(), true),
    };
    let mut current = init
        .unwrap_or_else(|| ScalarField::zeros(mesh))
        .with_boundary_zero(mesh);
    let mut history = Vec::new();
    let mut deltas = Vec::new();
    for (k, &eps) in values.iter().enumerate() {
        let r = RegularizedPotential::new(base.clone(), eps)?;
        let m = minimize_with(&disc, &r, &current, opts)?;
        if k > 0 {
            deltas.push(m.field.sup_distance(&current));
        }
        history.push(EpsStep {
            eps,
            iterations: m.iterations,
            energy: m.energy,
            grad_norm: m.grad_norm,
        });
        current = m.field;
        if auto && deltas.last().is_some_and(|&d| d < 10.0 * opts.tol) {
            break;
        }
    }
    let max_grad = disc
        .triangle_gradients(&current)
        .iter()
        .map(|g| g[0].hypot(g[1]))
        .fold(0.0, f64::max);
    let report = SolveReport {
        history,
        deltas,
        max_grad,
        sup_u: current.max(),
        min_u: current.min(),
        n_vertices: mesh.n_vertices(),
        n_triangles: mesh.triangles.len(),
        h: mesh.h,
        tol: opts.tol,
        wall_time: if opts.deterministic {
            None
        } else {
            Some(started.elapsed().as_secs_f64())
        },
    };
    Ok((current, report))
}

/// Continuation from the zero field with deterministic reductions.
pub fn continuation(
    base: &PotentialModel,
    mesh: &Mesh,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<(ScalarField, SolveReport)> {
    continuation_with(base, mesh, schedule, &SolverOptions::new(tol), None)
}
