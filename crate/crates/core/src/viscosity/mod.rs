//! Pointwise residuals of the min-form equations and the P-function.
//!
//! The limit equation holds only in the viscosity sense; the residuals here
//! are pointwise evaluations on jets and are meaningful where the field is
//! smooth.

mod jets;

use rayon::prelude::*;
use serde::Serialize;

pub use jets::{jets_from_field, JetSample, PointJet, SampleRule, SampledJet};

use crate::error::{Error, Result};
use crate::potential::{FenchelConjugate, PotentialModel, SecondDerivClass};
use crate::regularization::RegularizedPotential;
use crate::solver::{Discretization, Mesh, ScalarField};

/// Default half-width of the threshold band.
pub const DEFAULT_DELTA: f64 = 0.05;

/// The two arguments of a min-form residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branches {
    pub pde: f64,
    pub threshold: f64,
}

impl Branches {
    pub fn value(&self) -> f64 {
        self.pde.min(self.threshold)
    }
}

/// `F_eps(P, X)`, with the value `−1` at `P = 0`.
pub fn residual_fn(r: &RegularizedPotential, jet: &PointJet) -> f64 {
    let s = jet.grad_norm();
    if s == 0.0 {
        return -1.0;
    }
    let (fp, fpp) = (r.feps_p(s), r.feps_pp(s));
    -(s * fpp - fp) / s.powi(3) * jet.infinity_laplacian() - fp / s * jet.laplacian() - 1.0
}

/// Branches of the min-form with `f''`, for models that are `C²` through
/// the plateau edge. Below the plateau the first branch is `−1`.
pub fn c2_branches(m: &PotentialModel, jet: &PointJet) -> Result<Branches> {
    if m.class() != SecondDerivClass::C2ThroughSigma {
        return Err(Error::Contract(format!(
            "{} is not C2 through sigma; use the (a, b) form",
            m.label()
        )));
    }
    let s = jet.grad_norm();
    if s == 0.0 {
        return Err(Error::Contract("C2 form needs a nonzero gradient".to_string()));
    }
    let (fp, fpp) = (m.fp(s), m.fpp(s));
    let pde = -(s * fpp - fp) / s.powi(3) * jet.infinity_laplacian() - fp / s * jet.laplacian() - 1.0;
    Ok(Branches {
        pde,
        threshold: s - m.sigma(),
    })
}

pub fn residual_c2(m: &PotentialModel, jet: &PointJet) -> Result<f64> {
    c2_branches(m, jet).map(|b| b.value())
}

/// Branches of the `(a, b)` form.
pub fn ab_branches(m: &PotentialModel, jet: &PointJet) -> Branches {
    let s = jet.grad_norm();
    let (a, b) = (m.coeff_a(s), m.coeff_b(s));
    Branches {
        pde: -(1.0 - a) * jet.infinity_laplacian() - s * s * a * jet.laplacian() - b,
        threshold: s - m.sigma(),
    }
}

pub fn residual_ab(m: &PotentialModel, jet: &PointJet) -> f64 {
    ab_branches(m, jet).value()
}

/// Branches of the form normalized by `a* − a(|∇u|)`.
pub fn astar_branches(m: &PotentialModel, jet: &PointJet, a_star: f64) -> Result<Branches> {
    let s = jet.grad_norm();
    let a = m.coeff_a(s);
    if !(a < a_star) {
        return Err(Error::Contract(format!(
            "a(|grad u|) = {a} is not below a* = {a_star}"
        )));
    }
    let gap = a_star - a;
    let b = m.coeff_b(s);
    let pde = -(1.0 + (1.0 - a_star) / gap) * jet.infinity_laplacian()
        - s * s * a / gap * jet.laplacian()
        - b / gap;
    Ok(Branches {
        pde,
        threshold: s - m.sigma(),
    })
}

pub fn residual_astar(m: &PotentialModel, jet: &PointJet, a_star: f64) -> Result<f64> {
    astar_branches(m, jet, a_star).map(|b| b.value())
}

/// Radial form of the Euler–Lagrange equation evaluated on the profile
/// `|u'| = g'(r/N)`: `f''(g') g''(r/N)/N + (N−1)/r f'(g') − 1`.
///
/// `g''` comes from its closed form when the model has one and from a
/// central difference of `g'` otherwise.
pub fn residual_radial(m: &PotentialModel, n: usize, r_big: f64, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {n}")));
    }
    if !(r > 0.0 && r <= r_big) {
        return Err(Error::InvalidParameter(format!("r = {r} outside (0, {r_big}]")));
    }
    let g = FenchelConjugate::new(m.clone());
    let nf = n as f64;
    let t = r / nf;
    let s = g.gp(t)?;
    if !(s > m.sigma()) {
        return Err(Error::Contract(format!("g'(r/N) = {s} is not above sigma")));
    }
    let gpp = match m.inner().conjugate_second(t) {
        Some(v) => v,
        None => {
            let h = 1e-5 * t;
            (g.gp(t + h)? - g.gp(t - h)?) / (2.0 * h)
        }
    };
    Ok(m.fpp(s) * gpp / nf + (nf - 1.0) / r * m.fp(s) - 1.0)
}

#[derive(Debug, Clone)]
pub enum ResidualForm {
    /// Regularized operator `F_eps`.
    Fn(RegularizedPotential),
    C2,
    Ab,
    Astar(f64),
}

impl ResidualForm {
    pub fn name(&self) -> &'static str {
        match self {
            ResidualForm::Fn(_) => "fn",
            ResidualForm::C2 => "c2",
            ResidualForm::Ab => "ab",
            ResidualForm::Astar(_) => "astar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|∇u| > σ + δ`.
    PdeActive,
    /// `||∇u| − σ| <= δ`.
    ThresholdActive,
    /// `|∇u| < σ − δ`.
    SubThreshold,
}

impl Branch {
    pub fn classify(grad_norm: f64, sigma: f64, delta: f64) -> Self {
        if grad_norm > sigma + delta {
            Branch::PdeActive
        } else if grad_norm < sigma - delta {
            Branch::SubThreshold
        } else {
            Branch::ThresholdActive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::PdeActive => "pde_active",
            Branch::ThresholdActive => "threshold_active",
            Branch::SubThreshold => "sub_threshold",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub vertex: usize,
    pub x: f64,
    pub y: f64,
    pub grad_norm: f64,
    pub branch: Branch,
    pub residual: f64,
}

/// Quantiles of `|residual|` within one branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchStats {
    pub count: usize,
    pub median_abs: Option<f64>,
    pub q10_abs: Option<f64>,
    pub q90_abs: Option<f64>,
    pub max_abs: Option<f64>,
}

impl BranchStats {
    fn from_values(mut v: Vec<f64>) -> Self {
        v.sort_by(f64::total_cmp);
        Self {
            count: v.len(),
            median_abs: quantile(&v, 0.5),
            q10_abs: quantile(&v, 0.1),
            q90_abs: quantile(&v, 0.9),
            max_abs: v.last().copied(),
        }
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    let w = pos - lo as f64;
    Some(sorted[lo] * (1.0 - w) + sorted[hi] * w)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub form: String,
    pub delta: f64,
    pub points: Vec<ResidualPoint>,
    pub skipped: usize,
    pub pde_active: BranchStats,
    pub threshold_active: BranchStats,
    pub sub_threshold: BranchStats,
    /// Fraction of sampled points with `|∇u| < σ − δ`.
    pub sub_fraction: f64,
}

/// Evaluates `form` at every sampled jet of `field`.
pub fn residual_field(
    m: &PotentialModel,
    mesh: &Mesh,
    field: &ScalarField,
    form: &ResidualForm,
    delta: f64,
) -> Result<ResidualReport> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
    }
    let sample = jets_from_field(mesh, field, &SampleRule::default());
    let sigma = m.sigma();
    let points: Vec<ResidualPoint> = sample
        .jets
        .par_iter()
        .map(|s| {
            let residual = match form {
                ResidualForm::Fn(r) => residual_fn(r, &s.jet),
                ResidualForm::C2 => residual_c2(m, &s.jet)?,
                ResidualForm::Ab => residual_ab(m, &s.jet),
                ResidualForm::Astar(a_star) => residual_astar(m, &s.jet, *a_star)?,
            };
            let grad_norm = s.jet.grad_norm();
            Ok(ResidualPoint {
                vertex: s.vertex,
                x: s.point[0],
                y: s.point[1],
                grad_norm,
                branch: Branch::classify(grad_norm, sigma, delta),
                residual,
            })
        })
        .collect::<Result<_>>()?;
    let stats = |b: Branch| {
        BranchStats::from_values(
            points
                .iter()
                .filter(|p| p.branch == b)
                .map(|p| p.residual.abs())
                .collect(),
        )
    };
    let pde_active = stats(Branch::PdeActive);
    let threshold_active = stats(Branch::ThresholdActive);
    let sub_threshold = stats(Branch::SubThreshold);
    let sub_fraction = if points.is_empty() {
        0.0
    } else {
        sub_threshold.count as f64 / points.len() as f64
    };
    Ok(ResidualReport {
        form: form.name().to_string(),
        delta,
        skipped: sample.skipped,
        points,
        pde_active,
        threshold_active,
        sub_threshold,
        sub_fraction,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PFunction {
    pub values: Vec<f64>,
    pub max_interior: f64,
    pub max_boundary: f64,
}

/// `P = Φ(|∇u|) + (2/N) u` at every vertex, with vertex gradients averaged
/// from incident triangles.
pub fn pfunction_field(m: &PotentialModel, mesh: &Mesh, field: &ScalarField, n: usize) -> Result<PFunction> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {n}")));
    }
    let grads = Discretization::new(mesh).vertex_gradients(field);
    let values: Vec<f64> = grads
        .par_iter()
        .zip(&field.values)
        .map(|(g, &u)| Ok(m.phi(g[0].hypot(g[1]))? + 2.0 / n as f64 * u))
        .collect::<Result<_>>()?;
    let max_over = |boundary: bool| {
        values
            .iter()
            .zip(&mesh.boundary)
            .filter(|(_, &b)| b == boundary)
            .map(|(v, _)| *v)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(PFunction {
        max_interior: max_over(false),
        max_boundary: max_over(true),
        values,
    })
}
