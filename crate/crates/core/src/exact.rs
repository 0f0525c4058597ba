//! Radial solutions on balls and the a-priori bounds built from `g'`.

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{FenchelConjugate, PotentialModel};
use crate::quadrature::Quadrature;

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {n}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Integrates a fallible integrand, surfacing the first evaluation error.
fn integrate_fallible<F>(a: f64, b: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = RefCell::new(None);
    let value = Quadrature::default().integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

/// `u_R(r) = ∫_r^R g'(s/N) ds`, the minimizer on the ball of radius `R`.
pub fn radial_solution(m: &PotentialModel, n: usize, r_big: f64, r: f64) -> Result<f64> {
    check_dimension(n)?;
    check_positive("R", r_big)?;
    if !(0.0..=r_big).contains(&r) {
        return Err(Error::InvalidParameter(format!("r = {r} outside [0, {r_big}]")));
    }
    let g = FenchelConjugate::new(m.clone());
    let nf = n as f64;
    integrate_fallible(r, r_big, |s| g.gp(s / nf))
}

/// `|u_R'(r)| = g'(r/N)`.
pub fn radial_profile_derivative(m: &PotentialModel, n: usize, r: f64) -> Result<f64> {
    check_dimension(n)?;
    FenchelConjugate::new(m.clone()).gp(r / n as f64)
}

/// Value, gradient and Hessian of the radial solution at a point of the
/// plane (`N = 2` geometry, but any `N` in the profile).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

/// Closed-form jet of `u_R(|x|)` at `x ≠ 0`.
pub fn radial_jet(m: &PotentialModel, n: usize, r_big: f64, x: [f64; 2]) -> Result<RadialJet> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(Error::InvalidParameter("radial jet needs x != 0".to_string()));
    }
    let g = FenchelConjugate::new(m.clone());
    let nf = n as f64;
    let value = radial_solution(m, n, r_big, r)?;
    let d1 = -g.gp(r / nf)?;
    let d2 = -g.gpp(r / nf)? / nf;
    let e = [x[0] / r, x[1] / r];
    let tangential = d1 / r;
    let mut hessian = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { 1.0 } else { 0.0 };
            hessian[i][j] = d2 * e[i] * e[j] + tangential * (delta - e[i] * e[j]);
        }
    }
    Ok(RadialJet {
        value,
        gradient: [d1 * e[0], d1 * e[1]],
        hessian,
    })
}

/// Gradient bound from exterior spheres of radius `rho` on a domain of
/// diameter `R*`: `M = g'(ρ/(N−1) (e^{(N−1)R*/ρ} − 1))`. `rho = +inf`
/// (convex domains) gives the limit `g'(R*)`.
pub fn gradient_bound_m(m: &PotentialModel, n: usize, rho: f64, r_star: f64) -> Result<f64> {
    check_dimension(n)?;
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if !(r_star >= 0.0) {
        return Err(Error::InvalidParameter(format!("R* must be >= 0, got {r_star}")));
    }
    let k = (n - 1) as f64;
    let arg = if rho.is_infinite() {
        r_star
    } else {
        rho / k * (k * r_star / rho).exp_m1()
    };
    FenchelConjugate::new(m.clone()).gp(arg)
}

/// `min(∫_0^{R*} g'(s/N) ds, (N/2) Φ(M))`.
pub fn sup_bound_u(m: &PotentialModel, n: usize, r_star: f64, big_m: f64) -> Result<f64> {
    check_dimension(n)?;
    if r_star == 0.0 {
        return Ok(0.0);
    }
    let g = FenchelConjugate::new(m.clone());
    let nf = n as f64;
    let by_profile = integrate_fallible(0.0, r_star, |s| g.gp(s / nf))?;
    let by_phi = 0.5 * nf * m.phi(big_m)?;
    Ok(by_profile.min(by_phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureBounds {
    pub grad_bound: f64,
    pub sup_bound: f64,
}

/// Bounds for domains whose boundary mean curvature is at least `H* > 0`.
pub fn curvature_bounds(m: &PotentialModel, n: usize, h_star: f64) -> Result<CurvatureBounds> {
    check_dimension(n)?;
    if !(h_star > 0.0) {
        return Err(Error::InvalidParameter(format!("H* must be positive, got {h_star}")));
    }
    let nf = n as f64;
    let grad_bound = FenchelConjugate::new(m.clone()).gp(1.0 / (nf * h_star))?;
    Ok(CurvatureBounds {
        grad_bound,
        sup_bound: 0.5 * nf * m.phi(grad_bound)?,
    })
}

/// Derivative of the boundary barrier at distance `s`.
pub fn barrier_psi_derivative(
    m: &PotentialModel,
    n: usize,
    rho: f64,
    r_star: f64,
    s: f64,
) -> Result<f64> {
    let k = (n - 1) as f64;
    let arg = rho / k * (k * (r_star - s) / rho).exp_m1();
    FenchelConjugate::new(m.clone()).gp(arg.max(0.0))
}

/// Boundary barrier `ψ(t) = ∫_0^t ψ'(s) ds` for `0 <= t <= R*`.
pub fn barrier_psi(m: &PotentialModel, n: usize, rho: f64, r_star: f64, t: f64) -> Result<f64> {
    check_dimension(n)?;
    check_positive("rho", rho)?;
    if !(0.0..=r_star).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {r_star}]")));
    }
    integrate_fallible(0.0, t, |s| barrier_psi_derivative(m, n, rho, r_star, s))
}
