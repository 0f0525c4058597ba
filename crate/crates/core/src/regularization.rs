//! Smooth approximations `f_eps` of a degenerate potential.
//!
//! `f_eps'` is replaced on `[0, sigma + eps]` by the two-term power law
//! `f'(s*) [2 (s/s*)^p − (s/s*)^q]`, `s* = sigma + eps`, whose exponents are
//! chosen so that the first three derivatives match `f` at the splice point.
//! Beyond `s*` the base potential is used unchanged (up to an additive
//! constant in the value, fixed by `f_eps(0) = 0`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialModel;

/// `t^e` for `t >= 0`, evaluated as `exp(e ln t)` so that large exponents do
/// not overflow intermediate results.
fn scaled_pow(t: f64, e: f64) -> f64 {
    if t == 0.0 {
        return if e > 0.0 {
            0.0
        } else if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
    }
    (e * t.ln()).exp()
}

/// One member of the regularized family.
#[derive(Debug, Clone)]
pub struct RegularizedPotential {
    base: PotentialModel,
    eps: f64,
    p_eps: f64,
    q_eps: f64,
    omega_eps: f64,
    s_star: f64,
    fp_star: f64,
    value_shift: f64,
}

impl RegularizedPotential {
    /// Builds `f_eps` with the default `sigma_tilde = sigma + 1`.
    pub fn new(base: PotentialModel, eps: f64) -> Result<Self> {
        let sigma_tilde = base.sigma() + 1.0;
        Self::build(base, eps, sigma_tilde)
    }

    /// Builds `f_eps`, after checking that `a` is nondecreasing on
    /// `[sigma + 1e-6, sigma_tilde]`.
    pub fn build(base: PotentialModel, eps: f64, sigma_tilde: f64) -> Result<Self> {
        let sigma = base.sigma();
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if !(sigma_tilde > sigma) {
            return Err(Error::InvalidParameter(format!(
                "sigma_tilde = {sigma_tilde} must exceed sigma = {sigma}"
            )));
        }
        if eps >= sigma_tilde - sigma {
            return Err(Error::InvalidParameter(format!(
                "eps = {eps} must be smaller than sigma_tilde - sigma = {}",
                sigma_tilde - sigma
            )));
        }
        check_monotone_a(&base, sigma_tilde)?;

        let s_star = sigma + eps;
        let fp = base.fp(s_star);
        let fpp = base.fpp(s_star);
        let fppp = base.fppp(s_star).ok_or_else(|| {
            Error::HypothesisViolation(format!(
                "{} does not provide f''', which the regularization needs",
                base.label()
            ))
        })?;

        let radicand = 2.0 * (1.0 - fppp * fp / (fpp * fpp) - fp / (s_star * fpp));
        if !(radicand >= 0.0) {
            return Err(Error::HypothesisViolation(format!(
                "negative radicand {radicand} for omega at s = {s_star}"
            )));
        }
        let omega = radicand.sqrt();
        let k = s_star * fpp / fp;
        let p_eps = k * (1.0 + 0.5 * omega);
        let q_eps = k * (1.0 + omega);
        if !(p_eps < q_eps && 2.0 * p_eps > q_eps) {
            return Err(Error::HypothesisViolation(format!(
                "exponents p = {p_eps}, q = {q_eps} violate p < q < 2p"
            )));
        }
        let top = fp * s_star * (2.0 / (p_eps + 1.0) - 1.0 / (q_eps + 1.0));
        Ok(Self {
            value_shift: top - base.f(s_star),
            base,
            eps,
            p_eps,
            q_eps,
            omega_eps: omega,
            s_star,
            fp_star: fp,
        })
    }

    pub fn base(&self) -> &PotentialModel {
        &self.base
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn p_eps(&self) -> f64 {
        self.p_eps
    }
    pub fn q_eps(&self) -> f64 {
        self.q_eps
    }
    pub fn omega_eps(&self) -> f64 {
        self.omega_eps
    }
    pub fn s_star(&self) -> f64 {
        self.s_star
    }
    /// Constant added to the base `f` beyond the splice.
    pub fn value_shift(&self) -> f64 {
        self.value_shift
    }

    fn ratio(&self, s: f64) -> f64 {
        s / self.s_star
    }

    pub fn feps(&self, s: f64) -> f64 {
        if s <= self.s_star {
            let t = self.ratio(s);
            let (p, q) = (self.p_eps, self.q_eps);
            self.fp_star
                * self.s_star
                * (2.0 * scaled_pow(t, p + 1.0) / (p + 1.0) - scaled_pow(t, q + 1.0) / (q + 1.0))
        } else {
            self.base.f(s) + self.value_shift
        }
    }

    pub fn feps_p(&self, s: f64) -> f64 {
        if s <= self.s_star {
            let t = self.ratio(s);
            self.fp_star * (2.0 * scaled_pow(t, self.p_eps) - scaled_pow(t, self.q_eps))
        } else {
            self.base.fp(s)
        }
    }

    pub fn feps_pp(&self, s: f64) -> f64 {
        if s <= self.s_star {
            let t = self.ratio(s);
            let (p, q) = (self.p_eps, self.q_eps);
            self.fp_star / self.s_star
                * (2.0 * p * scaled_pow(t, p - 1.0) - q * scaled_pow(t, q - 1.0))
        } else {
            self.base.fpp(s)
        }
    }

    pub fn feps_ppp(&self, s: f64) -> f64 {
        if s <= self.s_star {
            let t = self.ratio(s);
            let (p, q) = (self.p_eps, self.q_eps);
            self.fp_star / (self.s_star * self.s_star)
                * (2.0 * p * (p - 1.0) * scaled_pow(t, p - 2.0)
                    - q * (q - 1.0) * scaled_pow(t, q - 2.0))
        } else {
            self.base.fppp(s).unwrap_or(f64::NAN)
        }
    }

    /// `ln f_eps''(s)` on the polynomial branch, computed in factored form so
    /// that it stays finite where `f_eps''` itself underflows.
    pub fn log_feps_pp(&self, s: f64) -> f64 {
        if s > self.s_star {
            return self.base.fpp(s).ln();
        }
        let t = self.ratio(s);
        let (p, q) = (self.p_eps, self.q_eps);
        let factor = 2.0 * p - q * scaled_pow(t, q - p);
        (self.fp_star / self.s_star).ln() + (p - 1.0) * t.ln() + factor.ln()
    }

    /// `a_eps(s) = f_eps'(s) / (s f_eps''(s))`. The value at `s = 0` is the
    /// limit `1 / p_eps`.
    pub fn coeff_a_eps(&self, s: f64) -> f64 {
        if s <= self.s_star {
            let t = self.ratio(s);
            let (p, q) = (self.p_eps, self.q_eps);
            // Divide through by t^p: (2 − t^(q−p)) / (2p − q t^(q−p)).
            let r = scaled_pow(t, q - p);
            (2.0 - r) / (2.0 * p - q * r)
        } else {
            self.base.coeff_a(s)
        }
    }

    /// `b_eps(s) = s² / f_eps''(s)`. At `s = 0` the limit is returned: zero
    /// for `p_eps < 3`, infinite for `p_eps > 3`.
    pub fn coeff_b_eps(&self, s: f64) -> f64 {
        if s == 0.0 {
            let p = self.p_eps;
            return if p < 3.0 {
                0.0
            } else if p == 3.0 {
                self.s_star.powi(3) / (6.0 * self.fp_star)
            } else {
                f64::INFINITY
            };
        }
        s * s / self.feps_pp(s)
    }

    /// `f_eps'(s) / s`, with its limit 0 at `s = 0`.
    pub fn limit_ratio_first(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        if s <= self.s_star {
            let t = self.ratio(s);
            self.fp_star / self.s_star
                * (2.0 * scaled_pow(t, self.p_eps - 1.0) - scaled_pow(t, self.q_eps - 1.0))
        } else {
            self.feps_p(s) / s
        }
    }

    /// `(s f_eps''(s) − f_eps'(s)) / s³`, evaluated without cancellation on
    /// the polynomial branch.
    pub fn limit_ratio_second(&self, s: f64) -> f64 {
        let (p, q) = (self.p_eps, self.q_eps);
        if s <= self.s_star {
            let t = self.ratio(s);
            let lead = 2.0 * (p - 1.0) * scaled_pow(t, p - 3.0);
            let tail = (q - 1.0) * scaled_pow(t, q - 3.0);
            if s == 0.0 && p > 3.0 {
                return 0.0;
            }
            self.fp_star / self.s_star.powi(3) * (lead - tail)
        } else {
            (s * self.feps_pp(s) - self.feps_p(s)) / s.powi(3)
        }
    }

    /// Upper bound `f'(s*) / (s* f''(s*))` on `sup |a_eps − a|`.
    pub fn a_gap_bound(&self) -> f64 {
        self.base.coeff_a(self.s_star)
    }
}

fn check_monotone_a(base: &PotentialModel, sigma_tilde: f64) -> Result<()> {
    let lo = base.sigma() + 1e-6;
    let n = 1000;
    let mut prev = base.coeff_a(lo);
    for i in 1..n {
        let s = lo + (sigma_tilde - lo) * i as f64 / (n - 1) as f64;
        let a = base.coeff_a(s);
        if a - prev < -1e-9 {
            return Err(Error::HypothesisViolation(format!(
                "a(s) = f'/(s f'') decreases near s = {s} ({prev} -> {a})"
            )));
        }
        prev = a;
    }
    Ok(())
}

/// Per-eps summary produced by [`validate_family`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyEntry {
    pub eps: f64,
    pub p_eps: f64,
    pub q_eps: f64,
    pub omega_eps: f64,
    /// `sup |a_eps − a|` over the dense grid.
    pub sup_a_gap: f64,
    pub a_gap_bound: f64,
    /// `sup |(s f_eps'' − f_eps') / s³|` over `[0, sigma − 0.1]`.
    pub sup_limit1: f64,
    /// `sup |f_eps' / s|` over `[0, sigma − 0.1]`.
    pub sup_limit2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositiveSecondDerivative,
    BelowBaseDerivative,
    NotDecreasingInEps,
    AGapAboveBound,
    Limit1NotDecreasing,
    Limit2NotDecreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub eps: f64,
    pub s: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub entries: Vec<FamilyEntry>,
    pub violations: Vec<Violation>,
}

impl FamilyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, kind: ViolationKind) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.kind == kind)
    }
}

/// Upper end of the sub-plateau window used for the limit conditions.
pub fn limit_window(sigma: f64) -> f64 {
    if sigma > 0.1 {
        sigma - 0.1
    } else {
        0.9 * sigma
    }
}

/// Sup of the two limit ratios over `(0, window]` on `n` uniform points.
pub fn limit_sups(r: &RegularizedPotential, window: f64, n: usize) -> (f64, f64) {
    (1..=n)
        .map(|i| window * i as f64 / n as f64)
        .fold((0.0f64, 0.0f64), |(l1, l2), s| {
            (
                l1.max(r.limit_ratio_second(s).abs()),
                l2.max(r.limit_ratio_first(s).abs()),
            )
        })
}

/// Sup of `|a_eps − a|` over `n` uniform points of `(0, upper]`.
pub fn a_gap_sup(r: &RegularizedPotential, upper: f64, n: usize) -> f64 {
    (1..=n)
        .map(|i| upper * i as f64 / n as f64)
        .map(|s| (r.coeff_a_eps(s) - r.base().coeff_a(s)).abs())
        .fold(0.0, f64::max)
}

/// Builds every member of `eps_list` and grid-checks the family properties.
pub fn validate_family(
    base: &PotentialModel,
    eps_list: &[f64],
    sigma_tilde: f64,
) -> Result<FamilyReport> {
    if eps_list.is_empty() {
        return Err(Error::InvalidParameter("eps_list is empty".to_string()));
    }
    if eps_list.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidParameter(format!(
            "eps_list must be strictly decreasing, got {eps_list:?}"
        )));
    }
    let members: Vec<RegularizedPotential> = eps_list
        .iter()
        .map(|&eps| RegularizedPotential::build(base.clone(), eps, sigma_tilde))
        .collect::<Result<_>>()?;

    let sigma = base.sigma();
    let window = limit_window(sigma);
    let span = sigma_tilde + 1.0;
    let deriv_grid: Vec<f64> = (0..=2000).map(|i| span * i as f64 / 2000.0).collect();

    let mut entries = Vec::with_capacity(members.len());
    let mut violations = Vec::new();
    for r in &members {
        let eps = r.eps();
        for i in 1..=1000 {
            let s = r.s_star() * i as f64 / 1000.0;
            if !r.log_feps_pp(s).is_finite() {
                violations.push(Violation {
                    eps,
                    s,
                    kind: ViolationKind::NonPositiveSecondDerivative,
                });
                break;
            }
        }
        if let Some(&s) = deriv_grid
            .iter()
            .find(|&&s| r.feps_p(s) < base.fp(s) - 1e-12)
        {
            violations.push(Violation {
                eps,
                s,
                kind: ViolationKind::BelowBaseDerivative,
            });
        }
        let sup_a_gap = a_gap_sup(r, span, 10_000);
        if sup_a_gap > r.a_gap_bound() * (1.0 + 1e-12) {
            violations.push(Violation {
                eps,
                s: f64::NAN,
                kind: ViolationKind::AGapAboveBound,
            });
        }
        let (sup_limit1, sup_limit2) = limit_sups(r, window, 1000);
        entries.push(FamilyEntry {
            eps,
            p_eps: r.p_eps(),
            q_eps: r.q_eps(),
            omega_eps: r.omega_eps(),
            sup_a_gap,
            a_gap_bound: r.a_gap_bound(),
            sup_limit1,
            sup_limit2,
        });
    }

    for (pair, rs) in entries.windows(2).zip(members.windows(2)) {
        let (coarse, fine) = (&rs[0], &rs[1]);
        if let Some(&s) = deriv_grid
            .iter()
            .find(|&&s| fine.feps_p(s) > coarse.feps_p(s) + 1e-12)
        {
            violations.push(Violation {
                eps: fine.eps(),
                s,
                kind: ViolationKind::NotDecreasingInEps,
            });
        }
        if !(pair[1].sup_limit1 < pair[0].sup_limit1) {
            violations.push(Violation {
                eps: pair[1].eps,
                s: window,
                kind: ViolationKind::Limit1NotDecreasing,
            });
        }
        if !(pair[1].sup_limit2 < pair[0].sup_limit2) {
            violations.push(Violation {
                eps: pair[1].eps,
                s: window,
                kind: ViolationKind::Limit2NotDecreasing,
            });
        }
    }

    Ok(FamilyReport {
        entries,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_congestion, make_eikonal, CustomPotential, SecondDerivClass};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn eik(eps: f64) -> RegularizedPotential {
        RegularizedPotential::new(make_eikonal(), eps).unwrap()
    }

    /// Finite-difference derivatives of the eikonal potential, independent
    /// of the analytic evaluators.
    fn fd_derivs(s: f64) -> (f64, f64, f64) {
        let m = make_eikonal();
        let h = 1e-4;
        let f1 = |x: f64| (m.f(x + h) - m.f(x - h)) / (2.0 * h);
        let d1 = f1(s);
        let d2 = (f1(s + h) - f1(s - h)) / (2.0 * h);
        let d3 = (f1(s + h) - 2.0 * f1(s) + f1(s - h)) / (h * h);
        (d1, d2, d3)
    }

    #[test]
    fn eikonal_exponents_at_tenth() {
        let r = eik(0.1);
        assert_relative_eq!(r.omega_eps(), 2.0 / 1.1, max_relative = 1e-12);
        assert_relative_eq!(r.p_eps(), 11.0, max_relative = 1e-12);
        assert_relative_eq!(r.q_eps(), 1.1 * 3.1 / 0.21, max_relative = 1e-12);
        assert!((r.q_eps() - 16.2381).abs() < 1e-4);

        // same pipeline fed with finite-difference derivatives
        let s = 1.1;
        let (d1, d2, d3) = fd_derivs(s);
        let omega = (2.0 * (1.0 - d3 * d1 / (d2 * d2) - d1 / (s * d2))).sqrt();
        let p = s * d2 / d1 * (1.0 + 0.5 * omega);
        assert_relative_eq!(omega, r.omega_eps(), max_relative = 1e-5);
        assert_relative_eq!(p, r.p_eps(), max_relative = 1e-5);
    }

    #[test]
    fn derivative_examples() {
        let r = eik(0.1);
        assert_eq!(r.feps_p(0.0), 0.0);
        assert_relative_eq!(r.feps_p(1.1), 0.21f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(r.feps_p(2.0), 3f64.sqrt(), max_relative = 1e-14);
        assert!(r.feps_p(1.0) > 0.0);
        assert_eq!(r.feps(0.0), 0.0);
        assert_relative_eq!(r.coeff_a_eps(2.0), 0.75, max_relative = 1e-14);
    }

    #[test]
    fn splice_is_smooth() {
        for r in [eik(0.2), eik(0.1), eik(0.025), RegularizedPotential::new(make_congestion(3.0).unwrap(), 0.1).unwrap()] {
            let s = r.s_star();
            let base = r.base();
            assert!((r.feps_p(s) - base.fp(s)).abs() <= 1e-10);
            assert!((r.feps_pp(s) - base.fpp(s)).abs() <= 1e-10 * base.fpp(s).max(1.0));
            // third derivative from one-sided differences of f_eps''
            let h = 1e-7;
            let left = (r.feps_pp(s) - r.feps_pp(s - h)) / h;
            let right = (r.feps_pp(s + h) - r.feps_pp(s)) / h;
            assert_relative_eq!(left, right, max_relative = 1e-4);
            assert_relative_eq!(r.feps_ppp(s - 1e-15), base.fppp(s).unwrap(), max_relative = 1e-8);
            // value continuity at the splice
            assert_relative_eq!(r.feps(s), r.feps(s + 1e-12), epsilon = 1e-11);
        }
    }

    #[test]
    fn value_matches_integral_of_derivative() {
        let r = eik(0.1);
        let q = crate::quadrature::Quadrature::default();
        for s in [0.5f64, 1.05, 1.1, 1.7, 3.0] {
            let integral = q.integrate(|x| r.feps_p(x), 0.0, s.min(1.1)).unwrap()
                + if s > 1.1 { q.integrate(|x| r.feps_p(x), 1.1, s).unwrap() } else { 0.0 };
            assert_relative_eq!(r.feps(s), integral, max_relative = 1e-9);
        }
    }

    #[test]
    fn a_eps_near_origin_tends_to_inverse_p() {
        let r = eik(0.1);
        assert_relative_eq!(r.coeff_a_eps(1e-9), 1.0 / 11.0, max_relative = 1e-9);
        assert_relative_eq!(r.coeff_a_eps(0.0), 1.0 / 11.0, max_relative = 1e-12);
        // and that limit goes to zero along the family
        let lims: Vec<f64> = [0.1, 0.01, 0.001].iter().map(|&e| eik(e).coeff_a_eps(0.0)).collect();
        assert!(lims[0] > lims[1] && lims[1] > lims[2] && lims[2] < 1e-3);
        assert_eq!(r.coeff_b_eps(0.0), f64::INFINITY);
        assert_eq!(eik(0.1).limit_ratio_first(0.0), 0.0);
    }

    #[test]
    fn a_gap_bound_value() {
        let r = eik(0.1);
        let (d1, d2, _) = fd_derivs(1.1);
        assert_relative_eq!(r.a_gap_bound(), d1 / (1.1 * d2), max_relative = 1e-6);
        assert!((r.a_gap_bound() - 0.1736).abs() < 1e-4);
        assert!(a_gap_sup(&r, 3.0, 10_000) <= r.a_gap_bound());
    }

    #[test]
    fn b_equals_base_beyond_splice() {
        let r = eik(0.05);
        for i in 0..200 {
            let s = r.s_star() + 1e-3 + i as f64 * 0.05;
            assert_eq!(r.coeff_b_eps(s), r.base().coeff_b(s));
        }
    }

    #[test]
    fn invalid_parameters() {
        let m = make_eikonal();
        assert!(RegularizedPotential::build(m.clone(), 0.0, 2.0).is_err());
        assert!(RegularizedPotential::build(m.clone(), 0.5, 1.4).is_err());
        assert!(RegularizedPotential::build(m.clone(), 0.1, 0.9).is_err());
        assert!(validate_family(&m, &[0.1, 0.2], 2.0).is_err());
    }

    fn custom(name: &str, fp: fn(f64) -> f64, fpp: fn(f64) -> f64, fppp: Option<fn(f64) -> f64>) -> PotentialModel {
        // value by crude integration is irrelevant to the build checks
        PotentialModel::new(CustomPotential {
            name: name.into(),
            sigma: 1.0,
            class: SecondDerivClass::C2ThroughSigma,
            edge_exponent: 0.0,
            f: Arc::new(|_| 0.0),
            fp: Arc::new(fp),
            fpp: Arc::new(fpp),
            fppp: fppp.map(|g| Arc::new(g) as Arc<dyn Fn(f64) -> f64 + Send + Sync>),
        })
    }

    #[test]
    fn missing_third_derivative_is_rejected() {
        let m = custom("no-third", |s| (s - 1.0).max(0.0).powi(2), |s| 2.0 * (s - 1.0), None);
        assert!(matches!(
            RegularizedPotential::new(m, 0.1),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn decreasing_a_is_rejected() {
        // f' = e^{5(s-1)} - 1 gives a = (1 - e^{-5(s-1)}) / (5 s), which peaks
        // and then falls inside [1, 2].
        let m = custom(
            "exponential",
            |s| if s <= 1.0 { 0.0 } else { (5.0 * (s - 1.0)).exp() - 1.0 },
            |s| 5.0 * (5.0 * (s - 1.0)).exp(),
            Some(|s| 25.0 * (5.0 * (s - 1.0)).exp()),
        );
        assert!(matches!(
            RegularizedPotential::build(m, 0.1, 2.0),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn eikonal_family_report() {
        let report = validate_family(&make_eikonal(), &[0.2, 0.1, 0.05], 2.0).unwrap();
        assert_eq!(report.violations_of(ViolationKind::NonPositiveSecondDerivative).count(), 0);
        assert_eq!(report.violations_of(ViolationKind::BelowBaseDerivative).count(), 0);
        assert_eq!(report.violations_of(ViolationKind::AGapAboveBound).count(), 0);
        assert_eq!(report.violations_of(ViolationKind::Limit2NotDecreasing).count(), 0);
        let l2: Vec<f64> = report.entries.iter().map(|e| e.sup_limit2).collect();
        assert!(l2[0] > l2[1] && l2[1] > l2[2]);
        for r in [eik(0.2), eik(0.1), eik(0.05)] {
            assert!(r.feps_p(1.0) > 0.0);
        }
    }

    #[test]
    fn exponents_grow_as_eps_shrinks() {
        for base in [make_eikonal(), make_congestion(1.5).unwrap(), make_congestion(2.0).unwrap()] {
            let mut prev = (0.0, 0.0);
            for k in 1..=6 {
                let r = RegularizedPotential::new(base.clone(), 10f64.powf(-(k as f64) / 2.0)).unwrap();
                assert!(2.0 * r.p_eps() > r.q_eps() && r.q_eps() > r.p_eps());
                assert!(r.p_eps() > prev.0 && r.q_eps() > prev.1);
                prev = (r.p_eps(), r.q_eps());
            }
            assert!(prev.0 > 100.0);
        }
    }
}
