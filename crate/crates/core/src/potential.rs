//! Degenerate convex potentials `f` that vanish on a plateau `[0, sigma]`,
//! their Fenchel conjugates, and the coefficient functions derived from them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Quadrature;

/// How `f''` behaves as `s -> sigma+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondDerivClass {
    /// `f''` extends continuously through `sigma`.
    C2ThroughSigma,
    /// `f''(s) -> +inf` as `s -> sigma+`.
    BlowsUpAtSigma,
}

/// A potential satisfying the plateau hypotheses.
///
/// Second and third derivatives are requested as functions of the offset
/// `d = s - sigma > 0` so that implementations can avoid cancellation next to
/// the plateau edge. The plateau conventions (`f' = f'' = 0` for `s <= sigma`)
/// are applied by [`PotentialModel`], not by implementors.
pub trait Potential: Send + Sync + fmt::Debug {
    fn sigma(&self) -> f64;
    fn value(&self, s: f64) -> f64;
    fn first(&self, s: f64) -> f64;
    fn second_above(&self, d: f64) -> f64;
    /// `None` when the third derivative is not supplied.
    fn third_above(&self, d: f64) -> Option<f64>;
    fn class(&self) -> SecondDerivClass;
    /// Exponent `beta` with `f''(sigma + d) ~ d^beta` as `d -> 0+`.
    fn edge_exponent(&self) -> f64 {
        0.0
    }
    fn label(&self) -> String;

    /// Closed-form `g(t)`, if known.
    fn conjugate(&self, _t: f64) -> Option<f64> {
        None
    }
    /// Closed-form `g'(t)` for `t > 0`, if known.
    fn conjugate_first(&self, _t: f64) -> Option<f64> {
        None
    }
    /// Closed-form `g''(t)` for `t > 0`, if known.
    fn conjugate_second(&self, _t: f64) -> Option<f64> {
        None
    }
}

/// `f(s) = ½[s√(s²−1) − ln(s + √(s²−1))]` for `s > 1`, zero below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eikonal;

impl Potential for Eikonal {
    fn sigma(&self) -> f64 {
        1.0
    }

    fn value(&self, s: f64) -> f64 {
        if s <= 1.0 {
            return 0.0;
        }
        let d = s - 1.0;
        let root = (d * (2.0 + d)).sqrt();
        0.5 * (s * root - (d + root).ln_1p())
    }

    fn first(&self, s: f64) -> f64 {
        if s <= 1.0 {
            return 0.0;
        }
        let d = s - 1.0;
        (d * (2.0 + d)).sqrt()
    }

    fn second_above(&self, d: f64) -> f64 {
        (1.0 + d) / (d * (2.0 + d)).sqrt()
    }

    fn third_above(&self, d: f64) -> Option<f64> {
        Some(-(d * (2.0 + d)).powf(-1.5))
    }

    fn class(&self) -> SecondDerivClass {
        SecondDerivClass::BlowsUpAtSigma
    }

    fn edge_exponent(&self) -> f64 {
        -0.5
    }

    fn label(&self) -> String {
        "eikonal".to_string()
    }

    fn conjugate(&self, t: f64) -> Option<f64> {
        Some(0.5 * (t * t.hypot(1.0) + t.asinh()))
    }

    fn conjugate_first(&self, t: f64) -> Option<f64> {
        Some(t.hypot(1.0))
    }

    fn conjugate_second(&self, t: f64) -> Option<f64> {
        Some(t / t.hypot(1.0))
    }
}

/// `f(s) = (s − 1)^q / q` for `s > 1`, zero below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Congestion {
    q: f64,
}

impl Congestion {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "congestion exponent must satisfy q > 1, got {q}"
            )));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl Potential for Congestion {
    fn sigma(&self) -> f64 {
        1.0
    }

    fn value(&self, s: f64) -> f64 {
        if s <= 1.0 {
            0.0
        } else {
            (s - 1.0).powf(self.q) / self.q
        }
    }

    fn first(&self, s: f64) -> f64 {
        if s <= 1.0 {
            0.0
        } else {
            (s - 1.0).powf(self.q - 1.0)
        }
    }

    fn second_above(&self, d: f64) -> f64 {
        (self.q - 1.0) * d.powf(self.q - 2.0)
    }

    fn third_above(&self, d: f64) -> Option<f64> {
        let q = self.q;
        if q == 2.0 {
            return Some(0.0);
        }
        Some((q - 1.0) * (q - 2.0) * d.powf(q - 3.0))
    }

    fn class(&self) -> SecondDerivClass {
        if self.q < 2.0 {
            SecondDerivClass::BlowsUpAtSigma
        } else {
            SecondDerivClass::C2ThroughSigma
        }
    }

    fn edge_exponent(&self) -> f64 {
        (self.q - 2.0).min(0.0)
    }

    fn label(&self) -> String {
        format!("congestion:q={}", self.q)
    }

    fn conjugate(&self, t: f64) -> Option<f64> {
        let q = self.q;
        Some(t + (1.0 - 1.0 / q) * t.powf(q / (q - 1.0)))
    }

    fn conjugate_first(&self, t: f64) -> Option<f64> {
        Some(1.0 + t.powf(1.0 / (self.q - 1.0)))
    }

    fn conjugate_second(&self, t: f64) -> Option<f64> {
        let e = 1.0 / (self.q - 1.0);
        if t == 0.0 {
            return Some(if e > 1.0 {
                0.0
            } else if e == 1.0 {
                1.0
            } else {
                f64::INFINITY
            });
        }
        Some(e * t.powf(e - 1.0))
    }
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied potential given by closures in the absolute variable `s`.
#[derive(Clone)]
pub struct CustomPotential {
    pub name: String,
    pub sigma: f64,
    pub class: SecondDerivClass,
    pub edge_exponent: f64,
    pub f: Scalar,
    pub fp: Scalar,
    pub fpp: Scalar,
    pub fppp: Option<Scalar>,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("name", &self.name)
            .field("sigma", &self.sigma)
            .field("class", &self.class)
            .field("has_third_derivative", &self.fppp.is_some())
            .finish()
    }
}

impl Potential for CustomPotential {
    fn sigma(&self) -> f64 {
        self.sigma
    }
    fn value(&self, s: f64) -> f64 {
        (self.f)(s)
    }
    fn first(&self, s: f64) -> f64 {
        (self.fp)(s)
    }
    fn second_above(&self, d: f64) -> f64 {
        (self.fpp)(self.sigma + d)
    }
    fn third_above(&self, d: f64) -> Option<f64> {
        self.fppp.as_ref().map(|g| g(self.sigma + d))
    }
    fn class(&self) -> SecondDerivClass {
        self.class
    }
    fn edge_exponent(&self) -> f64 {
        self.edge_exponent
    }
    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Shared handle to an immutable potential, with the plateau conventions
/// applied on top of the raw evaluators.
#[derive(Clone)]
pub struct PotentialModel(Arc<dyn Potential>);

impl fmt::Debug for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The eikonal potential, `sigma = 1`.
pub fn make_eikonal() -> PotentialModel {
    PotentialModel::new(Eikonal)
}

/// The congestion potential `(s − 1)^q / q`, `sigma = 1`.
pub fn make_congestion(q: f64) -> Result<PotentialModel> {
    Ok(PotentialModel::new(Congestion::new(q)?))
}

impl PotentialModel {
    pub fn new<P: Potential + 'static>(p: P) -> Self {
        Self(Arc::new(p))
    }

    /// Wraps a user-supplied potential after grid-checking the hypotheses.
    pub fn custom(p: CustomPotential) -> Result<Self> {
        if !(p.sigma > 0.0 && p.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {}",
                p.sigma
            )));
        }
        let model = Self::new(p);
        model.check_hypotheses()?;
        Ok(model)
    }

    /// Parses `eikonal` or `congestion:q=<v>`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "eikonal" {
            return Ok(make_eikonal());
        }
        if let Some(rest) = name.strip_prefix("congestion") {
            let q = rest
                .strip_prefix(":q=")
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "expected `congestion:q=<value>`, got `{name}`"
                    ))
                })?;
            return make_congestion(q);
        }
        Err(Error::InvalidParameter(format!(
            "unknown potential `{name}` (expected `eikonal` or `congestion:q=<value>`)"
        )))
    }

    pub fn inner(&self) -> &dyn Potential {
        self.0.as_ref()
    }

    pub fn label(&self) -> String {
        self.0.label()
    }

    pub fn sigma(&self) -> f64 {
        self.0.sigma()
    }

    pub fn class(&self) -> SecondDerivClass {
        self.0.class()
    }

    pub fn has_third_derivative(&self) -> bool {
        self.0.third_above(1.0).is_some()
    }

    pub fn f(&self, s: f64) -> f64 {
        if s <= self.sigma() {
            0.0
        } else {
            self.0.value(s)
        }
    }

    pub fn fp(&self, s: f64) -> f64 {
        if s <= self.sigma() {
            0.0
        } else {
            self.0.first(s)
        }
    }

    /// `f''(s)`, taken as zero on the closed plateau.
    pub fn fpp(&self, s: f64) -> f64 {
        let sigma = self.sigma();
        if s <= sigma {
            0.0
        } else {
            self.0.second_above(s - sigma)
        }
    }

    pub fn fppp(&self, s: f64) -> Option<f64> {
        let sigma = self.sigma();
        if s <= sigma {
            self.0.third_above(1.0).map(|_| 0.0)
        } else {
            self.0.third_above(s - sigma)
        }
    }

    /// `a(s) = f'(s) / (s f''(s))` above the plateau, zero on it.
    pub fn coeff_a(&self, s: f64) -> f64 {
        if s <= self.sigma() {
            0.0
        } else {
            self.fp(s) / (s * self.fpp(s))
        }
    }

    /// `b(s) = s² / f''(s)` above the plateau, zero on it.
    pub fn coeff_b(&self, s: f64) -> f64 {
        if s <= self.sigma() {
            0.0
        } else {
            s * s / self.fpp(s)
        }
    }

    /// `Φ(t) = 2 ∫_0^t s f''(s) ds`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        self.phi_with(&Quadrature::default(), t)
    }

    pub fn phi_with(&self, quad: &Quadrature, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidParameter(format!("phi needs t >= 0, got {t}")));
        }
        let sigma = self.sigma();
        if t <= sigma {
            return Ok(0.0);
        }
        let inner = self.inner();
        let integrand = |d: f64| 2.0 * (sigma + d) * inner.second_above(d);
        match self.class() {
            SecondDerivClass::C2ThroughSigma => quad.integrate(integrand, 0.0, t - sigma),
            SecondDerivClass::BlowsUpAtSigma => {
                let beta = inner.edge_exponent();
                if beta <= -1.0 {
                    return Err(Error::HypothesisViolation(format!(
                        "f'' ~ d^{beta} is not integrable at sigma"
                    )));
                }
                let power = (1.0 / (1.0 + beta)).ceil().max(1.0) as u32;
                quad.integrate_endpoint_singular(integrand, t - sigma, power)
            }
        }
    }

    /// Grid check of the model hypotheses: `f(0) = 0`, flat plateau,
    /// `f'' > 0` beyond it, monotone `f'`, convexity and the superlinearity
    /// proxy `f(10σ)/(10σ) < f(100σ)/(100σ)`.
    pub fn check_hypotheses(&self) -> Result<()> {
        let sigma = self.sigma();
        let violation = |what: String| Err(Error::HypothesisViolation(what));

        if self.0.value(0.0).abs() > 1e-14 {
            return violation(format!("f(0) = {} != 0", self.0.value(0.0)));
        }
        let n = 2000;
        for i in 0..=n {
            let s = sigma * i as f64 / n as f64;
            let d = self.0.first(s);
            if d.abs() > 1e-14 {
                return violation(format!("f'({s}) = {d} on the plateau"));
            }
        }
        let top = 10.0 * sigma;
        let mut prev_fp = 0.0;
        let grid: Vec<f64> = (1..=n)
            .map(|i| sigma + (top - sigma) * i as f64 / n as f64)
            .collect();
        for &s in &grid {
            let fpp = self.fpp(s);
            if !(fpp > 0.0) {
                return violation(format!("f''({s}) = {fpp} is not positive"));
            }
            let fp = self.fp(s);
            if fp < prev_fp - 1e-12 {
                return violation(format!("f' decreases near s = {s}"));
            }
            prev_fp = fp;
        }
        for w in grid.windows(3) {
            let second_diff = self.f(w[0]) - 2.0 * self.f(w[1]) + self.f(w[2]);
            if second_diff < -1e-12 {
                return violation(format!("f is not convex near s = {}", w[1]));
            }
        }
        let ratio = |s: f64| self.f(s) / s;
        if !(ratio(10.0 * sigma) < ratio(100.0 * sigma)) {
            return violation("f(s)/s is not increasing between 10σ and 100σ".to_string());
        }
        Ok(())
    }
}

/// Fenchel conjugate `g(t) = sup_{s >= 0} (s t − f(s))` of a model.
#[derive(Debug, Clone)]
pub struct FenchelConjugate {
    base: PotentialModel,
    pub inversion_tolerance: f64,
}

impl FenchelConjugate {
    pub fn new(base: PotentialModel) -> Self {
        Self {
            base,
            inversion_tolerance: 1e-12,
        }
    }

    pub fn with_tolerance(base: PotentialModel, inversion_tolerance: f64) -> Self {
        Self {
            base,
            inversion_tolerance,
        }
    }

    pub fn base(&self) -> &PotentialModel {
        &self.base
    }

    fn check(t: f64) -> Result<()> {
        if t >= 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "conjugate is evaluated for finite t >= 0, got {t}"
            )))
        }
    }

    /// `g(t)`; closed form when the potential has one.
    pub fn g(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        if let Some(v) = self.base.inner().conjugate(t) {
            return Ok(v);
        }
        let s = self.gp(t)?;
        Ok(t * s - self.base.f(s))
    }

    /// `g'(t) = (f')^{-1}(t)`, with `g'(0) = sigma`.
    pub fn gp(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        if t == 0.0 {
            return Ok(self.base.sigma());
        }
        if let Some(v) = self.base.inner().conjugate_first(t) {
            return Ok(v);
        }
        self.invert_derivative(t)
    }

    /// `g''(t)`; closed form when available, otherwise `1 / f''(g'(t))`.
    pub fn gpp(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        if let Some(v) = self.base.inner().conjugate_second(t) {
            return Ok(v);
        }
        if t == 0.0 {
            return Err(Error::InvalidParameter(
                "g'' at t = 0 needs a closed form".to_string(),
            ));
        }
        let s = self.gp(t)?;
        Ok(1.0 / self.base.fpp(s))
    }

    /// Solves `f'(s) = t` for `s > sigma` by doubling the bracket from
    /// `sigma + 1` and then bisecting, ignoring any closed form.
    pub fn invert_derivative(&self, t: f64) -> Result<f64> {
        Self::check(t)?;
        let sigma = self.base.sigma();
        if t == 0.0 {
            return Ok(sigma);
        }
        let mut lo = sigma;
        let mut width = 1.0;
        let mut hi = sigma + width;
        let mut doublings = 0;
        while self.base.fp(hi) <= t {
            lo = hi;
            width *= 2.0;
            hi = sigma + width;
            doublings += 1;
            if doublings > 200 || !hi.is_finite() {
                return Err(Error::InversionRange { target: t, upper: hi });
            }
        }
        while hi - lo > self.inversion_tolerance {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.base.fp(mid) > t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `g(t)` for [`FenchelConjugate`] `c`.
pub fn conjugate_g(c: &FenchelConjugate, t: f64) -> Result<f64> {
    c.g(t)
}

/// `g'(t)` for [`FenchelConjugate`] `c`.
pub fn conjugate_gp(c: &FenchelConjugate, t: f64) -> Result<f64> {
    c.gp(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Brute-force sup of `s t − f(s)` over `[0, 50]`, refined locally.
    fn grid_sup(m: &PotentialModel, t: f64) -> (f64, f64) {
        let step = 1e-4;
        let mut best = (0.0, f64::NEG_INFINITY);
        let n = (50.0 / step) as usize;
        for i in 0..=n {
            let s = i as f64 * step;
            let v = s * t - m.f(s);
            if v > best.1 {
                best = (s, v);
            }
        }
        // golden-section polish inside the winning cell
        let (mut a, mut b) = ((best.0 - step).max(0.0), best.0 + step);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if c * t - m.f(c) > d * t - m.f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let s = 0.5 * (a + b);
        (s, (s * t - m.f(s)).max(best.1))
    }

    fn central_diff(f: impl Fn(f64) -> f64, s: f64, h: f64) -> f64 {
        (f(s + h) - f(s - h)) / (2.0 * h)
    }

    #[test]
    fn eikonal_values() {
        let m = make_eikonal();
        assert_eq!(m.fp(1.0), 0.0);
        assert_eq!(m.f(1.0), 0.0);
        assert_relative_eq!(m.fp(2f64.sqrt()), 1.0, max_relative = 1e-14);
        let fd = central_diff(|s| m.f(s), 2f64.sqrt(), 1e-6);
        assert_relative_eq!(fd, 1.0, max_relative = 1e-8);
        assert_eq!(m.class(), SecondDerivClass::BlowsUpAtSigma);
        m.check_hypotheses().unwrap();
    }

    #[test]
    fn congestion_values() {
        let m2 = make_congestion(2.0).unwrap();
        assert_relative_eq!(m2.f(2.0), 0.5, max_relative = 1e-15);
        assert_eq!(m2.fp(1.0), 0.0);
        assert_eq!(m2.class(), SecondDerivClass::C2ThroughSigma);
        let m3 = make_congestion(3.0).unwrap();
        assert_relative_eq!(m3.fpp(1.5), 1.0, max_relative = 1e-14);
        let fd = central_diff(|s| m3.fp(s), 1.5, 1e-6);
        assert_relative_eq!(fd, 1.0, max_relative = 1e-8);
        assert_eq!(
            make_congestion(1.5).unwrap().class(),
            SecondDerivClass::BlowsUpAtSigma
        );
        for q in [1.5, 2.0, 3.0] {
            make_congestion(q).unwrap().check_hypotheses().unwrap();
        }
    }

    #[test]
    fn congestion_rejects_small_exponent() {
        assert!(matches!(make_congestion(1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_congestion(0.3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn names_parse() {
        assert_eq!(PotentialModel::from_name("eikonal").unwrap().label(), "eikonal");
        let c = PotentialModel::from_name("congestion:q=2.5").unwrap();
        assert_eq!(c.label(), "congestion:q=2.5");
        assert!(PotentialModel::from_name("congestion").is_err());
        assert!(PotentialModel::from_name("congestion:q=1").is_err());
        assert!(PotentialModel::from_name("huber").is_err());
    }

    #[test]
    fn conjugate_examples() {
        let e = FenchelConjugate::new(make_eikonal());
        assert_eq!(e.g(0.0).unwrap(), 0.0);
        let (s_star, oracle) = grid_sup(&make_eikonal(), 2.0);
        let g2 = e.g(2.0).unwrap();
        assert_relative_eq!(g2, oracle, epsilon = 1e-9);
        assert_relative_eq!(g2, 2.0 * 5f64.sqrt() - make_eikonal().f(5f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(e.gp(2.0).unwrap(), 5f64.sqrt(), max_relative = 1e-15);
        assert!((s_star - 5f64.sqrt()).abs() < 1e-6);

        let c = FenchelConjugate::new(make_congestion(2.0).unwrap());
        assert_relative_eq!(c.g(1.0).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(c.gp(0.5).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(c.invert_derivative(0.5).unwrap(), 1.5, epsilon = 1e-12);

        for m in [make_eikonal(), make_congestion(3.0).unwrap()] {
            assert_eq!(FenchelConjugate::new(m.clone()).gp(0.0).unwrap(), m.sigma());
        }
        assert!(e.g(-1.0).is_err());
        assert!(e.gp(-1e-3).is_err());
    }

    #[test]
    fn generic_inversion_matches_closed_forms() {
        for m in [make_eikonal(), make_congestion(1.5).unwrap(), make_congestion(3.0).unwrap()] {
            let c = FenchelConjugate::new(m);
            for t in [1e-3, 0.1, 1.0, 7.0, 80.0] {
                let closed = c.gp(t).unwrap();
                let generic = c.invert_derivative(t).unwrap();
                assert!((closed - generic).abs() < 1e-11, "t={t}: {closed} vs {generic}");
            }
        }
    }

    #[test]
    fn bounded_derivative_fails_inversion() {
        // f'(s) = 1 - 1/s saturates at 1: convex but not superlinear.
        let p = CustomPotential {
            name: "saturating".into(),
            sigma: 1.0,
            class: SecondDerivClass::C2ThroughSigma,
            edge_exponent: 0.0,
            f: Arc::new(|s: f64| if s <= 1.0 { 0.0 } else { s - 1.0 - s.ln() }),
            fp: Arc::new(|s: f64| if s <= 1.0 { 0.0 } else { 1.0 - 1.0 / s }),
            fpp: Arc::new(|s: f64| 1.0 / (s * s)),
            fppp: None,
        };
        // f(s)/s still grows between 10σ and 100σ, so the proxy accepts it.
        let c = FenchelConjugate::new(PotentialModel::custom(p).unwrap());
        match c.gp(2.0) {
            Err(Error::InversionRange { target, upper }) => {
                assert_eq!(target, 2.0);
                assert!(upper > 1e50);
            }
            other => panic!("expected inversion-range error, got {other:?}"),
        }
    }

    #[test]
    fn coefficient_examples() {
        let e = make_eikonal();
        assert_relative_eq!(e.coeff_a(2.0), 0.75, max_relative = 1e-14);
        assert_eq!(e.coeff_a(1.0), 0.0);
        assert_relative_eq!(e.coeff_b(2f64.sqrt()), 2f64.sqrt(), max_relative = 1e-14);
        assert_eq!(e.coeff_b(0.5), 0.0);
        let c2 = make_congestion(2.0).unwrap();
        assert_relative_eq!(c2.coeff_a(2.0), 0.5, max_relative = 1e-14);
        assert_eq!(c2.coeff_a(1.0), 0.0);
        let c3 = make_congestion(3.0).unwrap();
        let fd_fpp = central_diff(|s| c3.fp(s), 2.0, 1e-6);
        assert_relative_eq!(c3.coeff_b(2.0), 4.0 / fd_fpp, max_relative = 1e-8);
        assert_relative_eq!(c3.coeff_b(2.0), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn coefficients_vanish_at_plateau_edge() {
        let all = [
            make_eikonal(),
            make_congestion(1.5).unwrap(),
            make_congestion(2.0).unwrap(),
            make_congestion(3.0).unwrap(),
        ];
        for m in &all {
            let mut prev = f64::INFINITY;
            for k in 2..12 {
                let a = m.coeff_a(m.sigma() + 10f64.powi(-k)).abs();
                assert!(a < prev, "{m:?} k={k}");
                prev = a;
            }
            assert!(prev < 1e-10);
        }
        // b = s²/f'' only vanishes at sigma when f'' blows up there.
        for m in all.iter().filter(|m| m.class() == SecondDerivClass::BlowsUpAtSigma) {
            let mut prev = f64::INFINITY;
            for k in 2..12 {
                let b = m.coeff_b(m.sigma() + 10f64.powi(-k)).abs();
                assert!(b < prev, "{m:?} k={k}");
                prev = b;
            }
            assert!(prev < 1e-2, "{m:?}: {prev}");
        }
        let c2 = make_congestion(2.0).unwrap();
        assert!((c2.coeff_b(1.0 + 1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn phi_examples() {
        let e = make_eikonal();
        assert_eq!(e.phi(1.0).unwrap(), 0.0);
        let theta = 1f64.asinh();
        let closed = theta + theta.sinh() * theta.cosh();
        assert_relative_eq!(e.phi(2f64.sqrt()).unwrap(), closed, max_relative = 1e-10);
        assert!((closed - 2.2956).abs() < 1e-4);
        let c = make_congestion(2.0).unwrap();
        assert_relative_eq!(c.phi(2.0).unwrap(), 3.0, max_relative = 1e-12);
        // singular congestion branch, against the antiderivative 2(t f'(t) − f(t))
        let c15 = make_congestion(1.5).unwrap();
        let t = 1.7;
        let exact = 2.0 * (t * c15.fp(t) - c15.f(t));
        assert_relative_eq!(c15.phi(t).unwrap(), exact, max_relative = 1e-10);
        assert!(e.phi(-1.0).is_err());
    }
}
