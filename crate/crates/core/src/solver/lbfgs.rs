use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iterations: usize,
    pub max_backtracks: usize,
    /// Armijo constant.
    pub c1: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iterations: 50_000,
            max_backtracks: 60,
            c1: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two-loop recursion: `-H g` for the stored pairs.
fn direction(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Limited-memory BFGS with backtracking. A step is accepted on the Armijo
/// condition, or, once energy differences drop to rounding level, on the
/// directional derivative alone.
pub fn minimize<F>(
    mut eval: F,
    x0: Vec<f64>,
    gtol: f64,
    opts: &LbfgsOptions,
) -> Result<LbfgsOutcome>
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let mut x = x0;
    let (mut fx, mut g) = eval(&x);
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut iterations = 0;
    while norm(&g) > gtol {
        if iterations >= opts.max_iterations {
            return Err(Error::Optimization {
                iterations,
                energy: fx,
                grad_norm: norm(&g),
                reason: "iteration limit reached".to_string(),
            });
        }
        let mut d = direction(&g, &pairs);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            pairs.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut step = if pairs.is_empty() {
            (1.0 / norm(&g)).min(1.0)
        } else {
            1.0
        };
        let floor = 1e-14 * fx.abs().max(1.0);
        let mut accepted = None;
        for _ in 0..=opts.max_backtracks {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = eval(&trial);
            if ft.is_finite() {
                let armijo = ft <= fx + opts.c1 * step * slope;
                let slope_t = dot(&gt, &d);
                let flat = (ft - fx).abs() <= floor && slope_t.abs() <= 0.9 * slope.abs();
                if armijo || flat {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else {
            if !pairs.is_empty() {
                // retry from steepest descent before giving up
                pairs.clear();
                continue;
            }
            return Err(Error::Optimization {
                iterations,
                energy: fx,
                grad_norm: norm(&g),
                reason: format!("line search failed after {} backtracks", opts.max_backtracks),
            });
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if pairs.len() == opts.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        x = xn;
        fx = fnew;
        g = gn;
        iterations += 1;
    }
    Ok(LbfgsOutcome {
        grad_norm: norm(&g),
        x,
        energy: fx,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let v = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            (v, g)
        };
        let out = minimize(f, vec![-1.2, 1.0], 1e-10, &LbfgsOptions::default()).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ill_conditioned_quadratic() {
        let n = 50;
        let f = |x: &[f64]| {
            let v: f64 = x.iter().enumerate().map(|(i, xi)| 0.5 * 10f64.powf(i as f64 / 8.0) * (xi - 1.0).powi(2)).sum();
            let g = x.iter().enumerate().map(|(i, xi)| 10f64.powf(i as f64 / 8.0) * (xi - 1.0)).collect();
            (v, g)
        };
        let out = minimize(f, vec![0.0; n], 1e-9, &LbfgsOptions::default()).unwrap();
        assert!(out.x.iter().all(|v| (v - 1.0).abs() < 1e-8));
    }

    #[test]
    fn iteration_limit_is_reported() {
        let f = |x: &[f64]| ((x[0] - 3.0).powi(4), vec![4.0 * (x[0] - 3.0).powi(3)]);
        let opts = LbfgsOptions {
            max_iterations: 2,
            ..LbfgsOptions::default()
        };
        assert!(matches!(
            minimize(f, vec![0.0], 1e-30, &opts),
            Err(Error::Optimization { iterations: 2, .. })
        ));
    }
}
