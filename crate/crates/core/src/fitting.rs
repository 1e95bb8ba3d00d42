//! Levenberg–Marquardt fit of f(Δ) = 1 − a·sin²(bΔ/2 − c).
//!
//! Damping starts at 1e-3, grows ×10 on a rejected step and shrinks ÷10 on an
//! accepted one. The iteration stops when the gradient norm drops below 1e-10,
//! or when an accepted step changes the cost by less than 1e-12 relative and
//! the gradient is that small as well. Standard errors come from s²·(JᵀJ)⁻¹ at
//! the optimum, s² = cost / (N − 3).

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 500;
pub const GRADIENT_TOLERANCE: f64 = 1e-10;
pub const RELATIVE_COST_TOLERANCE: f64 = 1e-12;
const INITIAL_LAMBDA: f64 = 1e-3;
const MAX_LAMBDA: f64 = 1e16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub stderr_c: f64,
    /// √Σ w_i (p_i − f(Δ_i))², weights rescaled to mean 1
    pub residual_norm: f64,
    pub gradient_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    /// False when b and c cannot be determined (a ≈ 0 or singular normal matrix);
    /// their standard errors are then infinite.
    pub identifiable: bool,
}

impl FitParams {
    pub fn eval(&self, delta: f64) -> f64 {
        model(self.a, self.b, self.c, delta)
    }
}

pub fn model(a: f64, b: f64, c: f64, delta: f64) -> f64 {
    1.0 - a * (b * delta / 2.0 - c).sin().powi(2)
}

pub fn model_eval(params: &FitParams, delta: f64) -> f64 {
    params.eval(delta)
}

/// ∂f/∂(a, b, c) at `delta`.
pub fn model_gradient(a: f64, b: f64, c: f64, delta: f64) -> [f64; 3] {
    let u = b * delta / 2.0 - c;
    let s2u = (2.0 * u).sin();
    [-u.sin().powi(2), -a * s2u * delta / 2.0, a * s2u]
}

pub fn fit_success_curve(deltas: &[f64], probabilities: &[f64], weights: Option<&[f64]>) -> Result<FitParams> {
    fit_with_trace(deltas, probabilities, weights).map(|(p, _)| p)
}

struct Problem<'a> {
    deltas: &'a [f64],
    probs: &'a [f64],
    sqrt_w: Vec<f64>,
}

impl Problem<'_> {
    fn residuals(&self, t: &Vector3<f64>) -> Vec<f64> {
        self.deltas
            .iter()
            .zip(self.probs)
            .zip(&self.sqrt_w)
            .map(|((&d, &p), &w)| w * (p - model(t[0], t[1], t[2], d)))
            .collect()
    }

    /// (JᵀJ, Jᵀr) for residuals r_i = √w_i (p_i − f_i).
    fn normal_equations(&self, t: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for ((&d, &p), &w) in self.deltas.iter().zip(self.probs).zip(&self.sqrt_w) {
            let r = w * (p - model(t[0], t[1], t[2], d));
            let g = model_gradient(t[0], t[1], t[2], d);
            let row = Vector3::new(-w * g[0], -w * g[1], -w * g[2]);
            jtj += row * row.transpose();
            jtr += row * r;
        }
        (jtj, jtr)
    }
}

/// Fit plus the cost after every accepted step (first entry is the initial cost).
pub(crate) fn fit_with_trace(
    deltas: &[f64],
    probabilities: &[f64],
    weights: Option<&[f64]>,
) -> Result<(FitParams, Vec<f64>)> {
    if deltas.len() != probabilities.len() {
        return Err(Error::DimensionMismatch { expected: deltas.len(), found: probabilities.len() });
    }
    if deltas.len() < 4 {
        return Err(Error::TooFewPoints(deltas.len()));
    }
    if deltas.iter().chain(probabilities).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite data".into()));
    }
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1.0 {
        return Err(Error::InvalidParameter(format!("delta span {} < 1", hi - lo)));
    }
    let sqrt_w = match weights {
        Some(w) => {
            if w.len() != deltas.len() {
                return Err(Error::DimensionMismatch { expected: deltas.len(), found: w.len() });
            }
            if w.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::InvalidParameter("weights must be finite and non-negative".into()));
            }
            // rescaling to mean 1 leaves the optimum and the standard errors
            // unchanged and keeps the gradient on a fixed scale
            let mean = w.iter().sum::<f64>() / w.len() as f64;
            if !(mean > 0.0) {
                return Err(Error::InvalidParameter("weights are all zero".into()));
            }
            w.iter().map(|x| (x / mean).sqrt()).collect()
        }
        None => vec![1.0; deltas.len()],
    };
    let problem = Problem { deltas, probs: probabilities, sqrt_w };

    let p_min = probabilities.iter().copied().fold(f64::INFINITY, f64::min);
    let mut theta = Vector3::new(1.0 - p_min, 1.0, 0.0);
    let mut residuals = problem.residuals(&theta);
    let mut cost: f64 = residuals.iter().map(|r| r * r).sum();
    let mut trace = vec![cost];
    let mut lambda = INITIAL_LAMBDA;
    let mut converged = false;
    let mut iterations = 0;

    'outer: while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = problem.normal_equations(&theta);
        if jtr.norm() < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        loop {
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let step = damped.cholesky().map(|ch| ch.solve(&(-jtr)));
            if let Some(step) = step {
                let candidate = theta + step;
                if candidate == theta {
                    // step below parameter resolution
                    converged = jtr.norm() < GRADIENT_TOLERANCE;
                    break 'outer;
                }
                let new_residuals = problem.residuals(&candidate);
                // Σ(r² − r'²) summed termwise stays accurate when the two totals
                // agree to every printed digit
                let (decrease, noise) = residuals.iter().zip(&new_residuals).zip(&problem.sqrt_w).fold(
                    (0.0, 0.0),
                    |(d, e), ((r, q), w)| (d + (r - q) * (r + q), e + 4.0 * f64::EPSILON * w * (r + q).abs()),
                );
                // below the rounding level of the cost, judge the step by the gradient
                let accept = decrease >= 0.0
                    || (-decrease <= noise && problem.normal_equations(&candidate).1.norm() < jtr.norm());
                if decrease.is_finite() && accept {
                    let rel = decrease.max(0.0) / cost.max(f64::MIN_POSITIVE);
                    theta = candidate;
                    residuals = new_residuals;
                    cost = (cost - decrease.max(0.0)).max(0.0);
                    trace.push(cost);
                    lambda = (lambda / 10.0).max(1e-12);
                    if rel < RELATIVE_COST_TOLERANCE
                        && problem.normal_equations(&theta).1.norm() < GRADIENT_TOLERANCE
                    {
                        converged = true;
                        break 'outer;
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > MAX_LAMBDA {
                // no descent direction left at working precision
                converged = problem.normal_equations(&theta).1.norm() < GRADIENT_TOLERANCE;
                break 'outer;
            }
        }
    }

    let (jtj, jtr) = problem.normal_equations(&theta);
    let cost: f64 = residuals.iter().map(|r| r * r).sum();
    let dof = (deltas.len() - 3) as f64;
    let s2 = cost / dof;
    let (a, mut b, mut c) = (theta[0], theta[1], theta[2]);
    if b < 0.0 {
        b = -b;
        c = -c;
    }
    c -= std::f64::consts::PI * (c / std::f64::consts::PI).round();

    let identifiable = a.abs() > 1e-10;
    let (stderr_a, stderr_b, stderr_c) = match (identifiable, jtj.try_inverse()) {
        (true, Some(inv)) if inv.iter().all(|v| v.is_finite()) => (
            (s2 * inv[(0, 0)]).max(0.0).sqrt(),
            (s2 * inv[(1, 1)]).max(0.0).sqrt(),
            (s2 * inv[(2, 2)]).max(0.0).sqrt(),
        ),
        _ => {
            let sa = if jtj[(0, 0)] > 0.0 { (s2 / jtj[(0, 0)]).sqrt() } else { f64::INFINITY };
            (sa, f64::INFINITY, f64::INFINITY)
        }
    };
    let stderr_finite = stderr_b.is_finite() && stderr_c.is_finite();

    Ok((
        FitParams {
            a,
            b,
            c,
            stderr_a,
            stderr_b,
            stderr_c,
            residual_norm: cost.sqrt(),
            gradient_norm: jtr.norm(),
            converged,
            iterations,
            identifiable: identifiable && stderr_finite,
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(points: usize) -> Vec<f64> {
        (0..points).map(|i| -8.0 + 16.0 * i as f64 / (points - 1) as f64).collect()
    }

    #[test]
    fn model_values() {
        assert_eq!(model(0.3807, 1.0, 0.0, 0.0), 1.0);
        assert!((model(0.3807, 1.0, 0.0, std::f64::consts::PI) - (1.0 - 0.3807)).abs() < 1e-15);
    }

    #[test]
    fn recovers_noiseless_model() {
        let d = grid(65);
        let p: Vec<f64> = d.iter().map(|&x| model(0.3807, 1.0, 0.0, x)).collect();
        let fit = fit_success_curve(&d, &p, None).unwrap();
        assert!(fit.converged);
        assert!((fit.a - 0.3807).abs() < 1e-8);
        assert!((fit.b - 1.0).abs() < 1e-8);
        assert!(fit.c.abs() < 1e-8);
    }

    #[test]
    fn constant_data_is_unidentifiable() {
        let d = grid(20);
        let fit = fit_success_curve(&d, &[1.0; 20], None).unwrap();
        assert!(fit.a.abs() < 1e-12);
        assert!(!fit.identifiable);
        assert!(fit.stderr_b.is_infinite() && fit.stderr_c.is_infinite());
        assert!(fit.converged);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(fit_success_curve(&[0.0, 1.0, 2.0], &[1.0; 3], None), Err(Error::TooFewPoints(3))));
        assert!(fit_success_curve(&[0.0, 0.1, 0.2, 0.3], &[1.0; 4], None).is_err());
        assert!(fit_success_curve(&grid(5), &[1.0; 4], None).is_err());
        assert!(fit_success_curve(&grid(5), &[1.0; 5], Some(&[1.0, 1.0, -1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn cost_never_increases() {
        let d = grid(41);
        let p: Vec<f64> = d
            .iter()
            .enumerate()
            .map(|(i, &x)| model(0.6, 1.4, 0.2, x) + 0.01 * ((i * 7919) % 13) as f64 / 13.0 - 0.005)
            .collect();
        let (fit, trace) = fit_with_trace(&d, &p, None).unwrap();
        assert!(fit.converged);
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn canonical_sign_of_b() {
        let d = grid(33);
        let p: Vec<f64> = d.iter().map(|&x| model(0.5, -1.2, -0.1, x)).collect();
        let fit = fit_success_curve(&d, &p, None).unwrap();
        assert!(fit.b > 0.0);
        for &x in &d {
            assert!((fit.eval(x) - model(0.5, -1.2, -0.1, x)).abs() < 1e-9);
        }
    }
}
