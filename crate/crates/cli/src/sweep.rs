//! Success-probability sweep over Δ with shot sampling and a model fit.
//!
//! Per Δ the single-cycle outcome distribution is simulated once from the
//! gate-level cycle; shots are then Bernoulli draws against P(0). Each
//! (Δ-index, repetition) pair owns an RNG stream and its shots are the
//! consecutive draws of that stream, so results do not depend on scheduling.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qphase::protocol::{exact_success_probability, Cycle};
use qphase::{fit_success_curve, rng, Completion, FitParams, StateVector};

use crate::demo::linear_software_state;
use crate::error::{CliError, CliResult};

pub const DEFAULT_POINTS: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    #[default]
    Sampled,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_points: usize,
    pub n_shot: usize,
    pub n_repetition: usize,
    pub seed: u64,
    pub mode: SweepMode,
    pub qubits: usize,
    pub completion: Completion,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            delta_min: -8.0,
            delta_max: 8.0,
            delta_points: DEFAULT_POINTS,
            n_shot: 1000,
            n_repetition: 100,
            seed: rng::DEFAULT_SEED,
            mode: SweepMode::Sampled,
            qubits: 3,
            completion: Completion::Householder,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.delta_points < 2 {
            return Err(CliError::Usage("delta_points must be at least 2".into()));
        }
        if self.n_shot < 1 || self.n_repetition < 1 {
            return Err(CliError::Usage("shots and repetitions must be at least 1".into()));
        }
        if !(self.delta_min.is_finite() && self.delta_max.is_finite() && self.delta_min < self.delta_max) {
            return Err(CliError::Usage(format!("bad delta range [{}, {}]", self.delta_min, self.delta_max)));
        }
        if self.qubits < 1 || self.qubits > 10 {
            return Err(CliError::Usage(format!("--qubits must be in 1..=10, got {}", self.qubits)));
        }
        Ok(())
    }

    pub fn deltas(&self) -> Vec<f64> {
        let span = self.delta_max - self.delta_min;
        let last = (self.delta_points - 1) as f64;
        (0..self.delta_points)
            .map(|i| if i + 1 == self.delta_points { self.delta_max } else { self.delta_min + span * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub p_mean: f64,
    pub p_std: f64,
    pub p_exact: f64,
}

/// Spread of per-repetition fits, the alternative uncertainty estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionScatter {
    pub fits: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_c: f64,
    pub std_a: f64,
    pub std_b: f64,
    pub std_c: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    pub fit: FitParams,
    pub scatter: Option<RepetitionScatter>,
    /// Row indices outside |p_mean − p_exact| ≤ 5·p_std/√n_rep + 1e-9.
    pub flagged: Vec<usize>,
    pub wall_time_s: f64,
}

pub fn sweep_success(config: &SweepConfig) -> CliResult<SweepReport> {
    config.validate()?;
    let start = Instant::now();
    let psi = StateVector::uniform(config.qubits)?;
    let (phi, _) = linear_software_state(config.qubits)?;
    let deltas = config.deltas();

    // estimates[i][r]: success frequency at Δ_i in repetition r
    let per_point: Vec<(f64, Vec<f64>)> = deltas
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| -> CliResult<(f64, Vec<f64>)> {
            let p_exact = exact_success_probability(&psi, &phi, delta)?;
            let estimates = match config.mode {
                SweepMode::Exact => vec![p_exact; config.n_repetition],
                SweepMode::Sampled => {
                    let p0 = Cycle::new(&phi, delta, config.completion)?.outcome_probabilities(&psi)?[0];
                    (0..config.n_repetition)
                        .map(|r| sample_frequency(p0, config.n_shot, config.seed, i as u64, r as u64))
                        .collect()
                }
            };
            Ok((p_exact, estimates))
        })
        .collect::<CliResult<_>>()?;

    let rows: Vec<SweepRow> = deltas
        .iter()
        .zip(&per_point)
        .map(|(&delta, (p_exact, est))| {
            let (p_mean, p_std) = match config.mode {
                SweepMode::Exact => (*p_exact, 0.0),
                SweepMode::Sampled => mean_std(est),
            };
            SweepRow { delta, p_mean, p_std, p_exact: *p_exact }
        })
        .collect();

    let fit = fit_rows(&rows, config.n_shot, config.n_repetition)?;
    let scatter = match config.mode {
        SweepMode::Sampled if config.n_repetition >= 2 => repetition_scatter(&deltas, &per_point),
        _ => None,
    };
    let band = |r: &SweepRow| 5.0 * r.p_std / (config.n_repetition as f64).sqrt() + 1e-9;
    let flagged = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| (r.p_mean - r.p_exact).abs() > band(r))
        .map(|(i, _)| i)
        .collect();

    Ok(SweepReport {
        config: config.clone(),
        rows,
        fit,
        scatter,
        flagged,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Fraction of `shots` successes with success probability `p0`.
pub fn sample_frequency(p0: f64, shots: usize, seed: u64, delta_index: u64, repetition: u64) -> f64 {
    let mut rng = rng::stream(seed, &[delta_index, repetition]);
    let hits = (0..shots).filter(|_| rng.random::<f64>() < p0).count();
    hits as f64 / shots as f64
}

/// 1/(se² + se_floor²) with se = p_std/√n_rep and se_floor = 1/(n_shot·√n_rep).
///
/// The floor is the resolution of one shot; it keeps points with zero spread
/// (Δ = 0, where every shot succeeds) from dominating. Returns `None` when no
/// row has any spread, in which case the fit is unweighted.
pub fn sweep_weights(rows: &[SweepRow], n_shot: usize, n_repetition: usize) -> Option<Vec<f64>> {
    if rows.iter().all(|r| r.p_std == 0.0) {
        return None;
    }
    let sqrt_rep = (n_repetition as f64).sqrt();
    let floor = 1.0 / (n_shot as f64 * sqrt_rep);
    Some(
        rows.iter()
            .map(|r| {
                let se = r.p_std / sqrt_rep;
                1.0 / (se * se + floor * floor)
            })
            .collect(),
    )
}

pub fn fit_rows(rows: &[SweepRow], n_shot: usize, n_repetition: usize) -> CliResult<FitParams> {
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let means: Vec<f64> = rows.iter().map(|r| r.p_mean).collect();
    let weights = sweep_weights(rows, n_shot, n_repetition);
    Ok(fit_success_curve(&deltas, &means, weights.as_deref())?)
}

fn repetition_scatter(deltas: &[f64], per_point: &[(f64, Vec<f64>)]) -> Option<RepetitionScatter> {
    let reps = per_point.first()?.1.len();
    let fits: Vec<FitParams> = (0..reps)
        .into_par_iter()
        .filter_map(|r| {
            let p: Vec<f64> = per_point.iter().map(|(_, est)| est[r]).collect();
            fit_success_curve(deltas, &p, None).ok()
        })
        .collect();
    if fits.len() < 2 {
        return None;
    }
    let (mean_a, std_a) = mean_std(&fits.iter().map(|f| f.a).collect::<Vec<_>>());
    let (mean_b, std_b) = mean_std(&fits.iter().map(|f| f.b).collect::<Vec<_>>());
    let (mean_c, std_c) = mean_std(&fits.iter().map(|f| f.c).collect::<Vec<_>>());
    Some(RepetitionScatter { fits: fits.len(), mean_a, mean_b, mean_c, std_a, std_b, std_c })
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
