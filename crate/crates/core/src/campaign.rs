//! Seeded randomized verification campaigns.
//!
//! Every trial draws from its own generator stream (`trial_rng(seed, i)`),
//! so results do not depend on thread scheduling and any failing trial can
//! be replayed from its index alone.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::behavior::{Behavior, Party};
use crate::boxes::{extremal_boxes, mix, uniform_box};
use crate::criteria::npa_tlm;
use crate::error::{Error, Result};
use crate::ndwu::{self, two_outcome_relation};
use crate::quantum::{
    random_basis_with, random_state_with, transfer_matrix, transfer_symmetry_residual, trial_rng,
    verify_theorem1, DensityMatrix, TwoQubitSetup, MAX_DIM,
};

const TSIRELSON: f64 = 2.0 * SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: u64,
    pub slack: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub kind: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    /// Smallest margin seen; negative values beyond tolerance are failures.
    pub min_slack: f64,
    /// Trial with the smallest margin.
    pub worst: Option<Witness>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Outcome {
    trial: u64,
    slack: f64,
    failed: bool,
    detail: String,
}

fn summarize(kind: &str, seed: u64, outcomes: Vec<Outcome>) -> FuzzSummary {
    let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
    let worst = outcomes
        .iter()
        .min_by(|a, b| a.slack.total_cmp(&b.slack).then(a.trial.cmp(&b.trial)));
    FuzzSummary {
        kind: kind.to_string(),
        seed,
        trials: outcomes.len() as u64,
        failures,
        min_slack: worst.map_or(f64::INFINITY, |w| w.slack),
        worst: worst.map(|w| Witness {
            trial: w.trial,
            slack: w.slack,
            detail: w.detail.clone(),
        }),
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|d| !(2..=MAX_DIM).contains(d)) {
        return Err(Error::InvalidConfig(format!(
            "dimensions must lie in [2, {MAX_DIM}], got {dims:?}"
        )));
    }
    Ok(())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trial count must be at least 1".into()));
    }
    Ok(())
}

/// Random states and basis pairs, cycling through `dims`. Every third trial
/// uses a pure state so rank-deficient corners are covered.
pub fn theorem1_fuzz(trials: u64, dims: &[usize], seed: u64) -> Result<FuzzSummary> {
    check_trials(trials)?;
    check_dims(dims)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let d = dims[(i % dims.len() as u64) as usize];
            let mut rng = trial_rng(seed, i);
            let rho = if i % 3 == 2 {
                let b = random_basis_with(&mut rng, d)?;
                DensityMatrix::pure(b.vector(0))?
            } else {
                random_state_with(&mut rng, d)?
            };
            let b0 = random_basis_with(&mut rng, d)?;
            let b1 = random_basis_with(&mut rng, d)?;
            let chk = verify_theorem1(&rho, &b0, &b1)?;
            Ok(Outcome {
                trial: i,
                slack: chk.slack(),
                failed: !chk.holds,
                detail: format!("d={d} lhs={:e} rhs={:e}", chk.lhs, chk.rhs),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("theorem1", seed, outcomes))
}

/// Transfer matrices of the two orders must be transposes within `1e-12`.
/// Runs `trials_per_dim` basis pairs for every dimension in `dims`.
pub fn symmetry_fuzz(trials_per_dim: u64, dims: &[usize], seed: u64) -> Result<FuzzSummary> {
    check_trials(trials_per_dim)?;
    check_dims(dims)?;
    let total = trials_per_dim * dims.len() as u64;
    let outcomes = (0..total)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let d = dims[(i / trials_per_dim) as usize];
            let mut rng = trial_rng(seed, i);
            let b0 = random_basis_with(&mut rng, d)?;
            let b1 = random_basis_with(&mut rng, d)?;
            let residual = transfer_symmetry_residual(&b0, &b1)?;
            Ok(Outcome {
                trial: i,
                slack: 1e-12 - residual,
                failed: residual > 1e-12,
                detail: format!("d={d} residual={residual:e}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("symmetry", seed, outcomes))
}

/// Random two-qubit behaviors must satisfy the NDWU criterion, the arcsine
/// condition, the CHSH maximum, and the two-outcome relation with the
/// overlap of each party's observables in every conditional state.
pub fn quantum_criterion_fuzz(trials: u64, seed: u64) -> Result<FuzzSummary> {
    check_trials(trials)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let mut rng = trial_rng(seed, i);
            let setup = TwoQubitSetup::random(&mut rng)?;
            let b = setup.behavior()?;
            let report = ndwu::criterion(&b);
            let slack = report.side_a.slack().min(report.side_b.slack());
            let mut problems = Vec::new();
            if !report.overall {
                problems.push("ndwu criterion violated".to_string());
            }
            if !npa_tlm(&b) {
                problems.push("arcsine condition violated".to_string());
            }
            let chsh = b.chsh();
            if chsh.abs() > TSIRELSON + 1e-9 {
                problems.push(format!("chsh {chsh}"));
            }
            for (party, obs) in [(Party::Alice, &setup.alice), (Party::Bob, &setup.bob)] {
                let c = transfer_matrix(&obs[0].basis(), &obs[1].basis())?.overlap();
                for state in b.conditional_states(party) {
                    let [e0, e1] = b.local_expectations(&state)?;
                    if !two_outcome_relation(e0, e1, c, 1e-9) {
                        problems.push(format!(
                            "{party:?} state {state:?} breaks the two-outcome relation"
                        ));
                    }
                }
            }
            Ok(Outcome {
                trial: i,
                slack,
                failed: !problems.is_empty(),
                detail: if problems.is_empty() {
                    format!("chsh={chsh}")
                } else {
                    problems.join("; ")
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("quantum-criterion", seed, outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsirelsonConfig {
    pub samples: u64,
    /// Number of best accepted samples to refine.
    pub refine_top: usize,
    pub refine_steps: usize,
    pub seed: u64,
}

impl TsirelsonConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        TsirelsonConfig {
            samples,
            refine_top: 100,
            refine_steps: 400,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TsirelsonSummary {
    pub seed: u64,
    pub samples: u64,
    pub accepted: u64,
    pub refined: usize,
    /// Largest `|CHSH|` among accepted behaviors, after refinement.
    pub max_abs_chsh: f64,
    /// Accepted behaviors exceeding `2√2 + 1e-6`.
    pub violations: u64,
    /// Probability table of the behavior achieving `max_abs_chsh`.
    pub best: Option<[f64; 16]>,
}

impl TsirelsonSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// The 24 polytope vertices followed by the uniform box.
fn generators() -> Vec<Behavior> {
    let mut g = extremal_boxes();
    g.push(uniform_box());
    g
}

fn dirichlet<R: Rng + ?Sized>(rng: &mut R, support: &[usize], n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    for &k in support {
        w[k] += rng.sample::<f64, _>(Exp1);
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

fn draw_weights<R: Rng + ?Sized>(rng: &mut R, mode: u64, n: usize) -> Vec<f64> {
    match mode {
        0 => dirichlet(rng, &(0..n).collect::<Vec<_>>(), n),
        1 => {
            // one nonlocal vertex plus a few others
            let mut support = vec![rng.random_range(0..8)];
            for _ in 0..rng.random_range(0..3) {
                support.push(rng.random_range(0..n));
            }
            dirichlet(rng, &support, n)
        }
        _ => {
            // nonlocal vertex diluted with local vertices and noise
            let w_nl: f64 = rng.random();
            let local: Vec<usize> = (0..rng.random_range(1..4))
                .map(|_| rng.random_range(8..n))
                .collect();
            let mut w = dirichlet(rng, &local, n);
            w.iter_mut().for_each(|x| *x *= 1.0 - w_nl);
            w[rng.random_range(0..8)] += w_nl;
            w
        }
    }
}

fn normalize(w: &mut [f64]) {
    w.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
}

/// Samples the no-signaling polytope, keeps behaviors accepted by `accept`,
/// then hill-climbs the best of them towards larger `|CHSH|` while staying
/// accepted.
pub fn tsirelson_search<F>(config: TsirelsonConfig, accept: F) -> Result<TsirelsonSummary>
where
    F: Fn(&Behavior) -> bool + Sync,
{
    check_trials(config.samples)?;
    let gens = generators();
    let n = gens.len();
    let evaluate = |w: &[f64]| -> Result<(Behavior, bool, f64)> {
        let b = mix(&gens, w)?;
        let ok = accept(&b);
        let chsh = b.chsh().abs();
        Ok((b, ok, chsh))
    };

    let mut sampled = (0..config.samples)
        .into_par_iter()
        .map(|i| -> Result<Option<(u64, f64, Vec<f64>)>> {
            let mut rng = trial_rng(config.seed, i);
            let w = draw_weights(&mut rng, i % 3, n);
            let (_, ok, chsh) = evaluate(&w)?;
            Ok(ok.then_some((i, chsh, w)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let accepted = sampled.len() as u64;
    let mut violations = sampled.iter().filter(|s| s.1 > TSIRELSON + 1e-6).count() as u64;
    sampled.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    sampled.truncate(config.refine_top);

    let refined = sampled
        .par_iter()
        .map(|(i, chsh, w)| -> Result<(f64, Vec<f64>, u64)> {
            let mut rng = trial_rng(config.seed ^ 0x5eed_0fc4_a1a1, *i);
            let mut best = (*chsh, w.clone());
            let mut bad = 0u64;
            let mut step = 0.2;
            for _ in 0..config.refine_steps {
                let mut cand = best.1.clone();
                let to = rng.random_range(0..n);
                if rng.random_bool(0.5) {
                    let eps = step * rng.random::<f64>();
                    cand.iter_mut().for_each(|x| *x *= 1.0 - eps);
                    cand[to] += eps;
                } else {
                    let from = rng.random_range(0..n);
                    let delta = (step * rng.random::<f64>()).min(cand[from]);
                    cand[from] -= delta;
                    cand[to] += delta;
                }
                normalize(&mut cand);
                let (_, ok, chsh) = evaluate(&cand)?;
                if ok && chsh > TSIRELSON + 1e-6 {
                    bad += 1;
                }
                if ok && chsh > best.0 {
                    best = (chsh, cand);
                } else {
                    step = (step * 0.97).max(1e-5);
                }
            }
            Ok((best.0, best.1, bad))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_abs_chsh = f64::NEG_INFINITY;
    let mut best_w: Option<Vec<f64>> = None;
    for (chsh, w, bad) in refined {
        violations += bad;
        if chsh > max_abs_chsh {
            max_abs_chsh = chsh;
            best_w = Some(w);
        }
    }
    let best = best_w
        .map(|w| evaluate(&w).map(|(b, _, _)| b.to_raw()))
        .transpose()?;
    Ok(TsirelsonSummary {
        seed: config.seed,
        samples: config.samples,
        accepted,
        refined: sampled.len(),
        max_abs_chsh,
        violations,
        best,
    })
}

/// Tsirelson search with the NDWU criterion as the acceptance test.
pub fn tsirelson_ndwu(config: TsirelsonConfig) -> Result<TsirelsonSummary> {
    tsirelson_search(config, |b| ndwu::criterion(b).overall)
}
