//! Stochastic search over reaction-rate vectors, maximizing the average
//! correctness probability across the specified inputs.
//!
//! The chain proposes log-space Gaussian perturbations (alternating all-sites
//! and single-site updates), reflects them into the rate bounds, and accepts
//! with probability `min(1, exp(beta * (objective' - objective)))`. The best
//! visited point is tracked across the whole trace, so the result never falls
//! below the all-rates-one baseline it starts from.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::crn::Crn;
use crate::ctmc::{average_probability, CtmcError, ScoreOptions, DEFAULT_T_FINAL};
use crate::predicate::PathPredicate;

#[derive(Debug, Error)]
pub enum TunerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ctmc(#[from] CtmcError),
}

/// Search space over rate vectors: per-dimension bounds, explored on a
/// logarithmic scale.
#[derive(Debug, Clone)]
pub struct ParameterSpace {
    bounds: Vec<(f64, f64)>,
}

impl ParameterSpace {
    pub const DEFAULT_BOUNDS: (f64, f64) = (0.01, 100.0);

    pub fn with_default_bounds(dimension: usize) -> Self {
        Self {
            bounds: vec![Self::DEFAULT_BOUNDS; dimension],
        }
    }

    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, TunerError> {
        for &(lo, hi) in &bounds {
            if !(0.0 < lo && lo < hi) {
                return Err(TunerError::InvalidConfig(format!(
                    "rate bounds must satisfy 0 < lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { bounds })
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, rates: &[f64]) -> bool {
        rates.len() == self.bounds.len()
            && rates
                .iter()
                .zip(&self.bounds)
                .all(|(&k, &(lo, hi))| lo <= k && k <= hi)
    }

    /// Reflects a log-space coordinate into the bounds of dimension `d`.
    fn reflect(&self, d: usize, mut log_rate: f64) -> f64 {
        let (lo, hi) = self.bounds[d];
        let (lo, hi) = (lo.ln(), hi.ln());
        let width = hi - lo;
        for _ in 0..128 {
            if log_rate > hi {
                log_rate = 2.0 * hi - log_rate;
            } else if log_rate < lo {
                log_rate = 2.0 * lo - log_rate;
            } else {
                return log_rate;
            }
        }
        // Extremely large perturbations fold to the midpoint.
        lo + width / 2.0
    }
}

#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub burn_in: usize,
    pub samples: usize,
    /// Standard deviation of proposals in natural-log space.
    pub proposal_std_dev: f64,
    pub rng_seed: u64,
    pub t_final: f64,
    /// CME tolerance for objective evaluations.
    pub tol: f64,
    /// Sharpness of the likelihood shaping `L = exp(beta * objective)`.
    pub beta: f64,
}

impl Default for TuneConfig {
    fn default() -> Self {
        Self {
            burn_in: 20,
            samples: 20,
            proposal_std_dev: 0.5,
            rng_seed: 1,
            t_final: DEFAULT_T_FINAL,
            tol: 1e-8,
            beta: 50.0,
        }
    }
}

impl TuneConfig {
    fn validate(&self) -> Result<(), TunerError> {
        if self.proposal_std_dev.is_nan() || self.proposal_std_dev <= 0.0 {
            return Err(TunerError::InvalidConfig(
                "proposal standard deviation must be positive".to_string(),
            ));
        }
        if self.t_final.is_nan() || self.t_final < 0.0 {
            return Err(TunerError::InvalidConfig(
                "final time must be nonnegative".to_string(),
            ));
        }
        Ok(())
    }
}

/// One trace entry: the proposal made at this iteration, its objective, and
/// whether it was accepted.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub iteration: usize,
    pub proposed_rates: Vec<f64>,
    pub objective: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub best_rates: Vec<f64>,
    pub best_objective: f64,
    pub trace: Vec<TraceRow>,
    pub acceptance_rate: f64,
}

/// The average correctness probability of `rates` over the predicate list.
pub fn objective(
    crn: &Crn,
    rates: &[f64],
    predicates: &[PathPredicate],
    t_final: f64,
    tol: f64,
) -> Result<f64, TunerError> {
    let options = ScoreOptions {
        tol,
        ..ScoreOptions::default()
    };
    Ok(average_probability(crn, rates, predicates, t_final, &options)?)
}

/// Outcome of a single Metropolis-Hastings step.
#[derive(Debug, Clone)]
pub struct MhStep {
    pub rates: Vec<f64>,
    pub objective: f64,
    pub proposed_rates: Vec<f64>,
    pub proposed_objective: f64,
    pub accepted: bool,
}

/// Proposes, scores, and accepts or rejects one move from `current`.
/// Even iterations perturb every rate; odd iterations perturb one.
#[allow(clippy::too_many_arguments)]
pub fn mh_step(
    crn: &Crn,
    predicates: &[PathPredicate],
    space: &ParameterSpace,
    config: &TuneConfig,
    current_rates: &[f64],
    current_objective: f64,
    iteration: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MhStep, TunerError> {
    if !space.contains(current_rates) {
        return Err(TunerError::InvalidConfig(
            "current rates are outside the parameter space".to_string(),
        ));
    }
    let dimension = space.dimension();
    let mut proposed: Vec<f64> = current_rates.to_vec();
    if iteration.is_multiple_of(2) {
        for (d, rate) in proposed.iter_mut().enumerate() {
            let noise: f64 = rng.sample(StandardNormal);
            *rate = space
                .reflect(d, rate.ln() + noise * config.proposal_std_dev)
                .exp();
        }
    } else {
        let d = rng.gen_range(0..dimension);
        let noise: f64 = rng.sample(StandardNormal);
        proposed[d] = space
            .reflect(d, proposed[d].ln() + noise * config.proposal_std_dev)
            .exp();
    }
    let proposed_objective = objective(crn, &proposed, predicates, config.t_final, config.tol)?;
    // min(1, exp(beta * delta)); draws are consumed even for uphill moves so
    // the random stream does not depend on the objective landscape.
    let ratio = (config.beta * (proposed_objective - current_objective)).exp();
    let coin: f64 = rng.gen();
    let accepted = coin < ratio.min(1.0) || ratio >= 1.0;
    Ok(if accepted {
        MhStep {
            rates: proposed.clone(),
            objective: proposed_objective,
            proposed_rates: proposed,
            proposed_objective,
            accepted: true,
        }
    } else {
        MhStep {
            rates: current_rates.to_vec(),
            objective: current_objective,
            proposed_rates: proposed,
            proposed_objective,
            accepted: false,
        }
    })
}

/// Runs `burn_in + samples` steps from the all-rates-one baseline and returns
/// the best point visited. Fixed seeds give bit-identical results.
pub fn run(
    crn: &Crn,
    predicates: &[PathPredicate],
    config: &TuneConfig,
) -> Result<TuneResult, TunerError> {
    let space = ParameterSpace::with_default_bounds(crn.num_reactions());
    run_in(crn, predicates, &space, config)
}

pub fn run_in(
    crn: &Crn,
    predicates: &[PathPredicate],
    space: &ParameterSpace,
    config: &TuneConfig,
) -> Result<TuneResult, TunerError> {
    config.validate()?;
    let initial_rates = vec![1.0; space.dimension()];
    if !space.contains(&initial_rates) {
        return Err(TunerError::InvalidConfig(
            "the all-rates-one starting point is outside the parameter space".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let initial_objective = objective(
        crn,
        &initial_rates,
        predicates,
        config.t_final,
        config.tol,
    )?;
    let mut trace = Vec::with_capacity(config.burn_in + config.samples + 1);
    trace.push(TraceRow {
        iteration: 0,
        proposed_rates: initial_rates.clone(),
        objective: initial_objective,
        accepted: true,
    });
    let mut rates = initial_rates;
    let mut current = initial_objective;
    let mut accepted_count = 0usize;
    let steps = config.burn_in + config.samples;
    for iteration in 1..=steps {
        let step = mh_step(
            crn,
            predicates,
            space,
            config,
            &rates,
            current,
            iteration,
            &mut rng,
        )?;
        if step.accepted {
            accepted_count += 1;
        }
        trace.push(TraceRow {
            iteration,
            proposed_rates: step.proposed_rates.clone(),
            objective: step.proposed_objective,
            accepted: step.accepted,
        });
        rates = step.rates;
        current = step.objective;
    }
    let best = trace
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| {
            a.objective
                .partial_cmp(&b.objective)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(j.cmp(i)) // first maximum wins
        })
        .map(|(_, row)| row)
        .expect("trace contains the initial point");
    Ok(TuneResult {
        best_rates: best.proposed_rates.clone(),
        best_objective: best.objective,
        acceptance_rate: if steps == 0 {
            0.0
        } else {
            accepted_count as f64 / steps as f64
        },
        trace,
    })
}

/// One row of the candidate ranking report.
#[derive(Debug, Clone)]
pub struct RankRow {
    pub crn_id: usize,
    /// Objective at all rates 1.0.
    pub pre_opt: f64,
    pub short_best: f64,
    pub short_rates: Vec<f64>,
    pub short_trace: Vec<TraceRow>,
    pub long_best: Option<f64>,
    pub long_rates: Option<Vec<f64>>,
    pub long_trace: Option<Vec<TraceRow>>,
}

impl RankRow {
    pub fn final_objective(&self) -> f64 {
        self.long_best.unwrap_or(self.short_best)
    }
}

#[derive(Debug, Clone)]
pub struct RankReport {
    /// Rows sorted descending by the final available objective, ties broken
    /// by candidate id.
    pub rows: Vec<RankRow>,
}

/// Short-optimises every candidate, then applies the long schedule to the
/// best `top_count` candidates whose short objective clears `gate`.
pub fn rank_candidates(
    crns: &[Crn],
    predicates: &[PathPredicate],
    short: &TuneConfig,
    top_count: usize,
    long: &TuneConfig,
    gate: f64,
) -> Result<RankReport, TunerError> {
    if crns.is_empty() {
        return Err(TunerError::InvalidConfig(
            "at least one candidate is required".to_string(),
        ));
    }
    let mut rows = Vec::with_capacity(crns.len());
    for (crn_id, crn) in crns.iter().enumerate() {
        let result = run(crn, predicates, short)?;
        rows.push(RankRow {
            crn_id,
            pre_opt: result.trace[0].objective,
            short_best: result.best_objective,
            short_rates: result.best_rates.clone(),
            short_trace: result.trace,
            long_best: None,
            long_rates: None,
            long_trace: None,
        });
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        rows[b]
            .short_best
            .partial_cmp(&rows[a].short_best)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(rows[a].crn_id.cmp(&rows[b].crn_id))
    });
    for &row_index in order.iter().take(top_count) {
        if rows[row_index].short_best < gate {
            continue;
        }
        let crn = &crns[rows[row_index].crn_id];
        let result = run(crn, predicates, long)?;
        rows[row_index].long_best = Some(result.best_objective);
        rows[row_index].long_rates = Some(result.best_rates);
        rows[row_index].long_trace = Some(result.trace);
    }
    rows.sort_by(|a, b| {
        b.final_objective()
            .partial_cmp(&a.final_objective())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.crn_id.cmp(&b.crn_id))
    });
    Ok(RankReport { rows })
}
