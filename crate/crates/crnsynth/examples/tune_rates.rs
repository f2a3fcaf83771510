//! Tune the rate constants of the classic 3-species majority network to
//! maximize its average correctness probability on the benchmark grid.
//!
//! Run with: `cargo run --release --example tune_rates`

use crnsynth::catalog;
use crnsynth::specs;
use crnsynth::tuner::{run, TuneConfig};

fn main() {
    let crn = catalog::tri_majority_unit();
    let grid = specs::paper_grids("am").unwrap();
    let predicates = specs::am_predicates(&grid, 3).unwrap();

    let config = TuneConfig {
        burn_in: 20,
        samples: 20,
        rng_seed: 1,
        ..TuneConfig::default()
    };
    let result = run(&crn, &predicates, &config).unwrap();

    println!("network under tuning:\n{crn}\n");
    println!(
        "baseline (all rates 1.0): {:.4}",
        result.trace[0].objective
    );
    println!(
        "best after {} iterations: {:.4} at rates {:?}",
        result.trace.len() - 1,
        result.best_objective,
        result.best_rates
    );
    println!("acceptance rate: {:.2}", result.acceptance_rate);

    println!("\nbest-so-far trajectory:");
    let mut best = f64::MIN;
    for row in result.trace.iter().step_by(5) {
        best = best.max(row.objective);
        println!("  iteration {:3}: {:.4}", row.iteration, best);
    }
}
