//! Enumerate all 2-species, 2-reaction networks that can decide majority on
//! the benchmark input grid, then show how the solution count grows with the
//! path-length bound.
//!
//! Run with: `cargo run --release --example synthesize_majority`

use crnsynth::specs;
use crnsynth::synthesis::{enumerate, increment_k, SolverBackend, SynthesisProblem};

fn main() {
    let grid = specs::paper_grids("am").unwrap();
    let predicates = specs::am_predicates(&grid, 2).unwrap();
    let problem =
        SynthesisProblem::new(2, 2, 5, predicates, vec![0, 1], vec![0, 1], true).unwrap();
    let backend = SolverBackend::default();

    let outcome = enumerate(&problem, &backend, 100).unwrap();
    println!(
        "{} solution(s) over {} inputs, status {:?}:",
        outcome.solutions.len(),
        grid.len(),
        outcome.status
    );
    for crn in &outcome.solutions {
        println!("---\n{crn}");
    }

    println!("\nsolutions per path-length bound:");
    for point in increment_k(&problem.with_max_steps(1), &backend, 5).unwrap() {
        println!(
            "  K = {}: {} solution(s)",
            point.max_steps,
            point.outcome.solutions.len()
        );
    }
}
