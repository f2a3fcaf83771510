//! Validate the constraint pipeline against exhaustive brute force at tiny
//! bounds: both routes must produce exactly the same solution set.
//!
//! Run with: `cargo run --release --example oracle_crosscheck`

use crnsynth::oracle;
use crnsynth::specs;
use crnsynth::synthesis::{enumerate, SolverBackend, SynthesisProblem};

fn main() {
    let mut pairs = Vec::new();
    for a in 1..=5u64 {
        for b in 1..=5 {
            pairs.push((a, b));
        }
    }
    let grid = specs::InputGrid::new(pairs).unwrap();

    for m in 1..=2 {
        let predicates = specs::am_predicates(&grid, 2).unwrap();
        let problem =
            SynthesisProblem::new(2, m, 5, predicates, vec![0, 1], vec![0, 1], true).unwrap();

        let solver = enumerate(&problem, &SolverBackend::default(), 1000).unwrap();
        let brute = oracle::exhaustive_synthesis(&problem).unwrap();

        let all_matched = solver.solutions.len() == brute.len()
            && solver
                .solutions
                .iter()
                .all(|crn| brute.iter().any(|o| o.same_structure(crn)));
        println!(
            "M = {m}: solver found {}, brute force found {} -> {}",
            solver.solutions.len(),
            brute.len(),
            if all_matched { "identical" } else { "MISMATCH" }
        );
        for crn in &solver.solutions {
            println!("---\n{crn}");
        }
    }

    let space = oracle::ReactionSpace::new(3);
    println!(
        "\nreaction space over 3 species: {} canonical reactions \
         ({} ordered reactant/product pairs)",
        space.count(),
        space.ordered_pair_count()
    );
}
