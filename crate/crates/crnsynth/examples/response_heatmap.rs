//! Per-input correctness probabilities for the direct-competition network,
//! before and after rate tuning: the data behind a response heatmap.
//!
//! Run with: `cargo run --release --example response_heatmap`

use crnsynth::catalog;
use crnsynth::ctmc::{probability_of, ScoreOptions};
use crnsynth::specs;

fn main() {
    let tuned = catalog::direct_competition();
    let unit = catalog::direct_competition_unit();

    let mut pairs = Vec::new();
    for a in 1..=8u64 {
        for b in 1..=8 {
            pairs.push((a, b));
        }
    }
    let grid = specs::InputGrid::new(pairs).unwrap();
    let predicates = specs::am_predicates(&grid, 2).unwrap();
    let options = ScoreOptions::default();

    for (label, crn) in [("all rates 1.0", &unit), ("tuned rates", &tuned)] {
        println!("P(correct at t=100), {label}; rows a=1..8, columns b=1..8:");
        for a in 1..=8u64 {
            let mut row = String::new();
            for b in 1..=8 {
                let index = grid
                    .pairs()
                    .iter()
                    .position(|&p| p == (a, b))
                    .unwrap();
                let p = probability_of(
                    crn,
                    &crn.rates(),
                    &predicates[index],
                    100.0,
                    a + b,
                    &options,
                )
                .unwrap();
                row.push_str(&format!(" {p:.2}"));
            }
            println!("  a={a}:{row}");
        }
        println!();
    }
}
