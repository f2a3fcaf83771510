//! Write a behaviour specification in the predicate text format and score an
//! arbitrary network against it, without any built-in benchmark.
//!
//! The grammar: boolean operators `! && || => <=>` over integer comparisons
//! `< <= = > >=` of arithmetic `+ - *` on species names and constants.
//!
//! Run with: `cargo run --release --example custom_predicates`

use crnsynth::catalog;
use crnsynth::crn::SysState;
use crnsynth::ctmc::{probability_of, ScoreOptions};
use crnsynth::predicate::{PathPredicate, StatePredicate};

fn main() {
    // "Starting from 4 A and 2 B, end with more than twice as many A as B."
    let initial = StatePredicate::parse("A = 4 && B = 2").unwrap();
    let goal = StatePredicate::parse("A > 2 * B").unwrap();
    println!("initial: {initial}");
    println!("goal:    {goal}");

    let crn = catalog::direct_competition_unit();
    let state = SysState::new(vec![5, 1]);
    println!(
        "goal at state {state}: {}",
        goal.eval(&crn, &state).unwrap()
    );

    let predicate = PathPredicate::new(initial, goal);
    let p = probability_of(
        &crn,
        &crn.rates(),
        &predicate,
        100.0,
        6,
        &ScoreOptions::default(),
    )
    .unwrap();
    println!("P(goal at t=100 | uniform start) = {p:.6}");

    // Round trip through the text format.
    let printed = predicate.goal.to_string();
    assert_eq!(StatePredicate::parse(&printed).unwrap(), predicate.goal);
    println!("round-tripped goal: {printed}");
}
