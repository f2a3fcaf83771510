//! Exact expected termination times for the direct-competition network over
//! a range of molecule totals and initial splits, with rates scaled as if the
//! reaction volume equals the total.
//!
//! Run with: `cargo run --release --example expected_time`

use crnsynth::catalog;
use crnsynth::crn::SysState;
use crnsynth::ctmc::{build_generator, build_state_space_from, expected_hitting_time};

fn main() {
    let crn = catalog::direct_competition_unit();
    let fractions = [0.1, 0.6, 0.9];

    println!("expected termination time (volume-scaled), A + B competition:");
    println!("      n   A=10%     A=60%     A=90%");
    for n in (10u64..=100).step_by(10) {
        let mut row = format!("  {n:5}");
        for fraction in fractions {
            let a = ((fraction * n as f64).round() as u64).min(n);
            let state = SysState::new(vec![a, n - a]);
            let space = build_state_space_from(&crn, vec![state.clone()], 1_000_000).unwrap();
            let generator = build_generator(&crn, &space, &crn.rates(), 1.0).unwrap();
            let times = expected_hitting_time(&generator, &space, true).unwrap();
            row.push_str(&format!(
                "  {:8.3}",
                times.time(space.index_of(&state).unwrap())
            ));
        }
        println!("{row}");
    }
}
