//! How transient-solution cost grows with the molecule count: build the
//! reachable space for a 0.6/0.4 split of n molecules, then integrate the
//! master equation across [0, 100/n] at 500 output points.
//!
//! Run with: `cargo run --release --example cme_scaling`

use std::time::Instant;

use crnsynth::catalog;
use crnsynth::crn::SysState;
use crnsynth::ctmc::{build_generator, build_state_space_from, integrate, CmeOptions};

fn main() {
    let crn = catalog::tri_majority_unit();
    println!("      n    states   seconds");
    for n in (10u64..=100).step_by(10) {
        let start = Instant::now();
        let a = ((0.6 * n as f64).round() as u64).min(n);
        let state = SysState::new(vec![a, n - a, 0]);
        let space = build_state_space_from(&crn, vec![state], 2_000_000).unwrap();
        let generator = build_generator(&crn, &space, &crn.rates(), 1.0).unwrap();
        let dt = (100.0 / n as f64) / 500.0;
        let mut pi = space.uniform_initial();
        let options = CmeOptions::default();
        for _ in 0..500 {
            pi = integrate(&generator, &pi, dt, &options).unwrap();
        }
        println!(
            "  {n:5}  {:8}  {:8.3}",
            space.len(),
            start.elapsed().as_secs_f64()
        );
    }
}
