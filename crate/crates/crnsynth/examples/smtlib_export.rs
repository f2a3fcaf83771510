//! Emit the synthesis constraints as a standalone SMT-LIB 2 script, ready for
//! any conforming solver, and show how to drive an external solver process
//! when one is installed.
//!
//! Run with: `cargo run --release --example smtlib_export`

use crnsynth::specs;
use crnsynth::synthesis::encoding::Encoding;
use crnsynth::synthesis::smtlib::emit_smtlib;
use crnsynth::synthesis::{enumerate, SolverBackend, SynthesisProblem};

fn main() {
    let grid = specs::InputGrid::new(vec![(2, 1), (1, 2), (2, 2)]).unwrap();
    let predicates = specs::am_predicates(&grid, 2).unwrap();
    let problem =
        SynthesisProblem::new(2, 2, 3, predicates, vec![0, 1], vec![0, 1], true).unwrap();

    let encoding = Encoding::build(&problem).unwrap();
    let script = emit_smtlib(&encoding);
    let path = std::env::temp_dir().join("majority_2x2.smt2");
    std::fs::write(&path, &script).unwrap();
    println!(
        "wrote {} ({} declarations, {} assertions)",
        path.display(),
        script.lines().filter(|l| l.starts_with("(declare-fun")).count(),
        script.lines().filter(|l| l.starts_with("(assert")).count(),
    );

    // With a solver on PATH, the same problem runs through the process
    // backend; model extraction and the uniqueness loop are identical to the
    // builtin route.
    let solver = std::env::var("SMT_SOLVER").unwrap_or_else(|_| "z3 -in".to_string());
    let mut parts = solver.split_whitespace();
    let command = parts.next().unwrap().to_string();
    let args: Vec<String> = parts.map(str::to_string).collect();
    match enumerate(&problem, &SolverBackend::external(command, args), 10) {
        Ok(outcome) => {
            println!("external solver found {} solution(s):", outcome.solutions.len());
            for crn in &outcome.solutions {
                println!("---\n{crn}");
            }
        }
        Err(e) => {
            println!("external solver unavailable ({e}); falling back to builtin");
            let outcome = enumerate(&problem, &SolverBackend::default(), 10).unwrap();
            println!("builtin solver found {} solution(s):", outcome.solutions.len());
            for crn in &outcome.solutions {
                println!("---\n{crn}");
            }
        }
    }
}
