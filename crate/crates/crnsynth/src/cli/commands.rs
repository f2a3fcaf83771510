//! Implementations of the CLI subcommands.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cli::manifest::RunManifest;
use crate::cli::{
    backend_from_flags, CliFailure, CmeBenchArgs, HeatmapArgs, HittingArgs, OracleArgs,
    ReplayArgs, SpecSelector, SweepArgs, SynthArgs, TuneArgs, EXIT_OK, EXIT_TIMEOUT,
};
use crate::crn::{Crn, CrnFile, SysState};
use crate::ctmc::{
    build_generator, build_state_space_from, expected_hitting_time, probability_of, CmeOptions,
    ScoreOptions, DEFAULT_MAX_STATES,
};
use crate::oracle;
use crate::predicate::PathPredicate;
use crate::specs::{self, InputGrid, SpecFile};
use crate::synthesis::{
    enumerate_with, increment_k, EnumerateOptions, SynthesisOutcome, SynthesisProblem,
    SynthesisStatus,
};
use crate::tuner::{rank_candidates, TraceRow, TuneConfig};

/// A specification resolved against a species count: input grid, predicates,
/// and the input/output species labelling.
struct ResolvedSpec {
    name: String,
    grid: InputGrid,
    predicates: Vec<PathPredicate>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn resolve_spec(
    selector: &SpecSelector,
    num_species: usize,
    max_total: Option<u64>,
    manifest: &mut RunManifest,
) -> Result<ResolvedSpec, CliFailure> {
    let (name, mut grid) = match selector.spec.as_str() {
        "am" => ("am".to_string(), specs::paper_grids("am")?),
        "div" => ("div".to_string(), specs::paper_grids("div")?),
        path => {
            let path = Path::new(path);
            manifest.record_input(path)?;
            let text = std::fs::read_to_string(path)?;
            let file: SpecFile = serde_json::from_str(&text)
                .map_err(|e| CliFailure::usage(format!("bad spec file: {e}")))?;
            if file.num_species != num_species {
                return Err(CliFailure::usage(format!(
                    "spec file declares {} species but the run uses {num_species}",
                    file.num_species
                )));
            }
            (file.name.clone(), file.grid()?)
        }
    };
    if let Some(bound) = max_total {
        grid = grid.filter_total(bound)?;
    }
    let (predicates, outputs) = match name.as_str() {
        "am" => (specs::am_predicates(&grid, num_species)?, vec![0, 1]),
        "div" => (specs::div_predicates(&grid, num_species)?, vec![2]),
        other => return Err(CliFailure::usage(format!("unknown spec name `{other}`"))),
    };
    Ok(ResolvedSpec {
        name,
        grid,
        predicates,
        inputs: vec![0, 1],
        outputs,
    })
}

/// Loads one or more networks from a CRN JSON file or a synthesis output file.
fn load_crns(path: &Path, manifest: &mut RunManifest) -> Result<Vec<Crn>, CliFailure> {
    manifest.record_input(path)?;
    let text = std::fs::read_to_string(path)?;
    crate::crn::crns_from_json(&text).map_err(CliFailure::usage)
}

fn write_output(
    out_dir: &Path,
    name: &str,
    text: String,
    manifest: &mut RunManifest,
) -> Result<(), CliFailure> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join(name), text)?;
    manifest.record_output(name);
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct Provenance {
    spec: String,
    num_species: usize,
    num_reactions: usize,
    max_steps: usize,
    stutter: bool,
    status: String,
}

/// Synthesis output: solutions as ordinary CRN objects plus provenance.
#[derive(Debug, Serialize, Deserialize)]
struct SolutionsFile {
    provenance: Provenance,
    solutions: Vec<CrnFile>,
}

fn status_name(status: SynthesisStatus) -> &'static str {
    match status {
        SynthesisStatus::Exhausted => "exhausted",
        SynthesisStatus::SolutionLimitReached => "solution-limit-reached",
        SynthesisStatus::Timeout => "timeout",
    }
}

fn solutions_json(
    spec_name: &str,
    problem: &SynthesisProblem,
    status: &str,
    solutions: &[Crn],
) -> String {
    let file = SolutionsFile {
        provenance: Provenance {
            spec: spec_name.to_string(),
            num_species: problem.num_species,
            num_reactions: problem.num_reactions,
            max_steps: problem.max_steps,
            stutter: problem.stutter,
            status: status.to_string(),
        },
        solutions: solutions.iter().map(CrnFile::from_crn).collect(),
    };
    serde_json::to_string_pretty(&file).expect("solutions serialize") + "\n"
}

pub fn synth(cmd: &SynthArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("synth", raw_args.to_vec());
    let spec = resolve_spec(&cmd.spec, cmd.species, None, &mut manifest)?;
    let problem = SynthesisProblem::new(
        cmd.species,
        cmd.reactions,
        cmd.steps,
        spec.predicates,
        spec.inputs,
        spec.outputs,
        !cmd.no_stutter,
    )?;
    let backend = backend_from_flags(&cmd.backend, &cmd.solver_cmd, cmd.timeout)?;
    let outcome = enumerate_with(
        &problem,
        &backend,
        &EnumerateOptions {
            max_solutions: cmd.max_solutions,
            dump_dir: cmd.dump_smt.clone(),
        },
    )?;
    write_synth_outputs(&cmd.out, &spec.name, &problem, &outcome, &mut manifest)?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!(
        "{} solution(s), status {}",
        outcome.solutions.len(),
        status_name(outcome.status)
    );
    Ok(match outcome.status {
        SynthesisStatus::Timeout => EXIT_TIMEOUT,
        _ => EXIT_OK,
    })
}

fn write_synth_outputs(
    out: &Path,
    spec_name: &str,
    problem: &SynthesisProblem,
    outcome: &SynthesisOutcome,
    manifest: &mut RunManifest,
) -> Result<(), CliFailure> {
    write_output(
        out,
        "solutions.json",
        solutions_json(
            spec_name,
            problem,
            status_name(outcome.status),
            &outcome.solutions,
        ),
        manifest,
    )?;
    let mut csv = String::from("solutionIndex,solveSeconds\n");
    for (i, secs) in outcome.stats.solve_seconds.iter().enumerate() {
        csv.push_str(&format!("{i},{secs}\n"));
    }
    write_output(out, "solve_times.csv", csv, manifest)
}

pub fn sweep_k(cmd: &SweepArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("sweep-k", raw_args.to_vec());
    if cmd.max_steps < cmd.steps {
        return Err(CliFailure::usage("--max-steps must be at least --steps"));
    }
    let spec = resolve_spec(&cmd.spec, cmd.species, None, &mut manifest)?;
    let problem = SynthesisProblem::new(
        cmd.species,
        cmd.reactions,
        cmd.steps,
        spec.predicates,
        spec.inputs,
        spec.outputs,
        !cmd.no_stutter,
    )?;
    let backend = backend_from_flags(&cmd.backend, &cmd.solver_cmd, cmd.timeout)?;
    let points = increment_k(&problem, &backend, cmd.max_steps)?;
    let mut csv = String::from("K,solutions,wallSeconds\n");
    let mut timed_out = false;
    for point in &points {
        timed_out |= point.outcome.status == SynthesisStatus::Timeout;
        csv.push_str(&format!(
            "{},{},{}\n",
            point.max_steps,
            point.outcome.solutions.len(),
            point.outcome.stats.wall_seconds
        ));
    }
    write_output(&cmd.out, "sweep.csv", csv, &mut manifest)?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!("swept K={}..{}", cmd.steps, cmd.max_steps);
    Ok(if timed_out { EXIT_TIMEOUT } else { EXIT_OK })
}

fn trace_csv(trace: &[TraceRow], num_rates: usize) -> String {
    let mut header = String::from("iteration");
    for i in 1..=num_rates {
        header.push_str(&format!(",k_{i}"));
    }
    header.push_str(",objective,accepted\n");
    let mut csv = header;
    for row in trace {
        csv.push_str(&format!("{}", row.iteration));
        for k in &row.proposed_rates {
            csv.push_str(&format!(",{k}"));
        }
        csv.push_str(&format!(",{},{}\n", row.objective, row.accepted));
    }
    csv
}

pub fn tune(cmd: &TuneArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("tune", raw_args.to_vec());
    manifest.rng_seeds.push(cmd.seed);
    let crns = load_crns(&cmd.crn, &mut manifest)?;
    if crns.is_empty() {
        return Err(CliFailure::usage("no networks in the candidate file"));
    }
    let num_species = crns[0].num_species();
    if crns.iter().any(|c| c.num_species() != num_species) {
        return Err(CliFailure::usage(
            "all candidate networks must have the same species count",
        ));
    }
    let spec = resolve_spec(&cmd.spec, num_species, None, &mut manifest)?;
    let short = TuneConfig {
        burn_in: cmd.burnin,
        samples: cmd.samples,
        rng_seed: cmd.seed,
        t_final: cmd.tfinal,
        tol: cmd.tol,
        ..TuneConfig::default()
    };
    let long_requested = cmd.long_burnin.is_some() || cmd.long_samples.is_some();
    let long = TuneConfig {
        burn_in: cmd.long_burnin.unwrap_or(cmd.burnin),
        samples: cmd.long_samples.unwrap_or(cmd.samples),
        ..short.clone()
    };
    let top = if long_requested { cmd.top } else { 0 };
    let report = rank_candidates(&crns, &spec.predicates, &short, top, &long, cmd.gate)?;

    let mut csv = String::from("crnId,preOptObjective,shortObjective,longObjective\n");
    for row in &report.rows {
        let long_text = row
            .long_best
            .map(|v| v.to_string())
            .unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{long_text}\n",
            row.crn_id, row.pre_opt, row.short_best
        ));
    }
    write_output(&cmd.out, "report.csv", csv, &mut manifest)?;

    for row in &report.rows {
        let crn = &crns[row.crn_id];
        let rates = row.long_rates.as_ref().unwrap_or(&row.short_rates);
        let tuned = crn
            .with_rates(rates)
            .map_err(|e| CliFailure::usage(e.to_string()))?;
        let json = serde_json::to_string_pretty(&CrnFile::from_crn(&tuned))
            .expect("network serializes")
            + "\n";
        write_output(
            &cmd.out,
            &format!("crn_{}_tuned.json", row.crn_id),
            json,
            &mut manifest,
        )?;
        write_output(
            &cmd.out,
            &format!("trace_short_{}.csv", row.crn_id),
            trace_csv(&row.short_trace, crn.num_reactions()),
            &mut manifest,
        )?;
        if let Some(trace) = &row.long_trace {
            write_output(
                &cmd.out,
                &format!("trace_long_{}.csv", row.crn_id),
                trace_csv(trace, crn.num_reactions()),
                &mut manifest,
            )?;
        }
    }
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!(
        "ranked {} candidate(s); best final objective {}",
        report.rows.len(),
        report.rows[0].final_objective()
    );
    Ok(EXIT_OK)
}

pub fn heatmap(cmd: &HeatmapArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("heatmap", raw_args.to_vec());
    let crns = load_crns(&cmd.crn, &mut manifest)?;
    let crn = crns
        .first()
        .ok_or_else(|| CliFailure::usage("no network in the file"))?;
    let spec = resolve_spec(&cmd.spec, crn.num_species(), None, &mut manifest)?;
    let options = ScoreOptions {
        tol: cmd.tol,
        terminal_only: cmd.terminal_only,
        max_states: DEFAULT_MAX_STATES,
    };
    let mut csv = String::from("a,b,probability\n");
    let rates = crn.rates();
    for (&(a, b), predicate) in spec.grid.pairs().iter().zip(&spec.predicates) {
        let p = probability_of(crn, &rates, predicate, cmd.tfinal, a + b, &options)?;
        csv.push_str(&format!("{a},{b},{p}\n"));
    }
    write_output(&cmd.out, "heatmap.csv", csv, &mut manifest)?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!("scored {} input pair(s)", spec.grid.len());
    Ok(EXIT_OK)
}

pub fn hitting(cmd: &HittingArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("hitting", raw_args.to_vec());
    let crns = load_crns(&cmd.crn, &mut manifest)?;
    let crn = crns
        .first()
        .ok_or_else(|| CliFailure::usage("no network in the file"))?;
    let fractions = parse_fractions(&cmd.fractions)?;
    let (lo, hi) = parse_range(&cmd.n_range)?;
    if cmd.n_step == 0 {
        return Err(CliFailure::usage("--n-step must be positive"));
    }
    let rates = crn.rates();
    let mut csv = String::from("n,fraction,expectedTime\n");
    let mut n = lo;
    while n <= hi {
        for &fraction in &fractions {
            let a = ((fraction * n as f64).round() as u64).min(n);
            let mut counts = vec![0u64; crn.num_species()];
            counts[0] = a;
            counts[1] = n - a;
            let state = SysState::new(counts);
            let space = build_state_space_from(crn, vec![state.clone()], DEFAULT_MAX_STATES)?;
            let generator = build_generator(crn, &space, &rates, 1.0)?;
            let times = expected_hitting_time(&generator, &space, true)?;
            let value = times.time(space.index_of(&state).expect("initial state present"));
            csv.push_str(&format!("{n},{fraction},{value}\n"));
        }
        n += cmd.n_step;
    }
    write_output(&cmd.out, "hitting.csv", csv, &mut manifest)?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!("computed expected times for n={lo}..{hi}");
    Ok(EXIT_OK)
}

pub fn cme_bench(cmd: &CmeBenchArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("cme-bench", raw_args.to_vec());
    let crns = load_crns(&cmd.crn, &mut manifest)?;
    let crn = crns
        .first()
        .ok_or_else(|| CliFailure::usage("no network in the file"))?;
    if cmd.points == 0 {
        return Err(CliFailure::usage("--points must be positive"));
    }
    let totals = parse_u64_list(&cmd.n_list)?;
    let rates = crn.rates();
    let mut csv = String::from("n,stateCount,wallSeconds\n");
    for &n in &totals {
        if n == 0 {
            return Err(CliFailure::usage("molecule totals must be positive"));
        }
        let bench_start = Instant::now();
        let a = ((0.6 * n as f64).round() as u64).min(n);
        let mut counts = vec![0u64; crn.num_species()];
        counts[0] = a;
        counts[1] = n - a;
        let space = build_state_space_from(crn, vec![SysState::new(counts)], DEFAULT_MAX_STATES)?;
        let generator = build_generator(crn, &space, &rates, 1.0)?;
        // Transient probabilities at `points` output times across [0, 100/n].
        let dt = (100.0 / n as f64) / cmd.points as f64;
        let mut snapshot = crate::ctmc::Distribution {
            probs: space.uniform_initial(),
            time: 0.0,
        };
        let options = CmeOptions::default();
        let mut snapshots = Vec::new();
        for _ in 0..cmd.points {
            snapshot = crate::ctmc::integrate_cme(&generator, &snapshot, dt, &options)?;
            if cmd.dump_transient {
                snapshots.push(snapshot.clone());
            }
        }
        let seconds = bench_start.elapsed().as_secs_f64();
        csv.push_str(&format!("{n},{},{seconds}\n", space.len()));
        if cmd.dump_transient {
            write_output(
                &cmd.out,
                &format!("transient_n{n}.csv"),
                crate::ctmc::transient_csv(&space, &snapshots, None),
                &mut manifest,
            )?;
        }
    }
    write_output(&cmd.out, "cme_bench.csv", csv, &mut manifest)?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!("benchmarked {} total(s)", totals.len());
    Ok(EXIT_OK)
}

pub fn oracle(cmd: &OracleArgs, raw_args: &[String]) -> Result<i32, CliFailure> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("oracle", raw_args.to_vec());
    let spec = resolve_spec(&cmd.spec, cmd.species, cmd.max_total, &mut manifest)?;
    let problem = SynthesisProblem::new(
        cmd.species,
        cmd.reactions,
        cmd.steps,
        spec.predicates,
        spec.inputs,
        spec.outputs,
        true,
    )?;
    let solutions = oracle::exhaustive_synthesis(&problem)?;
    write_output(
        &cmd.out,
        "oracle_solutions.json",
        solutions_json(&spec.name, &problem, "exhausted", &solutions),
        &mut manifest,
    )?;
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    manifest.write(&cmd.out)?;
    println!("{} satisfying network(s)", solutions.len());
    Ok(EXIT_OK)
}

pub fn replay(cmd: &ReplayArgs) -> Result<i32, CliFailure> {
    let manifest = RunManifest::load(&cmd.manifest)?;
    let mut args = manifest.args.clone();
    if let Some(out) = &cmd.out {
        let out_text = out.display().to_string();
        match args.iter().position(|a| a == "--out") {
            Some(i) if i + 1 < args.len() => args[i + 1] = out_text,
            _ => {
                args.push("--out".to_string());
                args.push(out_text);
            }
        }
    }
    Ok(crate::cli::run_with_args(args))
}

fn parse_fractions(text: &str) -> Result<Vec<f64>, CliFailure> {
    let fractions: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    let fractions =
        fractions.map_err(|e| CliFailure::usage(format!("bad fraction list: {e}")))?;
    if fractions.is_empty() {
        return Err(CliFailure::usage("at least one fraction is required"));
    }
    for &f in &fractions {
        if !(0.0..=1.0).contains(&f) {
            return Err(CliFailure::usage(format!(
                "fraction {f} is outside [0, 1]"
            )));
        }
    }
    Ok(fractions)
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, CliFailure> {
    let values: Result<Vec<u64>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    values.map_err(|e| CliFailure::usage(format!("bad list: {e}")))
}

fn parse_range(text: &str) -> Result<(u64, u64), CliFailure> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| CliFailure::usage("range must look like LO..HI"))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|e| CliFailure::usage(format!("bad range start: {e}")))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|e| CliFailure::usage(format!("bad range end: {e}")))?;
    if hi < lo {
        return Err(CliFailure::usage("range end below range start"));
    }
    Ok((lo, hi))
}
