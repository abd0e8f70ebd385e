use std::io::Write;
use std::path::{Path, PathBuf};

use clap::CommandFactory;
use serde_json::json;
use sidon_core::constructions::{dense_sidon_in_grid, singer_sidon};
use sidon_core::containers::{
    bound_large, bound_small, bound_small_t_regime, build_collision_graph, c_omega, count_independent_sets, schedule,
    sparse_regime_base, verify_density_lemma, BoundInputsLarge, BoundInputsSmall, BoundReport, LemmaStatus,
};
use sidon_core::exact::{
    count_of_size, count_profile_with, max_sidon_exact, max_sidon_subset, CountOptions, DEFAULT_COUNT_GUARD,
};
use sidon_core::io::{parse_point_file, write_dimacs, write_edge_list, write_points, write_rank_json};
use sidon_core::random_lab::{
    chernoff_check, exponent_curve, fit_exponent, regime_bounds_report, run_sweep, run_trials, transfer_check,
    EstimateMode, ExperimentRecord, RegimeConstants, RegimeOptions, SampleSpec, SolverStatus, SweepConfig,
    DEFAULT_NODE_BUDGET, RECORD_HEADER,
};
use sidon_core::{is_sidon, Error, Executor, GridParams, PointSet};

use crate::args::{BoundCommand, Cli, Command, Format, GlobalArgs, GridArgs};
use crate::output::{
    emit, emit_json, log_config, read_file, CliResult, Fail, Sink, EXIT_LIMIT, EXIT_NEGATIVE, EXIT_OK,
};

pub fn run(cli: Cli) -> CliResult<u8> {
    let g = cli.global;
    match cli.command {
        Command::Verify { file } => verify(&g, &file),
        Command::SearchMax { grid, within } => search_max(&g, grid, within),
        Command::Count { grid, t } => count(&g, grid, t),
        Command::Construct { n, d, singer } => construct(&g, n, d, singer),
        Command::Graph { file, density, samples, independent } => graph(&g, &file, density, samples, independent),
        Command::Bound { which } => bound(&g, which),
        Command::RandomRun { n, d, a, p, trials, mode, timing } => random_run(&g, n, d, a, p, trials, mode, timing),
        Command::FitExponent { file, curve } => fit(&g, &file, curve),
        Command::Chernoff { grid, p, lambda, trials } => chernoff(&g, grid, p, lambda, trials),
        Command::Transfer { grid, p, trials } => transfer(&g, grid, p, trials),
        Command::Regime { grid, p, trials, epsilon, constants, mode } => {
            regime(&g, grid, p, trials, epsilon, constants, mode)
        }
        Command::Manpage => {
            let mut out = Vec::new();
            clap_mangen::Man::new(Cli::command()).render(&mut out)?;
            std::io::stdout().write_all(&out)?;
            Ok(EXIT_OK)
        }
    }
}

fn grid_of(args: GridArgs) -> CliResult<GridParams> {
    Ok(GridParams::new(args.n, args.d)?)
}

fn executor(g: &GlobalArgs) -> CliResult<Executor> {
    Ok(Executor::with_threads(g.threads)?)
}

/// The requested format if it is one of `allowed`, else the first of them.
fn format(g: &GlobalArgs, allowed: &[Format]) -> CliResult<Format> {
    match g.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Fail::usage(format!("format {f:?} not supported here (use one of {allowed:?})"))),
    }
}

/// The given seed, or a fresh one that is printed so the run can be repeated.
fn resolve_seed(g: &GlobalArgs) -> u64 {
    g.seed.unwrap_or_else(|| {
        let seed = rand::random::<u64>();
        eprintln!("seed: {seed} (generated; pass --seed {seed} to reproduce)");
        seed
    })
}

fn read_points(path: &Path) -> CliResult<PointSet> {
    let text = read_file(path)?;
    parse_point_file(&text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

fn verify(g: &GlobalArgs, file: &Path) -> CliResult<u8> {
    let set = read_points(file)?;
    let witness = is_sidon(&set);
    emit_json(&g.out, &witness)?;
    match &witness.violation {
        None => Ok(EXIT_OK),
        Some(v) => {
            let [a, b, c, e] = [&v.a, &v.b, &v.c, &v.e].map(|p| {
                let coords: Vec<String> = p.coords().iter().map(u64::to_string).collect();
                format!("({})", coords.join(","))
            });
            eprintln!("not a Sidon set: {a} + {b} = {c} + {e}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn search_max(g: &GlobalArgs, args: GridArgs, within: Option<PathBuf>) -> CliResult<u8> {
    let grid = grid_of(args)?;
    let budget = g.budget.unwrap_or(0);
    log_config(
        &g.out,
        &json!({"command": "search-max", "n": args.n, "d": args.d, "budget": budget, "within": within}),
    )?;
    let res = match &within {
        None => max_sidon_exact(&grid, budget),
        Some(path) => {
            let r = read_points(path)?;
            if r.grid() != grid {
                return Err(Fail::usage(format!("{} is in {}, expected {grid}", path.display(), r.grid())));
            }
            max_sidon_subset(&r, budget)
        }
    };
    let witness: Vec<_> = res.witness.points().collect();
    emit_json(
        &g.out,
        &json!({
            "grid": grid,
            "size": res.size,
            "witness": witness,
            "ranks": res.witness.ranks(),
            "optimal": res.optimal,
            "nodes_explored": res.nodes_explored,
        }),
    )?;
    Ok(if res.optimal { EXIT_OK } else { EXIT_LIMIT })
}

fn count(g: &GlobalArgs, args: GridArgs, t: Option<usize>) -> CliResult<u8> {
    let grid = grid_of(args)?;
    let guard = g.budget.unwrap_or(DEFAULT_COUNT_GUARD);
    let fmt = format(g, &[Format::Csv, Format::Json])?;
    log_config(&g.out, &json!({"command": "count", "n": args.n, "d": args.d, "guard": guard, "t": t}))?;
    if let Some(t) = t {
        let c = count_of_size(&grid, t, guard)?;
        match fmt {
            Format::Json => emit_json(&g.out, &json!({"grid": grid, "t": t, "count": c}))?,
            _ => emit(&g.out, &format!("{t},{c}"))?,
        }
        return Ok(EXIT_OK);
    }
    let opts = CountOptions { guard, executor: executor(g)? };
    let profile = count_profile_with(&grid, &opts)?;
    match fmt {
        Format::Json => emit_json(&g.out, &profile)?,
        _ => emit(&g.out, &profile.to_csv())?,
    }
    eprintln!("total {}", profile.total);
    Ok(EXIT_OK)
}

fn construct(g: &GlobalArgs, n: Option<u64>, d: u32, singer: Option<u64>) -> CliResult<u8> {
    if let Some(q) = singer {
        let cert = singer_sidon(q)?;
        emit_json(&g.out, &cert)?;
        return Ok(EXIT_OK);
    }
    let n = n.ok_or_else(|| Fail::usage("construct needs -n or --singer"))?;
    let grid = GridParams::new(n, d)?;
    let set = dense_sidon_in_grid(&grid);
    let floor = 0.8 * (grid.size() as f64).sqrt();
    eprintln!("size {} (0.8·n^(d/2) = {floor:.3})", set.len());
    match format(g, &[Format::Text, Format::Json])? {
        Format::Json => emit(&g.out, &write_rank_json(&set))?,
        _ => emit(&g.out, &write_points(&set))?,
    }
    Ok(EXIT_OK)
}

fn graph(g: &GlobalArgs, file: &Path, density: bool, samples: u64, independent: Option<usize>) -> CliResult<u8> {
    let seed_set = read_points(file)?;
    if density {
        let rng_seed = resolve_seed(g);
        log_config(&g.out, &json!({"command": "graph", "check": "density", "samples": samples, "seed": rng_seed}))?;
        let report = verify_density_lemma(&seed_set, samples, rng_seed, &executor(g)?)?;
        emit_json(&g.out, &report)?;
        return Ok(if report.status == LemmaStatus::Fail { EXIT_NEGATIVE } else { EXIT_OK });
    }
    let cg = build_collision_graph(&seed_set)?;
    if let Some(k) = independent {
        let c = count_independent_sets(&cg.graph, k)?;
        emit_json(&g.out, &json!({"vertices": cg.graph.vertex_count(), "k": k, "independent_sets": c.to_string()}))?;
        return Ok(EXIT_OK);
    }
    match format(g, &[Format::Text, Format::Dimacs, Format::Json])? {
        Format::Dimacs => emit(&g.out, &write_dimacs(&cg))?,
        Format::Json => emit_json(
            &g.out,
            &json!({"grid": cg.grid, "seed": cg.seed.ranks(), "vertices": cg.graph.labels(), "edges": cg.rank_edges()}),
        )?,
        _ => emit(&g.out, &write_edge_list(&cg))?,
    }
    Ok(EXIT_OK)
}

/// Prints the report; an unmet hypothesis is a negative finding.
fn bound_outcome(g: &GlobalArgs, report: &BoundReport, checked: Result<f64, Error>) -> CliResult<u8> {
    match checked {
        Ok(_) => {
            emit_json(&g.out, report)?;
            Ok(EXIT_OK)
        }
        Err(Error::Hypothesis(msg)) => {
            emit_json(&g.out, report)?;
            eprintln!("hypothesis not met: {msg}");
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e.into()),
    }
}

fn bound(g: &GlobalArgs, which: BoundCommand) -> CliResult<u8> {
    match which {
        BoundCommand::Large { grid, t } => {
            let inp = BoundInputsLarge { n: grid.n, d: grid.d, t };
            bound_outcome(g, &BoundReport::large(&inp), bound_large(&inp))
        }
        BoundCommand::Small { grid, gamma, omega } => {
            let inp = BoundInputsSmall { n: grid.n, d: grid.d, gamma, omega };
            c_omega(omega)?;
            bound_outcome(g, &BoundReport::small(&inp), bound_small(&inp))
        }
        BoundCommand::SmallT { grid } => {
            let v = bound_small_t_regime(grid.n, grid.d)?;
            emit_json(&g.out, &json!({"inputs": {"n": grid.n, "d": grid.d}, "log2_bound": v}))?;
            Ok(EXIT_OK)
        }
        BoundCommand::Schedule { t, s0 } => {
            let s = schedule(t, s0)?;
            emit_json(&g.out, &s)?;
            Ok(if s.growth_ok && s.q_sum_ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        BoundCommand::COmega { omega } => {
            emit_json(&g.out, &json!({"omega": omega, "c_omega": c_omega(omega)?}))?;
            Ok(EXIT_OK)
        }
        BoundCommand::SparseBase { grid, p, c } => {
            let b = sparse_regime_base(grid.n, grid.d, p, c)?;
            emit_json(&g.out, &b)?;
            Ok(EXIT_OK)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn random_run(
    g: &GlobalArgs,
    n_values: Vec<u64>,
    d: u32,
    a: Option<f64>,
    p: Option<f64>,
    trials: u64,
    mode: EstimateMode,
    timing: bool,
) -> CliResult<u8> {
    let fmt = format(g, &[Format::Csv, Format::Json])?;
    let seed = resolve_seed(g);
    let budget = g.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    // Validate every sample configuration before writing anything.
    let specs = n_values
        .iter()
        .map(|&n| {
            let grid = GridParams::new(n, d)?;
            match (a, p) {
                (Some(a), _) => SampleSpec::with_exponent(grid, a, seed, trials),
                (None, Some(p)) => SampleSpec::new(grid, p, seed, trials),
                (None, None) => Err(Error::InvalidParameter("one of --a, --p is required".into())),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    log_config(
        &g.out,
        &json!({"command": "random-run", "n": n_values, "d": d, "a": a, "p": p, "trials": trials, "seed": seed,
                "mode": mode, "budget": budget, "timing": timing, "format": if fmt == Format::Json { "jsonl" } else { "csv" }}),
    )?;
    let ex = executor(g)?;
    let mut out = match fmt {
        Format::Json => RecordOut::Jsonl(Sink::open(&g.out)?.into_inner()),
        _ => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Sink::open(&g.out)?.into_inner());
            w.write_record(RECORD_HEADER)?;
            w.flush()?;
            RecordOut::Csv(Box::new(w))
        }
    };
    let mut exhausted = 0u64;
    let mut write = |r: &ExperimentRecord| -> sidon_core::Result<()> {
        exhausted += u64::from(r.status == SolverStatus::BudgetExhausted);
        out.write(r)
    };
    if let (Some(a), None) = (a, p) {
        let cfg = SweepConfig { d, a, n_values: n_values.clone(), trials, seed, mode, budget, timing };
        run_sweep(&cfg, &ex, &mut write)?;
    } else {
        for spec in &specs {
            run_trials(spec, mode, budget, timing, &ex, &mut write)?;
        }
    }
    if exhausted > 0 {
        eprintln!("{exhausted} trials exhausted the node budget; their F_lower is only a lower bound");
    }
    Ok(EXIT_OK)
}

/// Record destination; every record is flushed so an interrupted run leaves
/// complete rows behind.
enum RecordOut {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Jsonl(Box<dyn Write>),
}

impl RecordOut {
    fn write(&mut self, r: &ExperimentRecord) -> sidon_core::Result<()> {
        match self {
            RecordOut::Csv(w) => {
                w.serialize(r).map_err(std::io::Error::from)?;
                w.flush()?;
            }
            RecordOut::Jsonl(w) => {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn read_records(path: &Path) -> CliResult<Vec<ExperimentRecord>> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Fail::usage(format!("line {}: {e}", i + 1))))
            .collect()
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        Ok(reader.deserialize().collect::<Result<Vec<ExperimentRecord>, _>>()?)
    }
}

fn fit(g: &GlobalArgs, file: &Path, curve: bool) -> CliResult<u8> {
    let records = read_records(file)?;
    if curve {
        let points = exponent_curve(&records)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &points {
            w.serialize(p)?;
        }
        if points.is_empty() {
            w.write_record(["a", "b_hat", "b_predicted"])?;
        }
        let bytes = w.into_inner().map_err(|e| Fail::usage(e.to_string()))?;
        emit(&g.out, &String::from_utf8_lossy(&bytes))?;
    } else {
        emit_json(&g.out, &fit_exponent(&records)?)?;
    }
    Ok(EXIT_OK)
}

fn chernoff(g: &GlobalArgs, args: GridArgs, p: f64, lambda: f64, trials: u64) -> CliResult<u8> {
    let seed = resolve_seed(g);
    let spec = SampleSpec::new(grid_of(args)?, p, seed, trials)?;
    log_config(
        &g.out,
        &json!({"command": "chernoff", "n": args.n, "d": args.d, "p": p, "lambda": lambda, "trials": trials, "seed": seed}),
    )?;
    let report = chernoff_check(&spec, lambda, &executor(g)?)?;
    emit_json(&g.out, &report)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
}

fn transfer(g: &GlobalArgs, args: GridArgs, p: f64, trials: u64) -> CliResult<u8> {
    let seed = resolve_seed(g);
    let budget = g.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    log_config(
        &g.out,
        &json!({"command": "transfer", "n": args.n, "d": args.d, "p": p, "trials": trials, "seed": seed, "budget": budget}),
    )?;
    let report = transfer_check(args.n, args.d, p, trials, seed, budget, &executor(g)?)?;
    emit_json(&g.out, &report)?;
    Ok(if report.violations > 0 {
        EXIT_NEGATIVE
    } else if report.unresolved > 0 {
        EXIT_LIMIT
    } else {
        EXIT_OK
    })
}

#[allow(clippy::too_many_arguments)]
fn regime(
    g: &GlobalArgs,
    args: GridArgs,
    p: f64,
    trials: u64,
    epsilon: Option<f64>,
    constants: Option<Vec<f64>>,
    mode: EstimateMode,
) -> CliResult<u8> {
    let seed = resolve_seed(g);
    let constants = match constants {
        Some(c) => RegimeConstants(c.try_into().map_err(|_| Fail::usage("--constants takes six values"))?),
        None => RegimeConstants::default(),
    };
    let opts =
        RegimeOptions { epsilon, constants, trials, seed, mode, budget: g.budget.unwrap_or(DEFAULT_NODE_BUDGET) };
    log_config(&g.out, &json!({"command": "regime", "n": args.n, "d": args.d, "p": p, "options": opts}))?;
    let (report, _) = regime_bounds_report(args.n, args.d, p, &opts, &executor(g)?)?;
    emit_json(&g.out, &report)?;
    Ok(EXIT_OK)
}
