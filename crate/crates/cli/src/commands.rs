use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use triality::io::{self, StateFile};
use triality::{
    detector_gram, detector_inequality_report, reduce_system, roof_minimize, run_example_suite, run_particle_axioms,
    run_theorem_suite, run_wave_axioms, special_state, sweep, triality_report, DensityMatrix, Error, FamilyKind, Mode,
    PureState, RoofConfig, SimplexFunction, SpecialKind, SuiteReport, WaveMeasure, MAX_DIM,
};

use crate::args::{
    CheckArgs, CheckMode, EvalArgs, FamilyArg, FunctionArgs, GenArgs, GenKind, InterfArgs, ModeArg, RoofArgs, SeedArg,
    SolverArgs, SuiteArg, SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{emit, num, wants_csv, write_text, Table};

fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
    let state = io::parse_state(&text).map_err(|e| CliError::input(path, e))?;
    Ok(state.to_density())
}

fn load_function(args: &FunctionArgs) -> CliResult<SimplexFunction> {
    let f = SimplexFunction::builtin(&args.f).map_err(|e| CliError::usage("--f", e))?;
    if args.normalize {
        f.normalize().map_err(|e| CliError::usage("--normalize", e))
    } else {
        Ok(f)
    }
}

fn require_seed(seed: &SeedArg, what: &str) -> CliResult<u64> {
    seed.seed.ok_or_else(|| {
        CliError::Usage(format!(
            "--seed: {what} is randomized and needs a seed; pass --seed or set TRIALITY_SEED"
        ))
    })
}

fn solver_config(solver: &SolverArgs, seed: u64) -> RoofConfig {
    RoofConfig {
        m: solver.m,
        restarts: solver.restarts,
        max_iters: solver.iters,
        tol: solver.tol,
        seed,
    }
}

fn mode_of(arg: ModeArg) -> Mode {
    match arg {
        ModeArg::Direct => Mode::Direct,
        ModeArg::Roof => Mode::Roof,
        ModeArg::Quadratic => Mode::Quadratic,
    }
}

/// Attributes a library error either to the flags or to the state file.
fn classify(err: Error, flags: &str, state: &Path) -> CliError {
    match err {
        Error::InvalidConfig(_)
        | Error::UnknownFunction(_)
        | Error::UnknownDirectMeasure(_)
        | Error::ZeroAtUniform { .. }
        | Error::BadIndex { .. }
        | Error::BadRank { .. } => CliError::usage(flags, err),
        other => CliError::input(state, other),
    }
}

fn solver_for(mode: ModeArg, solver: &SolverArgs, seed: &SeedArg, what: &str) -> CliResult<Option<RoofConfig>> {
    match mode {
        ModeArg::Roof => Ok(Some(solver_config(solver, require_seed(seed, what)?))),
        _ => Ok(None),
    }
}

pub fn eval(args: &EvalArgs) -> CliResult<()> {
    let f = load_function(&args.function)?;
    let cfg = solver_for(args.mode, &args.solver, &args.seed, "eval --mode roof")?;
    let rho = load_state(&args.state)?;
    let report = triality_report(&f, &rho, mode_of(args.mode), cfg.as_ref())
        .map_err(|e| classify(e, "--f/--mode/solver flags", &args.state))?;
    emit(args.out.as_deref(), &report, || {
        let mut t = Table::new(&["measure", "mode", "dim", "C", "D", "M", "sum", "residual"]);
        t.row(vec![
            report.measure_name.clone(),
            report.mode.to_string(),
            report.dim().to_string(),
            num(report.c),
            num(report.d),
            num(report.m),
            num(report.sum),
            num(report.residual),
        ]);
        t.finish()
    })
}

pub fn roof(args: &RoofArgs) -> CliResult<()> {
    let f = load_function(&args.function)?;
    let seed = require_seed(&args.seed, "roof")?;
    let cfg = solver_config(&args.solver, seed);
    let rho = load_state(&args.state)?;
    let r = roof_minimize(&f, &rho, &cfg).map_err(|e| classify(e, "--m/--restarts/--iters/--tol", &args.state))?;
    let value = io::roof_result_to_value(&r, f.name(), seed);
    emit(args.out.as_deref(), &value, || {
        let mut t = Table::new(&[
            "measure",
            "dim",
            "m",
            "value",
            "restarts_used",
            "iterations",
            "converged",
            "spread",
            "seed",
        ]);
        t.row(vec![
            f.name().to_string(),
            rho.dim().to_string(),
            r.m.to_string(),
            num(r.value),
            r.restarts_used.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            num(r.spread),
            seed.to_string(),
        ]);
        t.finish()
    })
}

pub fn sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let f = load_function(&args.function)?;
    let cfg = solver_for(args.mode, &args.solver, &args.seed, "sweep --mode roof")?;
    let rho = load_state(&args.state)?;
    let family = match args.family {
        FamilyArg::Depolarize => FamilyKind::Depolarize,
        FamilyArg::DephaseMix => FamilyKind::DephaseMix,
        FamilyArg::Antidephase => FamilyKind::Antidephase,
    };
    let rows = sweep(&f, &rho, family, mode_of(args.mode), args.steps, cfg.as_ref()).map_err(|e| match e {
        Error::BadDim { .. } if family == FamilyKind::Antidephase => {
            CliError::input(&args.state, format!("--family antidephase needs a qubit state: {e}"))
        }
        e => classify(e, "--steps/--f/--mode", &args.state),
    })?;
    emit(args.out.as_deref(), &rows, || {
        let mut t = Table::new(&["family", "p", "measure", "mode", "C", "D", "M", "sum"]);
        for r in &rows {
            t.row(vec![
                r.family.to_string(),
                num(r.p),
                r.measure.clone(),
                r.mode.to_string(),
                num(r.c),
                num(r.d),
                num(r.m),
                num(r.sum),
            ]);
        }
        t.finish()
    })
}

pub fn interf(args: &InterfArgs) -> CliResult<()> {
    let rho = load_state(&args.state)?;
    let text = fs::read_to_string(&args.detectors).map_err(|e| CliError::input(&args.detectors, e))?;
    let cfg = io::parse_detectors(&text).map_err(|e| CliError::input(&args.detectors, e))?;
    let mismatch = |e: Error| {
        CliError::Input(format!(
            "{} and {}: {e}",
            args.state.display(),
            args.detectors.display()
        ))
    };
    let rho_s = reduce_system(&rho, &cfg).map_err(mismatch)?;
    let report = detector_inequality_report(&rho, &cfg).map_err(mismatch)?;
    let value = json!({
        "measure": "l1",
        "dim": rho.dim(),
        "detector_dim": cfg.detector_dim(),
        "gram": io::matrix_to_value(&detector_gram(&cfg)),
        "rho_s": io::density_to_value(&rho_s),
        "inequality": report,
    });
    emit(args.out.as_deref(), &value, || {
        let mut t = Table::new(&[
            "measure",
            "dim",
            "detector_dim",
            "M_of_rho_s",
            "M_of_rho",
            "C_of_rho_s",
            "D_of_rho_s",
            "mixed_sum",
            "holds",
        ]);
        t.row(vec![
            "l1".into(),
            rho.dim().to_string(),
            cfg.detector_dim().to_string(),
            num(report.m_of_rho_s),
            num(report.m_of_rho),
            num(report.c_of_rho_s),
            num(report.d_of_rho_s),
            num(report.mixed_sum),
            report.holds.to_string(),
        ]);
        t.finish()
    })
}

/// Parses `a..b` (inclusive) or `a,b,c`.
pub fn parse_dims(spec: &str) -> CliResult<Vec<usize>> {
    let bad = |why: String| CliError::usage("--dims", format!("{spec:?}: {why}"));
    let dims: Vec<usize> = if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| bad("range start is not an integer".into()))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| bad("range end is not an integer".into()))?;
        if a > b {
            return Err(bad("empty range".into()));
        }
        (a..=b).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad(format!("{s:?} is not an integer"))))
            .collect::<CliResult<_>>()?
    };
    if let Some(&d) = dims.iter().find(|&&d| !(2..=MAX_DIM).contains(&d)) {
        return Err(bad(format!("dimension {d} outside 2..{MAX_DIM}")));
    }
    Ok(dims)
}

#[derive(Serialize)]
struct CheckOutput {
    seed: u64,
    suites: Vec<SuiteReport>,
    pass: bool,
}

/// Runs the selected suites; returns whether every check passed.
pub fn check(args: &CheckArgs) -> CliResult<bool> {
    let seed = require_seed(&args.seed, "check")?;
    let dims = parse_dims(&args.dims)?;
    if args.samples == 0 {
        return Err(CliError::usage("--samples", "must be at least 1"));
    }
    let functions = args
        .functions
        .iter()
        .map(|name| SimplexFunction::builtin(name.trim()).map_err(|e| CliError::usage("--f", e)))
        .collect::<CliResult<Vec<_>>>()?;
    let (mode, solver) = match args.mode {
        CheckMode::Direct => (Mode::Direct, None),
        CheckMode::Roof => {
            let cfg = RoofConfig {
                restarts: args.restarts,
                max_iters: args.iters,
                ..RoofConfig::with_seed(seed)
            };
            if cfg.restarts == 0 || cfg.max_iters == 0 {
                return Err(CliError::usage("--restarts/--iters", "must be at least 1"));
            }
            (Mode::Roof, Some(cfg))
        }
    };

    let mut suites = Vec::new();
    if matches!(args.suite, SuiteArg::Axioms | SuiteArg::All) {
        for measure in [WaveMeasure::L1Direct, WaveMeasure::QuadraticW] {
            suites.push(run_wave_axioms(&measure, &dims, args.samples, seed));
        }
        for f in &functions {
            suites.push(run_particle_axioms(f, &dims, args.samples, seed));
        }
    }
    if matches!(args.suite, SuiteArg::Theorems | SuiteArg::All) {
        for f in &functions {
            suites.push(run_theorem_suite(f, mode, &dims, args.samples, seed, solver.as_ref()));
        }
    }
    if matches!(args.suite, SuiteArg::Examples | SuiteArg::All) {
        suites.push(run_example_suite(seed));
    }

    let pass = suites.iter().all(|s| s.pass);
    let report = CheckOutput { seed, suites, pass };
    emit(args.out.as_deref(), &report, || {
        let mut t = Table::new(&[
            "suite",
            "function",
            "mode",
            "id",
            "dim",
            "trials",
            "failures",
            "worst_violation",
            "tolerance",
            "status",
        ]);
        for s in &report.suites {
            for c in &s.checks {
                t.row(vec![
                    s.suite.clone(),
                    s.function.clone().unwrap_or_default(),
                    s.mode.map(|m| m.to_string()).unwrap_or_default(),
                    c.id.clone(),
                    c.dim.map(|d| d.to_string()).unwrap_or_default(),
                    c.trials.to_string(),
                    c.failures.to_string(),
                    num(c.worst_violation),
                    num(c.tolerance),
                    serde_json::to_value(c.status)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                ]);
            }
        }
        t.finish()
    })?;
    Ok(pass)
}

pub fn gen(args: &GenArgs) -> CliResult<()> {
    if wants_csv(args.out.as_deref()) {
        return Err(CliError::usage("--out", "state files are JSON only"));
    }
    if !(2..=MAX_DIM).contains(&args.dim) {
        return Err(CliError::usage(
            "--dim",
            format!("dimension {} outside 2..{MAX_DIM}", args.dim),
        ));
    }
    if args.index.is_some() && args.kind != GenKind::Basis {
        return Err(CliError::usage("--index", "only applies to basis"));
    }
    if args.rank.is_some() && args.kind != GenKind::RandomDensity {
        return Err(CliError::usage("--rank", "only applies to random_density"));
    }
    let state = match args.kind {
        GenKind::Basis => {
            let index = args.index.unwrap_or(0);
            StateFile::Pure(PureState::basis(args.dim, index).map_err(|e| CliError::usage("--index", e))?)
        }
        GenKind::MaxCoherent => {
            StateFile::Pure(PureState::max_coherent(args.dim).map_err(|e| CliError::usage("--dim", e))?)
        }
        GenKind::MaxMixed => StateFile::Density(
            special_state(SpecialKind::MaxMixed, args.dim, None).map_err(|e| CliError::usage("--dim", e))?,
        ),
        GenKind::RandomPure => {
            let seed = require_seed(&args.seed, "gen random_pure")?;
            StateFile::Pure(triality::random_pure(args.dim, seed).map_err(|e| CliError::usage("--dim", e))?)
        }
        GenKind::RandomDensity => {
            let seed = require_seed(&args.seed, "gen random_density")?;
            let rank = args.rank.unwrap_or(args.dim);
            StateFile::Density(
                triality::random_density(args.dim, rank, seed).map_err(|e| CliError::usage("--rank", e))?,
            )
        }
    };
    let text = io::write_state(&state).map_err(|e| CliError::Output(e.to_string()))?;
    write_text(args.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_ranges_and_lists() {
        assert_eq!(parse_dims("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_dims("2,5").unwrap(), vec![2, 5]);
        assert_eq!(parse_dims("3..3").unwrap(), vec![3]);
        for bad in ["1..3", "4..2", "2..17", "x", "2,,3"] {
            assert!(matches!(parse_dims(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn seed_is_required() {
        assert!(require_seed(&SeedArg { seed: None }, "roof").is_err());
        assert_eq!(require_seed(&SeedArg { seed: Some(3) }, "roof").unwrap(), 3);
    }
}
