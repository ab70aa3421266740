use std::process::ExitCode;
use std::time::Instant;

use bjlab::suites::{run_suite, suite_info, SuiteConfig, SUITES};
use bjlab::{
    classify_left, classify_right, is_bj_functional, is_bj_min, search_counterexample, supsum_orthogonal, Decision,
    Direction, Error, OrthoVerdict, SearchConfig, Space, TolerancesF64,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod output;

use output::{render, Format};

const EXIT_OK: u8 = 0;
const EXIT_NOT_ORTHOGONAL: u8 = 1;
const EXIT_FAILED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "bjlab", version, about = "Birkhoff-James orthogonality and symmetric points")]
struct Cli {
    /// Seed for searches and suites.
    #[arg(long, global = true, env = "BJLAB_SEED")]
    seed: Option<u64>,
    /// Rounds per counterexample search.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: usize,
    /// Relative tolerance of the minimization oracle.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Absolute tolerance on support-functional pairings.
    #[arg(long, global = true)]
    tol_norm: Option<f64>,
    /// Trials per suite (default: per suite).
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
    /// Omit wall-clock times so reports are reproducible byte for byte.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide x ⊥_B y with every applicable oracle.
    CheckOrtho { space: String, x: String, y: String },
    /// Classify x as left/right symmetric.
    Classify {
        space: String,
        x: String,
        /// Scale x to unit norm first.
        #[arg(long)]
        normalize: bool,
    },
    /// Run a theorem suite.
    VerifyTheorem { id: String },
    /// Look for a pair violating left or right symmetry of x.
    SearchCounterexample {
        space: String,
        x: String,
        direction: Direction,
    },
    /// List the theorem suites.
    ListTheorems,
}

struct Run {
    cli: Cli,
    tol: TolerancesF64,
}

impl Run {
    fn seed(&self) -> u64 {
        self.cli.seed.unwrap_or(bjlab::symmetry::DEFAULT_SEED)
    }

    fn search(&self) -> SearchConfig {
        SearchConfig::default()
            .with_budget(self.cli.budget)
            .with_seed(self.seed())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut tol = TolerancesF64::default();
    if let Some(v) = cli.tol_rel {
        tol.rel = v;
    }
    if let Some(v) = cli.tol_norm {
        tol.norm = v;
    }
    if !(tol.rel > 0.0 && tol.norm > 0.0) {
        eprintln!("error: tolerances must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    let format = match cli.output {
        OutputArg::Json => Format::Json,
        OutputArg::Csv => Format::Csv,
        OutputArg::Human => Format::Human,
    };
    let run = Run { cli, tol };
    let result = match &run.cli.command {
        Command::CheckOrtho { space, x, y } => check_ortho(&run, space, x, y),
        Command::Classify { space, x, normalize } => classify(&run, space, x, *normalize),
        Command::VerifyTheorem { id } => verify_theorem(&run, id),
        Command::SearchCounterexample { space, x, direction } => search(&run, space, x, *direction),
        Command::ListTheorems => Ok((list_theorems(), EXIT_OK)),
    };
    match result {
        Ok((report, code)) => {
            print!("{}", render(&report, format));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::DimensionMismatch { .. } | Error::NotUnit(_) | Error::ZeroVector => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

type CmdResult = Result<(Value, u8), Error>;

fn parse_space(s: &str) -> Result<Space<f64>, Error> {
    s.parse()
}

fn verdict_json(v: &OrthoVerdict<f64>) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn check_ortho(run: &Run, space: &str, x: &str, y: &str) -> CmdResult {
    let s = parse_space(space)?;
    let x = bjlab::io::parse_vector_in(&s, x)?;
    let y = bjlab::io::parse_vector_in(&s, y)?;
    let tol = &run.tol;
    let mut verdicts = vec![
        ("minimization", is_bj_min(&s, &x, &y, tol)?),
        ("functional", is_bj_functional(&s, &x, &y, tol)?),
    ];
    if s.as_supsum().is_ok() {
        verdicts.push(("supsum_hull", supsum_orthogonal(&s, &x, &y, tol)?));
    }
    let definite: Vec<Decision> = verdicts
        .iter()
        .map(|(_, v)| v.decision)
        .filter(|&d| d != Decision::Inconclusive)
        .collect();
    let all_definite = definite.len() == verdicts.len();
    let agree = definite.windows(2).all(|w| w[0] == w[1]);
    let (consensus, code) = match (agree, all_definite, definite.first()) {
        (true, true, Some(Decision::Orthogonal)) => ("orthogonal", EXIT_OK),
        (true, true, Some(Decision::NotOrthogonal)) => ("not_orthogonal", EXIT_NOT_ORTHOGONAL),
        (true, _, _) => ("inconclusive", EXIT_INCONCLUSIVE),
        (false, _, _) => ("disagreement", EXIT_INCONCLUSIVE),
    };
    let mut oracles = serde_json::Map::new();
    for (name, v) in &verdicts {
        oracles.insert((*name).into(), verdict_json(v));
    }
    let mut report = json!({
        "kind": "check_ortho",
        "space": s.to_string(),
        "x": x,
        "y": y,
        "oracles": oracles,
        "consensus": consensus,
        "exit_code": code,
    });
    if !agree {
        match write_bug_bundle(&report) {
            Ok(path) => {
                eprintln!("oracle disagreement; bug bundle written to {path}");
                report["bug_bundle"] = json!(path);
            }
            Err(e) => eprintln!("oracle disagreement; could not write bug bundle: {e}"),
        }
    }
    Ok((report, code))
}

/// Writes a disagreement record to `$BJLAB_BUG_DIR` (default: the system
/// temp directory). The file name is derived from the content.
fn write_bug_bundle(report: &Value) -> std::io::Result<String> {
    use std::hash::{Hash, Hasher};
    let dir = std::env::var_os("BJLAB_BUG_DIR")
        .map(std::path::PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    let body = serde_json::to_string_pretty(report).expect("report serializes");
    let mut h = std::collections::hash_map::DefaultHasher::new();
    body.hash(&mut h);
    let path = dir.join(format!("bjlab-bug-{:016x}.json", h.finish()));
    std::fs::write(&path, body + "\n")?;
    Ok(path.display().to_string())
}

fn closed_form(r: Result<bool, Error>) -> Result<Value, Error> {
    match r {
        Ok(b) => Ok(json!(b)),
        Err(Error::Unsupported(_)) => Ok(Value::Null),
        Err(e) => Err(e),
    }
}

fn search_side(run: &Run, s: &Space<f64>, x: &[f64], d: Direction) -> Result<Value, Error> {
    let cfg = run.search();
    let w = search_counterexample(s, x, d, &cfg, &run.tol)?;
    Ok(json!({
        "budget": cfg.budget,
        "found": w.is_some(),
        "witness": w.map(|w| w.bundle(s)),
    }))
}

fn classify(run: &Run, space: &str, x: &str, normalize: bool) -> CmdResult {
    let s = parse_space(space)?;
    let mut x = bjlab::io::parse_vector_in(&s, x)?;
    if normalize {
        x = s.normalize(&x)?;
    }
    s.require_unit(&x, &run.tol)?;
    let left = closed_form(classify_left(&s, &x, &run.tol))?;
    let right = closed_form(classify_right(&s, &x, &run.tol))?;
    let report = json!({
        "kind": "classify",
        "space": s.to_string(),
        "x": x,
        "seed": run.seed(),
        "left": { "closed_form": left, "search": search_side(run, &s, &x, Direction::Left)? },
        "right": { "closed_form": right, "search": search_side(run, &s, &x, Direction::Right)? },
    });
    Ok((report, EXIT_OK))
}

fn search(run: &Run, space: &str, x: &str, direction: Direction) -> CmdResult {
    let s = parse_space(space)?;
    let x = bjlab::io::parse_vector_in(&s, x)?;
    let cfg = run.search();
    let w = search_counterexample(&s, &x, direction, &cfg, &run.tol)?;
    let message = if w.is_some() {
        "witness found"
    } else {
        "none found in budget"
    };
    let report = json!({
        "kind": "search",
        "space": s.to_string(),
        "x": x,
        "direction": direction,
        "seed": cfg.seed,
        "budget": cfg.budget,
        "found": w.is_some(),
        "rounds": w.as_ref().map(|w| w.rounds),
        "witness": w.map(|w| w.bundle(&s)),
        "message": message,
    });
    Ok((report, EXIT_OK))
}

fn verify_theorem(run: &Run, id: &str) -> CmdResult {
    if suite_info(id).is_none() {
        return Err(Error::UnknownSuite(id.into()));
    }
    let cfg = SuiteConfig {
        trials: run.cli.trials,
        seed: run.seed(),
        budget: run.cli.budget,
        tol: run.tol,
    };
    let start = Instant::now();
    let mut report = run_suite(id, &cfg)?;
    if !run.cli.no_timestamp {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILED };
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v.as_object_mut()
        .expect("object")
        .insert("kind".into(), json!("theorem_report"));
    Ok((v, code))
}

fn list_theorems() -> Value {
    json!({
        "kind": "theorem_list",
        "theorems": SUITES,
    })
}
