//! `sextic-strata`: classify, sample and inspect presentations of sextic
//! sheaves from the command line. Reports are JSON unless `--human` is set.
//!
//! Exit codes: 0 success, 1 malformed input, 2 contract violation, 3 budget
//! exceeded.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sextic_strata::algebra::Field;
use sextic_strata::kronecker::{
    is_semistable, polarization_window_42, KroneckerError, KroneckerModule, Mode, Verdict,
    WindowReport,
};
use sextic_strata::presentation::{Presentation, PresentationFile, Resolution};
use sextic_strata::sampler::{sample, SampleError, SampleRequest, DEFAULT_MAX_REJECTS};
use sextic_strata::strata::{classification_report, StratumLabel};
use sextic_strata::verify::{run_suite, Suite};

const SCHEMA: &str = "sextic-strata/report";
const SCHEMA_VERSION: u32 = 1;
const THREADS_VAR: &str = "SEXTIC_STRATA_THREADS";

#[derive(Parser)]
#[command(name = "sextic-strata", version, about = "Strata of sextic sheaves with Hilbert polynomial 6m+1")]
struct Cli {
    /// Plain-text output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomological classification and normal-form audit of a presentation file.
    Classify { file: PathBuf },
    /// Draw a seeded normal form of a stratum.
    Sample {
        #[arg(long)]
        stratum: StratumLabel,
        /// `p:<prime>` or `q`.
        #[arg(long, default_value = "p:101")]
        field: Field,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_REJECTS)]
        max_rejects: usize,
        /// Permit sampling over Q (small integer coefficients).
        #[arg(long)]
        allow_rational: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual presentation: transpose with twists `t -> -2 - t`.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinant of the presentation matrix.
    Det { file: PathBuf },
    /// Table of `h0(F(t))`, `h1(F(t))` and `chi`.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        tmin: i32,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        tmax: i32,
    },
    /// Kronecker modules and polarization windows.
    Kron {
        #[command(subcommand)]
        command: KronCommand,
    },
    /// Run verification suites; exit 0 iff every criterion passes.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum KronCommand {
    /// Semistability of the linear block of a presentation file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "randomized")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Sweep of the polarization windows on a grid.
    Window {
        #[arg(long, default_value_t = 700)]
        grid: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Table,
    Duality,
    Oracle,
    Dims,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Table => Suite::Table,
            SuiteArg::Duality => Suite::Duality,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Dims => Suite::Dims,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Malformed = 1,
    Violation = 2,
    Budget = 3,
}

/// A command's result: the JSON body, its plain-text rendering and the exit
/// status.
struct Outcome {
    status: Status,
    body: Value,
    text: String,
}

impl Outcome {
    fn new(status: Status, body: Value, text: impl Into<String>) -> Self {
        Outcome {
            status,
            body,
            text: text.into(),
        }
    }

    fn malformed(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Outcome::new(Status::Malformed, json!({ "error": msg }), format!("error: {msg}"))
    }
}

fn read_input(path: &Path) -> Result<String, Outcome> {
    let res = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    res.map_err(|e| Outcome::malformed(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PresentationFile, Outcome> {
    let text = read_input(path)?;
    PresentationFile::from_json_str(&text).map_err(|e| Outcome::malformed(e.to_string()))
}

/// Presentation files are emitted verbatim; they carry their own version.
fn emit_file(file: &PresentationFile, out: Option<&Path>) -> Outcome {
    let text = file.to_json_string();
    if let Some(path) = out {
        if let Err(e) = fs::write(path, &text) {
            return Outcome::malformed(format!("{}: {e}", path.display()));
        }
    }
    Outcome::new(Status::Ok, file.to_value(), file.presentation.to_string())
}

fn classify(path: &Path) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let report = classification_report(&file.presentation);
    let status = if report.label.is_some() && report.violations.is_empty() {
        Status::Ok
    } else {
        Status::Violation
    };
    let mut text = format!(
        "label: {}\nprofile: {}\n",
        report.label.map_or("none".to_string(), |l| l.to_string()),
        report.profile.map_or("n/a".to_string(), |p| format!("{p:?}")),
    );
    if let Some([r, chi]) = report.hilbert {
        text.push_str(&format!("hilbert: {r}m {} {}\n", if chi < 0 { '-' } else { '+' }, chi.abs()));
    }
    for v in &report.violations {
        text.push_str(&format!("violation: {v}\n"));
    }
    Outcome::new(status, serde_json::to_value(&report).unwrap(), text.trim_end())
}

fn sample_cmd(
    label: StratumLabel,
    field: Field,
    seed: u64,
    max_rejects: usize,
    allow_rational: bool,
    out: Option<&Path>,
) -> Outcome {
    let req = SampleRequest {
        label,
        field,
        seed,
        max_rejects,
        allow_rational,
    };
    match sample(&req) {
        Ok(file) => emit_file(&file, out),
        Err(e @ SampleError::RejectionBudgetExceeded { .. }) => {
            Outcome::new(Status::Budget, json!({ "error": e.to_string() }), format!("error: {e}"))
        }
        Err(e) => Outcome::malformed(e.to_string()),
    }
}

fn det(path: &Path) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    match file.presentation.fitting_determinant() {
        Ok(f) => Outcome::new(
            Status::Ok,
            json!({ "det": f.to_string(), "degree": f.degree(), "terms": f.to_json() }),
            f.to_string(),
        ),
        Err(e) => Outcome::new(Status::Violation, json!({ "error": e.to_string() }), format!("error: {e}")),
    }
}

fn cohomology(path: &Path, tmin: i32, tmax: i32) -> Outcome {
    if tmin > tmax {
        return Outcome::malformed("--tmin must not exceed --tmax");
    }
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let res = match Resolution::new(file.presentation) {
        Ok(r) => r,
        Err(e) => {
            return Outcome::new(Status::Violation, json!({ "error": e.to_string() }), format!("error: {e}"))
        }
    };
    let mut rows = Vec::new();
    let mut text = String::from("   t   h0   h1  chi\n");
    for t in tmin..=tmax {
        let (h0, h1) = (res.h0(t), res.h1(t));
        let chi = h0 as i64 - h1 as i64;
        rows.push(json!({ "t": t, "h0": h0, "h1": h1, "chi": chi }));
        text.push_str(&format!("{t:>4} {h0:>4} {h1:>4} {chi:>4}\n"));
    }
    let profile = res.profile();
    text.push_str(&format!("profile: {profile}"));
    Outcome::new(
        Status::Ok,
        json!({ "table": rows, "profile": profile }),
        text,
    )
}

/// The linear block: `φ_11` of an X0 presentation, otherwise the whole
/// matrix.
fn kron_module(p: &Presentation) -> Result<KroneckerModule, KroneckerError> {
    let (s, t) = StratumLabel::X0.shape();
    let m = if p.source().as_slice() == s && p.target().as_slice() == t {
        p.matrix().submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3, 4])
    } else {
        p.matrix().clone()
    };
    KroneckerModule::new(m)
}

fn kron_check(path: &Path, mode: ModeArg, seed: u64, trials: usize) -> Outcome {
    let file = match load(path) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let k = match kron_module(&file.presentation) {
        Ok(k) => k,
        Err(e) => return Outcome::malformed(e.to_string()),
    };
    let mode = match mode {
        ModeArg::Exact => Mode::ExactSmallField,
        ModeArg::Randomized => Mode::Randomized { seed, trials },
    };
    match is_semistable(&k, mode) {
        Ok(v) => {
            let text = match &v {
                Verdict::Semistable(e) => format!("semistable ({})", serde_json::to_value(e).unwrap()),
                Verdict::Unstable(w) => format!(
                    "unstable: dim S = {}, dim T = {}, slope deficit {}",
                    w.dim_s, w.dim_t, w.slope_deficit
                ),
                Verdict::Unknown { trials } => format!("unknown after {trials} trials"),
            };
            let mut body = v.to_json();
            body["n"] = json!(k.n());
            body["m"] = json!(k.m());
            Outcome::new(Status::Ok, body, text)
        }
        Err(e @ KroneckerError::BudgetExceeded { .. }) => {
            Outcome::new(Status::Budget, json!({ "error": e.to_string() }), format!("error: {e}"))
        }
        Err(e) => Outcome::malformed(e.to_string()),
    }
}

fn kron_window(grid: u64) -> Outcome {
    if grid == 0 {
        return Outcome::malformed("--grid must be positive");
    }
    let w = polarization_window_42(grid);
    let describe = |name: &str, ks: &[u64]| match WindowReport::endpoints(ks) {
        Some((a, b)) => format!("{name}: {a}/{grid} .. {b}/{grid} (grid points: {})", ks.len()),
        None => format!("{name}: empty"),
    };
    let window = |ks: &[u64]| {
        json!({
            "endpoints": WindowReport::endpoints(ks),
            "count": ks.len(),
            "contiguous": WindowReport::contiguous(ks),
        })
    };
    let text = [
        describe("lambda2, six inequalities", &w.six),
        describe("lambda2, refined", &w.refined),
        describe("mu2", &w.mu2),
    ]
    .join("\n");
    Outcome::new(
        Status::Ok,
        json!({
            "grid": grid,
            "six": window(&w.six),
            "refined": window(&w.refined),
            "mu2": window(&w.mu2),
        }),
        text,
    )
}

fn verify(suite: Suite, seed: u64) -> Outcome {
    let reports = run_suite(suite, seed);
    let passed = reports.iter().all(|r| r.passed);
    let text = reports
        .iter()
        .map(|r| {
            format!(
                "criterion {} [{}] {}: {}",
                r.id,
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Outcome::new(
        if passed { Status::Ok } else { Status::Violation },
        json!({ "suite": suite, "seed": seed, "passed": passed, "criteria": reports }),
        text,
    )
}

fn configure_threads() -> Result<(), Outcome> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Outcome::malformed(format!("{THREADS_VAR} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Outcome::malformed(e.to_string()))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Sample { .. } => "sample",
        Command::Dual { .. } => "dual",
        Command::Det { .. } => "det",
        Command::Cohomology { .. } => "cohomology",
        Command::Kron { command: KronCommand::Check { .. } } => "kron check",
        Command::Kron { command: KronCommand::Window { .. } } => "kron window",
        Command::Verify { .. } => "verify",
    }
}

fn run(cli: Cli) -> Outcome {
    if let Err(o) = configure_threads() {
        return o;
    }
    match cli.command {
        Command::Classify { file } => classify(&file),
        Command::Sample {
            stratum,
            field,
            seed,
            max_rejects,
            allow_rational,
            out,
        } => sample_cmd(stratum, field, seed, max_rejects, allow_rational, out.as_deref()),
        Command::Dual { file, out } => match load(&file) {
            Ok(f) => emit_file(&PresentationFile::new(f.presentation.dual()), out.as_deref()),
            Err(o) => o,
        },
        Command::Det { file } => det(&file),
        Command::Cohomology { file, tmin, tmax } => cohomology(&file, tmin, tmax),
        Command::Kron { command } => match command {
            KronCommand::Check {
                file,
                mode,
                seed,
                trials,
            } => kron_check(&file, mode, seed, trials),
            KronCommand::Window { grid } => kron_window(grid),
        },
        Command::Verify { suite, seed } => verify(suite.into(), seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::Malformed as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let human = cli.human;
    let name = command_name(&cli.command);
    let is_file = matches!(cli.command, Command::Sample { .. } | Command::Dual { .. });
    let outcome = run(cli);
    if human {
        println!("{}", outcome.text);
    } else if is_file && outcome.status == Status::Ok {
        // Presentation files are the report for `sample` and `dual`.
        print!("{}", serde_json::to_string_pretty(&outcome.body).unwrap() + "\n");
    } else {
        let envelope = json!({
            "schema": SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "command": name,
            "status": outcome.status as u8,
            "report": outcome.body,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
    }
    ExitCode::from(outcome.status as u8)
}
