use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kldecomp::fixtures::{fixtures_from_summary, high_precision, run_case, SUMMARY};
use kldecomp::io::{
    decompose_any, distribution_to_json, parse_distribution, parse_reference, DistributionJson,
    PopulationJson, ReferenceJson, ReportJson,
};
use kldecomp::{
    joint_from_population, reference_from_population, DecomposeOptions, Error, ZeroPolicy,
};
use serde_json::json;

/// Decomposes KL divergences against product references into marginal
/// and interaction-information terms.
#[derive(Parser)]
#[command(name = "kldecomp", version)]
struct Cli {
    /// Normalization tolerance for inputs, also the residual threshold for
    /// `decompose`.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Output format. Defaults to json, except csv for `plotdata`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact joint distribution of k draws without replacement.
    Hypergeom { population: PathBuf },
    /// Decompose KL(P || Q1 x .. x Qk).
    Decompose {
        distribution: PathBuf,
        /// Reference file. Falls back to the `reference` key of the
        /// distribution file.
        reference: Option<PathBuf>,
        /// Include the entropy and interaction tables in the report.
        #[arg(long)]
        dump_tables: bool,
        /// Accept zero reference entries where the distribution is zero too.
        #[arg(long)]
        allow_zero_reference: bool,
    },
    /// Re-run the shipped validation cases.
    Validate {
        /// Alternative summary text in the shipped layout.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Stacked-bar components of a saved report.
    Plotdata { report: PathBuf },
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::AbsoluteContinuityViolated { .. } | Error::ReferenceNotPositive { .. } => 4,
            Error::DimensionCap { .. } => 5,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn hypergeom(cli: &Cli, population: &Path) -> CmdResult {
    let pop: PopulationJson = read_json(population)?;
    let spec = pop.to_spec()?;
    let joint = joint_from_population(&spec)?;
    let reference = reference_from_population(&spec);
    emit(
        &pretty(&distribution_to_json(&joint, Some(&reference))),
        cli.output.as_deref(),
    )?;
    Ok(0)
}

fn decompose(
    cli: &Cli,
    distribution: &Path,
    reference: Option<&Path>,
    dump_tables: bool,
    allow_zero_reference: bool,
) -> CmdResult {
    let dist: DistributionJson = read_json(distribution)?;
    let joint = parse_distribution(&dist, cli.tolerance)?;
    let ref_json: ReferenceJson = match reference {
        Some(p) => read_json(p)?,
        None => dist.reference.clone().ok_or_else(|| {
            Failure::input("no reference given and the distribution file has none")
        })?,
    };
    let q = parse_reference(&ref_json, joint.k(), cli.tolerance)?;
    let options = DecomposeOptions {
        zero_policy: if allow_zero_reference {
            ZeroPolicy::AllowZeroReference
        } else {
            ZeroPolicy::Strict
        },
        keep_tables: dump_tables,
    };
    let report = decompose_any(&joint, &q, options)?;
    let out = ReportJson::from_report(&report, None);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&out),
        Format::Csv => out.to_csv(),
    };
    emit(&text, cli.output.as_deref())?;
    if report.residual_decomposition > cli.tolerance {
        eprintln!(
            "residual {:e} exceeds threshold {:e}",
            report.residual_decomposition, cli.tolerance
        );
        return Ok(1);
    }
    Ok(0)
}

fn validate(cli: &Cli, fixtures: Option<&Path>) -> CmdResult {
    let text = match fixtures {
        Some(p) => read_text(p)?,
        None => SUMMARY.to_string(),
    };
    let cases = fixtures_from_summary(&text)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for fixture in &cases {
        let outcome = run_case(fixture)?;
        let ok = outcome.passed();
        all_ok &= ok;
        eprintln!(
            "{} {} ({:.1} ms)",
            if ok { "PASS" } else { "FAIL" },
            outcome.name,
            outcome.elapsed.as_secs_f64() * 1e3
        );
        for c in &outcome.checks {
            let hp = high_precision(&outcome.name, &c.field);
            if !c.passed() {
                eprintln!(
                    "  FAIL {}: expected {:e}, got {:e} (|diff| {:.3e} > {:e}){}",
                    c.field,
                    c.expected,
                    c.actual,
                    (c.actual - c.expected).abs(),
                    c.tolerance,
                    hp.map(|v| format!(", high-precision value {v:e}"))
                        .unwrap_or_default()
                );
            }
            rows.push((outcome.name.clone(), c.clone(), hp));
        }
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "passed": all_ok,
            "checks": rows.iter().map(|(case, c, hp)| json!({
                "case": case,
                "field": c.field,
                "expected": c.expected,
                "actual": c.actual,
                "high_precision": hp,
                "tolerance": c.tolerance,
                "passed": c.passed(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s =
                String::from("case,field,expected,actual,high_precision,tolerance,status\n");
            for (case, c, hp) in &rows {
                s.push_str(&format!(
                    "{case},{},{},{},{},{},{}\n",
                    c.field,
                    c.expected,
                    c.actual,
                    hp.map(|v| v.to_string()).unwrap_or_default(),
                    c.tolerance,
                    if c.passed() { "PASS" } else { "FAIL" }
                ));
            }
            s
        }
    };
    emit(&text, cli.output.as_deref())?;
    Ok(if all_ok { 0 } else { 1 })
}

fn plotdata(cli: &Cli, report: &Path) -> CmdResult {
    let r: ReportJson = read_json(report)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => r.to_csv(),
        Format::Json => {
            let mut rows: Vec<_> = r
                .components()
                .into_iter()
                .map(|(name, v)| json!({ "component": name, "value_bits": v }))
                .collect();
            rows.push(json!({ "component": "KL_full", "value_bits": r.kl_full }));
            pretty(&rows)
        }
    };
    emit(&text, cli.output.as_deref())?;
    Ok(0)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Hypergeom { population } => hypergeom(cli, population),
        Command::Decompose {
            distribution,
            reference,
            dump_tables,
            allow_zero_reference,
        } => decompose(
            cli,
            distribution,
            reference.as_deref(),
            *dump_tables,
            *allow_zero_reference,
        ),
        Command::Validate { fixtures } => validate(cli, fixtures.as_deref()),
        Command::Plotdata { report } => plotdata(cli, report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
