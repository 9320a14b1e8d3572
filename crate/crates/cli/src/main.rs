use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grcoarse::injective::laurent_counterexample;
use grcoarse_cli::certificate::{Certificate, CertificateFile};
use grcoarse_cli::report::Report;
use grcoarse_cli::{field_kind, has_internal_error, parse_scenario, run_scenario, validate_scenario, InputError, RunOptions};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "grcoarse", version, about = "Checks for coarsening and refinement of group-graded rings and modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ScenarioArgs {
    scenario: PathBuf,
    /// Override the scenario's field (F2, F3, F5, ..., Q).
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest ring dimension for exhaustive ideal enumeration.
    #[arg(long)]
    guard_dim: Option<usize>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the scenario and build every declaration without running checks.
    Validate(ScenarioArgs),
    /// Run the `coarsen` checks.
    Coarsen(ScenarioArgs),
    /// Run the `refine` and `refine_ring` checks.
    Refine(ScenarioArgs),
    /// Run the `adjunction` and `transformations` checks.
    AdjunctionCheck(ScenarioArgs),
    /// Run the `product_defect` checks.
    ProductDefect(ScenarioArgs),
    /// Run the `graded_hom` checks.
    GradedHom(ScenarioArgs),
    /// Run the `hpsi` and `hpsi_rule` checks.
    HpsiCheck(ScenarioArgs),
    /// Run the `small` checks.
    SmallCheck(ScenarioArgs),
    /// Run the `iso_transfer` checks.
    IsoTransfer(ScenarioArgs),
    /// Run the `injective` checks.
    InjectiveCheck(ScenarioArgs),
    /// Run the `cogenerator` checks.
    CogeneratorCheck(ScenarioArgs),
    /// Run every check in the scenario.
    Run(ScenarioArgs),
    /// Emit a certified counterexample.
    #[command(subcommand)]
    Counterexample(Counterexample),
    /// Re-check a certificate from scratch.
    Verify {
        certificate: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Counterexample {
    /// K[t, t^-1] is graded-injective but not injective.
    Laurent {
        #[arg(long, default_value = "F2")]
        field: String,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn scenario_command(args: &ScenarioArgs, kinds: Option<Vec<&'static str>>, validate_only: bool) -> Result<u8, InputError> {
    let scenario = parse_scenario(&read(&args.scenario)?)?;
    let opts = RunOptions { field: args.field.clone(), kinds, guard_dim: args.guard_dim, jobs: args.jobs };
    if validate_only {
        let n = validate_scenario(&scenario, &opts)?;
        match args.format {
            Format::Text => println!("valid: {n} checks resolve"),
            Format::Json => println!("{}", serde_json::json!({"valid": true, "checks": n})),
        }
        return Ok(0);
    }
    let report = run_scenario(&scenario, &opts)?;
    print_report(&report, args.format);
    Ok(if has_internal_error(&report) {
        EXIT_INTERNAL
    } else if report.passed() {
        0
    } else {
        EXIT_FAIL
    })
}

fn print_report(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
}

fn counterexample(c: &Counterexample) -> Result<u8, InputError> {
    let Counterexample::Laurent { field, out } = c;
    let cert = laurent_counterexample(field_kind(field)?).map_err(|e| InputError(e.to_string()))?;
    let text = serde_json::to_string_pretty(&CertificateFile::new(Certificate::Laurent(cert))).expect("serializable");
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn verify(path: &Path, format: Format) -> Result<u8, InputError> {
    let file: CertificateFile =
        serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("certificate: {e}")))?;
    let valid = file.verify().map_err(|e| InputError(format!("certificate: {e}")))?;
    match format {
        Format::Text => println!("{} certificate: {}", file.kind(), if valid { "valid" } else { "INVALID" }),
        Format::Json => println!("{}", serde_json::json!({"certificate": file.kind(), "valid": valid})),
    }
    Ok(if valid { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let only = |k: &[&'static str]| Some(k.to_vec());
    let result = match &cli.command {
        Command::Validate(a) => scenario_command(a, None, true),
        Command::Coarsen(a) => scenario_command(a, only(&["coarsen"]), false),
        Command::Refine(a) => scenario_command(a, only(&["refine", "refine_ring"]), false),
        Command::AdjunctionCheck(a) => scenario_command(a, only(&["adjunction", "transformations"]), false),
        Command::ProductDefect(a) => scenario_command(a, only(&["product_defect"]), false),
        Command::GradedHom(a) => scenario_command(a, only(&["graded_hom"]), false),
        Command::HpsiCheck(a) => scenario_command(a, only(&["hpsi", "hpsi_rule"]), false),
        Command::SmallCheck(a) => scenario_command(a, only(&["small"]), false),
        Command::IsoTransfer(a) => scenario_command(a, only(&["iso_transfer"]), false),
        Command::InjectiveCheck(a) => scenario_command(a, only(&["injective"]), false),
        Command::CogeneratorCheck(a) => scenario_command(a, only(&["cogenerator"]), false),
        Command::Run(a) => scenario_command(a, None, false),
        Command::Counterexample(c) => counterexample(c),
        Command::Verify { certificate, format } => verify(certificate, *format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
