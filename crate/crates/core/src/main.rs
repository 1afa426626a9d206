use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use afq::cantilever::FREQUENCY_PREFACTOR;
use afq::commands::{self, CommandOutput};
use afq::config::RunConfig;
use afq::explorer::{write_csv, write_map_csv, SweepRow};
use afq::report::{outputs_csv, RunReport, EXIT_FAILURE, EXIT_USAGE};
use afq::units::{angular_to_hz, angular_to_mhz, PICOMETER};

#[derive(Parser)]
#[command(
    name = "afq",
    version,
    about = "Atomic-force nanomechanical qubit design toolkit"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Configuration file; defaults to the built-in headline design.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapColumn {
    EtaR,
    Eta,
    Omega10,
    DeltaOmega,
    NThermal,
    XZpf,
}

impl MapColumn {
    fn name(self) -> &'static str {
        match self {
            Self::EtaR => "eta_r",
            Self::Eta => "eta_mhz",
            Self::Omega10 => "omega_10_mhz",
            Self::DeltaOmega => "delta_omega",
            Self::NThermal => "n_thermal",
            Self::XZpf => "x_zpf_pm",
        }
    }

    fn value(self, r: &SweepRow) -> f64 {
        match self {
            Self::EtaR => r.eta_r,
            Self::Eta => angular_to_mhz(r.eta),
            Self::Omega10 => angular_to_mhz(r.omega_10),
            Self::DeltaOmega => r.delta_omega,
            Self::NThermal => r.n_thermal,
            Self::XZpf => r.x_zpf / PICOMETER,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bias point, effective stiffness and zero-point motion.
    Bias,
    /// Perturbative level ladder, anharmonicity and thermal occupancy.
    Spectrum,
    /// Length by gap sweep of the design figures of merit.
    Sweep {
        /// Emit a three-column plot map of one quantity instead of full rows.
        #[arg(long, value_enum)]
        map: Option<MapColumn>,
    },
    /// Parametric readout chain: effective parameters and reflection spectrum.
    Cqad,
    /// Numerical oracles against the closed-form results.
    Oracle,
    /// Run the built-in validation suite.
    Validate {
        /// Cantilever frequency prefactor.
        #[arg(long, default_value_t = FREQUENCY_PREFACTOR)]
        prefactor: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Bias => "bias",
            Self::Spectrum => "spectrum",
            Self::Sweep { .. } => "sweep",
            Self::Cqad => "cqad",
            Self::Oracle => "oracle",
            Self::Validate { .. } => "validate",
        }
    }
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(body)
            .map_err(|e| format!("writing stdout: {e}")),
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> afq::Result<()>) -> afq::Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn spectrum_csv(run: &commands::CqadRun) -> afq::Result<Vec<u8>> {
    let s = &run.spectrum;
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| afq::Error::InvalidParameter(format!("csv output: {e}"));
    w.write_record([
        "omega_over_2pi_hz",
        "re_reflection",
        "im_reflection",
        "abs_reflection",
        "qubit_susc",
        "mech_susc",
        "mw_susc",
    ])
    .map_err(err)?;
    for i in 0..s.len() {
        let r = s.reflection[i];
        let row = [
            angular_to_hz(s.omega[i]),
            r.re,
            r.im,
            r.norm(),
            s.qubit_susc[i],
            s.mech_susc[i],
            s.mw_susc[i],
        ];
        w.write_record(row.iter().map(|&v| afq::explorer::format_float(v)))
            .map_err(err)?;
    }
    w.into_inner()
        .map_err(|e| afq::Error::InvalidParameter(format!("csv output: {e}")))
}

fn summary(report: &RunReport) {
    let status = match report.status {
        afq::report::Status::Ok => "ok",
        afq::report::Status::Failed => "FAILED",
    };
    eprintln!("afq {}: {status}", report.command);
    if let Some(obj) = report.outputs.as_object() {
        for (k, v) in obj {
            if v.is_number() || v.is_boolean() || v.is_string() {
                eprintln!("  {k} = {v}");
            }
        }
    }
    for w in &report.warnings {
        eprintln!("  warning: {w}");
    }
}

fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let config = match &cli.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    };
    let config = match config.and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("afq: configuration error: {e}");
            return EXIT_USAGE;
        }
    };

    let name = cli.command.name();
    let default_format = if name == "sweep" {
        Format::Csv
    } else {
        Format::Json
    };
    let format = cli.format.unwrap_or(default_format);
    let mut report = RunReport::new(name, config.echo());

    // CSV body for commands whose csv view is not the flattened outputs
    let mut table: Option<afq::Result<Vec<u8>>> = None;
    let result: afq::Result<CommandOutput> = match cli.command {
        Command::Bias => commands::bias(&config),
        Command::Spectrum => commands::spectrum(&config),
        Command::Sweep { map } => commands::sweep_command(&config).map(|(out, result)| {
            if format == Format::Csv {
                table = Some(match map {
                    Some(m) => csv_bytes(|b| write_map_csv(&result, m.name(), |r| m.value(r), b)),
                    None => csv_bytes(|b| write_csv(&result, b)),
                });
            }
            out
        }),
        Command::Cqad => commands::cqad(&config).map(|run| {
            if format == Format::Csv {
                table = Some(spectrum_csv(&run));
            }
            run.output
        }),
        Command::Oracle => commands::oracle(&config),
        Command::Validate { prefactor } => {
            let (out, _) = commands::validate(prefactor);
            Ok(out)
        }
    };

    match result {
        Ok(out) => {
            report.outputs = out.outputs;
            report.warnings = out.warnings;
            if out.failed {
                report.status = afq::report::Status::Failed;
                report.exit_code = EXIT_FAILURE;
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    if cli.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }

    let body = match (format, table) {
        (Format::Json, _) => Ok(report.to_json().into_bytes()),
        (Format::Csv, Some(t)) => t,
        (Format::Csv, None) => outputs_csv(&report.outputs).map(String::into_bytes),
    };
    let body = match body {
        Ok(b) => b,
        Err(e) => {
            eprintln!("afq: {e}");
            return EXIT_FAILURE;
        }
    };
    if let Err(e) = emit(&cli.out, &body) {
        eprintln!("afq: {e}");
        return EXIT_FAILURE;
    }
    if !cli.quiet {
        summary(&report);
    }
    report.exit_code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}
