use clap::{Parser, Subcommand};
use hexmin::energy::{cmsd_energy_diff, gaussian_lattice_energy, riesz_energy, CmsdPotential, EnergyValue};
use hexmin::PeriodicPerturbation;
use hexmin_cli::landscape::{landscape, write_csv};
use hexmin_cli::probe::{probe, ProbeConfig};
use hexmin_cli::suite::{run_suite, SuiteName};
use hexmin_cli::{read_file, write_file, CliError, CliResult};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hexmin", version, about = "Local optimality checks for the hexagonal lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit its certificate.
    Suite {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteName,
        /// Write the JSON certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON certificate rather than one line per check.
        #[arg(long)]
        json: bool,
    },
    /// Energy differences of random periodic perturbations.
    Probe {
        #[arg(long = "alpha", num_args = 1.., default_values_t = [1.0])]
        alphas: Vec<f64>,
        #[arg(long = "n-period", num_args = 1.., default_values_t = [4usize])]
        periods: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sup_norm: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Export Ψ over the Voronoi cell as CSV.
    Landscape {
        #[arg(long)]
        alpha: f64,
        /// Direction of v, in radians.
        #[arg(long, default_value_t = 0.0)]
        v_angle: f64,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lattice energy of A₂, or its change under a perturbation.
    Energy {
        #[arg(long, conflicts_with = "riesz", required_unless_present = "riesz")]
        alpha: Option<f64>,
        #[arg(long)]
        riesz: Option<f64>,
        /// Perturbation file: {"N": n, "displacements": [[a, b, dx, dy], ...]}.
        #[arg(long)]
        perturbation: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Suite { suite, out, json } => {
            let cert = run_suite(suite)?;
            if json || out.is_some() {
                emit(&to_json(&cert), out.as_ref())?;
            }
            if !json {
                for c in &cert.checks {
                    let tag = if c.passed() { "PASS" } else { "FAIL" };
                    println!("{tag} {} margin={:.6e}", c.check_name, c.margin);
                }
            }
            Ok(cert.passed)
        }
        Command::Probe { alphas, periods, trials, seed, sup_norm, out, json } => {
            let report = probe(&ProbeConfig { alphas, periods, trials, seed, sup_norm })?;
            if json || out.is_some() {
                emit(&to_json(&report), out.as_ref())?;
            }
            if !json {
                let failed = report.records.iter().filter(|r| !r.certified()).count();
                println!(
                    "{} trials={} failed={} min_ratio={:.6e}",
                    if report.passed { "PASS" } else { "FAIL" },
                    report.records.len(),
                    failed,
                    report.min_ratio
                );
            }
            Ok(report.passed)
        }
        Command::Landscape { alpha, v_angle, grid, out } => {
            let rows = landscape(alpha, v_angle, grid)?;
            write_csv(&rows, &out)?;
            Ok(rows.iter().all(|r| r.gap >= 0.0))
        }
        Command::Energy { alpha, riesz, perturbation, tol } => {
            let f = match (alpha, riesz) {
                (Some(a), _) => CmsdPotential::Gaussian { alpha: a },
                (None, Some(s)) => CmsdPotential::Riesz { s },
                (None, None) => return Err(CliError::Usage("one of --alpha or --riesz is required".into())),
            };
            let value: EnergyValue = match perturbation {
                Some(path) => {
                    let p = PeriodicPerturbation::from_json(&read_file(&path)?)?;
                    cmsd_energy_diff(&p, &f, tol)?
                }
                None => match f {
                    CmsdPotential::Gaussian { alpha } => gaussian_lattice_energy(alpha, tol)?,
                    CmsdPotential::Riesz { s } => riesz_energy(s, tol)?,
                    CmsdPotential::AtomicMixture(_) => unreachable!("not reachable from flags"),
                },
            };
            println!("{}", to_json(&value));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
