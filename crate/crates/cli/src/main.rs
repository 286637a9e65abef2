//! `dopid` command-line interface.
//!
//! Exit codes: 0 success or all checks passed, 1 at least one check failed,
//! 2 input or usage error.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dopid::axioms::{
    make_gate, probe_continuity, run_axioms, run_battery, BatteryConfig, GateKind, GateSpec,
    ProbeConfig, Tolerances,
};
use dopid::io::{
    distribution_to_json, observed_alphabet, read_distribution, read_samples_csv, to_json_string,
};
use dopid::{decompose_with_base, Alphabet, JointDist3, LogBase, PidError, PidResult, Var};

#[derive(Parser, Debug)]
#[command(
    name = "dopid",
    version,
    about = "Partial information decomposition of three-variable discrete systems"
)]
struct Cli {
    /// Logarithm base for reported quantities (2, e or 10).
    #[arg(long, global = true, env = "PID_LOG_BASE", default_value = "2", value_parser = parse_base)]
    base: LogBase,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Equality tolerance for checks, in bits.
    #[arg(long, global = true)]
    eq_tol: Option<f64>,

    /// Inequality slack for checks, in bits.
    #[arg(long, global = true)]
    ineq_tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a distribution into unique, redundant and synergistic atoms.
    Compute(IoArgs),
    /// Write a canonical gate distribution.
    Gate(GateArgs),
    /// Run every axiom and identity check on a distribution (values in bits).
    Check(IoArgs),
    /// Run the checks over a seeded random corpus (values in bits).
    Battery(BatteryArgs),
    /// Estimate a distribution from `x,y,z` CSV samples.
    Estimate(EstimateArgs),
    /// Probe continuity of the atoms under shrinking perturbations (values in bits).
    Perturb(PerturbArgs),
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Distribution JSON file; `-` or absent reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GateArgs {
    #[arg(value_parser = parse_gate)]
    kind: GateKind,
    #[arg(long, default_value_t = 0.5)]
    bias_x: f64,
    #[arg(long, default_value_t = 0.5)]
    bias_y: f64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BatteryArgs {
    #[arg(long)]
    count: usize,
    /// Alphabet sizes as `NXxNYxNZ`, e.g. `3x3x3`.
    #[arg(long, default_value = "3x3x3")]
    shape: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    boundary_fraction: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// CSV file with header `x,y,z`.
    #[arg(long)]
    samples: PathBuf,
    /// Comma-separated X labels; inferred (sorted) from the samples when absent.
    #[arg(long, value_delimiter = ',')]
    x_labels: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    y_labels: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    z_labels: Option<Vec<String>>,
    /// Additive smoothing per cell.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Strictly decreasing L1 radii, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-4,1e-6")]
    deltas: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bound on the largest change at the smallest radius, in bits.
    #[arg(long, default_value_t = 1e-3)]
    ceiling: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: PidError| e.to_string())
}

fn parse_gate(s: &str) -> Result<GateKind, String> {
    s.parse().map_err(|e: PidError| e.to_string())
}

fn parse_shape(s: &str) -> Result<[usize; 3], PidError> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    let bad = || PidError::InvalidParameter(format!("shape {s:?} is not of the form NXxNYxNZ"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut shape = [0; 3];
    for (slot, part) in shape.iter_mut().zip(parts) {
        *slot = part.trim().parse().map_err(|_| bad())?;
    }
    if shape.contains(&0) {
        return Err(bad());
    }
    Ok(shape)
}

enum Outcome {
    Success,
    ChecksFailed,
}

fn load_distribution(input: Option<&Path>) -> Result<JointDist3, PidError> {
    match input {
        None => read_distribution(io::stdin().lock()),
        Some(p) if p == Path::new("-") => read_distribution(io::stdin().lock()),
        Some(p) => read_distribution(BufReader::new(open(p)?)),
    }
}

fn open(path: &Path) -> Result<File, PidError> {
    File::open(path).map_err(|e| PidError::Io(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), PidError> {
    match output {
        Some(p) => {
            let mut f =
                File::create(p).map_err(|e| PidError::Io(format!("{}: {e}", p.display())))?;
            f.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                f.write_all(b"\n")?;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn render_pid(r: &PidResult) -> String {
    let rows: [(&str, f64); 21] = [
        ("un_x_z_given_y", r.un_x_z_given_y),
        ("un_y_z_given_x", r.un_y_z_given_x),
        ("red", r.red),
        ("syn", r.syn),
        ("i_xz", r.i_xz),
        ("i_yz", r.i_yz),
        ("i_xyz", r.i_xyz),
        ("i_xz_given_y", r.i_xz_given_y),
        ("i_yz_given_x", r.i_yz_given_x),
        ("h_z_given_xy", r.h_z_given_xy),
        ("h_z_given_y", r.h_z_given_y),
        ("h_z_given_x", r.h_z_given_x),
        ("red_alt", r.red_alt),
        ("red_swapped", r.red_swapped),
        ("syn_swapped", r.syn_swapped),
        ("un_x_alt", r.un_x_alt),
        ("un_y_alt", r.un_y_alt),
        ("residual.atoms_sum", r.residuals.atoms_sum),
        ("residual.red_alt", r.residuals.red_alt),
        ("residual.red_swapped", r.residuals.red_swapped),
        (
            "residual.un_alt",
            r.residuals.un_x_alt.max(r.residuals.un_y_alt),
        ),
    ];
    let mut out = format!("quantity ({})\n", r.base.unit());
    for (name, v) in rows {
        out.push_str(&format!("{name:<22}  {v:>24.16e}\n"));
    }
    out.push_str(&format!(
        "{:<22}  {:>24}\n",
        "closed_system", r.closed_system
    ));
    out
}

fn run(cli: Cli) -> Result<Outcome, PidError> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.eq_tol {
        tol.equality = t;
    }
    if let Some(t) = cli.ineq_tol {
        tol.inequality = t;
    }
    let table = cli.format == Format::Table;

    match cli.command {
        Command::Compute(args) => {
            let d = load_distribution(args.input.as_deref())?;
            let r = decompose_with_base(&d, cli.base);
            let text = if table {
                render_pid(&r)
            } else {
                to_json_string(&r)
            };
            emit(args.output.as_deref(), &text)?;
            Ok(Outcome::Success)
        }
        Command::Gate(args) => {
            let spec = GateSpec::new(args.kind)
                .with_bias(args.bias_x, args.bias_y)
                .with_noise(args.noise);
            let d = make_gate(spec)?;
            emit(args.out.as_deref(), &distribution_to_json(&d))?;
            Ok(Outcome::Success)
        }
        Command::Check(args) => {
            let d = load_distribution(args.input.as_deref())?;
            let report = run_axioms(&d, &tol);
            let text = if table {
                report.render_table()
            } else {
                to_json_string(&report)
            };
            emit(args.output.as_deref(), &text)?;
            Ok(if report.all_passed() {
                Outcome::Success
            } else {
                Outcome::ChecksFailed
            })
        }
        Command::Battery(args) => {
            let shape = parse_shape(&args.shape)?;
            let config = BatteryConfig::new(args.count, shape, args.seed)
                .with_boundary(args.boundary_fraction, None);
            let report = run_battery(&config, &tol)?;
            let text = if table {
                report.render_table()
            } else {
                to_json_string(&report)
            };
            emit(args.output.as_deref(), &text)?;
            Ok(if report.all_passed() {
                Outcome::Success
            } else {
                Outcome::ChecksFailed
            })
        }
        Command::Estimate(args) => {
            let mut csv = String::new();
            open(&args.samples)?.read_to_string(&mut csv)?;
            let samples = read_samples_csv(csv.as_bytes())?;
            let alphabet = |labels: Option<Vec<String>>, var: Var| match labels {
                Some(l) => Alphabet::new(l),
                None if samples.is_empty() => Err(PidError::EmptyInput),
                None => observed_alphabet(&samples, var),
            };
            let ax = alphabet(args.x_labels, Var::X)?;
            let ay = alphabet(args.y_labels, Var::Y)?;
            let az = alphabet(args.z_labels, Var::Z)?;
            let d = JointDist3::estimate_from_samples(&samples, ax, ay, az, args.alpha)?;
            emit(args.out.as_deref(), &distribution_to_json(&d))?;
            Ok(Outcome::Success)
        }
        Command::Perturb(args) => {
            let config = ProbeConfig {
                deltas: args.deltas,
                trials_per_delta: args.trials,
                seed: args.seed,
                ceiling: args.ceiling,
                ..ProbeConfig::default()
            };
            config.validate()?;
            let d = load_distribution(args.input.as_deref())?;
            let probe = probe_continuity(&d, &config)?;
            let text = if table {
                probe.render_table()
            } else {
                to_json_string(&probe)
            };
            emit(args.output.as_deref(), &text)?;
            Ok(if probe.pass {
                Outcome::Success
            } else {
                Outcome::ChecksFailed
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
