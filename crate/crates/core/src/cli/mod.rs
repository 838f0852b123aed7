//! `kepler` command-line front end.
//!
//! Exit codes: 0 success, 1 invariant or physics failure, 2 usage error.

mod figures;
mod svg;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::check::{run_checks, CheckConfig, FIGURE_EPS, MAX_SUPPORTED_EPS};
use crate::dynamics::{
    elements_from_state, first_integrals, format_f64, period, plane_residual, propagate,
    BodyState,
};
use crate::geom::Vec3;
use crate::solardata::{load_planets, planet_speed_ratio};

pub use figures::{figure_curves, figure_file_name, Curve};
pub use svg::render_svg;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "kepler", version, about = "Two-body orbits and the analytic time law")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write density, time-law and speed curves for each eccentricity.
    Figures(FiguresArgs),
    /// Integrate an orbit and report its elements and conservation errors.
    Propagate(PropagateArgs),
    /// Run the cross-oracle invariant suite.
    Check(CheckArgs),
    /// Print the planet eccentricity table.
    Planets(PlanetsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Comma-separated eccentricities in [0, 0.99].
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Initial state `x,y,z,vx,vy,vz`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, required = true)]
    pub state: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Number of steps; defaults to one orbital period.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trajectory CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Corrupt one measurement to exercise the failure path.
    #[arg(long)]
    pub fail_inject: bool,
}

#[derive(Debug, Args)]
pub struct PlanetsArgs {
    #[arg(long)]
    pub csv: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = err.render().to_string();
            let _ = if err.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Figures(args) => cmd_figures(&args, stdout, stderr),
        Command::Propagate(args) => cmd_propagate(&args, stdout, stderr),
        Command::Check(args) => cmd_check(&args, stdout, stderr),
        Command::Planets(args) => cmd_planets(&args, stdout),
    }
}

fn usage(stderr: &mut dyn Write, msg: &str) -> u8 {
    let _ = writeln!(stderr, "error: {msg}");
    EXIT_USAGE
}

fn validate_eps(eps: &[f64]) -> Result<(), String> {
    if eps.is_empty() {
        return Err("at least one eccentricity is required".into());
    }
    match eps.iter().find(|e| !(0.0..=MAX_SUPPORTED_EPS).contains(*e)) {
        Some(bad) => Err(format!(
            "eccentricity {bad} is out of supported range [0, {MAX_SUPPORTED_EPS}]"
        )),
        None => Ok(()),
    }
}

pub fn cmd_figures(args: &FiguresArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    if let Err(msg) = validate_eps(&args.eps) {
        return usage(stderr, &msg);
    }
    if args.samples < 2 {
        return usage(stderr, "--samples must be at least 2");
    }
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        let _ = writeln!(stderr, "error: cannot create {}: {e}", args.out.display());
        return EXIT_FAILURE;
    }

    let results: Vec<io::Result<Vec<PathBuf>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .eps
            .iter()
            .map(|&eps| scope.spawn(move || figures::write_figures(eps, args.samples, args.format, &args.out)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("figure writer panicked")).collect()
    });

    let mut code = EXIT_OK;
    for r in results {
        match r {
            Ok(paths) => {
                for p in paths {
                    let _ = writeln!(stdout, "wrote {}", p.display());
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write to {}: {e}", args.out.display());
                code = EXIT_FAILURE;
            }
        }
    }
    code
}

pub fn cmd_propagate(args: &PropagateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    if args.state.len() != 6 {
        return usage(stderr, "--state needs six values x,y,z,vx,vy,vz");
    }
    if !(args.mu > 0.0 && args.mu.is_finite()) {
        return usage(stderr, "--mu must be > 0");
    }
    if !(args.dt > 0.0 && args.dt.is_finite()) {
        return usage(stderr, "--dt must be > 0");
    }
    if args.steps == Some(0) {
        return usage(stderr, "--steps must be at least 1");
    }
    let s = &args.state;
    let fail = |stderr: &mut dyn Write, e: crate::KeplerError| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_FAILURE
    };
    let state0 = match BodyState::new(Vec3::new(s[0], s[1], s[2]), Vec3::new(s[3], s[4], s[5]), 0.0) {
        Ok(st) => st,
        Err(e) => return fail(stderr, e),
    };
    let elements = match elements_from_state(&state0, args.mu) {
        Ok(el) => el,
        Err(e) => return fail(stderr, e),
    };
    let t_period = match period(&elements) {
        Ok(t) => t,
        Err(e) => return fail(stderr, e),
    };
    let steps = args.steps.unwrap_or_else(|| (t_period / args.dt).ceil().max(1.0) as usize);
    let traj = match propagate(&state0, args.mu, args.dt, steps) {
        Ok(t) => t,
        Err(e) => return fail(stderr, e),
    };

    let written = match &args.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            traj.write_csv(args.mu, &mut w)?;
            w.flush()
        }),
        None => traj.write_csv(args.mu, &mut *stdout),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write trajectory: {e}");
        return EXIT_FAILURE;
    }

    let drift = traj.max_drift(args.mu);
    let residual = plane_residual(&traj, &first_integrals(&state0, args.mu)).unwrap_or(f64::NAN);
    let summary: &mut dyn Write = if args.out.is_some() { stdout } else { stderr };
    let lines = [
        ("p", elements.p),
        ("eps", elements.eps),
        ("phase", elements.phase),
        ("C", elements.areal),
        ("h", elements.energy),
        ("period", t_period),
        ("drift_A", drift[0]),
        ("drift_B", drift[1]),
        ("drift_C", drift[2]),
        ("drift_h", drift[3]),
        ("plane_residual", residual),
    ];
    let _ = writeln!(summary, "# summary ({} states, dt = {})", traj.len(), format_f64(args.dt));
    for (name, value) in lines {
        let _ = writeln!(summary, "{name} = {}", format_f64(value));
    }
    EXIT_OK
}

pub fn cmd_check(args: &CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let eps_list = args.eps.clone().unwrap_or_else(|| FIGURE_EPS.to_vec());
    if let Err(msg) = validate_eps(&eps_list) {
        return usage(stderr, &msg);
    }
    let cfg = CheckConfig { eps_list, seed: args.seed, fail_inject: args.fail_inject };
    let outcomes = match run_checks(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut failed = 0;
    for o in &outcomes {
        let verdict = if o.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!o.passed());
        let _ = writeln!(
            stdout,
            "{verdict} {:<10} {:<44} worst = {:.3e}  tol = {:.1e}",
            o.group, o.name, o.worst, o.tolerance
        );
    }
    let _ = writeln!(stdout, "{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn cmd_planets(args: &PlanetsArgs, stdout: &mut dyn Write) -> u8 {
    let planets = load_planets();
    if args.csv {
        let _ = writeln!(stdout, "name,eccentricity,speed_ratio");
        for p in planets {
            let _ = writeln!(stdout, "{},{},{}", p.name, p.eps_text, format_f64(planet_speed_ratio(p)));
        }
    } else {
        let _ = writeln!(stdout, "{:<8}  {:>12}  {:>11}", "name", "eccentricity", "speed_ratio");
        for p in planets {
            let _ = writeln!(stdout, "{:<8}  {:>12}  {:>11.6}", p.name, p.eps_text, planet_speed_ratio(p));
        }
    }
    EXIT_OK
}
