//! Batch front end for the lattice diagnostics.
//!
//! Configuration is layered: built-in defaults, then an optional flat
//! `key=value` file, then command-line flags.

pub mod checks;
pub mod config;
pub mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vnlattice::analysis::{completeness_integral_trace, gram_spectrum_sweep, quadratic_form_of, IntegralKind};
use vnlattice::elliptic::{quasi_periods, ZeroLattice, DEFAULT_TRUNCATION};
use vnlattice::{Complex64, Lattice64};

use crate::checks::CheckRow;
use crate::config::RunConfig;
use crate::output::{line_chart, Cell, Series, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("area mismatch: cell area is {found}, these checks need pi; pass --force to rescale the lattice")]
    AreaMismatch { found: f64 },
    #[error(transparent)]
    Core(#[from] vnlattice::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for anything the user can fix in the configuration, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use vnlattice::Error as E;
        match self {
            CliError::Core(E::ConvergenceFailure(_) | E::BranchAmbiguity(_) | E::Pole { .. } | E::NearPole { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vnlattice", version, about = "Completeness diagnostics for coherent states on lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Cell area, quasi-periods, growth coefficients and point statistics.
    LatticeInfo,
    /// Every check suite; exit status 1 if any row fails.
    Verify,
    /// Gram spectrum and weighted-integral verdict across cell areas.
    Sweep,
    /// Theta-constant identities.
    ThetaCheck,
    /// Displacement-operator group laws.
    GroupCheck,
    /// Biorthogonality of the dual system and vacuum coefficients.
    DualCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::LatticeInfo => "lattice-info",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
            Command::ThetaCheck => "theta-check",
            Command::GroupCheck => "group-check",
            Command::DualCheck => "dual-check",
        }
    }
}

/// Overrides for [`RunConfig`]; values use the config-file syntax.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// First generator as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega1: Option<String>,
    /// Second generator as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega2: Option<String>,
    /// Multiply the cell area by this factor.
    #[arg(long, global = true)]
    pub area_scale: Option<String>,
    /// Window half-width M (indices |m|, |n| <= M).
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Fock-space truncation N.
    #[arg(long, global = true)]
    pub fock: Option<String>,
    /// Highest order of the identity family.
    #[arg(long, global = true)]
    pub k_max: Option<String>,
    /// Disk radii `r1,r2,...` for point statistics and integrals.
    #[arg(long, global = true)]
    pub radii: Option<String>,
    /// Cell areas for `sweep`, in units of pi.
    #[arg(long, global = true)]
    pub areas: Option<String>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write an SVG chart here (sweep only).
    #[arg(long, global = true)]
    pub svg: Option<String>,
    /// Seed for sampled points.
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Rescale a non-critical lattice to area pi instead of refusing.
    #[arg(long, global = true)]
    pub force: bool,
    /// Flat key=value configuration file, applied before flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            cfg.apply_text(&text)?;
        }
        let pairs = [
            ("omega1", &self.omega1),
            ("omega2", &self.omega2),
            ("area_scale", &self.area_scale),
            ("window", &self.window),
            ("fock", &self.fock),
            ("k_max", &self.k_max),
            ("radii", &self.radii),
            ("areas", &self.areas),
            ("format", &self.format),
            ("svg", &self.svg),
            ("seed", &self.seed),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.force {
            cfg.force = true;
        }
        Ok(cfg)
    }
}

pub fn lattice_of(cfg: &RunConfig) -> Result<Lattice64, CliError> {
    let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
    let l = Lattice64::new(c(cfg.omega1), c(cfg.omega2))?;
    match cfg.area_scale {
        None => Ok(l),
        Some(x) if x > 0.0 && x.is_finite() => Ok(l.scale_to_area(l.area() * x)?),
        Some(x) => Err(CliError::Config(format!("area_scale must be positive, got {x}"))),
    }
}

/// The configured lattice at cell area π, or an area-mismatch error unless forced.
pub fn critical_lattice(cfg: &RunConfig) -> Result<Lattice64, CliError> {
    let l = lattice_of(cfg)?;
    if l.has_area(PI, 1e-10) {
        Ok(l)
    } else if cfg.force {
        eprintln!("note: rescaling cell area {} to pi", l.area());
        Ok(l.scale_to_area(PI)?)
    } else {
        Err(CliError::AreaMismatch { found: l.area() })
    }
}

/// Output of one subcommand.
pub struct Report {
    pub table: Table,
    pub passed: bool,
}

fn checks_report(rows: Vec<CheckRow>) -> Report {
    let passed = rows.iter().all(CheckRow::pass);
    Report { table: checks::table(&rows), passed }
}

fn lattice_info(cfg: &RunConfig) -> Result<Report, CliError> {
    let l = lattice_of(cfg)?;
    let mut t = Table::new(&["field", "value"]);
    let mut put = |k: String, v: f64| t.push(vec![Cell::Text(k), Cell::Num(v)]);
    put("omega1_re".into(), l.omega1().re);
    put("omega1_im".into(), l.omega1().im);
    put("omega2_re".into(), l.omega2().re);
    put("omega2_im".into(), l.omega2().im);
    put("area".into(), l.area());
    put("area_over_pi".into(), l.area() / PI);
    put("ratio_re".into(), l.ratio().re);
    put("ratio_im".into(), l.ratio().im);
    if let Ok(q) = quadratic_form_of(&l) {
        put("form_a".into(), q.a);
        put("form_b".into(), q.b);
        put("form_c".into(), q.c);
    }
    let qp = quasi_periods(ZeroLattice::from(l), DEFAULT_TRUNCATION)?;
    put("eta1_re".into(), qp.eta1.re);
    put("eta1_im".into(), qp.eta1.im);
    put("eta2_re".into(), qp.eta2.re);
    put("eta2_im".into(), qp.eta2.im);
    put("nu_re".into(), qp.nu.re);
    put("nu_im".into(), qp.nu.im);
    put("mu".into(), qp.mu);
    let density = l.upper_density(&cfg.radii);
    for (r, d) in cfg.radii.iter().zip(density) {
        put(format!("density_r{r}"), d);
    }
    for &r in &cfg.radii {
        let d = l.delta_partial(r);
        put(format!("delta_re_r{r}"), d.re);
        put(format!("delta_im_r{r}"), d.im);
    }
    Ok(Report { table: t, passed: true })
}

fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.areas.is_empty() {
        return Err(CliError::Config("sweep needs a nonempty list of areas".into()));
    }
    let shape = lattice_of(cfg)?;
    let areas: Vec<f64> = cfg.areas.iter().map(|a| a * PI).collect();
    let rows = gram_spectrum_sweep(&shape, &areas, cfg.window)?;
    let mut t = Table::new(&["area", "min_eig", "max_eig", "sign_vector_quotient", "integral_verdict"]);
    for row in &rows {
        let l = shape.scale_to_area(row.area)?;
        let trace = completeness_integral_trace(&l, &cfg.radii, IntegralKind::Weighted, &[])?;
        t.push(vec![
            row.area.into(),
            row.min_eig.into(),
            row.max_eig.into(),
            row.sign_vector_quotient.into(),
            trace.verdict.name().into(),
        ]);
    }
    if let Some(path) = &cfg.svg {
        let series = [
            Series { label: "min_eig", points: rows.iter().map(|r| (r.area / PI, r.min_eig)).collect() },
            Series { label: "max_eig", points: rows.iter().map(|r| (r.area / PI, r.max_eig)).collect() },
        ];
        let svg = line_chart("Gram spectrum against cell area", "area / pi", "eigenvalue", &series);
        std::fs::write(path, svg).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    Ok(Report { table: t, passed: true })
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::LatticeInfo => lattice_info(cfg),
        Command::Sweep => sweep(cfg),
        Command::ThetaCheck => Ok(checks_report(checks::theta()?)),
        Command::GroupCheck => Ok(checks_report(checks::group(&critical_lattice(cfg)?, cfg.fock, cfg.seed)?)),
        Command::DualCheck => Ok(checks_report(checks::dual(&critical_lattice(cfg)?)?)),
        Command::Verify => {
            let l = critical_lattice(cfg)?;
            let mut rows = checks::dependence(&l, cfg.window, cfg.k_max, cfg.seed)?;
            rows.extend(checks::theta()?);
            rows.extend(checks::dual(&l)?);
            rows.extend(checks::group(&l, cfg.fock, cfg.seed)?);
            Ok(checks_report(rows))
        }
    }
}

pub fn run(cli: &Cli) -> ExitCode {
    let outcome = cli.flags.resolve().and_then(|cfg| Ok((execute(cli.command, &cfg)?, cfg)));
    match outcome {
        Ok((report, cfg)) => {
            print!("{}", report.table.render(cfg.format, cli.command.name()));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
