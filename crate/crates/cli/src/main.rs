use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qbat_core::analytics::{steady_energies, steady_energies_numeric};
use qbat_core::model::{ReservoirSpec, SystemParams};
use qbat_core::scenario::config::RunConfig;
use qbat_core::scenario::power::run_power_compare;
use qbat_core::scenario::presets::{default_power_pair, preset};
use qbat_core::scenario::output::to_json_line;
use qbat_core::scenario::{run_config, Format, RunReport, ScenarioSpec};
use qbat_core::validation::{check_scenario, validate_all};
use qbat_core::Error;

#[derive(Parser)]
#[command(name = "qbat", version, about = "Charger-battery quantum battery simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the RK4 step of every scenario.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Override the horizon of every scenario.
    #[arg(long = "t-max", global = true)]
    t_max: Option<f64>,
    /// Seed for random-state sampling in `validate`.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bosonic,
    Fermionic,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state energies at one point, or the `[[sweep]]` grids of --config.
    Steady(SteadyArgs),
    /// Run the `[[scenario]]` entries of --config.
    Evolve {
        /// Run only the named scenario.
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a figure preset: fig2 ... fig7 or appendixA.
    Scenario { preset: String },
    /// Compare charging power P(tau) = E_B(tau)/tau of two scenarios.
    ///
    /// Uses the `[power_compare]` table of --config, or fig4a against fig5a.
    PowerCompare,
    /// Run the invariant suite, plus the scenarios of --config if given.
    Validate {
        /// Number of random states for the ergotropy check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Args)]
struct SteadyArgs {
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long, default_value_t = 0.0)]
    pump: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Kind::Bosonic)]
    reservoir: Kind,
    /// Reservoir occupation.
    #[arg(long, default_value_t = 0.0)]
    n: f64,
    /// Solve the Liouvillian kernel even where the closed form applies.
    #[arg(long)]
    numeric: bool,
}

/// Exit status: 1 for invariant violations, 2 for configuration errors.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Config(_)
            | Error::InvalidParams(_)
            | Error::InvalidIntegrator(_)
            | Error::InvalidState(_)
            | Error::NonPositiveTemperature(_)
            | Error::AnalyticUndefined,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Returns whether every invariant held.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let c = &cli.common;
    match &cli.command {
        Command::Steady(args) => match &c.config {
            Some(path) => {
                let mut cfg = load(path)?;
                cfg.scenarios.clear();
                cfg.power_compare = None;
                if cfg.sweeps.is_empty() {
                    bail!(Error::Config(format!("{} has no [[sweep]] entries", path.display())));
                }
                Ok(report(run_config(&cfg, &c.out, c.format.into())))
            }
            None => steady_point(args),
        },
        Command::Evolve { name } => {
            let Some(path) = &c.config else {
                bail!(Error::Config("evolve needs --config".into()));
            };
            let mut cfg = load(path)?;
            cfg.sweeps.clear();
            cfg.power_compare = None;
            if let Some(n) = name {
                cfg.scenarios.retain(|s| &s.name == n);
                if cfg.scenarios.is_empty() {
                    bail!(Error::Config(format!("no scenario named {n:?}")));
                }
            }
            override_integrators(&mut cfg.scenarios, c)?;
            Ok(report(run_config(&cfg, &c.out, c.format.into())))
        }
        Command::Scenario { preset: name } => {
            let mut cfg = preset(name)?;
            override_integrators(&mut cfg.scenarios, c)?;
            Ok(report(run_config(&cfg, &c.out, c.format.into())))
        }
        Command::PowerCompare => {
            let pair = match &c.config {
                Some(path) => {
                    let cfg = load(path)?;
                    let Some(pc) = &cfg.power_compare else {
                        bail!(Error::Config(format!("{} has no [power_compare] table", path.display())));
                    };
                    let get = |n: &str| cfg.scenario(n).cloned().expect("validated reference");
                    (get(&pc.pumpless), get(&pc.driven))
                }
                None => default_power_pair()?,
            };
            let mut pair = [pair.0, pair.1];
            override_integrators(&mut pair, c)?;
            let (cmp, manifest) = run_power_compare(&pair[0], &pair[1], &c.out)?;
            for s in [&cmp.pumpless, &cmp.driven] {
                println!(
                    "{}: tau = {:.6}, E_B(tau) = {:.6}, P(tau) = {:.6}",
                    s.name, s.tau, s.e_b_tau, s.power
                );
            }
            println!("ratio P_{}/P_{} = {:.6}", cmp.pumpless.name, cmp.driven.name, cmp.ratio);
            println!("manifest: {}", manifest.display());
            Ok(true)
        }
        Command::Validate { samples } => {
            let mut checks = validate_all(c.seed, *samples);
            if let Some(path) = &c.config {
                let mut cfg = load(path)?;
                override_integrators(&mut cfg.scenarios, c)?;
                for s in &cfg.scenarios {
                    checks.extend(check_scenario(s));
                }
            }
            for ch in &checks {
                let tag = if ch.passed { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", ch.name, ch.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            Ok(failed == 0)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<RunConfig> {
    Ok(RunConfig::load(path)?)
}

fn override_integrators(specs: &mut [ScenarioSpec], c: &Common) -> anyhow::Result<()> {
    for s in specs.iter_mut() {
        if let Some(dt) = c.dt {
            s.integrator.dt = Some(dt);
        }
        if let Some(t) = c.t_max {
            s.integrator.t_max = t;
        }
        s.validate()
            .with_context(|| format!("scenario {} after overrides", s.name))?;
    }
    Ok(())
}

fn steady_point(a: &SteadyArgs) -> anyhow::Result<bool> {
    let reservoir = match a.reservoir {
        Kind::Bosonic => ReservoirSpec::bosonic(a.n),
        Kind::Fermionic => ReservoirSpec::fermionic(a.n),
    };
    let p = SystemParams {
        omega0: a.omega0,
        delta: a.delta,
        g: a.g,
        f: a.pump,
        gamma: a.gamma,
        reservoir,
    };
    let e = if a.numeric {
        steady_energies_numeric(&p)?
    } else {
        steady_energies(&p)?
    };
    println!("{}", to_json_line(&e)?);
    Ok(true)
}

fn report(r: RunReport) -> bool {
    for s in &r.scenarios {
        let m = &s.result.maxima;
        println!(
            "{}: {} records, tau = {:.4}, E_B(tau) = {:.4}, max S_AB = {:.4} at t = {:.4}, max S_BA = {:.4} at t = {:.4}",
            s.result.name,
            s.result.records.len(),
            m.tau,
            m.e_b_tau,
            m.max_s_ab.value,
            m.max_s_ab.time,
            m.max_s_ba.value,
            m.max_s_ba.time
        );
        for w in &s.manifest.warnings {
            eprintln!("warning: {}: {w}", s.result.name);
        }
    }
    for s in &r.sweeps {
        println!(
            "{}: {}x{} grid, {} failed points",
            s.manifest.name,
            s.table.x.len(),
            s.table.y.len(),
            s.table.failures.len()
        );
        for w in &s.manifest.warnings {
            eprintln!("warning: {}: {w}", s.manifest.name);
        }
    }
    for (name, e) in &r.errors {
        eprintln!("error: {name}: {e}");
    }
    r.is_clean()
}
