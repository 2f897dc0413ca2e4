//! The `intercomm` command line: a TOML config, flag overrides, and one
//! subcommand per experiment. Every run writes `config.resolved.toml` next to
//! its outputs so it can be replayed exactly.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::lifetime::optimize_lifetime;
use crate::netsim::{simulate_instance, sweep, Protocol, SweepPoint};
use crate::protocol::{Accounting, Problem, ProtocolKind};
use crate::scheduling::solve_problem_with;

pub use config::{
    parse_rational, Config, EnergySection, FixturesSection, NetworkSection, SolveSection, SupportSection, SweepSection,
    VerifySection,
};

#[derive(Debug, Parser)]
#[command(
    name = "intercomm",
    version,
    about = "Interactive communication schedules, lifetimes and cluster simulations"
)]
pub struct Cli {
    /// TOML config; omitted keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Optimal schedules and bit budgets for the four objectives.
    Solve(SolveArgs),
    /// Worst-case network lifetime of the best MCN schedule.
    Lifetime(LifetimeArgs),
    /// One MCN run and one LEACH run on the same network.
    Simulate(SimulateArgs),
    /// Mean lifetime against network size.
    Sweep(SweepArgs),
    /// Support files with exhaustive oracle answers.
    Fixtures(FixturesArgs),
    /// Greedy schedules and protocol invariants against exhaustive oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SupportArgs {
    /// Support file (`N n` header, then one `x1 .. xN weight` line per tuple).
    #[arg(long)]
    pub support: Option<PathBuf>,
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub informants: Option<usize>,
    #[arg(long)]
    pub alphabet: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub support: SupportArgs,
    /// Problem id 1..=4; repeatable.
    #[arg(long = "problem")]
    pub problems: Vec<u8>,
    #[arg(long)]
    pub loglog_overhead: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LifetimeArgs {
    #[command(flatten)]
    pub support: SupportArgs,
    /// `one` or `two`.
    #[arg(long)]
    pub protocol: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub nodes: Option<usize>,
    /// LEACH compression ratio, `0 < r <= 1`.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub instance: Option<u64>,
    /// `index` or `literal`.
    #[arg(long)]
    pub downlink: Option<String>,
    /// Also write per-node round logs.
    #[arg(long)]
    pub dump_logs: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Network sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Vec<usize>,
    #[arg(long)]
    pub instances: Option<u64>,
    #[arg(long)]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FixturesArgs {
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub max_informants: Option<usize>,
    #[arg(long)]
    pub max_alphabet: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub lemma1_cases: Option<usize>,
    #[arg(long)]
    pub lemma23_cases: Option<usize>,
    #[arg(long)]
    pub theorem3_cases: Option<usize>,
    #[arg(long)]
    pub fixture_cases: Option<usize>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl SupportArgs {
    fn apply(&self, s: &mut SupportSection) {
        if self.support.is_some() {
            s.file = self.support.clone();
        }
        set(&mut s.generator, self.generator.clone());
        set(&mut s.informants, self.informants);
        set(&mut s.alphabet, self.alphabet);
    }
}

impl Cli {
    /// The config file (or defaults) with every flag applied, validated.
    pub fn resolve(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.output_dir, self.output_dir.clone());
        match &self.command {
            Command::Solve(a) => {
                a.support.apply(&mut cfg.support);
                if !a.problems.is_empty() {
                    cfg.solve.problems = a.problems.clone();
                }
                cfg.solve.loglog_overhead |= a.loglog_overhead;
            }
            Command::Lifetime(a) => {
                a.support.apply(&mut cfg.support);
                set(&mut cfg.energy.protocol, a.protocol.clone());
            }
            Command::Simulate(a) => {
                let n = &mut cfg.network;
                set(&mut n.nodes, a.nodes);
                set(&mut n.ratio, a.ratio);
                set(&mut n.instance, a.instance);
                set(&mut n.downlink, a.downlink.clone());
                n.dump_logs |= a.dump_logs;
            }
            Command::Sweep(a) => {
                if !a.nodes.is_empty() {
                    cfg.sweep.nodes = a.nodes.clone();
                }
                set(&mut cfg.sweep.instances, a.instances);
                set(&mut cfg.sweep.ratio, a.ratio);
            }
            Command::Fixtures(a) => {
                set(&mut cfg.fixtures.count, a.count);
                set(&mut cfg.fixtures.max_informants, a.max_informants);
                set(&mut cfg.fixtures.max_alphabet, a.max_alphabet);
            }
            Command::Verify(a) => {
                set(&mut cfg.verify.lemma1_cases, a.lemma1_cases);
                set(&mut cfg.verify.lemma23_cases, a.lemma23_cases);
                set(&mut cfg.verify.theorem3_cases, a.theorem3_cases);
                set(&mut cfg.verify.fixture_cases, a.fixture_cases);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Files written by a run and whether its checks held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub written: Vec<PathBuf>,
    pub ok: bool,
    pub summary: String,
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs one subcommand against a resolved config.
pub fn run(command: &Command, cfg: &Config) -> Result<RunOutcome> {
    let mut out = Writer::new(&cfg.output_dir)?;
    out.write("config.resolved.toml", &cfg.to_toml())?;
    let mut ok = true;
    let mut summary = String::new();
    match command {
        Command::Solve(_) => {
            let (name, js) = cfg.joint_support()?;
            let mut report = format!(
                "support {name}\ninformants {}\nalphabet {}\n",
                js.num_informants(),
                js.alphabet().size()
            );
            for &id in &cfg.solve.problems {
                let r = solve_problem_with(&js, Problem::try_from(id)?, cfg.solve.loglog_overhead)?;
                writeln!(summary, "problem {id}: objective {} ({})", r.objective, r.kind).unwrap();
                write!(report, "\n{r}").unwrap();
            }
            out.write("solve_report.txt", &report)?;
        }
        Command::Lifetime(_) => {
            let (name, js) = cfg.joint_support()?;
            let params = cfg.energy_params(js.num_informants())?;
            let acct = Accounting {
                kind: cfg.energy.protocol.parse::<ProtocolKind>()?,
                loglog_overhead: cfg.energy.loglog_overhead,
            };
            let result = optimize_lifetime(&js, &params, acct)?;
            writeln!(
                summary,
                "{}",
                result.best.to_string().lines().nth(1).unwrap_or_default()
            )
            .unwrap();
            out.write(
                "lifetime_report.txt",
                &format!("support {name}\nprotocol {}\n{result}", acct.kind),
            )?;
        }
        Command::Simulate(_) => {
            let params = cfg.network.params()?;
            let net = &cfg.network;
            for protocol in [Protocol::Mcn, Protocol::Leach { ratio: net.ratio }] {
                let sim = simulate_instance(&params, protocol, cfg.seed, net.instance, net.dump_logs);
                writeln!(summary, "{protocol}: lifetime {}", sim.lifetime).unwrap();
                out.write(&format!("rounds_{protocol}.csv"), &sim.rounds_csv())?;
                if net.dump_logs {
                    out.write(&format!("roundlog_{protocol}.txt"), &sim.logs_dump())?;
                }
            }
        }
        Command::Sweep(_) => {
            let params = cfg.network.params()?;
            let s = &cfg.sweep;
            for protocol in [Protocol::Mcn, Protocol::Leach { ratio: s.ratio }] {
                let points = sweep(&params, protocol, &s.nodes, s.instances, cfg.seed);
                let mut csv = SweepPoint::csv_header().to_string();
                for p in &points {
                    csv.push_str(&p.csv_row());
                    writeln!(summary, "{protocol} N={}: mean {:.1}", p.nodes, p.mean()).unwrap();
                }
                out.write(&format!("sweep_{protocol}.csv"), &csv)?;
            }
        }
        Command::Fixtures(_) => {
            let f = &cfg.fixtures;
            let fixtures = crate::fixtures::generate(cfg.seed, f.count, f.max_informants, f.max_alphabet)?;
            let mut paths = crate::fixtures::write_fixtures(&cfg.output_dir, &fixtures)?;
            if f.bundled {
                paths.extend(crate::fixtures::write_bundled(&cfg.output_dir)?);
            }
            writeln!(summary, "{} fixture files", paths.len()).unwrap();
            out.written.extend(paths);
        }
        Command::Verify(_) => {
            let report = crate::audit::run_all(&cfg.audit());
            out.write("verify_report.txt", &report.to_string())?;
            out.write("counterexamples.txt", &report.counterexamples_text())?;
            ok = [
                "lemma1-mcn-max-uplink",
                "lemma2-mcn-sum-bs-energy",
                "lemma3-mcn-max-node-load",
                "theorem3-best-of-mcn-lifetime",
            ]
            .iter()
            .all(|name| report.get(name).is_some_and(|o| o.passed()));
            summary.push_str(&report.to_string());
        }
    }
    Ok(RunOutcome {
        written: out.written,
        ok,
        summary,
    })
}

/// Entry point of the binary. Exit code 1 means a verification mismatch,
/// 2 an invalid config or I/O failure.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.resolve().and_then(|cfg| run(&cli.command, &cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification found oracle mismatches; see counterexamples.txt");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
