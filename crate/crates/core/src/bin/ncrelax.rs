use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncrelax::experiments::{
    check, coupling_study, eps_study, grid_study, load_config, run, write_study, ErrorReport, RunConfig, Scheme,
};
use ncrelax::{Error, Result};

const AFTER_HELP: &str = "\
Configuration:
  A config file holds `key = value` lines; `preset` picks the defaults, every other
  key overrides one field. Flags and --set pairs are applied after the file.
  Presets: swe-dambreak, swe-smooth, blood-coupled, custom.

Output (in --out):
  run             solution.csv   x,h1,q1,h2,q2            (shallow water)
                                 x,a,u,flow_rate,pressure,side (blood pair; side 1 = left vessel)
                  report.csv     quantity,value
                  metadata.txt   all config fields + derived.* values
  eps-study       eps-study.csv       epsilon,h1,eoc_h1,h2,eoc_h2
  grid-study      grid-study.csv      n_cells,h1,eoc_h1,h2,eoc_h2
  coupling-study  coupling-study.csv  n_cells,psi_1,eoc_psi_1,psi_2,eoc_psi_2[,a,eoc_a,u,eoc_u]
  check           check.csv           name,passed,detail
  Numbers carry 17 significant digits; the EOC of the first row is blank.

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.";

#[derive(Parser, Debug)]
#[command(
    name = "ncrelax",
    version,
    about = "Path-conservative relaxation schemes: runs and convergence studies"
)]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one preset to its end time and write the solution.
    Run,
    /// L¹ distance between relaxation (ε = 2^-k) and relaxed solutions.
    EpsStudy,
    /// Mesh convergence of the relaxed scheme against a fine reference.
    GridStudy,
    /// Coupling-error convergence of the blood pair.
    CouplingStudy,
    /// Invariant suite: subcharacteristic bound, Φ-conservativity, M-term.
    Check,
}

#[derive(Args, Debug)]
struct Overrides {
    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true)]
    n_cells: Option<usize>,
    #[arg(long, global = true)]
    cfl: Option<f64>,
    /// Relaxation rate; selects the relaxation scheme for `run`.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Any other config key, e.g. `--set study_cells=250,500,1000`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
}

impl Overrides {
    fn pairs(&self) -> Result<Vec<(String, String)>> {
        let mut p: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                p.push((k.into(), v));
            }
        };
        push("preset", self.preset.clone());
        push("n_cells", self.n_cells.map(|v| v.to_string()));
        push("cfl", self.cfl.map(|v| v.to_string()));
        push("t_end", self.t_end.map(|v| v.to_string()));
        push("alpha", self.alpha.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|v| v.display().to_string()));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            p.push((k.trim().into(), v.trim().into()));
        }
        // The rate goes last so it survives a `scheme` set in the file.
        if let Some(e) = self.epsilon {
            p.push(("epsilon".into(), e.to_string()));
        }
        Ok(p)
    }
}

fn print_report(title: &str, r: &ErrorReport) {
    println!("{title}");
    println!("{}", r.header().join("\t"));
    for rec in r.records() {
        let short: Vec<String> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_or(s.clone(), |x| format!("{x:.4e}")))
            .collect();
        println!("{}", short.join("\t"));
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let overrides = cli.overrides.pairs()?;
    let mut cfg: RunConfig = load_config(cli.overrides.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Run => {
            if cli.overrides.epsilon.is_some() && cfg.scheme == Scheme::Relaxed {
                cfg.scheme = Scheme::Relaxation;
            }
            let a = run(&cfg)?;
            for (k, v) in &a.summary {
                println!("{k} = {v:.10e}");
            }
            for f in &a.files {
                println!("wrote {}", f.display());
            }
        }
        Command::EpsStudy | Command::GridStudy | Command::CouplingStudy => {
            let (name, report) = match cli.command {
                Command::EpsStudy => ("eps-study", eps_study(&cfg)?),
                Command::GridStudy => ("grid-study", grid_study(&cfg)?),
                _ => ("coupling-study", coupling_study(&cfg)?),
            };
            print_report(name, &report);
            for f in write_study(&cfg, name, &report)?.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Check => {
            let outcomes = check(&cfg)?;
            let path = cfg.out.join("check.csv");
            std::fs::create_dir_all(&cfg.out)?;
            let mut w = csv::Writer::from_path(&path).map_err(std::io::Error::from)?;
            w.write_record(["name", "passed", "detail"])
                .map_err(std::io::Error::from)?;
            for o in &outcomes {
                println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                w.write_record([o.name, if o.passed { "true" } else { "false" }, &o.detail])
                    .map_err(std::io::Error::from)?;
            }
            w.flush()?;
            if let Some(o) = outcomes.iter().find(|o| !o.passed) {
                return Err(Error::Invariant(format!("`{}`: {}", o.name, o.detail)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
