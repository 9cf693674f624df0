use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wb_core::error::{ConfigError, Error, Result};
use wb_core::harness::output::{summary_text, write_convergence, write_outputs};
use wb_core::harness::{
    builtin_case, dyadic, run_case, run_to_steady_state, sweep, RunConfig, RunResult,
    SweepOptions, CASES,
};

#[derive(Parser)]
#[command(name = "wb", version, about = "Well-balanced implicit finite-volume solvers for 1D balance laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// March a case to its final time.
    Run {
        #[command(flatten)]
        common: Common,
        /// Cell count.
        #[arg(long)]
        cells: Option<usize>,
    },
    /// Refinement study against a fine-mesh reference.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Mesh sizes, e.g. `25,50,100` or `25,50,...,1600` for a dyadic run.
        #[arg(long)]
        cells: String,
        /// Cells of the reference run (default: 4 x finest mesh).
        #[arg(long)]
        reference_cells: Option<usize>,
        /// Scheme of the reference run.
        #[arg(long)]
        reference_scheme: Option<String>,
    },
    /// March until max |u^{n+1} - u^n| / dt < eps.
    Steady {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// List the built-in cases.
    Cases,
}

#[derive(Args)]
struct Common {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in case.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    fluctuation: Option<String>,
    #[arg(long)]
    limiter: Option<String>,
    #[arg(long)]
    tend: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other setting as key=value; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn build(&self, cells: Option<usize>) -> Result<RunConfig> {
        let mut cfg = match (&self.config, &self.case) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::invalid(
                    "case",
                    "give either --config or --case; a config file selects its case with `case = ...`",
                )
                .into())
            }
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                RunConfig::parse(&text)?
            }
            (None, Some(name)) => builtin_case(name)?,
            (None, None) => RunConfig::default(),
        };
        if let Some(m) = &self.model {
            cfg.set("model", m)?;
        }
        for (k, v) in [
            ("cfl", &self.cfl),
            ("scheme", &self.scheme),
            ("fluctuation", &self.fluctuation),
            ("limiter", &self.limiter),
            ("t_end", &self.tend),
        ] {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        if let Some(n) = cells {
            cfg.n_cells = n;
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| ConfigError::invalid("set", format!("`{kv}` is not key=value")))?;
            cfg.set(k, v)?;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_cells(s: &str) -> Result<Vec<usize>, ConfigError> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| ConfigError::invalid("cells", format!("`{t}` is not a cell count")))
    };
    if let Some(pos) = items.iter().position(|t| *t == "...") {
        if pos == 0 || pos + 1 != items.len() - 1 {
            return Err(ConfigError::invalid("cells", "`...` must sit between the first meshes and the last"));
        }
        let first = num(items[0])?;
        let last = num(items[pos + 1])?;
        let seq = dyadic(first, last);
        if seq.last() != Some(&last) {
            return Err(ConfigError::invalid("cells", "last mesh is not a dyadic refinement of the first"));
        }
        return Ok(seq);
    }
    items.into_iter().map(num).collect()
}

fn report(r: &RunResult, cfg: &RunConfig) -> Result<()> {
    print!("{}", summary_text(r));
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = &cfg.out_dir {
        for p in write_outputs(r, dir)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cases => {
            for c in CASES {
                println!("{c}");
            }
        }
        Command::Run { common, cells } => {
            let cfg = common.build(cells)?;
            let r = run_case(&cfg)?;
            report(&r, &cfg)?;
        }
        Command::Steady { common, cells, eps } => {
            let cfg = common.build(cells)?;
            let r = run_to_steady_state(&cfg, eps)?;
            report(&r, &cfg)?;
        }
        Command::Sweep {
            common,
            cells,
            reference_cells,
            reference_scheme,
        } => {
            let cfg = common.build(None)?;
            let opts = SweepOptions {
                cells: parse_cells(&cells)?,
                reference_cells,
                reference_scheme: reference_scheme.map(|s| s.parse()).transpose()?,
            };
            let t = sweep(&cfg, &opts)?;
            println!(
                "{} {} (reference {} on {} cells)",
                cfg.name, t.scheme, t.reference_scheme, t.reference_cells
            );
            for (k, n) in t.cells.iter().enumerate() {
                let mut line = format!("{n:>6}");
                for c in 0..t.component_names.len() {
                    line.push_str(&format!("  {:.3e}", t.errors[k][c]));
                    if k > 0 {
                        line.push_str(&format!(" ({:.2})", t.orders[k - 1][c]));
                    } else {
                        line.push_str("       ");
                    }
                }
                println!("{line}");
            }
            if let Some(dir) = &cfg.out_dir {
                let p = write_convergence(&t, dir, &cfg.name)?;
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
