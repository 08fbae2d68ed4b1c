use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use derham::driver::{self, RunConfig, SideSelection, Source};

#[derive(Parser)]
#[command(name = "derham", version, about = "Compare polynomial de Rham and Sullivan forms on simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilized Betti numbers.
    Betti(Opts),
    /// Check that P induces isomorphisms on cohomology, with all supporting checks.
    VerifyQuasiIso(Opts),
    /// Check the local lemmas, surjectivity of restrictions and the Čech homotopies.
    VerifyLemmas(Opts),
    /// Check that t1^2 t2^2 dt3 vanishes on the boundary of a triangle.
    Gomez(Opts),
    /// Write the built-in complexes as JSON files.
    Corpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct Opts {
    /// Complex description (JSON).
    #[arg(long, conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Name of a built-in complex.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(derham::corpus::NAMES))]
    builtin: Option<String>,
    #[arg(long, default_value_t = 2)]
    q_max: usize,
    /// Smallest weight bound in stabilization runs [default: q-max + 2].
    #[arg(long)]
    d_min: Option<usize>,
    #[arg(long, default_value_t = 6)]
    d_max: usize,
    /// Weight bound for homotopy and lemma certification.
    #[arg(long, default_value_t = 4)]
    d_cert: usize,
    #[arg(long, default_value_t = 2)]
    p_max: usize,
    #[arg(long, default_value_t = 2)]
    window: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    tv_trials: usize,
    #[arg(long, default_value_t = 50)]
    extres_trials: usize,
    /// Full JSON report destination.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "all", value_parser = ["omega", "sullivan", "simplicial", "all"])]
    side: String,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

impl Opts {
    fn config(&self, needs_input: bool) -> anyhow::Result<RunConfig> {
        let source = match (&self.input, &self.builtin) {
            (Some(p), _) => Source::File(p.clone()),
            (None, Some(n)) => Source::Builtin(n.clone()),
            (None, None) if needs_input => bail!("one of --input or --builtin is required"),
            (None, None) => RunConfig::default().source,
        };
        Ok(RunConfig {
            source,
            q_max: self.q_max,
            d_min: self.d_min,
            d_max: self.d_max,
            d_cert: self.d_cert,
            p_max: self.p_max,
            window: self.window,
            seed: self.seed,
            tv_trials: self.tv_trials,
            extres_trials: self.extres_trials,
            side: self.side.parse::<SideSelection>()?,
            timings: self.timings,
            ..RunConfig::default()
        })
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (name, opts) = match &cli.command {
        Command::Betti(o) => ("betti", o),
        Command::VerifyQuasiIso(o) => ("verify-quasi-iso", o),
        Command::VerifyLemmas(o) => ("verify-lemmas", o),
        Command::Gomez(o) => ("gomez", o),
        Command::Corpus { dir } => {
            std::fs::create_dir_all(dir)?;
            for x in derham::corpus::all() {
                let path = dir.join(format!("{}.json", x.name()));
                std::fs::write(&path, x.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            return Ok(true);
        }
    };
    let cfg = opts.config(name != "gomez")?;
    let report = driver::run(name, &cfg)?;
    print!("{}", report.summary());
    if let Some(out) = &opts.out {
        std::fs::write(out, report.to_json()).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
