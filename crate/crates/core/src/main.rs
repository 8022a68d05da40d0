use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use media_agenda::fixture::{generate_fixture, FixtureSpec};
use media_agenda::report::emit_outputs;
use media_agenda::{run_stages, Error, PipelineConfig, Result, Stages};

const CONFIG_DEFAULTS: &str = "\
Config file (TOML; JSON when the name ends in .json). Relative paths resolve
against the config file's directory. Keys and defaults:

  seed                  required, u64
  n_topics              required, >= 2
  drop_topics           []        topic ids removed after inspection
  window_days           7         trailing sliding-mean window
  max_lag               20        largest lag (days) scanned
  min_df                2         minimum document frequency of a term
  permutations          10000     permutation-test draws per lag
  membership_threshold  0.34      share of H row that assigns an article to a topic
  min_support           30        mentions needed for a per-topic SB
  top_keywords          10        keywords listed per topic
  normalization         \"share\"   or \"unit_area\"
  polls, stopwords      required paths
  output_dir            optional; --out takes precedence
  [lexicon]             valences, negators, intensifiers, diminishers; optional labels CSV
  [bootstrap]           resamples = 10000, gamma = 0.95
  [nmf]                 tol = 1e-5, max_iter = 500
  [[outlets]]           name, articles (JSON lines)
  [[entities]]          exactly two: label, aliases (A first, then B)

Exit status is 0 only when every stage succeeds.";

#[derive(Parser)]
#[command(name = "media-agenda", version, about = "Media agenda, sentiment bias and poll causality analysis", after_long_help = CONFIG_DEFAULTS)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores). Results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the config and that every referenced file exists.
    Validate(RunArgs),
    /// Fit topics; report keywords, coverage and agenda profiles.
    Topics(RunArgs),
    /// Score entity mentions; report SB, its series and bootstrap.
    Sentiment(RunArgs),
    /// Topics and sentiment plus lagged Spearman scans against the spread.
    Correlate(RunArgs),
    /// Topics plus the Granger β-scan and ADF check.
    Causality(RunArgs),
    /// Full pipeline.
    Run(RunArgs),
    /// Write the bundled synthetic fixture (corpus, polls, lexicon, config,
    /// ground truth).
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Pipeline config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated topic ids to discard, e.g. `2,5`.
    #[arg(long, value_delimiter = ',')]
    drop_topics: Option<Vec<usize>>,
    #[arg(long)]
    n_topics: Option<usize>,
    #[arg(long)]
    max_lag: Option<usize>,
    /// Sliding-mean window in days.
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Args)]
struct FixtureArgs {
    /// Directory to write the fixture into.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Optional generator spec (TOML) replacing the bundled one.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self) -> Result<PipelineConfig> {
        let mut c = PipelineConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = &self.drop_topics {
            c.drop_topics = d.clone();
        }
        if let Some(n) = self.n_topics {
            c.n_topics = n;
        }
        if let Some(m) = self.max_lag {
            c.max_lag = m;
        }
        if let Some(w) = self.window {
            c.window_days = w;
        }
        Ok(c)
    }

    fn out_dir(&self, c: &PipelineConfig) -> Result<PathBuf> {
        match (&self.out, &c.output_dir) {
            (Some(o), _) => Ok(o.clone()),
            (None, Some(o)) => Ok(c.resolve(o)),
            (None, None) => Err(Error::Config("no output directory: pass --out or set output_dir".into())),
        }
    }
}

fn write_runtime(dir: &Path, command: &str, elapsed: f64) -> Result<()> {
    let body = serde_json::json!({
        "command": command,
        "elapsed_seconds": elapsed,
        "finished_at": chrono::Utc::now().to_rfc3339(),
        "threads": rayon::current_num_threads(),
    });
    let path = dir.join("runtime.json");
    std::fs::write(&path, format!("{body:#}\n")).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn analyse(args: &RunArgs, stages: Stages, command: &str) -> Result<()> {
    let started = Instant::now();
    let config = args.load()?;
    let out = args.out_dir(&config)?;
    let bundle = run_stages(&config, stages)?;
    let manifest = emit_outputs(&bundle, &out)?;
    write_runtime(&out, command, started.elapsed().as_secs_f64())?;
    println!("wrote {} files to {}", manifest.files.len() + 1, out.display());
    for o in &bundle.outlets {
        if let Some(g) = &o.granger {
            for r in g.significant() {
                println!("{}: topic {} leads the spread by {} days (β={:.3}, p={:.2e})", o.name, r.topic_id, r.tau, r.beta, r.p_value);
            }
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Validate(a) => {
            let c = a.load()?;
            c.validate()?;
            println!("config OK: {} outlets, {} topics", c.outlets.len(), c.n_topics);
            Ok(())
        }
        Command::Topics(a) => analyse(&a, Stages::TOPICS, "topics"),
        Command::Sentiment(a) => analyse(&a, Stages::SENTIMENT, "sentiment"),
        Command::Correlate(a) => analyse(&a, Stages::CORRELATE, "correlate"),
        Command::Causality(a) => analyse(&a, Stages::CAUSALITY, "causality"),
        Command::Run(a) => analyse(&a, Stages::ALL, "run"),
        Command::Fixture(a) => {
            let spec = match &a.spec {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| Error::Io {
                        path: p.clone(),
                        source: e,
                    })?;
                    toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?
                }
                None => FixtureSpec::default(),
            };
            let fixture = generate_fixture(a.seed, &spec)?;
            let config = fixture.write(&a.out)?;
            println!("fixture written; run with --config {}", config.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
