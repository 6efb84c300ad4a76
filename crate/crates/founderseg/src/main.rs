use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use founderseg::config::{BackendChoice, RunConfig};
use founderseg::pipeline::{self, Context};
use founderseg::synth::{self, SynthSpec};
use founderseg::Error;

/// Founder segmentation and success prediction.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML run configuration. Flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct IngestArgs {
    #[arg(long)]
    successful: Option<PathBuf>,
    #[arg(long)]
    unsuccessful: Option<PathBuf>,
    /// Founders sampled per class.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Default)]
struct LlmArgs {
    #[arg(long, value_enum)]
    backend: Option<BackendChoice>,
    #[arg(long)]
    mock_fixtures: Option<PathBuf>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model_id: Option<String>,
    /// Bound on concurrent LLM requests.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    concurrency: Option<u64>,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Fraction of founders allowed to fail before exiting nonzero.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Default)]
struct ModelArgs {
    #[arg(long)]
    split_seed: Option<u64>,
    #[arg(long)]
    model_seed: Option<u64>,
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Load both founder tables, filter and draw the balanced sample.
    Ingest(IngestArgs),
    /// Run the prompt chain over the sample and build the feature matrix.
    Segment(LlmArgs),
    /// Ask for a new level taxonomy from the generated summaries.
    ProposeTaxonomy {
        #[command(flatten)]
        llm: LlmArgs,
        #[arg(long)]
        target_count: Option<usize>,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Rebuild the feature matrix from the sample and the labels.
    Features {
        /// Alternative education keyword file.
        #[arg(long)]
        keywords: Option<PathBuf>,
    },
    /// Write the success-rate tables.
    Analyze {
        /// Minimum Yes/No gap, in percentage points, for the flag table.
        #[arg(long)]
        min_gap: Option<f64>,
    },
    /// Split, train the three models and evaluate them.
    TrainEval(ModelArgs),
    /// Collect the text reports into one file.
    Report,
    /// Write synthetic founder tables, mock completions and a config file.
    Synth {
        /// Target directory.
        dir: PathBuf,
        #[arg(long, default_value_t = 160)]
        valid_per_class: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// ingest, segment, analyze, train-eval and report.
    Run {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        llm: LlmArgs,
        #[command(flatten)]
        models: ModelArgs,
    },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl IngestArgs {
    fn apply(self, c: &mut RunConfig) {
        c.successful = self.successful.or(c.successful.take());
        c.unsuccessful = self.unsuccessful.or(c.unsuccessful.take());
        set(&mut c.n_per_class, self.n.map(|n| n as usize));
        set(&mut c.seeds.sample, self.seed);
    }
}

impl LlmArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.llm.backend, self.backend);
        c.llm.mock_fixtures = self.mock_fixtures.or(c.llm.mock_fixtures.take());
        c.llm.endpoint = self.endpoint.or(c.llm.endpoint.take());
        c.llm.cache = self.cache.or(c.llm.cache.take());
        set(&mut c.llm.model_id, self.model_id);
        set(&mut c.llm.max_in_flight, self.concurrency.map(|n| n as usize));
        set(&mut c.failure_tolerance, self.tolerance);
    }
}

impl ModelArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.seeds.split, self.split_seed);
        set(&mut c.seeds.models, self.model_seed);
        set(&mut c.models.threshold, self.threshold);
    }
}

enum Step {
    Ingest,
    Segment,
    ProposeTaxonomy,
    Features,
    Analyze,
    TrainEval,
    Report,
    Run,
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Command::Synth {
        dir,
        valid_per_class,
        seed,
    } = &cli.command
    {
        let spec = SynthSpec {
            valid_per_class: *valid_per_class,
            seed: *seed,
        };
        let files = synth::generate(dir, &spec)?;
        println!("wrote {}", files.config.display());
        return Ok(());
    }
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        config.out_dir = out;
    }
    let step = match cli.command {
        Command::Ingest(a) => {
            a.apply(&mut config);
            Step::Ingest
        }
        Command::Segment(a) => {
            a.apply(&mut config);
            Step::Segment
        }
        Command::ProposeTaxonomy {
            llm,
            target_count,
            base,
        } => {
            llm.apply(&mut config);
            set(&mut config.taxonomy.target_count, target_count);
            config.taxonomy.base = base.or(config.taxonomy.base.take());
            Step::ProposeTaxonomy
        }
        Command::Features { keywords } => {
            config.keywords = keywords.or(config.keywords.take());
            Step::Features
        }
        Command::Analyze { min_gap } => {
            set(&mut config.min_gap_pp, min_gap);
            Step::Analyze
        }
        Command::TrainEval(m) => {
            m.apply(&mut config);
            Step::TrainEval
        }
        Command::Report => Step::Report,
        Command::Run { ingest, llm, models } => {
            ingest.apply(&mut config);
            llm.apply(&mut config);
            models.apply(&mut config);
            Step::Run
        }
        Command::Synth { .. } => unreachable!("handled above"),
    };
    let ctx = Context::new(config)?;
    match step {
        Step::Ingest => {
            let s = pipeline::cmd_ingest(&ctx)?;
            println!("sampled {} founders into {}", s.sampled, ctx.run.root().display());
        }
        Step::Segment => {
            let s = pipeline::cmd_segment(&ctx)?;
            println!("segmented {} founders, {} complete", s.total, s.complete);
        }
        Step::ProposeTaxonomy => print!("{}", pipeline::cmd_propose_taxonomy(&ctx)?),
        Step::Features => {
            let s = pipeline::cmd_features(&ctx)?;
            println!("{} feature rows, {} excluded", s.rows, s.excluded);
        }
        Step::Analyze => {
            for name in pipeline::cmd_analyze(&ctx)? {
                println!("wrote reports/{name}");
            }
        }
        Step::TrainEval => print!("{}", pipeline::render_metrics_text(&pipeline::cmd_train_eval(&ctx)?)),
        Step::Report => print!("{}", pipeline::cmd_report(&ctx)?),
        Step::Run => pipeline::cmd_run(&ctx)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Tolerance { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
