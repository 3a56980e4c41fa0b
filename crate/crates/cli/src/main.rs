use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use metricheck::checklist::{run_checklist, Sections};
use metricheck::corpus::{assemble, load_records, validate, write_csv, write_jsonl, Format, ValidationReport};
use metricheck::exec::Execution;
use metricheck::report::{parse_config, write_report, OutputFormat, RunConfig};
use metricheck::textmetrics::{score_records, RefAggregation, RougeStat, ScoreOptions, Smoothing};

#[derive(Parser)]
#[command(name = "metricheck", version, about = "Check whether automatic NLG metrics prefer what humans prefer")]
struct Cli {
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate the corpus named in a config.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Add BLEU and ROUGE-N columns to a corpus file.
    Score(ScoreArgs),
    /// Metric-to-human correlation grouped by domain and task.
    Transfer(RunArgs),
    /// KS distance between quality bands, per aspect.
    AspectEval(RunArgs),
    /// Preference similarity over quality bands, per aspect.
    AspectPref(RunArgs),
    /// KS distance between system pairs, per aspect and metric.
    SystemEval(RunArgs),
    /// Preference similarity over systems.
    SystemPref(RunArgs),
    /// Pairwise win fractions between systems.
    WinMatrix(RunArgs),
    /// Every assessment.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats; overrides the config.
    #[arg(long, value_delimiter = ',')]
    format: Vec<OutputFormat>,
    /// Evaluate on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Keep letter case.
    #[arg(long)]
    keep_case: bool,
    /// Keep punctuation characters.
    #[arg(long)]
    keep_punctuation: bool,
    /// Do not expand Latin abbreviations such as "e.g.".
    #[arg(long)]
    no_abbrev_expansion: bool,
    #[arg(long, default_value_t = 4)]
    bleu_max_n: usize,
    #[arg(long, value_enum, default_value_t = SmoothingArg::AddOne)]
    smoothing: SmoothingArg,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    rouge_orders: Vec<usize>,
    #[arg(long, value_enum, default_value_t = RougeStatArg::F1)]
    rouge_stat: RougeStatArg,
    #[arg(long, value_enum, default_value_t = AggregationArg::Mean)]
    aggregation: AggregationArg,
    /// Overwrite existing columns with the same name.
    #[arg(long)]
    replace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothingArg {
    None,
    AddOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum RougeStatArg {
    Precision,
    Recall,
    F1,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Mean,
    Best,
}

enum Failure {
    Rejected,
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<metricheck::Error> for Failure {
    fn from(e: metricheck::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    let (args, sections) = match command {
        Command::Validate { config } => {
            let config = parse_config(&config).context("reading config")?;
            let (_, report) = load_and_validate(&config)?;
            println!(
                "{} error(s), {} warning(s); {} record(s)",
                report.errors.len(),
                report.warnings.len(),
                report.counts.values().sum::<usize>()
            );
            return if report.is_accepted() { Ok(()) } else { Err(Failure::Rejected) };
        }
        Command::Score(args) => return score(args).map_err(Failure::Runtime),
        Command::Transfer(a) => (a, Sections { transfer: true, ..Sections::NONE }),
        Command::AspectEval(a) => (a, Sections { aspect_eval: true, ..Sections::NONE }),
        Command::AspectPref(a) => (a, Sections { aspect_pref: true, ..Sections::NONE }),
        Command::SystemEval(a) => (a, Sections { system_eval: true, ..Sections::NONE }),
        Command::SystemPref(a) => (a, Sections { system_pref: true, ..Sections::NONE }),
        Command::WinMatrix(a) => (a, Sections { win_matrix: true, ..Sections::NONE }),
        Command::Run(a) => (a, Sections::ALL),
    };
    run(args, sections)
}

fn load_and_validate(config: &RunConfig) -> Result<(Vec<metricheck::corpus::Record>, ValidationReport), Failure> {
    let (records, load_warnings) = config.load_records()?;
    for w in &load_warnings {
        warn!("{w}");
    }
    let report = validate(&records, &config.datasets);
    for w in &report.warnings {
        warn!("{}: {}", w.locator, w.message);
    }
    for e in &report.errors {
        eprintln!("invalid: {}: {}", e.locator, e.message);
    }
    Ok((records, report))
}

fn run(args: RunArgs, sections: Sections) -> Result<(), Failure> {
    let mut config = parse_config(&args.config).context("reading config")?;
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    if !args.format.is_empty() {
        config.formats = args.format;
    }
    if args.sequential {
        config.checklist.execution = Execution::Sequential;
    }
    config.checklist.sections = sections;

    let (records, report) = load_and_validate(&config)?;
    if !report.is_accepted() {
        return Err(Failure::Rejected);
    }
    config.check_names(&records)?;
    let datasets = assemble(&config.datasets, records);
    info!("{} dataset(s) loaded", datasets.len());

    let result = run_checklist(&datasets, &config.checklist);
    let written = write_report(&result, &config.output_dir, &config.formats)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn score(args: ScoreArgs) -> anyhow::Result<()> {
    if args.bleu_max_n == 0 {
        bail!("--bleu-max-n must be at least 1");
    }
    let mut options = ScoreOptions {
        bleu_max_n: args.bleu_max_n,
        smoothing: match args.smoothing {
            SmoothingArg::None => Smoothing::None,
            SmoothingArg::AddOne => Smoothing::AddOne,
        },
        rouge_orders: args.rouge_orders,
        rouge_stat: match args.rouge_stat {
            RougeStatArg::Precision => RougeStat::Precision,
            RougeStatArg::Recall => RougeStat::Recall,
            RougeStatArg::F1 => RougeStat::F1,
        },
        aggregation: match args.aggregation {
            AggregationArg::Mean => RefAggregation::Mean,
            AggregationArg::Best => RefAggregation::Best,
        },
        replace: args.replace,
        ..ScoreOptions::default()
    };
    options.tokenizer.lowercase = !args.keep_case;
    options.tokenizer.strip_punctuation = !args.keep_punctuation;
    options.tokenizer.latin_abbrev_expansion = !args.no_abbrev_expansion;

    let loaded = load_records(&args.input, Format::from_path(&args.input))?;
    for w in &loaded.warnings {
        warn!("{w}");
    }
    let mut records = loaded.records;
    let scored = score_records(&mut records, &options)?;
    write_records(&records, &args.out)?;
    info!("scored {scored} of {} record(s)", records.len());
    Ok(())
}

fn write_records(records: &[metricheck::corpus::Record], path: &Path) -> anyhow::Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let writer = std::io::BufWriter::new(file);
    match Format::from_path(path) {
        Format::Jsonl => write_jsonl(records, writer)?,
        Format::Csv => write_csv(records, writer)?,
    }
    Ok(())
}
