use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use liechief_cli::{
    cmd_analyze, cmd_chief_series, cmd_corpus_export, cmd_corpus_list, cmd_jh, cmd_jh_all_pairs, cmd_validate, load,
    parse_field, CliError, Options, OutputFormat,
};

#[derive(Parser)]
#[command(name = "liechief", version, about = "Chief series and Jordan-Hölder correspondences of Lie algebras over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Prime field; must match the file when a file is read.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<u8>,
    /// Maximum number of chief series to enumerate.
    #[arg(long, global = true, default_value_t = liechief::ideals::DEFAULT_SERIES_CAP)]
    cap: usize,
    /// Seed for `random<dim>` corpus entries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cross-check the lattice computations against brute-force enumeration.
    #[arg(long, global = true, value_enum, default_value_t = Switch::Off)]
    oracle: Switch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie axioms and report solvability.
    Validate { path: PathBuf },
    /// Minimal ideals, maximal subalgebras, Frattini subalgebra, primitivity and a classified chief series.
    Analyze { path: PathBuf },
    /// A chief series, or all of them with --all.
    ChiefSeries {
        path: PathBuf,
        #[arg(long)]
        all: bool,
    },
    /// The Jordan-Hölder permutation between two chief series.
    ///
    /// Series are written as terms separated by `|`, vectors by `;` and
    /// coordinates by `,`, e.g. "1,0 | L".
    Jh {
        path: PathBuf,
        x: Option<String>,
        y: Option<String>,
        #[arg(long)]
        all_pairs: bool,
    },
    /// Built-in example algebras.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let opts = Options {
        format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Structured => OutputFormat::Structured,
        },
        oracle: matches!(cli.oracle, Switch::On),
        cap: cli.cap,
        seed: cli.seed,
        field: cli.field,
    };
    match cli.command {
        Command::Validate { path } => cmd_validate(&load(&path, &opts)?, &opts),
        Command::Analyze { path } => cmd_analyze(&load(&path, &opts)?, &opts),
        Command::ChiefSeries { path, all } => cmd_chief_series(&load(&path, &opts)?, all, &opts),
        Command::Jh { path, x, y, all_pairs } => {
            let l = load(&path, &opts)?;
            match (all_pairs, x, y) {
                (true, None, None) => cmd_jh_all_pairs(&l, &opts),
                (false, Some(x), Some(y)) => cmd_jh(&l, &x, &y, &opts),
                _ => Err(CliError::Input { line: None, msg: "give two series, or --all-pairs alone".into() }),
            }
        }
        Command::Corpus { action: CorpusAction::List } => Ok(cmd_corpus_list(&opts)),
        Command::Corpus { action: CorpusAction::Export { name, output } } => {
            let text = cmd_corpus_export(&name, &opts)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Failed { output, .. } = &e {
                print!("{output}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
