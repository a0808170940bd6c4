use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dnml::repl::{run_repl, Session};
use dnml::storage::load_database;
use dnml::{explain_plan, parse_query, run_query, Error};

/// Query narrative databases with the narrative algebra.
#[derive(Parser)]
#[command(name = "dnml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one query and print the result document as JSON.
    Query {
        #[arg(short, long)]
        db: PathBuf,
        #[arg(short, long)]
        query: String,
        /// Write the result document here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Start an interactive session.
    Repl {
        #[arg(short, long)]
        db: Option<PathBuf>,
    },
    /// Print the plan of a query before and after rewriting.
    Explain {
        #[arg(short, long)]
        query: String,
    },
    /// Check a database file.
    Validate {
        #[arg(short, long)]
        db: PathBuf,
    },
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Query { db, query, output } => {
            let doc = run_query(&db, &query, output.as_deref())?;
            if output.is_none() {
                print!("{}", doc.to_json());
            }
        }
        Command::Repl { db } => {
            let mut session = match db {
                Some(path) => {
                    let db = load_database(path)?;
                    for w in &db.warnings {
                        eprintln!("warning: {w}");
                    }
                    Session::with_database(db)
                }
                None => Session::new(),
            };
            let stdout = io::stdout();
            run_repl(
                &mut session,
                io::stdin().lock(),
                BufWriter::new(stdout.lock()),
            )
            .map_err(|source| Error::Io {
                path: "<stdio>".into(),
                source,
            })?;
        }
        Command::Explain { query } => {
            print!("{}", explain_plan(&parse_query(&query)?));
        }
        Command::Validate { db } => {
            let loaded = load_database(&db)?;
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            let pairs: usize = dnml::RelationKind::ALL
                .iter()
                .map(|k| loaded.store.base_pairs(*k).count())
                .sum();
            println!(
                "ok: {} narratives, {pairs} relation pairs",
                loaded.instance.len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dnml: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
