use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infmat::mutation::Mutation;
use infmat::{demo, scenario, selftest};

#[derive(Parser)]
#[command(name = "infmat", version, about = "Derivations of infinite matrix rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the derivation described by a scenario file
    Run {
        scenario: PathBuf,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded self-test suites
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        plant: Option<String>,
    },
    /// Print a walkthrough
    Demo { name: String },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { scenario: path, out } => {
            let loaded = match scenario::load(&path) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(1);
                }
            };
            let target = out.or_else(|| loaded.scenario.out.as_ref().map(PathBuf::from));
            let output = match loaded.run() {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(1);
                }
            };
            match target {
                Some(t) => {
                    if let Err(e) = std::fs::write(&t, output.canonical()) {
                        eprintln!("error: {}: {e}", t.display());
                        return code(1);
                    }
                    println!("{}: {}", output.status, t.display());
                }
                None => print!("{}", output.canonical()),
            }
            code(output.exit_code)
        }
        Command::Selftest { seed, plant } => {
            let planted = match plant.as_deref() {
                None => None,
                Some(name) => match Mutation::ALL.into_iter().find(|m| m.name() == name) {
                    Some(m) => Some(m),
                    None => {
                        eprintln!("unknown mutation {name}");
                        return code(1);
                    }
                },
            };
            let summary = selftest::run(seed, selftest::Scale::FULL, planted);
            print!("{}", summary.render());
            code(summary.exit_code())
        }
        Command::Demo { name } => match demo::demo(&name) {
            Some(text) => {
                print!("{text}");
                code(0)
            }
            None => {
                eprintln!("unknown demo {name:?}; valid names:");
                for d in demo::DEMOS {
                    eprintln!("  {d}");
                }
                code(1)
            }
        },
    }
}
