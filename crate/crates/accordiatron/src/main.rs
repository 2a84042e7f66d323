use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accordiatron::serve::Server;
use accordiatron::{load_trace, run_decode, run_encode, DecodeInput, RunConfig, ShellError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "accordiatron",
    version,
    about = "Squeeze-box MIDI controller model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a gesture trace into a timed MIDI byte log.
    Encode {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Send every axis once at the first sample.
        #[arg(long)]
        emit_initial: bool,
    },
    /// Rebuild the controller state timeline from a byte log or raw MIDI.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Encode a trace and print the byte log, or link statistics with --stats.
    Simulate {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        stats: bool,
    },
    /// Run the live WebSocket bridge.
    Serve {
        #[arg(long)]
        port: u16,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, ShellError> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ShellError> {
    std::fs::write(path, bytes).map_err(|source| ShellError::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(command: Command) -> Result<(), ShellError> {
    match command {
        Command::Encode {
            trace,
            config,
            out,
            emit_initial,
        } => {
            let mut config = load_config(config.as_deref())?;
            config.emit_initial |= emit_initial;
            let trace = load_trace(&trace)?;
            let encoded = run_encode(&trace, &config)?;
            write_file(&out, &encoded.render(config.output_format))?;
            eprintln!(
                "{} messages, {} coalesced",
                encoded.stats.sent, encoded.stats.coalesced
            );
        }
        Command::Decode { input, config } => {
            let config = load_config(config.as_deref())?;
            let bytes = std::fs::read(&input).map_err(|source| ShellError::Io {
                path: input.clone(),
                source,
            })?;
            let timeline = run_decode(&DecodeInput::detect(bytes), &config)?;
            print!("{}", timeline.render());
        }
        Command::Simulate {
            trace,
            config,
            stats,
        } => {
            let config = load_config(config.as_deref())?;
            let trace = load_trace(&trace)?;
            let encoded = run_encode(&trace, &config)?;
            if stats {
                let s = encoded.stats;
                println!("sent {}", s.sent);
                println!("coalesced {}", s.coalesced);
                println!("peak_queue_depth {}", s.peak_queue_depth);
                println!("peak_msgs_per_s {}", s.peak_msgs_per_s);
                println!("mean_msgs_per_s {:.1}", s.mean_msgs_per_s());
                println!("capacity_msgs_per_s {}", config.link.capacity_per_s());
            } else {
                print!("{}", encoded.to_log());
            }
        }
        Command::Serve { port, config } => {
            let config = load_config(config.as_deref())?;
            let server = Server::bind(("127.0.0.1", port), config)?;
            if let Ok(addr) = server.local_addr() {
                eprintln!("listening on ws://{addr}");
            }
            server.run()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
