//! `unclonable` command-line front end. Every command is a deterministic
//! function of its resolved seed and options.

mod args;
mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde::de::DeserializeOwned;
use serde_json::Value;
use thiserror::Error;
use unclonable::mathcore::Rng;

use args::{Cli, Command, Common};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Run(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            _ => 1,
        }
    }
}

/// Config file contents: `seed` and `trials` apply to every command, the
/// remaining keys to the subcommand's options.
struct FileConfig<T> {
    seed: Option<u64>,
    trials: Option<usize>,
    options: T,
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<FileConfig<T>, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig { seed: None, trials: None, options: T::default() });
    };
    let bad = |message: String| CliError::Config { path: path.to_path_buf(), message };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let obj = value.as_object_mut().ok_or_else(|| bad("top level must be an object".into()))?;
    let mut take = |key: &str| -> Result<Option<u64>, CliError> {
        match obj.remove(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| bad(format!("{key}: expected a non-negative integer"))),
        }
    };
    let seed = take("seed")?;
    let trials = take("trials")?.map(|t| t as usize);
    let options = serde_path_to_error::deserialize(value).map_err(|e| bad(e.to_string()))?;
    Ok(FileConfig { seed, trials, options })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common: Common = cli.common;
    macro_rules! layered {
        ($args:expr) => {{
            let file = load_config(common.config.as_deref())?;
            let seed = common.seed.or(file.seed).unwrap_or_else(|| {
                SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
            });
            eprintln!("seed: {seed}");
            (($args).under(file.options), common.trials.or(file.trials), Rng::new(seed))
        }};
    }
    let report = match cli.command {
        Command::MintStab(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::mint_stab(a, common.out.clone(), &mut rng)?;
            return Ok(());
        }
        Command::AuthStab(a) => {
            let (a, _, mut rng) = layered!(a);
            let (report, ok) = commands::auth_stab(a, &mut rng)?;
            output::emit(&common, &report)?;
            return if ok { Ok(()) } else { Err(CliError::Check("note rejected".into())) };
        }
        Command::AttackStab(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::attack_stab(a, &mut rng)?
        }
        Command::SweepStab(a) => {
            let (a, trials, mut rng) = layered!(a);
            commands::sweep_stab(a, trials, &mut rng)?
        }
        Command::Wealth(a) => {
            let (a, trials, mut rng) = layered!(a);
            commands::wealth(a, trials, &mut rng)?
        }
        Command::TdesignMoment(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::tdesign_moment(a, &mut rng)?
        }
        Command::TdesignDistinguish(a) => {
            let (a, trials, mut rng) = layered!(a);
            commands::tdesign_distinguish(a, trials, &mut rng)?
        }
        Command::Vend(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::vend(a, &mut rng)?
        }
        Command::Eval(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::eval(a, &mut rng)?
        }
        Command::Pirate(a) => {
            let (a, _, mut rng) = layered!(a);
            commands::pirate(a, &mut rng)?
        }
        Command::PirateGame(a) => {
            let (a, trials, mut rng) = layered!(a);
            commands::pirate_game(a, trials, &mut rng)?
        }
        Command::Scaling(a) => {
            let (a, trials, mut rng) = layered!(a);
            commands::scaling(a, trials, &mut rng)?
        }
    };
    output::emit(&common, &report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
