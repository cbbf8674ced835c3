use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unclonable::experiments::{CopyScheme, Counterfeiter, Freeloader, MoneyScheme, PirateKind, ScalingStrategy};

#[derive(Parser, Debug)]
#[command(
    name = "unclonable",
    version,
    about = "Simulation lab for quantum money, t-designs and copy-protected point functions"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; printed to stderr either way.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trial / sample / note count for commands that average.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Output path. A `.csv` extension selects CSV.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with the subcommand's options; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Declares an options struct whose fields are all optional, readable from
/// flags or from a JSON config, with flags taking precedence.
macro_rules! options {
    ($(#[$meta:meta])* $name:ident { $($(#[$fmeta:meta])* $field:ident: $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Args, serde::Deserialize, Debug, Default, Clone)]
        #[serde(default, deny_unknown_fields)]
        pub struct $name {
            $($(#[$fmeta])* #[arg(long)] pub $field: Option<$ty>,)*
        }

        impl $name {
            /// Fills every unset field from `file`.
            pub fn under(mut self, file: Self) -> Self {
                $(if self.$field.is_none() { self.$field = file.$field; })*
                self
            }
        }
    };
}

options! {
    MintStab {
        n: usize,
        l: usize,
        m: usize,
        eps: f64,
        /// Bank key file; created if missing, otherwise reused.
        key: PathBuf,
        /// Write the packed binary format instead of JSON.
        #[arg(num_args = 0..=1, default_missing_value = "true")]
        binary: bool,
    }
}

options! {
    AuthStab {
        note: PathBuf,
        key: PathBuf,
        /// `literal` collapses measured registers; `coherent` keeps accepted notes intact.
        mode: String,
        /// Number of back-to-back authentications.
        repeat: usize,
        /// Where to write the note after the last authentication.
        post: PathBuf,
    }
}

options! {
    AttackStab {
        note: PathBuf,
        /// `gaussian` or `commuting`.
        attack: String,
        /// Commuting-attack threshold constant `c` in `(m−1)/2 + c√m`.
        c: f64,
        /// Where to write the forged note.
        forged: PathBuf,
    }
}

options! {
    SweepStab {
        n: usize,
        l: usize,
        eps: f64,
        /// Comma-separated row counts.
        #[arg(value_delimiter = ',')]
        ms: Vec<usize>,
    }
}

options! {
    Wealth {
        scheme: MoneyScheme,
        counterfeiter: Counterfeiter,
        k: usize,
        r: usize,
        /// Qubits per conjugate-coding note.
        qubits: usize,
        n: usize,
        l: usize,
        m: usize,
        eps: f64,
    }
}

options! {
    TdesignMoment {
        n: usize,
        d: usize,
        t: usize,
        /// Monte Carlo sample count; exact enumeration when absent.
        samples: usize,
    }
}

options! {
    TdesignDistinguish {
        n: usize,
        d: usize,
        t: usize,
        /// Oracle queries `T`.
        queries: usize,
        /// Strategy name, or `all`.
        strategy: String,
    }
}

options! {
    Vend {
        scheme: CopyScheme,
        /// Key as a bit string, bit 0 first.
        key: String,
        /// Copies (scheme A) or coset registers (scheme B).
        k: usize,
        /// Qubits per scheme-A copy.
        m: usize,
    }
}

options! {
    Eval {
        program: PathBuf,
        x: String,
        /// Where to write the program after evaluation.
        post: PathBuf,
    }
}

options! {
    Pirate {
        /// `split`, `mix`, `learn` or `pgm`.
        strategy: String,
        /// Program file(s); `mix` takes two.
        #[arg(value_delimiter = ',')]
        program: Vec<PathBuf>,
        /// Candidate keys for `learn`; defaults to every key of the program's length.
        #[arg(value_delimiter = ',')]
        family: Vec<String>,
        /// `pgm`: scheme, key length, total copies and scheme-A width.
        scheme: CopyScheme,
        n: usize,
        k: usize,
        m: usize,
    }
}

options! {
    PirateGame {
        scheme: CopyScheme,
        pirate: PirateKind,
        freeloader: Freeloader,
        n: usize,
        k: usize,
        r: usize,
        amplification: usize,
        m: usize,
        delta: f64,
    }
}

options! {
    Scaling {
        /// Comma-separated qubit counts.
        #[arg(value_delimiter = ',')]
        ns: Vec<usize>,
        fidelity: f64,
        strategy: ScalingStrategy,
        /// Intact copies held by the counterfeiter.
        copies: usize,
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mint a stabilizer banknote.
    MintStab(MintStab),
    /// Authenticate a stabilizer banknote, optionally repeatedly.
    AuthStab(AuthStab),
    /// Forge from a banknote's public table.
    AttackStab(AttackStab),
    /// Gaussian-attack sweep over the rows per state.
    SweepStab(SweepStab),
    /// Wealth game for a money scheme and counterfeiter.
    Wealth(Wealth),
    /// Distance between a design's t-th moment and the Haar moment.
    TdesignMoment(TdesignMoment),
    /// Distinguishing advantage of the shipped test algorithms.
    TdesignDistinguish(TdesignDistinguish),
    /// Vend a copy-protected point-function program.
    Vend(Vend),
    /// Evaluate a program on one input.
    Eval(Eval),
    /// Run one pirate on concrete programs.
    Pirate(Pirate),
    /// Pirate game with freeloaders.
    PirateGame(PirateGame),
    /// Oracle queries needed to produce a fresh register, across n.
    Scaling(Scaling),
}
