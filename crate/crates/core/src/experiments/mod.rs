//! Security games and scaling experiments: wealth for money schemes, the
//! pirate game for copy-protection, and oracle-query scaling for cloning
//! Haar states.

/// Declares a string-id registry enum with `ALL`, `id()`, `FromStr` and
/// `Display`.
macro_rules! registry {
    ($(#[$meta:meta])* $name:ident, $kind:literal, { $($(#[$vmeta:meta])* $variant:ident => $id:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
        pub enum $name {
            $($(#[$vmeta])* #[serde(rename = $id)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn id(self) -> &'static str {
                match self {
                    $($name::$variant => $id),+
                }
            }
        }

        impl std::str::FromStr for $name {
            type Err = $crate::experiments::ExperimentError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL
                    .iter()
                    .copied()
                    .find(|v| v.id() == s)
                    .ok_or_else(|| $crate::experiments::ExperimentError::Unknown { kind: $kind, id: s.into() })
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.id())
            }
        }
    };
}

mod pirate_game;
mod scaling;
mod sweep;
mod wealth;

pub use pirate_game::{run_pirate_game, CopyScheme, Freeloader, PirateConfig, PirateKind, PirateReport};
pub use scaling::{
    linear_fit, query_cap, run_nocloning_scaling, ScalingPoint, ScalingReport, ScalingStrategy, MAX_SCALING_QUBITS,
};
pub use sweep::{gaussian_sweep, SweepRow};
pub use wealth::{run_wealth_game, Counterfeiter, MoneyScheme, WealthConfig, WealthReport};

use thiserror::Error;

use crate::copyprotect::CopyError;
use crate::money_conjugate::{AttackError, MoneyError};
use crate::money_stabilizer::StabMoneyError;
use crate::quantumsim::SimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("{0}")]
    Config(String),
    #[error("{counterfeiter} does not apply to scheme {scheme}")]
    Unsupported { scheme: String, counterfeiter: String },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Money(#[from] MoneyError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Stab(#[from] StabMoneyError),
    #[error(transparent)]
    Copy(#[from] CopyError),
}
