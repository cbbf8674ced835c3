//! Simulation toolkit for quantum money, unclonable states and quantum
//! copy-protection.

pub mod copyprotect;
pub mod experiments;
pub mod mathcore;
pub mod money_conjugate;
pub mod money_stabilizer;
pub mod quantumsim;
pub mod stabilizer;
pub mod tdesign;
