//! Bucklin voting and electoral control: winner determination, the 22
//! control types, exact and polynomial deciders, hardness constructions and
//! a small text format with a command-line front end.

pub mod cli;
pub mod control;
pub mod election;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod reductions;
pub mod solvers;
pub mod verify;

pub use control::{promote, Budget, ControlAction, ControlInstance, ControlKind, ControlType, Goal, TieRule};
pub use election::{majority_threshold, Ballot, BucklinOutcome, CandidateId, Election, Vote};
pub use error::{Error, Result};
pub use solvers::{Answer, Decision};
