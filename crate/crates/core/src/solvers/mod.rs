//! Deciders for control instances.
//!
//! [`decide_brute_force`] is exact for every control type and serves as the
//! oracle; [`decide_dc_add_voters_poly`] and [`decide_dc_delete_voters_poly`]
//! run in polynomial time for the two vulnerable destructive voter types.

mod brute;
mod poly;

use std::fmt;
use std::time::Duration;

use crate::control::ControlAction;

pub use brute::{decide_brute_force, decide_brute_force_with_cap, DEFAULT_ACTION_CAP};
pub use poly::{decide_dc_add_voters_poly, decide_dc_delete_voters_poly, LevelClassProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

impl From<bool> for Answer {
    fn from(yes: bool) -> Self {
        if yes {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Actions (brute force) or count vectors (polynomial deciders) examined.
    pub examined: u64,
    pub elapsed: Duration,
}

/// Outcome of a decider. A `Yes` always carries a witness action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: Answer,
    pub witness: Option<ControlAction>,
    pub stats: SearchStats,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        self.answer.is_yes()
    }
}
