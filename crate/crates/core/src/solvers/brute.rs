use std::time::Instant;

use super::{Answer, Decision, SearchStats};
use crate::control::{ControlInstance, Evaluator};
use crate::error::{Error, Result};

pub const DEFAULT_ACTION_CAP: u128 = 1 << 24;

/// Exhaustive search over `legal_actions` with the default cap.
pub fn decide_brute_force(instance: &ControlInstance) -> Result<Decision> {
    decide_brute_force_with_cap(instance, DEFAULT_ACTION_CAP)
}

/// Exhaustive search; the first successful action in enumeration order is
/// the witness. Fails up front if the action space exceeds `cap`.
pub fn decide_brute_force_with_cap(instance: &ControlInstance, cap: u128) -> Result<Decision> {
    let size = instance.action_space_size();
    if size > cap {
        return Err(Error::ResourceLimit {
            what: "action space",
            size,
            cap,
        });
    }
    let start = Instant::now();
    let eval = Evaluator::new(instance);
    let mut examined = 0;
    for action in instance.legal_actions() {
        examined += 1;
        if eval.goal_met(&action) {
            return Ok(Decision {
                answer: Answer::Yes,
                witness: Some(action),
                stats: SearchStats {
                    examined,
                    elapsed: start.elapsed(),
                },
            });
        }
    }
    Ok(Decision {
        answer: Answer::No,
        witness: None,
        stats: SearchStats {
            examined,
            elapsed: start.elapsed(),
        },
    })
}
