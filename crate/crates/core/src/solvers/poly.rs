//! Polynomial-time deciders for destructive control by adding voters and by
//! deleting voters.
//!
//! The designated candidate `c` fails to be the unique winner of a non-empty
//! vote list iff some rival `d` and level `l` satisfy, with `maj` the strict
//! majority threshold of the final list:
//!
//! 1. `score_l(d) >= maj`,
//! 2. `score_{l-1}(c) < maj`, and
//! 3. `score_l(c) >= maj` implies `score_l(d) >= score_l(c)`.
//!
//! For fixed `(d, l)` these quantities depend on the vote list only through
//! six class counts (see [`LevelClassProfile`]), and votes inside a class are
//! interchangeable. So it suffices to try every per-class count vector whose
//! total respects the budget: `O(k^6)` vectors for each of the `O(m^2)`
//! pairs `(d, l)`.

use std::time::Instant;

use super::{Answer, Decision, SearchStats};
use crate::control::{ControlAction, ControlInstance, ControlKind, Goal};
use crate::election::{majority_threshold, Election};
use crate::error::{Error, Result};

const CLASSES: usize = 6;

/// Vote counts for a fixed rival and level, split by whether the rival is in
/// the top `level` positions (`rival_in`) and where the designated candidate
/// sits: within the top `level - 1`, exactly at `level`, or below `level`.
///
/// Class index is `3 * rival_in + designated_slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelClassProfile {
    pub rival: usize,
    pub level: usize,
    pub counts: [u64; CLASSES],
}

impl LevelClassProfile {
    /// Class of vote entry `v` of `election`.
    pub fn class_of(election: &Election, designated: usize, rival: usize, level: usize, v: usize) -> usize {
        let pd = election.position(v, rival);
        let pc = election.position(v, designated);
        let rival_in = usize::from(pd < level);
        let slot = if pc + 1 < level {
            0
        } else if pc + 1 == level {
            1
        } else {
            2
        };
        3 * rival_in + slot
    }

    /// Profile of the whole vote list, multiplicities included.
    pub fn of(election: &Election, designated: usize, rival: usize, level: usize) -> Self {
        let mut counts = [0u64; CLASSES];
        for (v, vote) in election.votes().iter().enumerate() {
            counts[Self::class_of(election, designated, rival, level, v)] += vote.multiplicity();
        }
        LevelClassProfile { rival, level, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Whether these counts keep the designated candidate from being the
    /// unique winner (an empty list has no winner at all).
    pub fn blocks_designated(&self) -> bool {
        blocks(&self.counts)
    }
}

fn blocks(counts: &[u64; CLASSES]) -> bool {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return true;
    }
    let maj = majority_threshold(total);
    let rival = counts[3] + counts[4] + counts[5];
    let designated_before = counts[0] + counts[3];
    let designated_at = designated_before + counts[1] + counts[4];
    rival >= maj && designated_before < maj && (designated_at < maj || rival >= designated_at)
}

/// Visits count vectors `x` with `x[i] <= limits[i]` and `sum(x) <= budget`
/// in lexicographic order until `f` returns true.
fn search_vectors(
    limits: &[u64; CLASSES],
    budget: u64,
    examined: &mut u64,
    f: &mut impl FnMut(&[u64; CLASSES]) -> bool,
) -> Option<[u64; CLASSES]> {
    fn go(
        i: usize,
        x: &mut [u64; CLASSES],
        limits: &[u64; CLASSES],
        left: u64,
        examined: &mut u64,
        f: &mut impl FnMut(&[u64; CLASSES]) -> bool,
    ) -> bool {
        if i == CLASSES {
            *examined += 1;
            return f(x);
        }
        for take in 0..=limits[i].min(left) {
            x[i] = take;
            if go(i + 1, x, limits, left - take, examined, f) {
                return true;
            }
        }
        x[i] = 0;
        false
    }
    let mut x = [0u64; CLASSES];
    go(0, &mut x, limits, budget, examined, f).then_some(x)
}

/// Flattened vote indices of `election`, grouped by class.
fn class_members(election: &Election, designated: usize, rival: usize, level: usize) -> [Vec<usize>; CLASSES] {
    let mut members: [Vec<usize>; CLASSES] = Default::default();
    for v in 0..election.votes().len() {
        let class = LevelClassProfile::class_of(election, designated, rival, level, v);
        members[class].extend(election.flat_range(v));
    }
    members
}

fn pick(members: &[Vec<usize>; CLASSES], x: &[u64; CLASSES]) -> Vec<usize> {
    let mut chosen: Vec<usize> = members
        .iter()
        .zip(x)
        .flat_map(|(m, &take)| m.iter().take(take as usize).copied())
        .collect();
    chosen.sort_unstable();
    chosen
}

fn require(instance: &ControlInstance, kind: ControlKind) -> Result<()> {
    let t = instance.control();
    if t.goal != Goal::Destructive || t.kind != kind {
        return Err(Error::domain(format!(
            "decider expects {}, got {t}",
            crate::control::ControlType::new(Goal::Destructive, kind)
        )));
    }
    Ok(())
}

fn decision(witness: Option<ControlAction>, examined: u64, start: Instant) -> Decision {
    Decision {
        answer: Answer::from(witness.is_some()),
        witness,
        stats: SearchStats {
            examined,
            elapsed: start.elapsed(),
        },
    }
}

/// Decides DCDV: can deleting at most `k` votes stop the designated
/// candidate from being the unique winner?
pub fn decide_dc_delete_voters_poly(instance: &ControlInstance) -> Result<Decision> {
    require(instance, ControlKind::DeleteVoters)?;
    let start = Instant::now();
    let e = instance.election();
    let c = instance.designated_index();
    let budget = instance.effective_budget() as u64;
    let mut examined = 0;

    for rival in (0..e.num_candidates()).filter(|&d| d != c) {
        for level in 1..=e.num_candidates() {
            let profile = LevelClassProfile::of(e, c, rival, level);
            let found = search_vectors(&profile.counts, budget, &mut examined, &mut |x| {
                let mut left = profile.counts;
                for (l, taken) in left.iter_mut().zip(x) {
                    *l -= taken;
                }
                blocks(&left)
            });
            if let Some(x) = found {
                let members = class_members(e, c, rival, level);
                let deleted = pick(&members, &x);
                return Ok(decision(Some(ControlAction::DeleteVoters(deleted)), examined, start));
            }
        }
    }
    // without rivals only an empty list unseats c
    if budget >= e.num_votes() {
        let all = (0..e.num_votes() as usize).collect();
        return Ok(decision(Some(ControlAction::DeleteVoters(all)), examined, start));
    }
    Ok(decision(None, examined, start))
}

/// Decides DCAV: can adding at most `k` unregistered votes stop the
/// designated candidate from being the unique winner?
pub fn decide_dc_add_voters_poly(instance: &ControlInstance) -> Result<Decision> {
    require(instance, ControlKind::AddVoters)?;
    let start = Instant::now();
    let e = instance.election();
    let pool = instance.unregistered().expect("adding-voters pool");
    let c = instance.designated_index();
    let budget = instance.effective_budget() as u64;
    let mut examined = 0;

    for rival in (0..e.num_candidates()).filter(|&d| d != c) {
        for level in 1..=e.num_candidates() {
            let base = LevelClassProfile::of(e, c, rival, level);
            let extra = LevelClassProfile::of(pool, c, rival, level);
            let found = search_vectors(&extra.counts, budget, &mut examined, &mut |y| {
                let mut after = base.counts;
                for (a, added) in after.iter_mut().zip(y) {
                    *a += added;
                }
                blocks(&after)
            });
            if let Some(y) = found {
                let members = class_members(pool, c, rival, level);
                let added = pick(&members, &y);
                return Ok(decision(Some(ControlAction::AddVoters(added)), examined, start));
            }
        }
    }
    if e.num_votes() == 0 {
        return Ok(decision(Some(ControlAction::AddVoters(Vec::new())), examined, start));
    }
    Ok(decision(None, examined, start))
}
