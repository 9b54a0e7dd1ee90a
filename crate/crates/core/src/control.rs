//! The 22 standard electoral-control scenarios, chair actions, and the
//! two-stage election semantics used by the partition types.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::election::{CandidateId, Election};
use crate::error::{Error, Result};

/// Whether the chair wants the designated candidate to become the unique
/// winner, or to stop being one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    Constructive,
    Destructive,
}

/// Tie-handling in the first stage of a two-stage election.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TieRule {
    /// Only a unique subelection winner advances.
    TiesEliminate,
    /// Every subelection winner advances.
    TiesPromote,
}

impl TieRule {
    pub const BOTH: [TieRule; 2] = [TieRule::TiesEliminate, TieRule::TiesPromote];

    pub fn code(self) -> &'static str {
        match self {
            TieRule::TiesEliminate => "TE",
            TieRule::TiesPromote => "TP",
        }
    }
}

impl FromStr for TieRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TE" => Ok(TieRule::TiesEliminate),
            "TP" => Ok(TieRule::TiesPromote),
            other => Err(Error::domain(format!("unknown tie rule {other:?}"))),
        }
    }
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// What the chair may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControlKind {
    AddCandidatesUnlimited,
    AddCandidatesLimited,
    DeleteCandidates,
    PartitionCandidates(TieRule),
    RunoffPartitionCandidates(TieRule),
    AddVoters,
    DeleteVoters,
    PartitionVoters(TieRule),
}

impl ControlKind {
    fn stem(self) -> &'static str {
        match self {
            ControlKind::AddCandidatesUnlimited | ControlKind::AddCandidatesLimited => "AC",
            ControlKind::DeleteCandidates => "DC",
            ControlKind::PartitionCandidates(_) => "PC",
            ControlKind::RunoffPartitionCandidates(_) => "RPC",
            ControlKind::AddVoters => "AV",
            ControlKind::DeleteVoters => "DV",
            ControlKind::PartitionVoters(_) => "PV",
        }
    }
}

/// One of the 22 control types, e.g. `CCAC-U` or `DCPV-TE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ControlType {
    pub goal: Goal,
    pub kind: ControlKind,
}

impl ControlType {
    pub const fn new(goal: Goal, kind: ControlKind) -> Self {
        ControlType { goal, kind }
    }

    /// All 22 types, constructive before destructive within each kind.
    pub fn all() -> Vec<ControlType> {
        use ControlKind::*;
        let mut kinds = vec![AddCandidatesUnlimited, AddCandidatesLimited, DeleteCandidates];
        for rule in TieRule::BOTH {
            kinds.push(PartitionCandidates(rule));
        }
        for rule in TieRule::BOTH {
            kinds.push(RunoffPartitionCandidates(rule));
        }
        kinds.extend([AddVoters, DeleteVoters]);
        for rule in TieRule::BOTH {
            kinds.push(PartitionVoters(rule));
        }
        kinds
            .into_iter()
            .flat_map(|k| {
                [
                    ControlType::new(Goal::Constructive, k),
                    ControlType::new(Goal::Destructive, k),
                ]
            })
            .collect()
    }

    pub fn is_constructive(self) -> bool {
        self.goal == Goal::Constructive
    }

    pub fn tie_rule(self) -> Option<TieRule> {
        match self.kind {
            ControlKind::PartitionCandidates(r)
            | ControlKind::RunoffPartitionCandidates(r)
            | ControlKind::PartitionVoters(r) => Some(r),
            _ => None,
        }
    }

    /// Adding/deleting types carry a budget; partition types do not.
    pub fn has_budget(self) -> bool {
        self.tie_rule().is_none()
    }

    pub fn adds_candidates(self) -> bool {
        matches!(
            self.kind,
            ControlKind::AddCandidatesUnlimited | ControlKind::AddCandidatesLimited
        )
    }

    pub fn adds_voters(self) -> bool {
        self.kind == ControlKind::AddVoters
    }

    pub fn code(self) -> String {
        let prefix = match self.goal {
            Goal::Constructive => "CC",
            Goal::Destructive => "DC",
        };
        let suffix = match self.kind {
            ControlKind::AddCandidatesUnlimited => "-U".to_string(),
            ControlKind::AddCandidatesLimited => "-L".to_string(),
            _ => self.tie_rule().map(|r| format!("-{r}")).unwrap_or_default(),
        };
        format!("{prefix}{}{suffix}", self.kind.stem())
    }

    /// Parses a code whose tie rule may be given separately, as in a control
    /// file with `control: CCPV` plus `tie: TP`.
    pub fn parse_with_tie(code: &str, tie: Option<TieRule>) -> Result<Self> {
        let code = code.trim().to_ascii_uppercase();
        if let Some(found) = Self::all().into_iter().find(|t| t.code() == code) {
            return match (found.tie_rule(), tie) {
                (_, None) => Ok(found),
                (Some(r), Some(t)) if r == t => Ok(found),
                (Some(r), Some(t)) => Err(Error::validation(format!(
                    "control {code} conflicts with tie {t} (code implies {r})"
                ))),
                (None, Some(_)) => Err(Error::validation(format!(
                    "tie rule given for non-partition control {code}"
                ))),
            };
        }
        let candidates: Vec<_> = Self::all()
            .into_iter()
            .filter(|t| t.tie_rule().is_some() && t.code().starts_with(&format!("{code}-")))
            .collect();
        match (candidates.is_empty(), tie) {
            (true, _) => Err(Error::domain(format!("unknown control type {code:?}"))),
            (false, None) => Err(Error::validation(format!(
                "control {code} needs a tie rule (TE or TP)"
            ))),
            (false, Some(t)) => Ok(candidates
                .into_iter()
                .find(|c| c.tie_rule() == Some(t))
                .expect("both tie variants exist")),
        }
    }
}

impl FromStr for ControlType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ControlType::parse_with_tie(s, None)
    }
}

impl fmt::Display for ControlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// Chair budget for adding/deleting types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    Limited(u64),
    /// Any number of spoilers; only for the unlimited adding-candidates types.
    Unlimited,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Limited(k) => write!(f, "{k}"),
            Budget::Unlimited => f.write_str("unlimited"),
        }
    }
}

/// A concrete move of the chair.
///
/// Candidates are referred to by index into the instance's election; voters
/// by flattened index (one index per voter, multiplicities expanded). For
/// `AddVoters` the indices address the unregistered list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ControlAction {
    AddCandidates(Vec<usize>),
    DeleteCandidates(Vec<usize>),
    AddVoters(Vec<usize>),
    DeleteVoters(Vec<usize>),
    /// The first-stage set `V1`; `V2` is its complement.
    PartitionVoters(Vec<usize>),
    /// The first cell `C1`; `C2` is its complement.
    PartitionCandidates(Vec<usize>),
}

impl ControlAction {
    pub fn members(&self) -> &[usize] {
        match self {
            ControlAction::AddCandidates(v)
            | ControlAction::DeleteCandidates(v)
            | ControlAction::AddVoters(v)
            | ControlAction::DeleteVoters(v)
            | ControlAction::PartitionVoters(v)
            | ControlAction::PartitionCandidates(v) => v,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ControlAction::AddCandidates(_) => "add-candidates",
            ControlAction::DeleteCandidates(_) => "delete-candidates",
            ControlAction::AddVoters(_) => "add-voters",
            ControlAction::DeleteVoters(_) => "delete-voters",
            ControlAction::PartitionVoters(_) => "partition-voters",
            ControlAction::PartitionCandidates(_) => "partition-candidates",
        }
    }

    /// Human-readable form; voters are numbered from 1.
    pub fn describe(&self, instance: &ControlInstance) -> String {
        let names = |idx: &[usize]| {
            idx.iter()
                .map(|&c| instance.election().candidate(c).to_string())
                .join(",")
        };
        let voters = |idx: &[usize]| idx.iter().map(|v| (v + 1).to_string()).join(",");
        match self {
            ControlAction::AddCandidates(v) | ControlAction::DeleteCandidates(v) => {
                format!("{} {{{}}}", self.label(), names(v))
            }
            ControlAction::AddVoters(v) | ControlAction::DeleteVoters(v) => {
                format!("{} {{{}}}", self.label(), voters(v))
            }
            ControlAction::PartitionVoters(v) => format!("{} V1={{{}}}", self.label(), voters(v)),
            ControlAction::PartitionCandidates(v) => {
                format!("{} C1={{{}}}", self.label(), names(v))
            }
        }
    }
}

/// Keeps `winners` when the tie rule lets them advance to the final stage.
pub fn promote(winners: &[CandidateId], rule: TieRule) -> Vec<CandidateId> {
    match rule {
        TieRule::TiesEliminate if winners.len() != 1 => Vec::new(),
        _ => winners.to_vec(),
    }
}

fn promote_indices(winners: Vec<usize>, rule: TieRule) -> Vec<usize> {
    match rule {
        TieRule::TiesEliminate if winners.len() != 1 => Vec::new(),
        _ => winners,
    }
}

/// A control problem instance.
///
/// For adding-candidates types the election ranks qualified candidates and
/// spoilers alike; the spoilers are always the trailing candidates of the
/// election's declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlInstance {
    control: ControlType,
    designated: usize,
    election: Election,
    num_spoilers: usize,
    unregistered: Option<Election>,
    budget: Option<Budget>,
}

impl ControlInstance {
    pub fn new(
        control: ControlType,
        designated: &str,
        election: Election,
        spoilers: &[CandidateId],
        unregistered: Option<Election>,
        budget: Option<Budget>,
    ) -> Result<Self> {
        if !spoilers.is_empty() && !control.adds_candidates() {
            return Err(Error::validation(format!(
                "spoilers are only allowed for adding-candidates types, not {control}"
            )));
        }
        let mut is_spoiler = vec![false; election.num_candidates()];
        for s in spoilers {
            let idx = election
                .index_of(s.as_str())
                .ok_or_else(|| Error::validation(format!("spoiler {s} is not ranked by the votes")))?;
            if is_spoiler[idx] {
                return Err(Error::validation(format!("spoiler {s} listed twice")));
            }
            is_spoiler[idx] = true;
        }
        let d = election
            .index_of(designated)
            .ok_or_else(|| Error::validation(format!("designated candidate {designated} is unknown")))?;
        if is_spoiler[d] {
            return Err(Error::validation(format!(
                "designated candidate {designated} must be qualified, not a spoiler"
            )));
        }
        let election = if spoilers.is_empty() {
            election
        } else {
            let order: Vec<usize> = (0..is_spoiler.len())
                .filter(|&c| !is_spoiler[c])
                .chain((0..is_spoiler.len()).filter(|&c| is_spoiler[c]))
                .collect();
            election.reorder_candidates(&order)?
        };
        let designated_idx = election.index_of(designated).expect("designated survives reordering");

        let unregistered = match (control.adds_voters(), unregistered) {
            (true, Some(pool)) => {
                if pool.candidates() != election.candidates() {
                    return Err(Error::validation(
                        "unregistered votes must rank exactly the election's candidates",
                    ));
                }
                Some(pool)
            }
            (true, None) => Some(Election::from_indices(election.candidates().to_vec(), Vec::new())?),
            (false, Some(pool)) if pool.num_votes() > 0 => {
                return Err(Error::validation(format!(
                    "unregistered votes are only allowed for adding-voters types, not {control}"
                )))
            }
            (false, _) => None,
        };

        let budget = match (control.kind, budget) {
            (ControlKind::AddCandidatesUnlimited, None | Some(Budget::Unlimited)) => {
                Some(Budget::Unlimited)
            }
            (ControlKind::AddCandidatesUnlimited, Some(b)) => {
                return Err(Error::validation(format!(
                    "{control} takes no numeric budget (got {b})"
                )))
            }
            (_, Some(Budget::Unlimited)) => {
                return Err(Error::validation(format!("budget 'unlimited' is not allowed for {control}")))
            }
            (_, Some(b)) if control.has_budget() => Some(b),
            (_, None) if control.has_budget() => {
                return Err(Error::validation(format!("{control} requires a budget")))
            }
            (_, Some(_)) => {
                return Err(Error::validation(format!(
                    "partition type {control} takes no budget"
                )))
            }
            (_, None) => None,
        };

        Ok(ControlInstance {
            control,
            designated: designated_idx,
            election,
            num_spoilers: spoilers.len(),
            unregistered,
            budget,
        })
    }

    pub fn control(&self) -> ControlType {
        self.control
    }

    pub fn designated(&self) -> &CandidateId {
        self.election.candidate(self.designated)
    }

    pub fn designated_index(&self) -> usize {
        self.designated
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn qualified(&self) -> &[CandidateId] {
        let n = self.election.num_candidates();
        &self.election.candidates()[..n - self.num_spoilers]
    }

    pub fn spoilers(&self) -> &[CandidateId] {
        let n = self.election.num_candidates();
        &self.election.candidates()[n - self.num_spoilers..]
    }

    pub fn unregistered(&self) -> Option<&Election> {
        self.unregistered.as_ref()
    }

    pub fn budget(&self) -> Option<Budget> {
        self.budget
    }

    /// Indices the chair chooses from: spoilers, deletable candidates,
    /// unregistered or registered voters, or the candidates to split.
    pub fn pool(&self) -> Vec<usize> {
        let n = self.election.num_candidates();
        match self.control.kind {
            ControlKind::AddCandidatesUnlimited | ControlKind::AddCandidatesLimited => {
                (n - self.num_spoilers..n).collect()
            }
            ControlKind::DeleteCandidates => (0..n)
                .filter(|&c| self.control.is_constructive() || c != self.designated)
                .collect(),
            ControlKind::AddVoters => {
                let pool = self.unregistered.as_ref().expect("adding-voters pool");
                (0..pool.num_votes() as usize).collect()
            }
            ControlKind::DeleteVoters | ControlKind::PartitionVoters(_) => {
                (0..self.election.num_votes() as usize).collect()
            }
            ControlKind::PartitionCandidates(_) | ControlKind::RunoffPartitionCandidates(_) => {
                (0..n).collect()
            }
        }
    }

    /// Largest action size the chair may use, after clamping the budget to
    /// the pool size. Partition types may pick any subset.
    pub fn effective_budget(&self) -> usize {
        let pool = self.pool().len();
        match self.budget {
            Some(Budget::Limited(k)) => pool.min(usize::try_from(k).unwrap_or(usize::MAX)),
            Some(Budget::Unlimited) | None => pool,
        }
    }

    fn wrap(&self, members: Vec<usize>) -> ControlAction {
        match self.control.kind {
            ControlKind::AddCandidatesUnlimited | ControlKind::AddCandidatesLimited => {
                ControlAction::AddCandidates(members)
            }
            ControlKind::DeleteCandidates => ControlAction::DeleteCandidates(members),
            ControlKind::AddVoters => ControlAction::AddVoters(members),
            ControlKind::DeleteVoters => ControlAction::DeleteVoters(members),
            ControlKind::PartitionVoters(_) => ControlAction::PartitionVoters(members),
            ControlKind::PartitionCandidates(_) | ControlKind::RunoffPartitionCandidates(_) => {
                ControlAction::PartitionCandidates(members)
            }
        }
    }

    /// The empty action (add/delete nothing, or an empty first cell).
    pub fn identity_action(&self) -> ControlAction {
        self.wrap(Vec::new())
    }

    /// Every legal action, smallest first and lexicographic within a size.
    pub fn legal_actions(&self) -> impl Iterator<Item = ControlAction> + '_ {
        let pool = self.pool();
        let max = self.effective_budget();
        (0..=max)
            .flat_map(move |size| pool.clone().into_iter().combinations(size))
            .map(move |members| self.wrap(members))
    }

    /// Number of actions `legal_actions` yields (saturating).
    pub fn action_space_size(&self) -> u128 {
        let p = self.pool().len() as u128;
        let max = self.effective_budget() as u128;
        let mut total: u128 = 0;
        let mut binom: u128 = 1;
        for j in 0..=max {
            total = total.saturating_add(binom);
            if j < max {
                binom = match binom.checked_mul(p - j) {
                    Some(x) => x / (j + 1),
                    None => return u128::MAX,
                };
            }
        }
        total
    }

    /// Checks that `action` is one of `legal_actions`.
    pub fn check_action(&self, action: &ControlAction) -> Result<()> {
        let expected = self.identity_action();
        if std::mem::discriminant(&expected) != std::mem::discriminant(action) {
            return Err(Error::domain(format!(
                "{} is not an action for {}",
                action.label(),
                self.control
            )));
        }
        let members = action.members();
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("action members must be strictly increasing"));
        }
        let pool = self.pool();
        if let Some(bad) = members.iter().find(|m| pool.binary_search(m).is_err()) {
            return Err(Error::domain(format!(
                "index {bad} is not available to the chair for {}",
                self.control
            )));
        }
        if members.len() > self.effective_budget() {
            return Err(Error::domain(format!(
                "action uses {} items, budget allows {}",
                members.len(),
                self.effective_budget()
            )));
        }
        Ok(())
    }

    /// Final-stage winner set after the chair plays `action`.
    pub fn apply_action(&self, action: &ControlAction) -> Result<Vec<CandidateId>> {
        self.check_action(action)?;
        let winners = Evaluator::new(self).final_winners(action);
        Ok(winners
            .into_iter()
            .map(|c| self.election.candidate(c).clone())
            .collect())
    }

    /// Whether `final_winners` achieves the chair's goal.
    pub fn goal_met(&self, final_winners: &[CandidateId]) -> bool {
        let unique = final_winners.len() == 1 && final_winners[0] == *self.designated();
        match self.control.goal {
            Goal::Constructive => unique,
            Goal::Destructive => !unique,
        }
    }

    pub(crate) fn goal_met_indices(&self, final_winners: &[usize]) -> bool {
        let unique = final_winners == [self.designated];
        match self.control.goal {
            Goal::Constructive => unique,
            Goal::Destructive => !unique,
        }
    }
}

/// Evaluates many actions against one instance without re-validating them.
pub struct Evaluator<'a> {
    instance: &'a ControlInstance,
    // registered votes followed by the unregistered pool (adding-voters only)
    combined: Option<Election>,
    base_weights: Vec<u64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a ControlInstance) -> Self {
        let combined = instance.unregistered.as_ref().map(|pool| {
            instance
                .election
                .concat(pool)
                .expect("pool validated against the election")
        });
        let mut base_weights = instance.election.multiplicities();
        if let Some(pool) = &instance.unregistered {
            base_weights.extend(std::iter::repeat_n(0, pool.votes().len()));
        }
        Evaluator {
            instance,
            combined,
            base_weights,
        }
    }

    pub fn instance(&self) -> &ControlInstance {
        self.instance
    }

    /// Final winners (candidate indices) for a legal action.
    pub fn final_winners(&self, action: &ControlAction) -> Vec<usize> {
        let inst = self.instance;
        let e = &inst.election;
        let n = e.num_candidates();
        match action {
            ControlAction::AddCandidates(added) => {
                let mut mask = vec![false; n];
                for m in mask.iter_mut().take(n - inst.num_spoilers) {
                    *m = true;
                }
                for &c in added {
                    mask[c] = true;
                }
                e.winners_weighted(&self.base_weights, Some(&mask))
            }
            ControlAction::DeleteCandidates(deleted) => {
                let mut mask = vec![true; n];
                for &c in deleted {
                    mask[c] = false;
                }
                e.winners_weighted(&self.base_weights, Some(&mask))
            }
            ControlAction::AddVoters(added) => {
                let pool = inst.unregistered.as_ref().expect("adding-voters pool");
                let offset = e.votes().len();
                let mut w = self.base_weights.clone();
                for &f in added {
                    w[offset + pool.entry_of(f)] += 1;
                }
                self.combined
                    .as_ref()
                    .expect("combined list")
                    .winners_weighted(&w, None)
            }
            ControlAction::DeleteVoters(deleted) => {
                let mut w = self.base_weights.clone();
                for &f in deleted {
                    w[e.entry_of(f)] -= 1;
                }
                e.winners_weighted(&w, None)
            }
            ControlAction::PartitionVoters(first) => {
                let rule = inst.control.tie_rule().expect("partition type");
                let w1 = e.weights_for(first);
                let w2: Vec<u64> = self.base_weights.iter().zip(&w1).map(|(a, b)| a - b).collect();
                let p1 = promote_indices(e.winners_weighted(&w1, None), rule);
                let p2 = promote_indices(e.winners_weighted(&w2, None), rule);
                let mut mask = vec![false; n];
                for c in p1.into_iter().chain(p2) {
                    mask[c] = true;
                }
                e.winners_weighted(&self.base_weights, Some(&mask))
            }
            ControlAction::PartitionCandidates(first) => {
                let rule = inst.control.tie_rule().expect("partition type");
                let mut mask1 = vec![false; n];
                for &c in first {
                    mask1[c] = true;
                }
                let mask2: Vec<bool> = mask1.iter().map(|b| !b).collect();
                let p1 = promote_indices(e.winners_weighted(&self.base_weights, Some(&mask1)), rule);
                let mut final_mask = vec![false; n];
                if matches!(inst.control.kind, ControlKind::RunoffPartitionCandidates(_)) {
                    let p2 =
                        promote_indices(e.winners_weighted(&self.base_weights, Some(&mask2)), rule);
                    for c in p2 {
                        final_mask[c] = true;
                    }
                } else {
                    final_mask.copy_from_slice(&mask2);
                }
                for c in p1 {
                    final_mask[c] = true;
                }
                e.winners_weighted(&self.base_weights, Some(&final_mask))
            }
        }
    }

    pub fn goal_met(&self, action: &ControlAction) -> bool {
        self.instance.goal_met_indices(&self.final_winners(action))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<CandidateId> {
        names.iter().map(|n| CandidateId::new(*n).unwrap()).collect()
    }

    fn warp_counterexample() -> Election {
        Election::build(
            &["a", "b", "c", "d"],
            &[(3, "a c b d"), (2, "b d c a"), (1, "d a c b")],
        )
        .unwrap()
    }

    fn split_electorate() -> Election {
        Election::build(
            &["a", "b", "c", "d"],
            &[(1, "a c b d"), (1, "d c a b"), (1, "b a c d"), (1, "b a c d")],
        )
        .unwrap()
    }

    fn code(s: &str) -> ControlType {
        s.parse().unwrap()
    }

    #[test]
    fn twenty_two_codes_round_trip() {
        let all = ControlType::all();
        assert_eq!(all.len(), 22);
        let codes: std::collections::HashSet<String> = all.iter().map(|t| t.code()).collect();
        assert_eq!(codes.len(), 22);
        for t in &all {
            assert_eq!(t.code().parse::<ControlType>().unwrap(), *t);
            assert_eq!(t.code().starts_with("CC"), t.is_constructive());
            assert_eq!(t.tie_rule().is_some(), t.code().ends_with("-TE") || t.code().ends_with("-TP"));
        }
        assert!("CCXX".parse::<ControlType>().is_err());
        assert_eq!(
            ControlType::parse_with_tie("ccpv", Some(TieRule::TiesPromote)).unwrap(),
            code("CCPV-TP")
        );
        assert!(ControlType::parse_with_tie("CCPV", None).is_err());
        assert!(ControlType::parse_with_tie("CCAV", Some(TieRule::TiesPromote)).is_err());
        assert!(ControlType::parse_with_tie("CCPV-TE", Some(TieRule::TiesPromote)).is_err());
    }

    #[test]
    fn promote_rules() {
        let ab = ids(&["a", "b"]);
        assert!(promote(&ab, TieRule::TiesEliminate).is_empty());
        assert_eq!(promote(&ab, TieRule::TiesPromote), ab);
        let a = ids(&["a"]);
        assert_eq!(promote(&a, TieRule::TiesEliminate), a);
    }

    #[test]
    fn action_counts() {
        let e = Election::build(
            &["a", "b"],
            &[(1, "a b"), (1, "b a"), (1, "a b"), (1, "b a")],
        )
        .unwrap();
        let dv = ControlInstance::new(code("CCDV"), "a", e.clone(), &[], None, Some(Budget::Limited(1)))
            .unwrap();
        assert_eq!(dv.legal_actions().count(), 5);
        assert_eq!(dv.action_space_size(), 5);
        let pv = ControlInstance::new(code("CCPV-TE"), "a", e, &[], None, None).unwrap();
        assert_eq!(pv.legal_actions().count(), 16);
        assert_eq!(pv.action_space_size(), 16);

        let e = Election::build(&["a", "x", "y"], &[(1, "a x y")]).unwrap();
        let ac = ControlInstance::new(code("CCAC-U"), "a", e, &ids(&["x", "y"]), None, None).unwrap();
        assert_eq!(ac.legal_actions().count(), 4);
        assert_eq!(ac.budget(), Some(Budget::Unlimited));
    }

    #[test]
    fn enumeration_is_size_then_lex() {
        let e = Election::build(&["a", "b", "c"], &[(1, "a b c")]).unwrap();
        let pc = ControlInstance::new(code("CCPC-TP"), "a", e, &[], None, None).unwrap();
        let got: Vec<Vec<usize>> = pc.legal_actions().map(|a| a.members().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn destructive_deletion_never_removes_designated() {
        let dc = ControlInstance::new(code("DCDC"), "a", warp_counterexample(), &[], None, Some(Budget::Limited(9)))
            .unwrap();
        assert_eq!(dc.effective_budget(), 3);
        assert!(dc.legal_actions().all(|a| !a.members().contains(&0)));
        assert!(dc.check_action(&ControlAction::DeleteCandidates(vec![0])).is_err());
    }

    #[test]
    fn candidate_partition_of_warp_counterexample() {
        for control in ["DCPC-TE", "DCPC-TP", "DCRPC-TE", "DCRPC-TP"] {
            let inst = ControlInstance::new(code(control), "a", warp_counterexample(), &[], None, None).unwrap();
            let action = ControlAction::PartitionCandidates(vec![0, 2, 3]);
            let w = inst.apply_action(&action).unwrap();
            assert_eq!(w, ids(&["c"]), "{control}");
            assert!(inst.goal_met(&w));
        }
    }

    #[test]
    fn voter_partition_of_split_electorate() {
        for control in ["DCPV-TE", "DCPV-TP"] {
            let inst = ControlInstance::new(code(control), "a", split_electorate(), &[], None, None).unwrap();
            let action = ControlAction::PartitionVoters(vec![0, 1]);
            let w = inst.apply_action(&action).unwrap();
            assert_eq!(w, ids(&["b", "c"]));
            assert!(inst.goal_met(&w));
        }
    }

    #[test]
    fn identity_action_gives_uncontrolled_winners() {
        let e = warp_counterexample();
        for t in ControlType::all() {
            let (spoilers, budget, pool) = match t.kind {
                ControlKind::AddCandidatesUnlimited => (vec![], None, None),
                ControlKind::PartitionCandidates(_)
                | ControlKind::RunoffPartitionCandidates(_)
                | ControlKind::PartitionVoters(_) => (vec![], None, None),
                ControlKind::AddVoters => (vec![], Some(Budget::Limited(1)), Some(split_electorate())),
                _ => (vec![], Some(Budget::Limited(1)), None),
            };
            let inst = ControlInstance::new(t, "a", e.clone(), &spoilers, pool, budget).unwrap();
            let id = inst.identity_action();
            inst.check_action(&id).unwrap();
            let w = inst.apply_action(&id).unwrap();
            let expected = match t.kind {
                // with an empty first cell, C2 = C runs unchallenged or in a run-off against nobody
                ControlKind::PartitionCandidates(_) => e.winners(),
                ControlKind::RunoffPartitionCandidates(r) | ControlKind::PartitionVoters(r) => {
                    promote(&e.winners(), r)
                }
                _ => e.winners(),
            };
            assert_eq!(w, expected, "{t}");
        }
    }

    #[test]
    fn voter_partition_is_symmetric() {
        let e = split_electorate();
        for rule in TieRule::BOTH {
            let t = ControlType::new(Goal::Constructive, ControlKind::PartitionVoters(rule));
            let inst = ControlInstance::new(t, "a", e.clone(), &[], None, None).unwrap();
            let ev = Evaluator::new(&inst);
            for bits in 0u32..16 {
                let v1: Vec<usize> = (0..4).filter(|i| bits >> i & 1 == 1).collect();
                let v2: Vec<usize> = (0..4).filter(|i| bits >> i & 1 == 0).collect();
                assert_eq!(
                    ev.final_winners(&ControlAction::PartitionVoters(v1)),
                    ev.final_winners(&ControlAction::PartitionVoters(v2))
                );
            }
        }
    }

    #[test]
    fn runoff_partition_is_symmetric() {
        let e = warp_counterexample();
        for rule in TieRule::BOTH {
            let t = ControlType::new(Goal::Destructive, ControlKind::RunoffPartitionCandidates(rule));
            let inst = ControlInstance::new(t, "a", e.clone(), &[], None, None).unwrap();
            let ev = Evaluator::new(&inst);
            for bits in 0u32..16 {
                let c1: Vec<usize> = (0..4).filter(|i| bits >> i & 1 == 1).collect();
                let c2: Vec<usize> = (0..4).filter(|i| bits >> i & 1 == 0).collect();
                assert_eq!(
                    ev.final_winners(&ControlAction::PartitionCandidates(c1)),
                    ev.final_winners(&ControlAction::PartitionCandidates(c2))
                );
            }
        }
    }

    #[test]
    fn split_multiplicities_evaluate_identically() {
        let merged = Election::build(&["a", "b", "c"], &[(2, "a b c"), (1, "b c a"), (2, "c a b")]).unwrap();
        let split = Election::build(
            &["a", "b", "c"],
            &[(1, "a b c"), (1, "a b c"), (1, "b c a"), (1, "c a b"), (1, "c a b")],
        )
        .unwrap();
        for k in 0..=3 {
            let m = ControlInstance::new(code("DCDV"), "a", merged.clone(), &[], None, Some(Budget::Limited(k)))
                .unwrap();
            let s = ControlInstance::new(code("DCDV"), "a", split.clone(), &[], None, Some(Budget::Limited(k)))
                .unwrap();
            for (am, as_) in m.legal_actions().zip(s.legal_actions()) {
                assert_eq!(am, as_);
                assert_eq!(m.apply_action(&am).unwrap(), s.apply_action(&as_).unwrap());
            }
        }
    }

    #[test]
    fn goal_verdicts() {
        let e = Election::build(&["c", "d"], &[(1, "c d")]).unwrap();
        let cc = ControlInstance::new(code("CCAV"), "c", e.clone(), &[], None, Some(Budget::Limited(0))).unwrap();
        assert!(cc.goal_met(&ids(&["c"])));
        let pv = ControlInstance::new(code("CCPV-TP"), "c", e.clone(), &[], None, None).unwrap();
        assert!(!pv.goal_met(&ids(&["c", "d"])));
        let dpv = ControlInstance::new(code("DCPV-TE"), "c", e, &[], None, None).unwrap();
        assert!(dpv.goal_met(&[]));
    }

    #[test]
    fn header_rules_are_enforced() {
        let e = warp_counterexample();
        let none: &[CandidateId] = &[];
        assert!(ControlInstance::new(code("CCAV"), "a", e.clone(), none, None, None).is_err());
        assert!(ControlInstance::new(code("CCPV-TE"), "a", e.clone(), none, None, Some(Budget::Limited(1))).is_err());
        assert!(ControlInstance::new(code("CCDV"), "a", e.clone(), none, None, Some(Budget::Unlimited)).is_err());
        assert!(ControlInstance::new(code("CCAC-U"), "a", e.clone(), none, None, Some(Budget::Limited(1))).is_err());
        assert!(ControlInstance::new(code("CCDV"), "a", e.clone(), &ids(&["b"]), None, Some(Budget::Limited(1))).is_err());
        assert!(ControlInstance::new(code("CCAC-L"), "b", e.clone(), &ids(&["b"]), None, Some(Budget::Limited(1))).is_err());
        assert!(ControlInstance::new(code("CCDV"), "z", e, none, None, Some(Budget::Limited(1))).is_err());
    }

    #[test]
    fn spoilers_move_to_the_end() {
        let e = Election::build(&["x", "a", "y", "b"], &[(1, "x a y b")]).unwrap();
        let inst = ControlInstance::new(code("DCAC-L"), "a", e, &ids(&["x", "y"]), None, Some(Budget::Limited(1)))
            .unwrap();
        assert_eq!(inst.qualified(), ids(&["a", "b"]).as_slice());
        assert_eq!(inst.spoilers(), ids(&["x", "y"]).as_slice());
        // only a and b run without spoilers
        assert_eq!(inst.apply_action(&inst.identity_action()).unwrap(), ids(&["a"]));
        assert_eq!(
            inst.apply_action(&ControlAction::AddCandidates(vec![2])).unwrap(),
            ids(&["x"])
        );
    }

    #[test]
    fn illegal_actions_are_rejected() {
        let inst = ControlInstance::new(code("CCDV"), "a", warp_counterexample(), &[], None, Some(Budget::Limited(1))).unwrap();
        assert!(inst.apply_action(&ControlAction::DeleteVoters(vec![0, 1])).is_err());
        assert!(inst.apply_action(&ControlAction::DeleteVoters(vec![6])).is_err());
        assert!(inst.apply_action(&ControlAction::AddVoters(vec![])).is_err());
        assert!(inst.apply_action(&ControlAction::DeleteVoters(vec![3, 3])).is_err());
    }
}
