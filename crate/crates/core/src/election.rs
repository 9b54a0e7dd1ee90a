//! Bucklin elections: candidates, ranked ballots, level scores and winner sets.
//!
//! Ballots are strict linear orders over the full candidate set and are stored
//! with multiplicities. Internally every ranking refers to candidates by their
//! index in the election's declaration order; the public surface speaks in
//! [`CandidateId`] tokens.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Strict majority threshold `floor(n / 2) + 1` for a list of `num_votes` votes.
pub fn majority_threshold(num_votes: u64) -> u64 {
    num_votes / 2 + 1
}

pub(crate) fn check_token(token: &str) -> std::result::Result<(), String> {
    if token.is_empty() {
        return Err("empty token".into());
    }
    if let Some(bad) = token
        .chars()
        .find(|ch| ch.is_whitespace() || *ch == '>' || *ch == ',')
    {
        return Err(format!("token {token:?} contains forbidden character {bad:?}"));
    }
    Ok(())
}

/// Name of a candidate. Non-empty, without whitespace, `>` or `,`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateId(String);

impl CandidateId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_token(&name).map_err(Error::Domain)?;
        Ok(CandidateId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for CandidateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CandidateId::new(s)
    }
}

impl Borrow<str> for CandidateId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for CandidateId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A strict ranking of all candidates of an election, most preferred first.
/// Entries are candidate indices into the owning election.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ballot(Vec<usize>);

impl Ballot {
    pub fn ranking(&self) -> &[usize] {
        &self.0
    }
}

/// A ballot together with the number of voters who cast it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vote {
    multiplicity: u64,
    ballot: Ballot,
}

impl Vote {
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn ballot(&self) -> &Ballot {
        &self.ballot
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ballot.0
    }
}

/// An election `(C, V)`: a candidate set and a list of votes over it.
///
/// Votes have a "flattened" view in which a vote of multiplicity `m`
/// occupies `m` consecutive indices; control actions that add, delete or
/// partition voters address votes through that view.
#[derive(Clone, Debug)]
pub struct Election {
    candidates: Vec<CandidateId>,
    lookup: HashMap<CandidateId, usize>,
    votes: Vec<Vote>,
    // positions[v][c] = 0-based rank of candidate c in vote entry v
    positions: Vec<Vec<usize>>,
    // flat_starts[v] = flattened index of the first copy of vote entry v
    flat_starts: Vec<u64>,
    total: u64,
}

impl PartialEq for Election {
    fn eq(&self, other: &Self) -> bool {
        self.candidates == other.candidates && self.votes == other.votes
    }
}

impl Eq for Election {}

impl Election {
    /// Builds an election from named candidates and named rankings.
    pub fn new(candidates: Vec<CandidateId>, votes: Vec<(u64, Vec<CandidateId>)>) -> Result<Self> {
        let lookup = Self::make_lookup(&candidates)?;
        let mut indexed = Vec::with_capacity(votes.len());
        for (i, (mult, ranking)) in votes.into_iter().enumerate() {
            let mut row = Vec::with_capacity(ranking.len());
            for name in &ranking {
                let idx = lookup.get(name.as_str()).ok_or_else(|| {
                    Error::validation(format!("vote {}: unknown candidate {name}", i + 1))
                })?;
                row.push(*idx);
            }
            indexed.push((mult, row));
        }
        Self::assemble(candidates, lookup, indexed)
    }

    /// Builds an election whose rankings are given as candidate indices.
    pub fn from_indices(candidates: Vec<CandidateId>, votes: Vec<(u64, Vec<usize>)>) -> Result<Self> {
        let lookup = Self::make_lookup(&candidates)?;
        Self::assemble(candidates, lookup, votes)
    }

    /// Convenience constructor from string slices. Rankings are written as
    /// `"a > b > c"` or `"a b c"`.
    pub fn build(candidates: &[&str], votes: &[(u64, &str)]) -> Result<Self> {
        let candidates = candidates
            .iter()
            .map(|c| CandidateId::new(*c))
            .collect::<Result<Vec<_>>>()?;
        let votes = votes
            .iter()
            .map(|(mult, text)| {
                let ranking = text
                    .split(|ch: char| ch == '>' || ch.is_whitespace())
                    .filter(|tok| !tok.is_empty())
                    .map(CandidateId::new)
                    .collect::<Result<Vec<_>>>()?;
                Ok((*mult, ranking))
            })
            .collect::<Result<Vec<_>>>()?;
        Election::new(candidates, votes)
    }

    fn make_lookup(candidates: &[CandidateId]) -> Result<HashMap<CandidateId, usize>> {
        let mut lookup = HashMap::with_capacity(candidates.len());
        for (i, c) in candidates.iter().enumerate() {
            if lookup.insert(c.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate candidate {c}")));
            }
        }
        Ok(lookup)
    }

    fn assemble(
        candidates: Vec<CandidateId>,
        lookup: HashMap<CandidateId, usize>,
        votes: Vec<(u64, Vec<usize>)>,
    ) -> Result<Self> {
        let n = candidates.len();
        let mut out_votes = Vec::with_capacity(votes.len());
        let mut positions = Vec::with_capacity(votes.len());
        let mut flat_starts = Vec::with_capacity(votes.len());
        let mut total = 0u64;
        for (i, (mult, ranking)) in votes.into_iter().enumerate() {
            if mult == 0 {
                return Err(Error::validation(format!("vote {}: multiplicity must be positive", i + 1)));
            }
            if ranking.len() != n {
                return Err(Error::validation(format!(
                    "vote {}: ranks {} candidates, expected {n}",
                    i + 1,
                    ranking.len()
                )));
            }
            let mut pos = vec![usize::MAX; n];
            for (rank, &c) in ranking.iter().enumerate() {
                if c >= n {
                    return Err(Error::validation(format!("vote {}: candidate index {c} out of range", i + 1)));
                }
                if pos[c] != usize::MAX {
                    return Err(Error::validation(format!(
                        "vote {}: candidate {} ranked twice",
                        i + 1,
                        candidates[c]
                    )));
                }
                pos[c] = rank;
            }
            flat_starts.push(total);
            total += mult;
            positions.push(pos);
            out_votes.push(Vote {
                multiplicity: mult,
                ballot: Ballot(ranking),
            });
        }
        Ok(Election {
            candidates,
            lookup,
            votes: out_votes,
            positions,
            flat_starts,
            total,
        })
    }

    pub fn candidates(&self) -> &[CandidateId] {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    /// Total number of votes, counting multiplicities.
    pub fn num_votes(&self) -> u64 {
        self.total
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn candidate(&self, index: usize) -> &CandidateId {
        &self.candidates[index]
    }

    pub(crate) fn require_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::domain(format!("unknown candidate {name}")))
    }

    /// Rank (0-based) of candidate `c` in vote entry `v`.
    pub(crate) fn position(&self, v: usize, c: usize) -> usize {
        self.positions[v][c]
    }

    /// Number of votes ranking `candidate` within their top `level` positions.
    pub fn level_score(&self, candidate: &str, level: usize) -> Result<u64> {
        let c = self.require_index(candidate)?;
        if level == 0 || level > self.num_candidates() {
            return Err(Error::domain(format!(
                "level {level} outside 1..={}",
                self.num_candidates()
            )));
        }
        Ok(self
            .votes
            .iter()
            .zip(&self.positions)
            .filter(|(_, pos)| pos[c] < level)
            .map(|(v, _)| v.multiplicity)
            .sum())
    }

    /// Computes the full Bucklin outcome, including the level-score table.
    pub fn outcome(&self) -> Result<BucklinOutcome> {
        let n = self.num_candidates();
        if n == 0 {
            return Err(Error::domain("election has no candidates"));
        }
        // per-level counts, then prefix sums
        let mut scores = vec![vec![0u64; n]; n];
        for (vote, pos) in self.votes.iter().zip(&self.positions) {
            for (c, &p) in pos.iter().enumerate() {
                scores[c][p] += vote.multiplicity;
            }
        }
        for row in &mut scores {
            for level in 1..n {
                row[level] += row[level - 1];
            }
        }
        let mut winning_level = None;
        let mut winners = Vec::new();
        if self.total > 0 {
            let maj = majority_threshold(self.total);
            for level in 0..n {
                let best = scores.iter().map(|row| row[level]).max().unwrap_or(0);
                if best >= maj {
                    winning_level = Some(level + 1);
                    winners = (0..n).filter(|&c| scores[c][level] == best).collect();
                    break;
                }
            }
        }
        Ok(BucklinOutcome {
            candidates: self.candidates.clone(),
            winning_level,
            winners,
            scores,
        })
    }

    /// Bucklin winner set, in declaration order.
    pub fn winners(&self) -> Vec<CandidateId> {
        let weights = self.multiplicities();
        self.winners_weighted(&weights, None)
            .into_iter()
            .map(|c| self.candidates[c].clone())
            .collect()
    }

    /// Restricts the election to `kept`, preserving the relative order of
    /// the remaining candidates in every ballot and in the declaration.
    pub fn restrict(&self, kept: &[CandidateId]) -> Result<Election> {
        let idx = kept
            .iter()
            .map(|c| self.require_index(c.as_str()))
            .collect::<Result<Vec<_>>>()?;
        self.restrict_indices(&idx)
    }

    pub fn restrict_indices(&self, kept: &[usize]) -> Result<Election> {
        if kept.is_empty() {
            return Err(Error::domain("restriction to an empty candidate set"));
        }
        let n = self.num_candidates();
        let mut mask = vec![false; n];
        for &c in kept {
            if c >= n {
                return Err(Error::domain(format!("candidate index {c} out of range")));
            }
            mask[c] = true;
        }
        let mut remap = vec![usize::MAX; n];
        let mut names = Vec::new();
        for c in 0..n {
            if mask[c] {
                remap[c] = names.len();
                names.push(self.candidates[c].clone());
            }
        }
        let votes = self
            .votes
            .iter()
            .map(|v| {
                let ranking = v
                    .ranking()
                    .iter()
                    .filter(|&&c| mask[c])
                    .map(|&c| remap[c])
                    .collect();
                (v.multiplicity, ranking)
            })
            .collect();
        Election::from_indices(names, votes)
    }

    /// Subelection over all candidates keeping only the votes at the given
    /// flattened indices.
    pub fn select_votes(&self, flat: &[usize]) -> Result<Election> {
        if let Some(&bad) = flat.iter().find(|&&f| f as u64 >= self.total) {
            return Err(Error::domain(format!("vote index {bad} out of range")));
        }
        let weights = self.weights_for(flat);
        let votes = self
            .votes
            .iter()
            .zip(weights)
            .filter(|(_, w)| *w > 0)
            .map(|(v, w)| (w, v.ranking().to_vec()))
            .collect();
        Election::from_indices(self.candidates.clone(), votes)
    }

    /// Same election with candidates declared in `order` (a permutation of
    /// candidate indices). Ballots are unchanged up to renumbering.
    pub(crate) fn reorder_candidates(&self, order: &[usize]) -> Result<Election> {
        let n = self.num_candidates();
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let names = order.iter().map(|&c| self.candidates[c].clone()).collect();
        let votes = self
            .votes
            .iter()
            .map(|v| (v.multiplicity, v.ranking().iter().map(|&c| remap[c]).collect()))
            .collect();
        Election::from_indices(names, votes)
    }

    /// Election over the same candidates with `other`'s votes appended.
    pub(crate) fn concat(&self, other: &Election) -> Result<Election> {
        if self.candidates != other.candidates {
            return Err(Error::domain("vote lists over different candidate sets"));
        }
        let votes = self
            .votes
            .iter()
            .chain(other.votes.iter())
            .map(|v| (v.multiplicity, v.ranking().to_vec()))
            .collect();
        Election::from_indices(self.candidates.clone(), votes)
    }

    pub(crate) fn multiplicities(&self) -> Vec<u64> {
        self.votes.iter().map(|v| v.multiplicity).collect()
    }

    /// Vote entry holding flattened vote index `flat`.
    pub(crate) fn entry_of(&self, flat: usize) -> usize {
        self.flat_starts.partition_point(|&s| s <= flat as u64) - 1
    }

    /// Flattened indices `first..first+multiplicity` of vote entry `v`.
    pub(crate) fn flat_range(&self, v: usize) -> std::ops::Range<usize> {
        let start = self.flat_starts[v] as usize;
        start..start + self.votes[v].multiplicity as usize
    }

    /// Per-entry weights selecting exactly the given flattened votes.
    pub(crate) fn weights_for(&self, flat: &[usize]) -> Vec<u64> {
        let mut w = vec![0u64; self.votes.len()];
        for &f in flat {
            w[self.entry_of(f)] += 1;
        }
        w
    }

    /// Bucklin winners of the subelection that keeps `weights[v]` copies of
    /// each vote entry and, when `kept` is given, only the masked candidates.
    ///
    /// Scans level by level and stops at the first level where someone
    /// reaches the threshold; runs in `O(votes * candidates)` worst case.
    pub(crate) fn winners_weighted(&self, weights: &[u64], kept: Option<&[bool]>) -> Vec<usize> {
        let n = self.num_candidates();
        let total: u64 = weights.iter().sum();
        let levels = match kept {
            Some(mask) => mask.iter().filter(|&&k| k).count(),
            None => n,
        };
        if total == 0 || levels == 0 {
            return Vec::new();
        }
        let maj = majority_threshold(total);
        let mut scores = vec![0u64; n];
        let mut cursor = vec![0usize; self.votes.len()];
        let mut reached = Vec::new();
        for level in 0..levels {
            for (v, vote) in self.votes.iter().enumerate() {
                let w = weights[v];
                if w == 0 {
                    continue;
                }
                let ranking = vote.ranking();
                let c = match kept {
                    None => ranking[level],
                    Some(mask) => {
                        let mut i = cursor[v];
                        while !mask[ranking[i]] {
                            i += 1;
                        }
                        cursor[v] = i + 1;
                        ranking[i]
                    }
                };
                let before = scores[c];
                scores[c] += w;
                if before < maj && scores[c] >= maj {
                    reached.push(c);
                }
            }
            if !reached.is_empty() {
                let best = reached.iter().map(|&c| scores[c]).max().unwrap_or(0);
                let mut winners: Vec<usize> =
                    reached.into_iter().filter(|&c| scores[c] == best).collect();
                winners.sort_unstable();
                return winners;
            }
        }
        unreachable!("every kept candidate reaches the threshold at the last level")
    }
}

/// Result of running the Bucklin rule on one election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucklinOutcome {
    candidates: Vec<CandidateId>,
    winning_level: Option<usize>,
    winners: Vec<usize>,
    // scores[c][l - 1] = level-l score of candidate c
    scores: Vec<Vec<u64>>,
}

impl BucklinOutcome {
    /// Smallest level at which some candidate reaches a strict majority;
    /// `None` only for an election without votes.
    pub fn winning_level(&self) -> Option<usize> {
        self.winning_level
    }

    pub fn winners(&self) -> Vec<&CandidateId> {
        self.winners.iter().map(|&c| &self.candidates[c]).collect()
    }

    pub fn winner_indices(&self) -> &[usize] {
        &self.winners
    }

    pub fn is_unique_winner(&self, candidate: &str) -> bool {
        self.winners.len() == 1 && self.candidates[self.winners[0]].as_str() == candidate
    }

    /// Level-`level` score of `candidate`, or `None` if either is unknown.
    pub fn score(&self, candidate: &str, level: usize) -> Option<u64> {
        let c = self.candidates.iter().position(|x| x.as_str() == candidate)?;
        if level == 0 {
            return None;
        }
        self.scores[c].get(level - 1).copied()
    }

    /// Winning-level score of the winners.
    pub fn winning_score(&self) -> Option<u64> {
        let level = self.winning_level?;
        Some(self.scores[self.winners[0]][level - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn warp_counterexample() -> Election {
        Election::build(
            &["a", "b", "c", "d"],
            &[(3, "a c b d"), (2, "b d c a"), (1, "d a c b")],
        )
        .unwrap()
    }

    fn ids(names: &[&str]) -> Vec<CandidateId> {
        names.iter().map(|n| CandidateId::new(*n).unwrap()).collect()
    }

    #[test]
    fn threshold() {
        assert_eq!(majority_threshold(6), 4);
        assert_eq!(majority_threshold(0), 1);
        assert_eq!(majority_threshold(55), 28);
    }

    #[test]
    fn level_scores_on_warp_counterexample() {
        let e = warp_counterexample();
        assert_eq!(e.level_score("a", 2).unwrap(), 4);
        let sub = e.restrict(&ids(&["a", "c", "d"])).unwrap();
        assert_eq!(sub.level_score("c", 2).unwrap(), 5);
        for c in ["a", "b", "c", "d"] {
            assert_eq!(e.level_score(c, 4).unwrap(), 6);
        }
    }

    #[test]
    fn level_score_domain_errors() {
        let e = warp_counterexample();
        assert!(matches!(e.level_score("z", 1), Err(Error::Domain(_))));
        assert!(matches!(e.level_score("a", 0), Err(Error::Domain(_))));
        assert!(matches!(e.level_score("a", 5), Err(Error::Domain(_))));
    }

    #[test]
    fn outcome_of_warp_counterexample() {
        let e = warp_counterexample();
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(2));
        assert!(out.is_unique_winner("a"));
        assert_eq!(out.winning_score(), Some(4));

        let sub = e.restrict(&ids(&["a", "c", "d"])).unwrap();
        let out = sub.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(2));
        assert!(out.is_unique_winner("c"));
    }

    #[test]
    fn single_candidate_wins() {
        let e = Election::build(&["x"], &[(1, "x")]).unwrap();
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(1));
        assert!(out.is_unique_winner("x"));
    }

    #[test]
    fn zero_votes_have_no_winner() {
        let e = Election::build(&["a", "b"], &[]).unwrap();
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), None);
        assert!(out.winners().is_empty());
        assert!(e.winners().is_empty());
    }

    #[test]
    fn empty_candidate_set_is_rejected_for_scoring() {
        let e = Election::build(&[], &[]).unwrap();
        assert!(matches!(e.outcome(), Err(Error::Domain(_))));
    }

    #[test]
    fn restriction_preserves_order() {
        let e = Election::build(&["a", "b", "c", "d"], &[(1, "a c b d")]).unwrap();
        let r = e.restrict(&ids(&["b", "c"])).unwrap();
        let expected = Election::build(&["b", "c"], &[(1, "c b")]).unwrap();
        assert_eq!(r, expected);
        assert_eq!(e.restrict(e.candidates()).unwrap(), e);
    }

    #[test]
    fn restriction_errors() {
        let e = warp_counterexample();
        assert!(matches!(e.restrict(&[]), Err(Error::Domain(_))));
        assert!(matches!(e.restrict(&ids(&["a", "q"])), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_ballots_are_rejected() {
        assert!(matches!(
            Election::build(&["a", "b"], &[(1, "a a")]),
            Err(Error::Validation { .. })
        ));
        assert!(Election::build(&["a", "b"], &[(1, "a")]).is_err());
        assert!(Election::build(&["a", "b"], &[(0, "a b")]).is_err());
        assert!(Election::build(&["a", "a"], &[]).is_err());
        assert!(CandidateId::new("a>b").is_err());
        assert!(CandidateId::new("a b").is_err());
        assert!(CandidateId::new("").is_err());
    }

    #[test]
    fn ties_at_higher_levels() {
        // b and c both reach 3 of 4 at level 2
        let e = Election::build(&["a", "b", "c"], &[(2, "b c a"), (2, "c b a")]).unwrap();
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(2));
        assert_eq!(out.winners().len(), 2);
        assert_eq!(e.winners(), ids(&["b", "c"]));
    }

    #[test]
    fn flattened_indexing() {
        let e = warp_counterexample();
        assert_eq!(e.entry_of(0), 0);
        assert_eq!(e.entry_of(2), 0);
        assert_eq!(e.entry_of(3), 1);
        assert_eq!(e.entry_of(5), 2);
        assert_eq!(e.flat_range(1), 3..5);
        assert_eq!(e.weights_for(&[0, 4, 5]), vec![1, 1, 1]);
    }

    #[test]
    fn masked_winners_match_restriction() {
        let e = warp_counterexample();
        let mask = [true, false, true, true];
        let w = e.winners_weighted(&e.multiplicities(), Some(&mask));
        assert_eq!(w, vec![2]);
    }
}
