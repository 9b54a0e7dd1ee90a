//! Hardness constructions: each maps a Hitting Set or X3C instance to a
//! control instance with the same answer, together with a layout describing
//! the generated voter groups and candidate blocks.
//!
//! Set placeholders inside a ballot are expanded in the election's candidate
//! order: `B` by index, then the letter pools (`C'`, `D`, `E`, `F`, `G`) by
//! index, then the singletons `c`, `d`, `w`, `x`.

mod candidate;
mod source;
mod voter;

use std::ops::Range;

pub use candidate::{build_candidate_construction, candidate_construction_codes, hs_to_ccdc, rhs_to_candidate_control};
pub use source::{
    hs_to_rhs, solve_hitting_set, solve_hitting_set_with_cap, solve_x3c, solve_x3c_with_cap, HittingSetInstance,
    RestrictedConversion, RestrictedHittingSetInstance, X3CInstance, DEFAULT_ELEMENT_CAP, DEFAULT_SET_CAP,
};
pub use voter::{x3c_to_ccav, x3c_to_ccdv, x3c_to_ccpv};

use crate::control::{ControlAction, ControlInstance, ControlType};
use crate::election::{CandidateId, Election};
use crate::error::Result;

/// A row family of a construction table: `rows` distinct ballots, each
/// cast by `per_row` voters. Flattened vote indices are contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterGroup {
    pub label: String,
    pub first: usize,
    pub rows: usize,
    pub per_row: u64,
    /// Votes live in the unregistered pool rather than the election.
    pub unregistered: bool,
}

impl VoterGroup {
    pub fn count(&self) -> u64 {
        self.rows as u64 * self.per_row
    }

    /// Flattened vote indices of the whole group.
    pub fn votes(&self) -> Range<usize> {
        self.first..self.first + self.count() as usize
    }

    /// Flattened vote indices of row `r` (0-based).
    pub fn row(&self, r: usize) -> Range<usize> {
        let start = self.first + r * self.per_row as usize;
        start..start + self.per_row as usize
    }
}

/// Voter groups, named candidate blocks and derived parameters of a
/// generated election.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionLayout {
    pub groups: Vec<VoterGroup>,
    pub blocks: Vec<(String, Vec<CandidateId>)>,
    pub params: Vec<(String, u64)>,
}

impl ConstructionLayout {
    pub fn group(&self, label: &str) -> Option<&VoterGroup> {
        self.groups.iter().find(|g| g.label == label)
    }

    pub fn block(&self, label: &str) -> Option<&[CandidateId]> {
        self.blocks.iter().find(|(l, _)| l == label).map(|(_, b)| b.as_slice())
    }

    pub fn param(&self, label: &str) -> Option<u64> {
        self.params.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    /// Votes in the registered election.
    pub fn registered_votes(&self) -> u64 {
        self.groups.iter().filter(|g| !g.unregistered).map(VoterGroup::count).sum()
    }

    /// Votes across registered and unregistered groups.
    pub fn total_votes(&self) -> u64 {
        self.groups.iter().map(VoterGroup::count).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    /// Restricted Hitting Set to one of the 13 candidate-control types.
    CandidateConstruction(ControlType),
    /// Hitting Set to CCDC.
    HittingSetToCcdc,
    /// X3C to CCAV.
    X3cToCcav,
    /// X3C to CCDV.
    X3cToCcdv,
    /// X3C to CCPV under the type's tie rule.
    X3cToCcpv(ControlType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    HittingSet(HittingSetInstance),
    X3c(X3CInstance),
}

/// A generated control instance with the data needed to transport source
/// witnesses onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    kind: ReductionKind,
    instance: ControlInstance,
    layout: ConstructionLayout,
    source: Source,
}

impl Reduction {
    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    pub fn instance(&self) -> &ControlInstance {
        &self.instance
    }

    pub fn into_instance(self) -> ControlInstance {
        self.instance
    }

    pub fn layout(&self) -> &ConstructionLayout {
        &self.layout
    }

    /// Maps a source witness to the control action of the matching proof.
    ///
    /// For Hitting Set sources `witness` lists element indices of a hitting
    /// set of size at most `k`. The shared candidate construction pads it to
    /// exactly `k` elements first; for the deleting-candidates construction
    /// see the notes on [`hs_to_ccdc`].
    /// For X3C sources it lists the (0-based) set indices of an exact cover.
    pub fn forward_witness(&self, witness: &[usize]) -> Result<ControlAction> {
        match (&self.source, self.kind) {
            (Source::HittingSet(hs), ReductionKind::CandidateConstruction(code)) => {
                let chosen = hs.pad_witness(&hs.check_witness(witness)?);
                Ok(candidate::candidate_construction_action(&self.instance, hs, code, &chosen))
            }
            (Source::HittingSet(hs), ReductionKind::HittingSetToCcdc) => {
                let chosen = hs.check_witness(witness)?;
                Ok(candidate::ccdc_action(&self.instance, &self.layout, hs, &chosen))
            }
            (Source::X3c(x), kind) => {
                let cover = x.check_witness(witness)?;
                Ok(voter::cover_action(kind, &self.layout, &cover))
            }
            (Source::HittingSet(_), _) => unreachable!("hitting-set source with x3c kind"),
        }
    }
}

/// Accumulates candidates and table rows for a construction.
struct Builder {
    names: Vec<CandidateId>,
    blocks: Vec<(String, Vec<usize>)>,
    params: Vec<(String, u64)>,
    registered: Vec<(u64, Vec<usize>)>,
    unregistered: Vec<(u64, Vec<usize>)>,
    groups: Vec<VoterGroup>,
    flat: [usize; 2],
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            blocks: Vec::new(),
            params: Vec::new(),
            registered: Vec::new(),
            unregistered: Vec::new(),
            groups: Vec::new(),
            flat: [0, 0],
        }
    }

    /// Adds candidates `{prefix}1..{prefix}len` and records them as a block.
    fn pool(&mut self, label: &str, prefix: &str, len: usize) -> Vec<usize> {
        let start = self.names.len();
        for i in 1..=len {
            self.names.push(CandidateId::new(format!("{prefix}{i}")).expect("valid token"));
        }
        let idx: Vec<usize> = (start..start + len).collect();
        self.blocks.push((label.to_string(), idx.clone()));
        idx
    }

    fn single(&mut self, name: &str) -> usize {
        self.names.push(CandidateId::new(name).expect("valid token"));
        self.names.len() - 1
    }

    fn block(&mut self, label: String, members: &[usize]) {
        self.blocks.push((label, members.to_vec()));
    }

    fn param(&mut self, label: String, value: u64) {
        self.params.push((label, value));
    }

    fn group(&mut self, label: &str, per_row: u64, rows: Vec<Vec<usize>>, unregistered: bool) {
        let slot = usize::from(unregistered);
        let count = rows.len();
        if per_row > 0 {
            let target = if unregistered { &mut self.unregistered } else { &mut self.registered };
            target.extend(rows.into_iter().map(|r| (per_row, r)));
        }
        self.groups.push(VoterGroup {
            label: label.to_string(),
            first: self.flat[slot],
            rows: if per_row > 0 { count } else { 0 },
            per_row,
            unregistered,
        });
        self.flat[slot] += if per_row > 0 { count * per_row as usize } else { 0 };
    }

    fn layout(&self) -> ConstructionLayout {
        ConstructionLayout {
            groups: self.groups.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(l, idx)| (l.clone(), idx.iter().map(|&i| self.names[i].clone()).collect()))
                .collect(),
            params: self.params.clone(),
        }
    }

    fn finish(self) -> Result<(Election, Option<Election>, ConstructionLayout)> {
        let layout = self.layout();
        let registered = Election::from_indices(self.names.clone(), self.registered)?;
        let pool = if self.groups.iter().any(|g| g.unregistered) {
            Some(Election::from_indices(self.names, self.unregistered)?)
        } else {
            None
        };
        Ok((registered, pool, layout))
    }
}

/// Concatenates ballot segments.
fn cat(parts: &[&[usize]]) -> Vec<usize> {
    parts.concat()
}

/// `a` without the members of `b`, order kept.
fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

/// Members of `pool` at 1-based positions `from..=to` (empty when `to < from`).
fn slice(pool: &[usize], from: usize, to: usize) -> Vec<usize> {
    if to < from {
        return Vec::new();
    }
    pool[from - 1..to].to_vec()
}
