//! Candidate-control constructions: the shared 13-type construction over a
//! Restricted Hitting Set instance and the separate CCDC construction.

use super::{cat, minus, slice, Builder, ConstructionLayout, Reduction, ReductionKind, Source};
use super::{HittingSetInstance, RestrictedHittingSetInstance};
use itertools::Itertools;
use crate::control::{Budget, ControlAction, ControlInstance, ControlKind, ControlType, Goal, TieRule};
use crate::election::{CandidateId, Election};
use crate::error::{Error, Result};

/// The 13 codes served by [`rhs_to_candidate_control`].
pub fn candidate_construction_codes() -> Vec<ControlType> {
    use ControlKind::*;
    let mut codes = Vec::new();
    for goal in [Goal::Constructive, Goal::Destructive] {
        codes.push(ControlType::new(goal, AddCandidatesUnlimited));
        codes.push(ControlType::new(goal, AddCandidatesLimited));
    }
    codes.push(ControlType::new(Goal::Destructive, DeleteCandidates));
    for goal in [Goal::Constructive, Goal::Destructive] {
        for rule in TieRule::BOTH {
            codes.push(ControlType::new(goal, PartitionCandidates(rule)));
            codes.push(ControlType::new(goal, RunoffPartitionCandidates(rule)));
        }
    }
    codes
}

/// Election over `B + {c, d, w}` with the six voter groups:
///
/// | group | votes              | ballot               |
/// |-------|--------------------|----------------------|
/// | 1     | 2m+1               | c d B w              |
/// | 2     | 2n+2k(n-1)+3       | c w d B              |
/// | 3     | 2n(k+1)+5          | w c d B              |
/// | 4     | 2(k+1) per set     | d S_i c w (B-S_i)    |
/// | 5     | 2 per element      | d b_j w c (B-{b_j})  |
/// | 6     | 2(k+1)             | d w c B              |
pub fn build_candidate_construction(instance: &RestrictedHittingSetInstance) -> Result<(Election, ConstructionLayout)> {
    let (n, m, k) = (instance.num_sets() as u64, instance.num_elements() as u64, instance.budget() as u64);
    let mut b = Builder::new();
    let big_b = b.pool("B", "b", m as usize);
    let c = b.single("c");
    let d = b.single("d");
    let w = b.single("w");
    for (label, v) in [("n", n), ("m", m), ("k", k)] {
        b.param(label.into(), v);
    }

    b.group("1", 2 * m + 1, vec![cat(&[&[c, d], &big_b, &[w]])], false);
    b.group("2", 2 * n + 2 * k * (n - 1) + 3, vec![cat(&[&[c, w, d], &big_b])], false);
    b.group("3", 2 * n * (k + 1) + 5, vec![cat(&[&[w, c, d], &big_b])], false);
    let rows = instance
        .sets()
        .iter()
        .map(|s| {
            let s: Vec<usize> = s.iter().map(|&e| big_b[e]).collect();
            cat(&[&[d], &s, &[c, w], &minus(&big_b, &s)])
        })
        .collect();
    b.group("4", 2 * (k + 1), rows, false);
    let rows = big_b
        .iter()
        .map(|&bj| cat(&[&[d, bj, w, c], &minus(&big_b, &[bj])]))
        .collect();
    b.group("5", 2, rows, false);
    b.group("6", 2 * (k + 1), vec![cat(&[&[d, w, c], &big_b])], false);

    let (election, _, layout) = b.finish()?;
    Ok((election, layout))
}

/// Wraps the construction as an instance of `code`: designated `w` when
/// constructive and `c` when destructive; `B` are the spoilers with budget
/// `k` for adding candidates, DCDC gets budget `m - k`.
pub fn rhs_to_candidate_control(instance: &RestrictedHittingSetInstance, code: ControlType) -> Result<Reduction> {
    if !candidate_construction_codes().contains(&code) {
        let supported: Vec<String> = candidate_construction_codes().iter().map(|c| c.code()).collect();
        return Err(Error::domain(format!(
            "construction does not support {code}; supported: {}",
            supported.join(", ")
        )));
    }
    let (election, layout) = build_candidate_construction(instance)?;
    let designated = if code.is_constructive() { "w" } else { "c" };
    let k = instance.budget() as u64;
    let m = instance.num_elements() as u64;
    let b_names: Vec<CandidateId> = layout.block("B").expect("B block").to_vec();
    let (spoilers, budget): (&[CandidateId], Option<Budget>) = match code.kind {
        ControlKind::AddCandidatesUnlimited => (&b_names, Some(Budget::Unlimited)),
        ControlKind::AddCandidatesLimited => (&b_names, Some(Budget::Limited(k))),
        ControlKind::DeleteCandidates => (&[], Some(Budget::Limited(m - k))),
        _ => (&[], None),
    };
    let control = ControlInstance::new(code, designated, election, spoilers, None, budget)?;
    Ok(Reduction {
        kind: ReductionKind::CandidateConstruction(code),
        instance: control,
        layout,
        source: Source::HittingSet(instance.as_hitting_set().clone()),
    })
}

fn indices_of(instance: &ControlInstance, names: impl IntoIterator<Item = String>) -> Vec<usize> {
    let mut idx: Vec<usize> = names
        .into_iter()
        .map(|n| instance.election().index_of(&n).expect("generated candidate"))
        .collect();
    idx.sort_unstable();
    idx
}

fn element_name(e: usize) -> String {
    format!("b{}", e + 1)
}

pub(super) fn candidate_construction_action(
    instance: &ControlInstance,
    hs: &HittingSetInstance,
    code: ControlType,
    chosen: &[usize],
) -> ControlAction {
    let hit = chosen.iter().map(|&e| element_name(e));
    match code.kind {
        ControlKind::AddCandidatesUnlimited | ControlKind::AddCandidatesLimited => {
            ControlAction::AddCandidates(indices_of(instance, hit))
        }
        ControlKind::DeleteCandidates => {
            let rest = (0..hs.num_elements()).filter(|e| !chosen.contains(e)).map(element_name);
            ControlAction::DeleteCandidates(indices_of(instance, rest))
        }
        _ => {
            let first = hit.chain(["c", "d", "w"].map(String::from));
            ControlAction::PartitionCandidates(indices_of(instance, first))
        }
    }
}

/// CCDC instance over `B + C' + D + E + F + {w}` with `|C'| = k+1`,
/// `|E| = n`, `|F| = n+k`, `|D| = sum of s_i = n+k-|S_i|`:
///
/// | group | votes        | ballot                                  |
/// |-------|--------------|-----------------------------------------|
/// | 1     | 1 per set    | S_i D_i w C' E (D-D_i) (B-S_i) F        |
/// | 2     | 1 per c_j    | E (C'-{c_j}) c_j B D w F                |
/// | 3     | k+1          | w F C' E B D                            |
/// | 4     | n            | C' D F B w E                            |
/// | 5     | 1            | C' w D F E B                            |
///
/// Designated `w`, budget `k`. The table needs `|S_i| <= n+k` and `n >= 2`
/// (with a single set, `w` in group 5 sits below level `n+k`); otherwise
/// copies of the first largest set are appended to `S` first (the `padding`
/// parameter), which leaves the hitting sets unchanged.
///
/// Deleting a hitting set that meets some `S_i` twice also lifts `c_1` to
/// level `n+k` in that row and ties it with `w`, so a forwarded witness
/// deletes a subset of the hitting set that meets each row once and covers
/// the remaining rows with a `D_i` candidate. When no such subset fits the
/// budget the construction can answer NO on a YES source instance, e.g.
/// `{b1,b2},{b1,b3},{b2,b3},{b1},{b2},{b3}` with `k = 3`.
pub fn hs_to_ccdc(instance: &HittingSetInstance) -> Result<Reduction> {
    let k = instance.budget();
    let (sets, padding) = padded_sets(instance);
    let n = sets.len();
    let m = instance.num_elements();
    let s: Vec<usize> = sets.iter().map(|set| n + k - set.len()).collect();

    let mut b = Builder::new();
    let big_b = b.pool("B", "b", m);
    let cp = b.pool("C'", "c", k + 1);
    let big_d = b.pool("D", "d", s.iter().sum());
    let big_e = b.pool("E", "e", n);
    let big_f = b.pool("F", "f", n + k);
    let w = b.single("w");
    for (label, v) in [("n", n), ("m", m), ("k", k), ("padding", padding), ("s", big_d.len())] {
        b.param(label.into(), v as u64);
    }

    let mut offset = 0;
    let mut rows = Vec::with_capacity(n);
    for (i, set) in sets.iter().enumerate() {
        let d_i = slice(&big_d, offset + 1, offset + s[i]);
        offset += s[i];
        let s_i: Vec<usize> = set.iter().map(|&e| big_b[e]).collect();
        b.param(format!("s_{}", i + 1), s[i] as u64);
        b.block(format!("D_{}", i + 1), &d_i);
        rows.push(cat(&[&s_i, &d_i, &[w], &cp, &big_e, &minus(&big_d, &d_i), &minus(&big_b, &s_i), &big_f]));
    }
    b.group("1", 1, rows, false);
    let rows = cp
        .iter()
        .map(|&cj| cat(&[&big_e, &minus(&cp, &[cj]), &[cj], &big_b, &big_d, &[w], &big_f]))
        .collect();
    b.group("2", 1, rows, false);
    b.group("3", (k + 1) as u64, vec![cat(&[&[w], &big_f, &cp, &big_e, &big_b, &big_d])], false);
    b.group("4", n as u64, vec![cat(&[&cp, &big_d, &big_f, &big_b, &[w], &big_e])], false);
    b.group("5", 1, vec![cat(&[&cp, &[w], &big_d, &big_f, &big_e, &big_b])], false);

    let (election, _, layout) = b.finish()?;
    let code = ControlType::new(Goal::Constructive, ControlKind::DeleteCandidates);
    let control = ControlInstance::new(code, "w", election, &[], None, Some(Budget::Limited(k as u64)))?;
    Ok(Reduction {
        kind: ReductionKind::HittingSetToCcdc,
        instance: control,
        layout,
        source: Source::HittingSet(instance.clone()),
    })
}

fn padded_sets(instance: &HittingSetInstance) -> (Vec<Vec<usize>>, usize) {
    let mut sets = instance.sets().to_vec();
    let largest = sets.iter().map(Vec::len).max().unwrap_or(0);
    let padding = largest
        .saturating_sub(sets.len() + instance.budget())
        .max(2usize.saturating_sub(sets.len()));
    if padding > 0 {
        let widest = sets.iter().find(|s| s.len() == largest).cloned().expect("non-empty");
        sets.extend(std::iter::repeat_n(widest, padding));
    }
    (sets, padding)
}

/// Deletes a subset `H` of the hitting set that hits every group-1 row at
/// most once, plus the first `D_i` candidate of each row `H` misses, so `w`
/// moves up exactly one position per row. Subsets are tried from the
/// whole hitting set down; if none fits the budget the hitting set itself
/// is returned.
pub(super) fn ccdc_action(
    instance: &ControlInstance,
    layout: &ConstructionLayout,
    hs: &HittingSetInstance,
    chosen: &[usize],
) -> ControlAction {
    let (sets, _) = padded_sets(hs);
    let fits = |sub: &[usize]| -> Option<Vec<String>> {
        let mut names: Vec<String> = sub.iter().map(|&e| element_name(e)).collect();
        for (i, set) in sets.iter().enumerate() {
            match set.iter().filter(|e| sub.contains(e)).count() {
                0 => names.push(layout.block(&format!("D_{}", i + 1))?.first()?.as_str().to_string()),
                1 => {}
                _ => return None,
            }
        }
        (names.len() <= hs.budget()).then_some(names)
    };
    let found = (0..=chosen.len())
        .rev()
        .flat_map(|size| chosen.iter().copied().combinations(size))
        .find_map(|sub| fits(&sub));
    let names = found.unwrap_or_else(|| chosen.iter().map(|&e| element_name(e)).collect());
    ControlAction::DeleteCandidates(indices_of(instance, names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{solve_hitting_set, HittingSetInstance};
    use crate::solvers::decide_brute_force;

    fn rhs(elements: &[&str], sets: &[&[&str]], k: usize) -> RestrictedHittingSetInstance {
        RestrictedHittingSetInstance::new(HittingSetInstance::from_names(elements, sets, k).unwrap()).unwrap()
    }

    fn small_yes() -> RestrictedHittingSetInstance {
        rhs(&["x", "y"], &[&["x"], &["x", "y"], &["x"]], 1)
    }

    fn small_no() -> RestrictedHittingSetInstance {
        rhs(&["x", "y"], &[&["x"], &["y"], &["x", "y"]], 1)
    }

    #[test]
    fn candidate_construction_counts_and_scores() {
        let inst = small_yes();
        let (e, layout) = build_candidate_construction(&inst).unwrap();
        assert_eq!(e.num_votes(), 55);
        let counts: Vec<u64> = layout.groups.iter().map(|g| g.count()).collect();
        assert_eq!(counts, vec![5, 13, 17, 12, 4, 4]);
        assert_eq!(layout.group("4").unwrap().per_row, 4);
        let core = e.restrict(&["c", "d", "w"].map(|n| CandidateId::new(n).unwrap())).unwrap();
        assert_eq!(core.level_score("c", 2).unwrap(), 47);
        assert_eq!(core.level_score("d", 2).unwrap(), 25);
        assert_eq!(core.level_score("w", 2).unwrap(), 38);
        let out = core.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(2));
        assert!(out.is_unique_winner("c"));
    }

    #[test]
    fn generated_candidates_are_renamed() {
        let (e, _) = build_candidate_construction(&small_yes()).unwrap();
        let names: Vec<&str> = e.candidates().iter().map(|c| c.as_str()).collect();
        assert_eq!(names, vec!["b1", "b2", "c", "d", "w"]);
        // group 4, first set {x}: d b1 c w b2
        assert_eq!(e.votes()[3].ranking(), &[3, 0, 2, 4, 1]);
    }

    #[test]
    fn thirteen_codes_and_rejections() {
        assert_eq!(candidate_construction_codes().len(), 13);
        for bad in ["CCDC", "CCAV", "DCPV-TE"] {
            assert!(matches!(rhs_to_candidate_control(&small_yes(), bad.parse().unwrap()), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn candidate_construction_equivalence_on_two_instances() {
        for (inst, yes) in [(small_yes(), true), (small_no(), false)] {
            assert_eq!(solve_hitting_set(&inst).unwrap().is_some(), yes);
            for code in candidate_construction_codes() {
                let red = rhs_to_candidate_control(&inst, code).unwrap();
                let d = decide_brute_force(red.instance()).unwrap();
                assert_eq!(d.is_yes(), yes, "{code}");
                if yes {
                    let action = red.forward_witness(&[0]).unwrap();
                    let winners = red.instance().apply_action(&action).unwrap();
                    assert!(red.instance().goal_met(&winners), "{code}");
                }
            }
        }
    }

    #[test]
    fn wrap_parameters() {
        let inst = small_yes();
        let red = rhs_to_candidate_control(&inst, "DCDC".parse().unwrap()).unwrap();
        assert_eq!(red.instance().budget(), Some(Budget::Limited(1)));
        assert_eq!(red.instance().designated().as_str(), "c");
        let red = rhs_to_candidate_control(&inst, "CCAC-U".parse().unwrap()).unwrap();
        assert_eq!(red.instance().budget(), Some(Budget::Unlimited));
        assert_eq!(red.instance().spoilers().len(), 2);
        assert_eq!(red.instance().designated().as_str(), "w");
        let red = rhs_to_candidate_control(&inst, "CCRPC-TP".parse().unwrap()).unwrap();
        assert_eq!(red.instance().budget(), None);
        let action = red.forward_witness(&[0]).unwrap();
        assert_eq!(action.describe(red.instance()), "partition-candidates C1={b1,c,d,w}");
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let red = rhs_to_candidate_control(&small_yes(), "CCAC-L".parse().unwrap()).unwrap();
        assert!(red.forward_witness(&[1]).is_err());
        assert!(red.forward_witness(&[0, 1]).is_err());
    }

    fn ccdc_example() -> HittingSetInstance {
        HittingSetInstance::from_names(&["b1", "b2", "b3"], &[&["b1", "b2"], &["b2", "b3"]], 1).unwrap()
    }

    #[test]
    fn ccdc_example_shape() {
        let red = hs_to_ccdc(&ccdc_example()).unwrap();
        let e = red.instance().election();
        assert_eq!(e.num_votes(), 9);
        assert_eq!(red.layout().param("s"), Some(2));
        assert_eq!(red.layout().block("D_1").unwrap().len(), 1);
        assert_eq!(e.num_candidates(), 3 + 2 + 2 + 2 + 3 + 1);
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(4));
        assert!(out.winner_indices().len() >= 2);
        let w = e.index_of("w").unwrap();
        assert!(out.winner_indices().contains(&w));
    }

    #[test]
    fn ccdc_example_witness() {
        let red = hs_to_ccdc(&ccdc_example()).unwrap();
        let action = red.forward_witness(&[1]).unwrap();
        assert_eq!(action, ControlAction::DeleteCandidates(vec![1]));
        let inst = red.instance();
        let kept: Vec<CandidateId> = inst
            .election()
            .candidates()
            .iter()
            .filter(|c| c.as_str() != "b2")
            .cloned()
            .collect();
        let out = inst.election().restrict(&kept).unwrap().outcome().unwrap();
        assert_eq!(out.winning_level(), Some(3));
        assert!(out.is_unique_winner("w"));
        assert!(decide_brute_force(inst).unwrap().is_yes());
    }

    #[test]
    fn ccdc_pads_oversized_sets() {
        let inst = HittingSetInstance::from_names(&["b1", "b2", "b3"], &[&["b1", "b2", "b3"]], 1).unwrap();
        let red = hs_to_ccdc(&inst).unwrap();
        assert_eq!(red.layout().param("padding"), Some(1));
        assert_eq!(red.layout().param("n"), Some(2));
        assert_eq!(red.instance().election().num_votes(), 2 * (2 + 1 + 1) + 1);
        assert!(decide_brute_force(red.instance()).unwrap().is_yes());
    }

    #[test]
    fn ccdc_single_set_is_duplicated() {
        let inst = HittingSetInstance::from_names(&["b1", "b2"], &[&["b1"]], 1).unwrap();
        let red = hs_to_ccdc(&inst).unwrap();
        assert_eq!(red.layout().param("n"), Some(2));
        assert!(decide_brute_force(red.instance()).unwrap().is_yes());
        let action = red.forward_witness(&[0]).unwrap();
        assert!(crate::control::Evaluator::new(red.instance()).goal_met(&action));
    }

    #[test]
    fn ccdc_double_hit_uses_d_candidate() {
        let inst = HittingSetInstance::from_names(&["b1", "b2"], &[&["b1", "b2"], &["b2"], &["b1"]], 2).unwrap();
        let red = hs_to_ccdc(&inst).unwrap();
        let action = red.forward_witness(&[0, 1]).unwrap();
        assert_eq!(action.describe(red.instance()), "delete-candidates {b1,d4}");
        assert!(crate::control::Evaluator::new(red.instance()).goal_met(&action));
        let naive = ControlAction::DeleteCandidates(indices_of(red.instance(), ["b1".into(), "b2".into()]));
        assert!(!crate::control::Evaluator::new(red.instance()).goal_met(&naive));
    }

    #[test]
    fn ccdc_no_on_yes_source() {
        let sets: &[&[&str]] = &[&["b1", "b2"], &["b1", "b3"], &["b2", "b3"], &["b1"], &["b2"], &["b3"]];
        let inst = HittingSetInstance::from_names(&["b1", "b2", "b3"], sets, 3).unwrap();
        assert!(solve_hitting_set(&inst).unwrap().is_some());
        let red = hs_to_ccdc(&inst).unwrap();
        assert!(!decide_brute_force(red.instance()).unwrap().is_yes());
    }
}
