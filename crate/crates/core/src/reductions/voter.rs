//! Voter-control constructions from X3C: adding voters, deleting voters and
//! partition of voters.

use super::{cat, minus, slice, Builder, ConstructionLayout, Reduction, ReductionKind, Source, X3CInstance};
use crate::control::{Budget, ControlAction, ControlInstance, ControlKind, ControlType, Goal, TieRule};
use crate::error::{Error, Result};

fn require_m(instance: &X3CInstance) -> Result<usize> {
    let m = instance.m();
    if m < 2 {
        return Err(Error::domain(format!("construction needs m >= 2, got m = {m}")));
    }
    Ok(m)
}

fn set_members(instance: &X3CInstance, big_b: &[usize], i: usize) -> Vec<usize> {
    instance.sets()[i].iter().map(|&e| big_b[e]).collect()
}

/// `B_i = { b_j : i <= n - l_j }` (1-based `i`), where `l_j` counts the
/// sets containing `b_j`.
fn padding_blocks(b: &mut Builder, instance: &X3CInstance, big_b: &[usize]) -> Vec<Vec<usize>> {
    let n = instance.num_sets();
    let mut occurs = vec![0usize; big_b.len()];
    for set in instance.sets() {
        for &e in set {
            occurs[e] += 1;
        }
    }
    for (j, &l) in occurs.iter().enumerate() {
        b.param(format!("l_{}", j + 1), l as u64);
    }
    (1..=n)
        .map(|i| {
            let bi: Vec<usize> = (0..big_b.len()).filter(|&j| i + occurs[j] <= n).map(|j| big_b[j]).collect();
            b.block(format!("B_{i}"), &bi);
            bi
        })
        .collect()
}

fn reduction(
    kind: ReductionKind,
    control: ControlInstance,
    layout: ConstructionLayout,
    instance: &X3CInstance,
) -> Reduction {
    Reduction {
        kind,
        instance: control,
        layout,
        source: Source::X3c(instance.clone()),
    }
}

/// CCAV instance over `B + D + {w}` with `|D| = n(3m-4)`: `m-2` registered
/// votes `B D w` and one unregistered vote `D_i S_i w (D-D_i) (B-S_i)` per
/// set, `D_i` the i-th block of width `3m-4`. Designated `w`, budget `m`.
pub fn x3c_to_ccav(instance: &X3CInstance) -> Result<Reduction> {
    let m = require_m(instance)?;
    let n = instance.num_sets();
    let width = 3 * m - 4;
    let mut b = Builder::new();
    let big_b = b.pool("B", "b", 3 * m);
    let big_d = b.pool("D", "d", n * width);
    let w = b.single("w");
    b.param("n".into(), n as u64);
    b.param("m".into(), m as u64);

    b.group("registered", (m - 2) as u64, vec![cat(&[&big_b, &big_d, &[w]])], false);
    let rows = (0..n)
        .map(|i| {
            let d_i = slice(&big_d, i * width + 1, (i + 1) * width);
            b.block(format!("D_{}", i + 1), &d_i);
            let s_i = set_members(instance, &big_b, i);
            cat(&[&d_i, &s_i, &[w], &minus(&big_d, &d_i), &minus(&big_b, &s_i)])
        })
        .collect();
    b.group("unregistered", 1, rows, true);

    let (election, pool, layout) = b.finish()?;
    let code = ControlType::new(Goal::Constructive, ControlKind::AddVoters);
    let control = ControlInstance::new(code, "w", election, &[], pool, Some(Budget::Limited(m as u64)))?;
    Ok(reduction(ReductionKind::X3cToCcav, control, layout, instance))
}

/// CCDV instance over `B + D + F + G + {c, w}` with `|D| = 3nm`,
/// `|F| = 3n(m-1)`, `|G| = 3m(m-1)`:
///
/// | group | votes       | ballot                                |
/// |-------|-------------|---------------------------------------|
/// | 1     | 1 per set   | S_i c F_i D (B-S_i) G (F-F_i) w       |
/// | 2     | 1 per set   | B_i D_i w F (D-D_i) (B-B_i) G c       |
/// | 3     | 1 per G_k   | c G_k F D (G-G_k) B w                 |
///
/// `D_i` runs from `d_{(i-1)3m+1}` to `d_{3im-|B_i|}`, `F_i` and `G_k` are
/// consecutive blocks of widths `3m-3` and `3m`. Designated `w`, budget `m`.
pub fn x3c_to_ccdv(instance: &X3CInstance) -> Result<Reduction> {
    let m = require_m(instance)?;
    let n = instance.num_sets();
    let mut b = Builder::new();
    let big_b = b.pool("B", "b", 3 * m);
    let big_d = b.pool("D", "d", 3 * n * m);
    let big_f = b.pool("F", "f", 3 * n * (m - 1));
    let big_g = b.pool("G", "g", 3 * m * (m - 1));
    let c = b.single("c");
    let w = b.single("w");
    b.param("n".into(), n as u64);
    b.param("m".into(), m as u64);
    let bis = padding_blocks(&mut b, instance, &big_b);

    let f_blocks: Vec<Vec<usize>> = (0..n)
        .map(|i| slice(&big_f, i * (3 * m - 3) + 1, (i + 1) * (3 * m - 3)))
        .collect();
    let rows = (0..n)
        .map(|i| {
            let s_i = set_members(instance, &big_b, i);
            let f_i = &f_blocks[i];
            b.block(format!("F_{}", i + 1), f_i);
            cat(&[&s_i, &[c], f_i, &big_d, &minus(&big_b, &s_i), &big_g, &minus(&big_f, f_i), &[w]])
        })
        .collect();
    b.group("1", 1, rows, false);
    let rows = (0..n)
        .map(|i| {
            let bi = &bis[i];
            let d_i = slice(&big_d, i * 3 * m + 1, (i + 1) * 3 * m - bi.len());
            b.block(format!("D_{}", i + 1), &d_i);
            cat(&[bi, &d_i, &[w], &big_f, &minus(&big_d, &d_i), &minus(&big_b, bi), &big_g, &[c]])
        })
        .collect();
    b.group("2", 1, rows, false);
    let rows = (0..m - 1)
        .map(|k| {
            let g_k = slice(&big_g, k * 3 * m + 1, (k + 1) * 3 * m);
            b.block(format!("G_{}", k + 1), &g_k);
            cat(&[&[c], &g_k, &big_f, &big_d, &minus(&big_g, &g_k), &big_b, &[w]])
        })
        .collect();
    b.group("3", 1, rows, false);

    let (election, _, layout) = b.finish()?;
    let code = ControlType::new(Goal::Constructive, ControlKind::DeleteVoters);
    let control = ControlInstance::new(code, "w", election, &[], None, Some(Budget::Limited(m as u64)))?;
    Ok(reduction(ReductionKind::X3cToCcdv, control, layout, instance))
}

/// CCPV instance under `rule` over `B + D + E + F + G + {c, w, x}` with
/// `|D| = 3nm`, `|E| = (3m-1)(m+1)`, `|F| = (3m+1)(m-1)`, `|G| = n(3m-3)`:
///
/// | group | votes       | ballot                                      |
/// |-------|-------------|---------------------------------------------|
/// | 1     | 1 per set   | c S_i G_i (G-G_i) F D E (B-S_i) w x         |
/// | 2     | 1 per set   | B_i D_i w G E (D-D_i) F (B-B_i) c x         |
/// | 3     | 1 per E_k   | x c E_k F (E-E_k) G D B w                   |
/// | 4     | 1 per F_l   | F_l c (F-F_l) G D E B w x                   |
///
/// Designated `w`.
pub fn x3c_to_ccpv(instance: &X3CInstance, rule: TieRule) -> Result<Reduction> {
    let m = require_m(instance)?;
    let n = instance.num_sets();
    let mut b = Builder::new();
    let big_b = b.pool("B", "b", 3 * m);
    let big_d = b.pool("D", "d", 3 * n * m);
    let big_e = b.pool("E", "e", (3 * m - 1) * (m + 1));
    let big_f = b.pool("F", "f", (3 * m + 1) * (m - 1));
    let big_g = b.pool("G", "g", n * (3 * m - 3));
    let c = b.single("c");
    let w = b.single("w");
    let x = b.single("x");
    b.param("n".into(), n as u64);
    b.param("m".into(), m as u64);
    let bis = padding_blocks(&mut b, instance, &big_b);

    let rows = (0..n)
        .map(|i| {
            let s_i = set_members(instance, &big_b, i);
            let g_i = slice(&big_g, i * (3 * m - 3) + 1, (i + 1) * (3 * m - 3));
            b.block(format!("G_{}", i + 1), &g_i);
            cat(&[
                &[c],
                &s_i,
                &g_i,
                &minus(&big_g, &g_i),
                &big_f,
                &big_d,
                &big_e,
                &minus(&big_b, &s_i),
                &[w, x],
            ])
        })
        .collect();
    b.group("1", 1, rows, false);
    let rows = (0..n)
        .map(|i| {
            let bi = &bis[i];
            let d_i = slice(&big_d, i * 3 * m + 1, (i + 1) * 3 * m - bi.len());
            b.block(format!("D_{}", i + 1), &d_i);
            cat(&[bi, &d_i, &[w], &big_g, &big_e, &minus(&big_d, &d_i), &big_f, &minus(&big_b, bi), &[c, x]])
        })
        .collect();
    b.group("2", 1, rows, false);
    let rows = (0..m + 1)
        .map(|k| {
            let e_k = slice(&big_e, k * (3 * m - 1) + 1, (k + 1) * (3 * m - 1));
            b.block(format!("E_{}", k + 1), &e_k);
            cat(&[&[x, c], &e_k, &big_f, &minus(&big_e, &e_k), &big_g, &big_d, &big_b, &[w]])
        })
        .collect();
    b.group("3", 1, rows, false);
    let rows = (0..m - 1)
        .map(|l| {
            let f_l = slice(&big_f, l * (3 * m + 1) + 1, (l + 1) * (3 * m + 1));
            b.block(format!("F_{}", l + 1), &f_l);
            cat(&[&f_l, &[c], &minus(&big_f, &f_l), &big_g, &big_d, &big_e, &big_b, &[w, x]])
        })
        .collect();
    b.group("4", 1, rows, false);

    let (election, _, layout) = b.finish()?;
    let code = ControlType::new(Goal::Constructive, ControlKind::PartitionVoters(rule));
    let control = ControlInstance::new(code, "w", election, &[], None, None)?;
    Ok(reduction(ReductionKind::X3cToCcpv(code), control, layout, instance))
}

pub(super) fn cover_action(kind: ReductionKind, layout: &ConstructionLayout, cover: &[usize]) -> ControlAction {
    let rows = |label: &str| -> Vec<usize> {
        let g = layout.group(label).expect("generated group");
        cover.iter().flat_map(|&i| g.row(i)).collect()
    };
    match kind {
        ReductionKind::X3cToCcav => ControlAction::AddVoters(rows("unregistered")),
        ReductionKind::X3cToCcdv => ControlAction::DeleteVoters(rows("1")),
        ReductionKind::X3cToCcpv(_) => {
            let mut v1 = rows("1");
            v1.extend(layout.group("3").expect("generated group").votes());
            ControlAction::PartitionVoters(v1)
        }
        _ => unreachable!("x3c source with hitting-set kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::CandidateId;
    use crate::reductions::solve_x3c;
    use crate::solvers::decide_brute_force;

    const SIX: [&str; 6] = ["b1", "b2", "b3", "b4", "b5", "b6"];

    fn yes() -> X3CInstance {
        X3CInstance::from_names(&SIX, &[&["b1", "b2", "b3"], &["b4", "b5", "b6"], &["b2", "b3", "b4"]]).unwrap()
    }

    fn no() -> X3CInstance {
        X3CInstance::from_names(&SIX, &[&["b1", "b2", "b3"], &["b2", "b3", "b4"]]).unwrap()
    }

    fn check(red: &Reduction, expect: bool) {
        let d = decide_brute_force(red.instance()).unwrap();
        assert_eq!(d.is_yes(), expect);
        if let Some(w) = d.witness {
            assert!(red.instance().goal_met(&red.instance().apply_action(&w).unwrap()));
        }
    }

    #[test]
    fn m_one_is_rejected() {
        let one = X3CInstance::from_names(&["b1", "b2", "b3"], &[&["b1", "b2", "b3"]]).unwrap();
        assert!(matches!(x3c_to_ccav(&one), Err(Error::Domain(_))));
        assert!(matches!(x3c_to_ccdv(&one), Err(Error::Domain(_))));
        assert!(matches!(x3c_to_ccpv(&one, TieRule::TiesEliminate), Err(Error::Domain(_))));
    }

    #[test]
    fn add_voters_example() {
        let red = x3c_to_ccav(&yes()).unwrap();
        let inst = red.instance();
        assert_eq!(inst.election().num_votes(), 0);
        assert_eq!(inst.unregistered().unwrap().num_votes(), 3);
        let d = decide_brute_force(inst).unwrap();
        assert!(d.is_yes());
        assert_eq!(d.witness, Some(ControlAction::AddVoters(vec![0, 1])));
        let action = red.forward_witness(&solve_x3c(&yes()).unwrap().unwrap()).unwrap();
        assert_eq!(action, ControlAction::AddVoters(vec![0, 1]));
        check(&x3c_to_ccav(&no()).unwrap(), false);
        let dropped = X3CInstance::from_names(&SIX, &[&["b1", "b2", "b3"], &["b2", "b3", "b4"]]).unwrap();
        check(&x3c_to_ccav(&dropped).unwrap(), false);
    }

    #[test]
    fn add_voters_scores_after_cover() {
        let red = x3c_to_ccav(&yes()).unwrap();
        let inst = red.instance();
        let pool = inst.unregistered().unwrap();
        let added: Vec<(u64, Vec<CandidateId>)> = [0usize, 1]
            .iter()
            .map(|&v| (1, pool.votes()[v].ranking().iter().map(|&c| pool.candidate(c).clone()).collect()))
            .collect();
        let e = crate::election::Election::new(pool.candidates().to_vec(), added).unwrap();
        assert_eq!(e.level_score("w", 7).unwrap(), 2);
        for j in 1..=6 {
            assert_eq!(e.level_score(&format!("b{j}"), 7).unwrap(), 1);
        }
        assert!(e.outcome().unwrap().is_unique_winner("w"));
    }

    #[test]
    fn delete_voters_shape() {
        let red = x3c_to_ccdv(&yes()).unwrap();
        let e = red.instance().election();
        // 2n + m - 1 voters
        assert_eq!(e.num_votes(), 7);
        assert_eq!(e.num_candidates(), 41);
        let out = e.outcome().unwrap();
        assert_eq!(out.winning_level(), Some(4));
        assert!(out.is_unique_winner("c"));
        let action = red.forward_witness(&[0, 1]).unwrap();
        assert_eq!(action, ControlAction::DeleteVoters(vec![0, 1]));
        assert!(red.instance().goal_met(&red.instance().apply_action(&action).unwrap()));
    }

    #[test]
    fn delete_voters_blocks_partition_pools() {
        let red = x3c_to_ccdv(&yes()).unwrap();
        let l = red.layout();
        // occurrences per element: 1, 2, 2, 2, 1, 1
        assert_eq!(l.param("l_2"), Some(2));
        assert_eq!(l.block("B_1").unwrap().len(), 6);
        assert_eq!(l.block("B_2").unwrap().len(), 3);
        assert_eq!(l.block("B_3").unwrap().len(), 0);
        assert!(l.block("D_1").unwrap().is_empty());
        assert_eq!(l.block("D_3").unwrap().len(), 6);
        assert_eq!(l.block("F_1").unwrap().len(), 3);
        assert_eq!(l.block("G_1").unwrap().len(), 6);
    }

    #[test]
    fn delete_voters_equivalence() {
        check(&x3c_to_ccdv(&yes()).unwrap(), true);
        check(&x3c_to_ccdv(&no()).unwrap(), false);
    }

    #[test]
    fn partition_voters_shape_and_witness() {
        for rule in TieRule::BOTH {
            let red = x3c_to_ccpv(&yes(), rule).unwrap();
            let e = red.instance().election();
            assert_eq!(e.num_votes(), 10);
            assert_eq!(e.num_candidates(), 58);
            let out = e.outcome().unwrap();
            assert_eq!(out.winning_level(), Some(2));
            assert!(out.is_unique_winner("c"));
            assert_eq!(out.winning_score(), Some(6));
            let action = red.forward_witness(&[0, 1]).unwrap();
            assert_eq!(action, ControlAction::PartitionVoters(vec![0, 1, 6, 7, 8]));
            assert!(red.instance().goal_met(&red.instance().apply_action(&action).unwrap()));
        }
    }

    #[test]
    fn partition_voters_equivalence() {
        for rule in TieRule::BOTH {
            check(&x3c_to_ccpv(&yes(), rule).unwrap(), true);
            check(&x3c_to_ccpv(&no(), rule).unwrap(), false);
        }
    }

    #[test]
    fn non_cover_is_rejected() {
        let red = x3c_to_ccdv(&yes()).unwrap();
        assert!(red.forward_witness(&[0, 2]).is_err());
        assert!(red.forward_witness(&[0]).is_err());
    }
}
