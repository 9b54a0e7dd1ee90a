use bucklin_control::control::{Budget, ControlInstance, ControlKind, ControlType, Evaluator, Goal};
use bucklin_control::election::{CandidateId, Election};
use bucklin_control::gen::candidate_names;
use bucklin_control::io::{parse_control_instance, parse_election, serialize_control_instance, serialize_election};
use bucklin_control::solvers::{decide_brute_force, decide_dc_add_voters_poly, decide_dc_delete_voters_poly};
use bucklin_control::{majority_threshold, promote, TieRule};
use proptest::prelude::*;

fn ballots(nc: usize, max_votes: usize) -> impl Strategy<Value = Vec<(u64, Vec<usize>)>> {
    prop::collection::vec((1u64..=3, Just((0..nc).collect::<Vec<_>>()).prop_shuffle()), 0..=max_votes)
}

fn election(max_c: usize, max_votes: usize) -> impl Strategy<Value = Election> {
    (1..=max_c).prop_flat_map(move |nc| {
        ballots(nc, max_votes).prop_map(move |v| Election::from_indices(candidate_names(nc), v).unwrap())
    })
}

fn budget_type() -> impl Strategy<Value = ControlType> {
    prop::sample::select(vec!["CCAV", "DCAV", "CCDV", "DCDV", "CCDC", "DCDC", "CCAC-L", "DCAC-L"])
        .prop_map(|c| c.parse::<ControlType>().unwrap())
}

/// A control instance of a budgeted type: for adding candidates the last
/// candidate is a spoiler, for adding voters a second election is the pool.
fn budget_instance() -> impl Strategy<Value = ControlInstance> {
    (budget_type(), 2usize..=4).prop_flat_map(|(code, nc)| {
        (ballots(nc, 5), ballots(nc, 3), 0..nc - usize::from(code.adds_candidates()), 0u64..=2).prop_map(
            move |(votes, pool, d, k)| {
                let names = candidate_names(nc);
                let e = Election::from_indices(names.clone(), votes).unwrap();
                let spoilers = if code.adds_candidates() { vec![names[nc - 1].clone()] } else { vec![] };
                let pool = code.adds_voters().then(|| Election::from_indices(names.clone(), pool).unwrap());
                ControlInstance::new(code, names[d].as_str(), e, &spoilers, pool, Some(Budget::Limited(k))).unwrap()
            },
        )
    })
}

fn with_budget(inst: &ControlInstance, k: u64) -> ControlInstance {
    ControlInstance::new(
        inst.control(),
        inst.designated().as_str(),
        inst.election().clone(),
        inst.spoilers(),
        inst.unregistered().cloned(),
        Some(Budget::Limited(k)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scores_are_monotone_and_sum_to_level_times_votes(e in election(5, 8)) {
        let n = e.num_votes();
        for level in 1..=e.num_candidates() {
            let mut sum = 0;
            for c in e.candidates() {
                let s = e.level_score(c.as_str(), level).unwrap();
                sum += s;
                if level > 1 {
                    prop_assert!(e.level_score(c.as_str(), level - 1).unwrap() <= s);
                }
            }
            prop_assert_eq!(sum, level as u64 * n);
        }
    }

    #[test]
    fn winners_have_the_top_score_at_the_first_majority_level(e in election(5, 8)) {
        let out = e.outcome().unwrap();
        let maj = majority_threshold(e.num_votes());
        match out.winning_level() {
            None => prop_assert_eq!(e.num_votes(), 0),
            Some(level) => {
                let scores: Vec<u64> = e.candidates().iter().map(|c| e.level_score(c.as_str(), level).unwrap()).collect();
                let best = *scores.iter().max().unwrap();
                prop_assert!(best >= maj);
                for c in e.candidates() {
                    if level > 1 {
                        prop_assert!(e.level_score(c.as_str(), level - 1).unwrap() < maj);
                    }
                    let s = e.level_score(c.as_str(), level).unwrap();
                    prop_assert_eq!(out.winners().contains(&c), s == best);
                }
                if level == 1 {
                    prop_assert_eq!(out.winners().len(), 1);
                }
            }
        }
    }

    #[test]
    fn restricting_to_every_candidate_changes_nothing(e in election(5, 6)) {
        let all: Vec<CandidateId> = e.candidates().to_vec();
        prop_assert_eq!(e.restrict(&all).unwrap().outcome().unwrap(), e.outcome().unwrap());
    }

    #[test]
    fn promote_keeps_unique_winners_only_under_te(n in 0usize..4) {
        let w = candidate_names(4)[..n].to_vec();
        prop_assert_eq!(promote(&w, TieRule::TiesPromote), w.clone());
        let te = promote(&w, TieRule::TiesEliminate);
        prop_assert_eq!(te.len(), usize::from(n == 1));
    }

    #[test]
    fn election_text_round_trips(e in election(5, 6)) {
        let text = serialize_election(&e);
        let back = parse_election(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(serialize_election(&back), text);
    }

    #[test]
    fn control_text_round_trips(inst in budget_instance()) {
        let text = serialize_control_instance(&inst);
        prop_assert_eq!(parse_control_instance(&text).unwrap(), inst);
    }

    #[test]
    fn brute_force_witnesses_are_sound_and_stable(inst in budget_instance()) {
        let d = decide_brute_force(&inst).unwrap();
        prop_assert_eq!(d.is_yes(), d.witness.is_some());
        if let Some(w) = &d.witness {
            prop_assert!(inst.check_action(w).is_ok());
            prop_assert!(Evaluator::new(&inst).goal_met(w));
        }
        prop_assert_eq!(decide_brute_force(&inst).unwrap().witness, d.witness);
    }

    #[test]
    fn yes_stays_yes_with_a_larger_budget(inst in budget_instance()) {
        let k = match inst.budget() { Some(Budget::Limited(k)) => k, _ => unreachable!() };
        if decide_brute_force(&inst).unwrap().is_yes() {
            prop_assert!(decide_brute_force(&with_budget(&inst, k + 1)).unwrap().is_yes());
        }
    }

    #[test]
    fn polynomial_deciders_match_brute_force(inst in budget_instance()) {
        let code = inst.control();
        prop_assume!(code.goal == Goal::Destructive);
        let poly = match code.kind {
            ControlKind::AddVoters => decide_dc_add_voters_poly(&inst).unwrap(),
            ControlKind::DeleteVoters => decide_dc_delete_voters_poly(&inst).unwrap(),
            _ => return Ok(()),
        };
        prop_assert_eq!(poly.answer, decide_brute_force(&inst).unwrap().answer);
        if let Some(w) = &poly.witness {
            prop_assert!(Evaluator::new(&inst).goal_met(w));
        }
    }
}
