//! Worked example elections with their expected outcomes, kept as data so
//! they can be re-checked against any implementation.

use crate::control::{ControlAction, ControlInstance, ControlType, Evaluator};
use crate::election::{CandidateId, Election};
use crate::error::{Error, Result};
use crate::reductions::{build_candidate_construction, HittingSetInstance, RestrictedHittingSetInstance};
use crate::solvers::{decide_brute_force, Answer};
use crate::verify::Report;

pub const FIXTURE_NAMES: [&str; 3] = ["prop1", "lemma2-candidate-partition", "lemma3-voter-partition"];

/// A single expected fact about a fixture election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// Bucklin outcome of the subelection on `candidates` (all when `None`)
    /// and the 1-based `voters` (all when `None`).
    Outcome {
        candidates: Option<Vec<&'static str>>,
        voters: Option<Vec<usize>>,
        level: Option<usize>,
        winners: Vec<&'static str>,
    },
    /// Level score in the subelection on `candidates`.
    Score {
        candidates: Option<Vec<&'static str>>,
        candidate: &'static str,
        level: usize,
        score: u64,
    },
    /// Final winners of a two-stage or control action and whether that
    /// meets the goal of `control` for `designated`.
    FinalWinners {
        control: &'static str,
        designated: &'static str,
        action: ControlAction,
        winners: Vec<&'static str>,
        goal_met: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub election: Election,
    /// A control instance with its expected answer.
    pub scenario: Option<(ControlInstance, Answer)>,
    pub expected: Vec<Expectation>,
}

fn warp_counterexample() -> Election {
    Election::build(&["a", "b", "c", "d"], &[(3, "a c b d"), (2, "b d c a"), (1, "d a c b")]).expect("valid fixture")
}

fn split_electorate() -> Election {
    Election::build(
        &["a", "b", "c", "d"],
        &[(1, "a c b d"), (1, "d c a b"), (1, "b a c d"), (1, "b a c d")],
    )
    .expect("valid fixture")
}

fn instance(code: &str, designated: &str, election: Election, budget: Option<u64>) -> ControlInstance {
    let code: ControlType = code.parse().expect("known code");
    ControlInstance::new(code, designated, election, &[], None, budget.map(crate::control::Budget::Limited))
        .expect("valid fixture scenario")
}

pub fn fixture(name: &str) -> Result<Fixture> {
    use Expectation::*;
    let acd = || Some(vec!["a", "c", "d"]);
    match name {
        "prop1" => Ok(Fixture {
            name: "prop1",
            election: warp_counterexample(),
            scenario: Some((instance("DCDC", "a", warp_counterexample(), Some(1)), Answer::Yes)),
            expected: vec![
                Outcome {
                    candidates: None,
                    voters: None,
                    level: Some(2),
                    winners: vec!["a"],
                },
                Score {
                    candidates: None,
                    candidate: "a",
                    level: 2,
                    score: 4,
                },
                Outcome {
                    candidates: acd(),
                    voters: None,
                    level: Some(2),
                    winners: vec!["c"],
                },
                Score {
                    candidates: acd(),
                    candidate: "c",
                    level: 2,
                    score: 5,
                },
                Score {
                    candidates: acd(),
                    candidate: "a",
                    level: 2,
                    score: 4,
                },
            ],
        }),
        "lemma2-candidate-partition" => {
            let mut expected = Vec::new();
            for code in [
                "DCPC-TE", "DCPC-TP", "DCRPC-TE", "DCRPC-TP", "CCPC-TE", "CCPC-TP", "CCRPC-TE", "CCRPC-TP",
            ] {
                expected.push(FinalWinners {
                    control: code,
                    designated: if code.starts_with("DC") { "a" } else { "c" },
                    action: ControlAction::PartitionCandidates(vec![0, 2, 3]),
                    winners: vec!["c"],
                    goal_met: true,
                });
            }
            Ok(Fixture {
                name: "lemma2-candidate-partition",
                election: warp_counterexample(),
                scenario: Some((instance("DCRPC-TE", "a", warp_counterexample(), None), Answer::Yes)),
                expected,
            })
        }
        "lemma3-voter-partition" => {
            let mut expected = vec![
                Outcome {
                    candidates: None,
                    voters: None,
                    level: Some(2),
                    winners: vec!["a"],
                },
                Outcome {
                    candidates: None,
                    voters: Some(vec![1, 2]),
                    level: Some(2),
                    winners: vec!["c"],
                },
                Outcome {
                    candidates: None,
                    voters: Some(vec![3, 4]),
                    level: Some(1),
                    winners: vec!["b"],
                },
            ];
            for code in ["DCPV-TE", "DCPV-TP"] {
                expected.push(FinalWinners {
                    control: code,
                    designated: "a",
                    action: ControlAction::PartitionVoters(vec![0, 1]),
                    winners: vec!["b", "c"],
                    goal_met: true,
                });
            }
            Ok(Fixture {
                name: "lemma3-voter-partition",
                election: split_electorate(),
                scenario: Some((instance("DCPV-TP", "a", split_electorate(), None), Answer::Yes)),
                expected,
            })
        }
        other => Err(Error::domain(format!(
            "unknown fixture {other:?} (known: {})",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

fn ids(names: &[&str]) -> Vec<CandidateId> {
    names.iter().map(|n| CandidateId::new(*n).expect("valid token")).collect()
}

fn subelection(e: &Election, candidates: &Option<Vec<&str>>, voters: &Option<Vec<usize>>) -> Result<Election> {
    let e = match voters {
        Some(v) => e.select_votes(&v.iter().map(|i| i - 1).collect::<Vec<_>>())?,
        None => e.clone(),
    };
    match candidates {
        Some(c) => e.restrict(&ids(c)),
        None => Ok(e),
    }
}

fn show(names: &[&CandidateId]) -> String {
    format!("{{{}}}", names.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","))
}

impl Expectation {
    /// `Ok(detail)` when the fact holds, `Err(detail)` otherwise.
    pub fn check(&self, election: &Election) -> std::result::Result<String, String> {
        let fail = |e: Error| e.to_string();
        match self {
            Expectation::Outcome {
                candidates,
                voters,
                level,
                winners,
            } => {
                let out = subelection(election, candidates, voters).map_err(fail)?.outcome().map_err(fail)?;
                let got = show(&out.winners());
                let want = show(&ids(winners).iter().collect::<Vec<_>>());
                let detail = format!("winners {got} at level {:?}, expected {want} at {level:?}", out.winning_level());
                if got == want && out.winning_level() == *level {
                    Ok(detail)
                } else {
                    Err(detail)
                }
            }
            Expectation::Score {
                candidates,
                candidate,
                level,
                score,
            } => {
                let got = subelection(election, candidates, &None)
                    .map_err(fail)?
                    .level_score(candidate, *level)
                    .map_err(fail)?;
                let detail = format!("level-{level} score of {candidate} is {got}, expected {score}");
                if got == *score {
                    Ok(detail)
                } else {
                    Err(detail)
                }
            }
            Expectation::FinalWinners {
                control,
                designated,
                action,
                winners,
                goal_met,
            } => {
                let code: ControlType = control.parse().map_err(fail)?;
                let inst =
                    ControlInstance::new(code, designated, election.clone(), &[], None, None).map_err(fail)?;
                let final_winners = inst.apply_action(action).map_err(fail)?;
                let met = Evaluator::new(&inst).goal_met(action);
                let got = show(&final_winners.iter().collect::<Vec<_>>());
                let want = show(&ids(winners).iter().collect::<Vec<_>>());
                let detail = format!("{code} {}: final {got}, expected {want}", action.describe(&inst));
                if got == want && met == *goal_met {
                    Ok(detail)
                } else {
                    Err(detail)
                }
            }
        }
    }
}

impl Fixture {
    /// Re-derives every expectation and the scenario verdict.
    pub fn check(&self) -> Report {
        let mut report = Report::default();
        for (i, exp) in self.expected.iter().enumerate() {
            report.record(format!("fixture/{}/{}", self.name, i + 1), exp.check(&self.election));
        }
        if let Some((inst, answer)) = &self.scenario {
            let result = match decide_brute_force(inst) {
                Ok(d) => {
                    let detail = format!("{} designated {}: {}, expected {answer}", inst.control(), inst.designated(), d.answer);
                    if d.answer == *answer {
                        Ok(detail)
                    } else {
                        Err(detail)
                    }
                }
                Err(e) => Err(e.to_string()),
            };
            report.record(format!("fixture/{}/scenario", self.name), result);
        }
        report
    }
}

/// Level-2 scores of `c`, `d`, `w` in the `{c, d, w}` subelection of the
/// shared candidate-control construction, compared with
/// `6n(k+1)+2(m-k)+9`, `2n(k+1)+4m+2k+3` and `4n(k+1)+2m+10`, plus the two
/// strict gaps `c - d` and `c - w`. The sets are `{b1}` repeated, which
/// do not influence these scores.
pub fn check_score_formulas(n: usize, m: usize, k: usize) -> Result<Report> {
    if !(n > m && m > k && k >= 1) {
        return Err(Error::domain(format!("need n > m > k >= 1, got n={n}, m={m}, k={k}")));
    }
    let hs = HittingSetInstance::new(crate::gen::element_names(m), vec![vec![0]; n], k)?;
    let (e, layout) = build_candidate_construction(&RestrictedHittingSetInstance::new(hs)?)?;
    let core = e.restrict(&ids(&["c", "d", "w"]))?;
    let (n, m, k) = (n as u64, m as u64, k as u64);
    let mut report = Report::default();
    let id = |what: &str| format!("formula/n{n}-m{m}-k{k}/{what}");
    let votes = e.num_votes();
    let want_votes = 6 * n * (k + 1) + 4 * m + 11;
    report.record(
        id("votes"),
        pass_if(votes == want_votes && layout.total_votes() == votes, format!("{votes} votes, expected {want_votes}")),
    );
    let expected = [
        ("c", 6 * n * (k + 1) + 2 * (m - k) + 9),
        ("d", 2 * n * (k + 1) + 4 * m + 2 * k + 3),
        ("w", 4 * n * (k + 1) + 2 * m + 10),
    ];
    let mut got = [0u64; 3];
    for (i, (cand, want)) in expected.iter().enumerate() {
        got[i] = core.level_score(cand, 2)?;
        report.record(
            id(&format!("score-{cand}")),
            pass_if(got[i] == *want, format!("level-2 score {}, expected {want}", got[i])),
        );
    }
    let gap_d = got[0] as i64 - got[1] as i64;
    let gap_w = got[0] as i64 - got[2] as i64;
    let formula_d = 4 * (n * (k + 1)) as i64 - (2 * m + 4 * k) as i64 + 6;
    let formula_w = 2 * (n * (k + 1)) as i64 - (2 * k + 1) as i64;
    report.record(
        id("gap-c-d"),
        pass_if(gap_d > 0 && gap_d == formula_d, format!("c - d = {gap_d}, expected {formula_d} > 0")),
    );
    report.record(
        id("gap-c-w"),
        pass_if(gap_w > 0 && gap_w == formula_w, format!("c - w = {gap_w}, expected {formula_w} > 0")),
    );
    Ok(report)
}

fn pass_if(ok: bool, detail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}
