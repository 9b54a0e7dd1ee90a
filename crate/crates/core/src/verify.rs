//! Self-checking sweeps: fixtures, closed-form score checks, reduction
//! equivalence and polynomial-vs-exhaustive agreement, collected into a
//! line-oriented report.

use std::fmt;
use std::str::FromStr;

use crate::control::{ControlInstance, ControlKind, Evaluator, TieRule};
use crate::error::{Error, Result};
use crate::fixtures::{check_score_formulas, fixture, Expectation, FIXTURE_NAMES};
use crate::gen;
use crate::reductions::{
    candidate_construction_codes, hs_to_ccdc, hs_to_rhs, solve_hitting_set, solve_x3c, rhs_to_candidate_control, x3c_to_ccav,
    x3c_to_ccdv, x3c_to_ccpv, HittingSetInstance, Reduction,
};
use crate::solvers::{decide_brute_force, decide_dc_add_voters_poly, decide_dc_delete_voters_poly, Answer, Decision};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// Appends a check; `Ok` carries the detail of a pass, `Err` of a failure.
    pub fn record(&mut self, id: impl Into<String>, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            id: id.into(),
            passed,
            detail,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fixtures,
    Formulas,
    Reductions,
    Poly,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixtures" => Ok(Suite::Fixtures),
            "formulas" => Ok(Suite::Formulas),
            "reductions" => Ok(Suite::Reductions),
            "poly" => Ok(Suite::Poly),
            "all" => Ok(Suite::All),
            other => Err(Error::domain(format!(
                "unknown suite {other:?} (expected fixtures, formulas, reductions, poly or all)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Size cap: number of sets for source problems, `n` for the formula
    /// checks, candidates for the polynomial sweep. 0 disables every check.
    pub max_n: usize,
    pub seed: u64,
    /// Instances per sampled family.
    pub samples: usize,
    /// Deliberately breaks one fixture expectation.
    pub corrupt_fixture: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            max_n: 4,
            seed: 1,
            samples: 6,
            corrupt_fixture: false,
        }
    }
}

/// Re-checks a YES decision: the witness must be legal and meet the goal.
pub fn witness_sound(instance: &ControlInstance, decision: &Decision) -> std::result::Result<(), String> {
    match (&decision.answer, &decision.witness) {
        (Answer::No, None) => Ok(()),
        (Answer::No, Some(_)) => Err("NO decision carries a witness".into()),
        (Answer::Yes, None) => Err("YES decision without witness".into()),
        (Answer::Yes, Some(w)) => {
            instance.check_action(w).map_err(|e| format!("illegal witness: {e}"))?;
            if Evaluator::new(instance).goal_met(w) {
                Ok(())
            } else {
                Err(format!("witness {} misses the goal", w.describe(instance)))
            }
        }
    }
}

/// Brute-force decision on the reduced instance must match the source
/// answer, and the source witness mapped forward must succeed.
pub fn check_reduction(reduction: &Reduction, source_witness: Option<&[usize]>) -> std::result::Result<String, String> {
    let inst = reduction.instance();
    let d = decide_brute_force(inst).map_err(|e| e.to_string())?;
    witness_sound(inst, &d)?;
    let expected = Answer::from(source_witness.is_some());
    if d.answer != expected {
        return Err(format!("{}: target {}, source {expected}", inst.control(), d.answer));
    }
    if let Some(w) = source_witness {
        let action = reduction.forward_witness(w).map_err(|e| e.to_string())?;
        inst.check_action(&action).map_err(|e| format!("forward witness illegal: {e}"))?;
        if !Evaluator::new(inst).goal_met(&action) {
            return Err(format!("forward witness {} misses the goal", action.describe(inst)));
        }
    }
    Ok(format!("{} {} ({} actions examined)", inst.control(), d.answer, d.stats.examined))
}

/// Polynomial decider against brute force on a DCAV or DCDV instance.
pub fn check_poly(instance: &ControlInstance) -> std::result::Result<String, String> {
    let poly = match instance.control().kind {
        ControlKind::AddVoters => decide_dc_add_voters_poly(instance),
        ControlKind::DeleteVoters => decide_dc_delete_voters_poly(instance),
        _ => return Err(format!("{} has no polynomial decider", instance.control())),
    }
    .map_err(|e| e.to_string())?;
    let brute = decide_brute_force(instance).map_err(|e| e.to_string())?;
    witness_sound(instance, &poly).map_err(|e| format!("poly: {e}"))?;
    witness_sound(instance, &brute).map_err(|e| format!("brute: {e}"))?;
    if poly.answer != brute.answer {
        return Err(format!("{}: poly {}, brute {}", instance.control(), poly.answer, brute.answer));
    }
    Ok(format!("{} {}", instance.control(), poly.answer))
}

/// The restricted form must keep the answer and satisfy `n > m > k`, or
/// be the trivial YES instance.
pub fn check_rhs(instance: &HittingSetInstance) -> std::result::Result<String, String> {
    let conv = hs_to_rhs(instance);
    let out = conv.instance.as_hitting_set();
    let (n, m, k) = (out.num_sets(), out.num_elements(), out.budget());
    if n <= m || k >= m && !conv.trivial_yes {
        return Err(format!("output has n={n}, m={m}, k={k}"));
    }
    let before = solve_hitting_set(instance).map_err(|e| e.to_string())?.is_some();
    let after = solve_hitting_set(out).map_err(|e| e.to_string())?.is_some();
    if conv.trivial_yes && !after {
        return Err("trivial instance is not a YES instance".into());
    }
    if before != after {
        return Err(format!("source {}, restricted {}", Answer::from(before), Answer::from(after)));
    }
    Ok(format!("n={n} m={m} k={k} {}", Answer::from(after)))
}

pub fn run_verification_suite(config: &SuiteConfig) -> Report {
    let mut report = Report::default();
    if config.max_n == 0 {
        return report;
    }
    if config.suite.includes(Suite::Fixtures) {
        report.extend(fixture_checks(config.corrupt_fixture));
    }
    if config.suite.includes(Suite::Formulas) {
        report.extend(formula_checks(config.max_n.min(6)));
    }
    if config.suite.includes(Suite::Reductions) {
        report.extend(reduction_checks(config));
    }
    if config.suite.includes(Suite::Poly) {
        report.extend(poly_checks(config));
    }
    report
}

fn fixture_checks(corrupt: bool) -> Report {
    let mut report = Report::default();
    for name in FIXTURE_NAMES {
        let mut f = fixture(name).expect("known fixture");
        if corrupt && name == "prop1" {
            if let Some(Expectation::Score { score, .. }) = f.expected.get_mut(1) {
                *score += 1;
            }
        }
        report.extend(f.check());
    }
    report
}

fn formula_checks(max_n: usize) -> Report {
    let mut report = Report::default();
    for n in 3..=max_n {
        for m in 2..n {
            for k in 1..m {
                match check_score_formulas(n, m, k) {
                    Ok(r) => report.extend(r),
                    Err(e) => report.record(format!("formula/n{n}-m{m}-k{k}"), Err(e.to_string())),
                }
            }
        }
    }
    report
}

fn hs_witness(hs: &HittingSetInstance) -> std::result::Result<Option<Vec<usize>>, String> {
    solve_hitting_set(hs).map_err(|e| e.to_string())
}

fn reduction_checks(config: &SuiteConfig) -> Report {
    let mut report = Report::default();
    let samples = config.samples;
    for n in 3..=config.max_n.min(5) {
        for m in 2..n.min(4) {
            for k in 1..m {
                for (i, rhs) in gen::restricted_family(m, n, k, samples, config.seed).iter().enumerate() {
                    let witness = hs_witness(rhs.as_hitting_set());
                    for code in candidate_construction_codes() {
                        let id = format!("reduction/rhs-{code}/n{n}-m{m}-k{k}/{i}");
                        let outcome = witness.clone().and_then(|w| {
                            let red = rhs_to_candidate_control(rhs, code).map_err(|e| e.to_string())?;
                            check_reduction(&red, w.as_deref())
                        });
                        report.record(id, outcome);
                    }
                }
            }
        }
    }
    for n in 1..=config.max_n.min(3) {
        for m in 1..=3 {
            for k in 1..=m.min(2) {
                for (i, hs) in gen::hitting_set_family(m, n, k, samples, config.seed).iter().enumerate() {
                    let outcome = hs_witness(hs).and_then(|w| {
                        let red = hs_to_ccdc(hs).map_err(|e| e.to_string())?;
                        check_reduction(&red, w.as_deref())
                    });
                    report.record(format!("reduction/hs-CCDC/n{n}-m{m}-k{k}/{i}"), outcome);
                    report.record(format!("reduction/hs-rhs/n{n}-m{m}-k{k}/{i}"), check_rhs(hs));
                }
            }
        }
    }
    let family = gen::x3c_family(2, config.max_n.min(4), samples, config.seed);
    for (i, x) in family.iter().enumerate() {
        let n = x.num_sets();
        let witness = solve_x3c(x).map_err(|e| e.to_string());
        let builds: [(&str, Result<Reduction>); 4] = [
            ("CCAV", x3c_to_ccav(x)),
            ("CCDV", x3c_to_ccdv(x)),
            ("CCPV-TE", x3c_to_ccpv(x, TieRule::TiesEliminate)),
            ("CCPV-TP", x3c_to_ccpv(x, TieRule::TiesPromote)),
        ];
        for (code, red) in builds {
            let outcome = witness.clone().and_then(|w| {
                let red = red.map_err(|e| e.to_string())?;
                check_reduction(&red, w.as_deref())
            });
            report.record(format!("reduction/x3c-{code}/m2-n{n}/{i}"), outcome);
        }
    }
    report
}

fn poly_checks(config: &SuiteConfig) -> Report {
    let mut report = Report::default();
    let mut rng = gen::rng(config.seed);
    let max_c = config.max_n.min(5);
    for i in 0..config.samples * 10 {
        let inst = gen::random_dc_voter_instance(&mut rng, max_c, 7, 3, 4);
        report.record(format!("poly/{}/{i}", inst.control()), check_poly(&inst));
    }
    report
}
