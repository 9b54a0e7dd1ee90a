//! Line-oriented text formats.
//!
//! Election files:
//!
//! ```text
//! # comment
//! candidates: a, b, c
//! vote: 3 : a > c > b
//! ```
//!
//! Control files add `control:`, `designated:`, and optionally `budget:`
//! (a count or `unlimited`), `tie: TE|TP`, `spoilers:` and `uvote:` lines
//! (unregistered votes, same grammar as `vote:`). Source-problem files hold
//! `elements:`, one `set:` line per set and, for Hitting Set, `budget:`.

use std::fmt::Write as _;

use itertools::Itertools;

use crate::control::{Budget, ControlInstance, ControlType, TieRule};
use crate::election::{CandidateId, Election};
use crate::error::{Error, Result};
use crate::reductions::{HittingSetInstance, X3CInstance};

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn invalid(line: usize, reason: impl Into<String>) -> Error {
    Error::Validation {
        line: Some(line),
        reason: reason.into(),
    }
}

/// Attaches a line number to errors raised by the model constructors.
fn at_line(line: usize, err: Error) -> Error {
    match err {
        Error::Validation { line: None, reason } | Error::Domain(reason) => invalid(line, reason),
        other => other,
    }
}

fn scan<'a>(text: &'a str, allowed: &[&str]) -> Result<Vec<Line<'a>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, format!("expected `key: value`, got {line:?}")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(parse_err(
                no,
                format!("unknown key {key:?} (expected one of: {})", allowed.join(", ")),
            ));
        }
        out.push(Line {
            no,
            key,
            value: value.trim(),
        });
    }
    Ok(out)
}

/// The single line with `key`, if present; repeats are an error.
fn header<'a, 'b>(lines: &'b [Line<'a>], key: &str) -> Result<Option<&'b Line<'a>>> {
    let mut found = lines.iter().filter(|l| l.key == key);
    let first = found.next();
    if let Some(dup) = found.next() {
        return Err(parse_err(dup.no, format!("duplicate `{key}:` line")));
    }
    Ok(first)
}

fn required<'a, 'b>(lines: &'b [Line<'a>], key: &str, what: &str) -> Result<&'b Line<'a>> {
    header(lines, key)?.ok_or_else(|| parse_err(lines.last().map_or(1, |l| l.no), format!("missing `{key}:` line ({what})")))
}

fn token_list(line: &Line<'_>) -> Result<Vec<CandidateId>> {
    if line.value.is_empty() {
        return Ok(Vec::new());
    }
    line.value
        .split(',')
        .map(|t| CandidateId::new(t.trim()).map_err(|e| at_line(line.no, e)))
        .collect()
}

fn parse_count(line: usize, text: &str, what: &str) -> Result<u64> {
    text.trim()
        .parse::<u64>()
        .map_err(|_| parse_err(line, format!("{what} must be a non-negative integer, got {:?}", text.trim())))
}

/// `<multiplicity> : a > b > c`, checked to be a permutation of `universe`.
fn vote_line(line: &Line<'_>, universe: &[CandidateId]) -> Result<(u64, Vec<CandidateId>)> {
    let (mult, ranking) = line
        .value
        .split_once(':')
        .ok_or_else(|| parse_err(line.no, "expected `<multiplicity> : c1 > c2 > ...`"))?;
    let mult = parse_count(line.no, mult, "multiplicity")?;
    if mult == 0 {
        return Err(invalid(line.no, "multiplicity must be at least 1"));
    }
    let ranking: Vec<CandidateId> = ranking
        .split('>')
        .map(|t| CandidateId::new(t.trim()).map_err(|e| at_line(line.no, e)))
        .collect::<Result<_>>()?;
    for (i, c) in ranking.iter().enumerate() {
        if !universe.contains(c) {
            return Err(invalid(line.no, format!("candidate {c} is not declared")));
        }
        if ranking[..i].contains(c) {
            return Err(invalid(line.no, format!("candidate {c} ranked twice")));
        }
    }
    if ranking.len() != universe.len() {
        let missing = universe.iter().filter(|c| !ranking.contains(c)).join(", ");
        return Err(invalid(line.no, format!("ballot does not rank {missing}")));
    }
    Ok((mult, ranking))
}

fn votes_for(lines: &[Line<'_>], key: &str, universe: &[CandidateId]) -> Result<Vec<(u64, Vec<CandidateId>)>> {
    lines
        .iter()
        .filter(|l| l.key == key)
        .map(|l| vote_line(l, universe))
        .collect()
}

fn election_from(candidates: Vec<CandidateId>, votes: Vec<(u64, Vec<CandidateId>)>, line: usize) -> Result<Election> {
    Election::new(candidates, votes).map_err(|e| at_line(line, e))
}

pub fn parse_election(text: &str) -> Result<Election> {
    let lines = scan(text, &["candidates", "vote"])?;
    let cand_line = required(&lines, "candidates", "comma-separated candidate names")?;
    let candidates = token_list(cand_line)?;
    if candidates.is_empty() {
        return Err(invalid(cand_line.no, "candidate list is empty"));
    }
    let votes = votes_for(&lines, "vote", &candidates)?;
    election_from(candidates, votes, cand_line.no)
}

fn write_votes(out: &mut String, key: &str, election: &Election) {
    for vote in election.votes() {
        let ranking = vote.ranking().iter().map(|&c| election.candidate(c)).join(" > ");
        let _ = writeln!(out, "{key}: {} : {ranking}", vote.multiplicity());
    }
}

pub fn serialize_election(election: &Election) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "candidates: {}", election.candidates().iter().join(", "));
    write_votes(&mut out, "vote", election);
    out
}

pub fn parse_control_instance(text: &str) -> Result<ControlInstance> {
    let lines = scan(
        text,
        &["control", "designated", "budget", "tie", "spoilers", "candidates", "vote", "uvote"],
    )?;
    let control_line = required(&lines, "control", "control type code")?;
    let tie_line = header(&lines, "tie")?;
    let tie = tie_line
        .map(|l| l.value.parse::<TieRule>().map_err(|e| at_line(l.no, e)))
        .transpose()?;
    let control = ControlType::parse_with_tie(control_line.value, tie)
        .map_err(|e| at_line(tie_line.map_or(control_line.no, |l| l.no), e))?;

    let designated = required(&lines, "designated", "designated candidate")?;
    let cand_line = required(&lines, "candidates", "comma-separated candidate names")?;
    let mut universe = token_list(cand_line)?;
    let spoiler_line = header(&lines, "spoilers")?;
    let spoilers = match spoiler_line {
        Some(l) if !control.adds_candidates() => {
            return Err(invalid(l.no, format!("`spoilers:` conflicts with control {control}")));
        }
        Some(l) => token_list(l)?,
        None => Vec::new(),
    };
    universe.extend(spoilers.iter().cloned());
    if let Some(first_uvote) = lines.iter().find(|l| l.key == "uvote") {
        if !control.adds_voters() {
            return Err(invalid(first_uvote.no, format!("`uvote:` conflicts with control {control}")));
        }
    }

    let budget_line = header(&lines, "budget")?;
    let budget = match budget_line {
        None => None,
        Some(l) if !control.has_budget() => {
            return Err(invalid(l.no, format!("`budget:` conflicts with partition control {control}")));
        }
        Some(l) if l.value.eq_ignore_ascii_case("unlimited") => Some(Budget::Unlimited),
        Some(l) => Some(Budget::Limited(parse_count(l.no, l.value, "budget")?)),
    };

    let election = election_from(universe.clone(), votes_for(&lines, "vote", &universe)?, cand_line.no)?;
    let pool = if control.adds_voters() {
        Some(election_from(universe.clone(), votes_for(&lines, "uvote", &universe)?, cand_line.no)?)
    } else {
        None
    };
    let blame = budget_line.map_or(control_line.no, |l| l.no);
    ControlInstance::new(control, designated.value, election, &spoilers, pool, budget).map_err(|e| {
        let line = if e.to_string().contains("designated") { designated.no } else { blame };
        at_line(line, e)
    })
}

pub fn serialize_control_instance(instance: &ControlInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "control: {}", instance.control());
    let _ = writeln!(out, "designated: {}", instance.designated());
    if let Some(b) = instance.budget() {
        let _ = writeln!(out, "budget: {b}");
    }
    let _ = writeln!(out, "candidates: {}", instance.qualified().iter().join(", "));
    if instance.control().adds_candidates() {
        let _ = writeln!(out, "spoilers: {}", instance.spoilers().iter().join(", "));
    }
    write_votes(&mut out, "vote", instance.election());
    if let Some(pool) = instance.unregistered() {
        write_votes(&mut out, "uvote", pool);
    }
    out
}

fn element_list(line: &Line<'_>) -> Result<Vec<String>> {
    Ok(token_list(line)?.into_iter().map(|c| c.as_str().to_string()).collect())
}

fn source_sets(lines: &[Line<'_>], elements: &[String]) -> Result<Vec<(usize, Vec<usize>)>> {
    lines
        .iter()
        .filter(|l| l.key == "set")
        .map(|l| {
            let names = element_list(l)?;
            if names.is_empty() {
                return Err(invalid(l.no, "set is empty"));
            }
            let idx = names
                .iter()
                .map(|n| {
                    elements
                        .iter()
                        .position(|e| e == n)
                        .ok_or_else(|| invalid(l.no, format!("element {n} is not declared")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((l.no, idx))
        })
        .collect()
}

/// Re-runs a source constructor per set to name the offending line.
fn blame_set<T>(sets: &[(usize, Vec<usize>)], fallback: usize, build: impl Fn(Vec<Vec<usize>>) -> Result<T>) -> Result<T> {
    let all: Vec<Vec<usize>> = sets.iter().map(|(_, s)| s.clone()).collect();
    build(all).map_err(|e| {
        let line = sets
            .iter()
            .find(|(_, s)| build(vec![s.clone()]).is_err())
            .map_or(fallback, |(no, _)| *no);
        at_line(line, e)
    })
}

pub fn parse_hitting_set(text: &str) -> Result<HittingSetInstance> {
    let lines = scan(text, &["elements", "set", "budget"])?;
    let el = required(&lines, "elements", "comma-separated element names")?;
    let elements = element_list(el)?;
    let budget_line = required(&lines, "budget", "hitting-set size bound")?;
    let k = parse_count(budget_line.no, budget_line.value, "budget")? as usize;
    if k == 0 || k > elements.len() {
        return Err(invalid(budget_line.no, format!("budget {k} outside 1..={}", elements.len())));
    }
    let sets = source_sets(&lines, &elements)?;
    blame_set(&sets, el.no, |s| HittingSetInstance::new(elements.clone(), s, k))
}

pub fn serialize_hitting_set(instance: &HittingSetInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "elements: {}", instance.elements().iter().join(", "));
    for set in instance.sets() {
        let _ = writeln!(out, "set: {}", set.iter().map(|&e| &instance.elements()[e]).join(", "));
    }
    let _ = writeln!(out, "budget: {}", instance.budget());
    out
}

pub fn parse_x3c(text: &str) -> Result<X3CInstance> {
    let lines = scan(text, &["elements", "set", "budget"])?;
    if let Some(b) = header(&lines, "budget")? {
        return Err(invalid(b.no, "X3C files take no budget"));
    }
    let el = required(&lines, "elements", "comma-separated element names")?;
    let elements = element_list(el)?;
    if elements.is_empty() || elements.len() % 3 != 0 {
        return Err(invalid(el.no, format!("{} elements is not a positive multiple of 3", elements.len())));
    }
    let sets = source_sets(&lines, &elements)?;
    blame_set(&sets, el.no, |s| X3CInstance::new(elements.clone(), s))
}

pub fn serialize_x3c(instance: &X3CInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "elements: {}", instance.elements().iter().join(", "));
    for set in instance.sets() {
        let _ = writeln!(out, "set: {}", set.iter().map(|&e| &instance.elements()[e]).join(", "));
    }
    out
}
