//! Source problems: Hitting Set, Restricted Hitting Set and X3C, with
//! exhaustive oracles.

use itertools::Itertools;

use crate::election::check_token;
use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 20;
pub const DEFAULT_SET_CAP: usize = 20;

fn check_elements(elements: &[String]) -> Result<()> {
    for (i, e) in elements.iter().enumerate() {
        check_token(e).map_err(Error::domain)?;
        if elements[..i].contains(e) {
            return Err(Error::domain(format!("duplicate element {e}")));
        }
    }
    Ok(())
}

fn normalize_set(set: &[usize], m: usize, i: usize) -> Result<Vec<usize>> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != set.len() {
        return Err(Error::domain(format!("set {} repeats an element", i + 1)));
    }
    if let Some(&bad) = s.iter().find(|&&e| e >= m) {
        return Err(Error::domain(format!("set {}: element index {bad} out of range", i + 1)));
    }
    Ok(s)
}

fn resolve(elements: &[String], names: &[&str], i: usize) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            elements
                .iter()
                .position(|e| e == n)
                .ok_or_else(|| Error::domain(format!("set {}: unknown element {n}", i + 1)))
        })
        .collect()
}

/// A Hitting Set instance: elements `B`, sets `S_1..S_n` over `B` given as
/// sorted element indices, and a budget `1 <= k <= |B|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSetInstance {
    elements: Vec<String>,
    sets: Vec<Vec<usize>>,
    k: usize,
}

impl HittingSetInstance {
    pub fn new(elements: Vec<String>, sets: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        check_elements(&elements)?;
        let m = elements.len();
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.is_empty() {
                    return Err(Error::domain(format!("set {} is empty", i + 1)));
                }
                normalize_set(s, m, i)
            })
            .collect::<Result<Vec<_>>>()?;
        if k == 0 || k > m {
            return Err(Error::domain(format!("budget {k} outside 1..={m}")));
        }
        Ok(HittingSetInstance { elements, sets, k })
    }

    pub fn from_names(elements: &[&str], sets: &[&[&str]], k: usize) -> Result<Self> {
        let elements: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, s)| resolve(&elements, s, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements, sets, k)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn budget(&self) -> usize {
        self.k
    }

    /// `m = |B|`.
    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// `n = |S|`.
    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Whether `chosen` meets every set (size is not checked).
    pub fn is_hitting_set(&self, chosen: &[usize]) -> bool {
        self.sets.iter().all(|s| s.iter().any(|e| chosen.contains(e)))
    }

    /// Sorts `chosen` and checks that it is a hitting set of size at most `k`.
    pub(crate) fn check_witness(&self, chosen: &[usize]) -> Result<Vec<usize>> {
        let mut w = chosen.to_vec();
        w.sort_unstable();
        w.dedup();
        if w.iter().any(|&e| e >= self.num_elements()) {
            return Err(Error::domain("witness names an unknown element"));
        }
        if w.len() > self.k || !self.is_hitting_set(&w) {
            return Err(Error::domain(format!("not a hitting set of size at most {}", self.k)));
        }
        Ok(w)
    }

    /// Extends a hitting set to exactly `k` elements with the smallest unused
    /// indices.
    pub(crate) fn pad_witness(&self, chosen: &[usize]) -> Vec<usize> {
        let mut w = chosen.to_vec();
        for e in 0..self.num_elements() {
            if w.len() >= self.k {
                break;
            }
            if !w.contains(&e) {
                w.push(e);
            }
        }
        w.sort_unstable();
        w
    }
}

/// A Hitting Set instance with `n > m > k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedHittingSetInstance(HittingSetInstance);

impl RestrictedHittingSetInstance {
    pub fn new(inner: HittingSetInstance) -> Result<Self> {
        let (n, m, k) = (inner.num_sets(), inner.num_elements(), inner.budget());
        if !(n > m && m > k) {
            return Err(Error::domain(format!(
                "restricted hitting set needs n > m > k >= 1, got n={n}, m={m}, k={k}"
            )));
        }
        Ok(RestrictedHittingSetInstance(inner))
    }

    pub fn as_hitting_set(&self) -> &HittingSetInstance {
        &self.0
    }

    pub fn into_hitting_set(self) -> HittingSetInstance {
        self.0
    }
}

impl std::ops::Deref for RestrictedHittingSetInstance {
    type Target = HittingSetInstance;

    fn deref(&self) -> &HittingSetInstance {
        &self.0
    }
}

/// An X3C instance: `3m` elements and a list of 3-element sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3CInstance {
    elements: Vec<String>,
    sets: Vec<Vec<usize>>,
}

impl X3CInstance {
    pub fn new(elements: Vec<String>, sets: Vec<Vec<usize>>) -> Result<Self> {
        check_elements(&elements)?;
        let m3 = elements.len();
        if m3 == 0 || !m3.is_multiple_of(3) {
            return Err(Error::domain(format!("{m3} elements is not a positive multiple of 3")));
        }
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if s.len() != 3 {
                    return Err(Error::domain(format!("set {} has {} elements, expected 3", i + 1, s.len())));
                }
                normalize_set(s, m3, i)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(X3CInstance { elements, sets })
    }

    pub fn from_names(elements: &[&str], sets: &[&[&str]]) -> Result<Self> {
        let elements: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, s)| resolve(&elements, s, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements, sets)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// `m`, a third of the element count.
    pub fn m(&self) -> usize {
        self.elements.len() / 3
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Whether the sets at `chosen` cover every element exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.elements.len()];
        for &i in chosen {
            let Some(set) = self.sets.get(i) else {
                return false;
            };
            for &e in set {
                if hit[e] {
                    return false;
                }
                hit[e] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub(crate) fn check_witness(&self, chosen: &[usize]) -> Result<Vec<usize>> {
        let mut w = chosen.to_vec();
        w.sort_unstable();
        w.dedup();
        if !self.is_exact_cover(&w) {
            return Err(Error::domain("not an exact cover"));
        }
        Ok(w)
    }
}

/// Smallest hitting set of size at most `k`, lexicographically first among
/// those of minimum size, with the default element cap.
pub fn solve_hitting_set(instance: &HittingSetInstance) -> Result<Option<Vec<usize>>> {
    solve_hitting_set_with_cap(instance, DEFAULT_ELEMENT_CAP)
}

pub fn solve_hitting_set_with_cap(instance: &HittingSetInstance, cap: usize) -> Result<Option<Vec<usize>>> {
    let m = instance.num_elements();
    if m > cap {
        return Err(Error::ResourceLimit {
            what: "hitting set elements",
            size: m as u128,
            cap: cap as u128,
        });
    }
    for size in 0..=instance.budget() {
        if let Some(found) = (0..m).combinations(size).find(|c| instance.is_hitting_set(c)) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Lexicographically first exact cover (0-based set indices), with the
/// default set cap.
pub fn solve_x3c(instance: &X3CInstance) -> Result<Option<Vec<usize>>> {
    solve_x3c_with_cap(instance, DEFAULT_SET_CAP)
}

pub fn solve_x3c_with_cap(instance: &X3CInstance, cap: usize) -> Result<Option<Vec<usize>>> {
    let n = instance.num_sets();
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "x3c sets",
            size: n as u128,
            cap: cap as u128,
        });
    }
    Ok((0..n).combinations(instance.m()).find(|c| instance.is_exact_cover(c)))
}

/// Result of turning a Hitting Set instance into a restricted one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedConversion {
    pub instance: RestrictedHittingSetInstance,
    /// Set when the input had `k = m` (always a yes-instance) and a fixed
    /// small yes-instance was returned in its place.
    pub trivial_yes: bool,
}

fn fresh_element(elements: &[String]) -> String {
    let mut name = "@a".to_string();
    let mut i = 1;
    while elements.contains(&name) {
        i += 1;
        name = format!("@a{i}");
    }
    name
}

fn canonical_yes() -> RestrictedHittingSetInstance {
    let inner = HittingSetInstance::new(
        vec!["b1".into(), "b2".into()],
        vec![vec![0], vec![0], vec![0]],
        1,
    )
    .expect("valid instance");
    RestrictedHittingSetInstance(inner)
}

/// Pads a Hitting Set instance until `n > m > k`: with `n <= m` a fresh
/// element `a` joins `B`, `m + 2 - n` copies of `{a}` are appended and `k`
/// grows by one.
pub fn hs_to_rhs(instance: &HittingSetInstance) -> RestrictedConversion {
    let (n, m, k) = (instance.num_sets(), instance.num_elements(), instance.budget());
    if k == m {
        return RestrictedConversion {
            instance: canonical_yes(),
            trivial_yes: true,
        };
    }
    if n > m {
        return RestrictedConversion {
            instance: RestrictedHittingSetInstance(instance.clone()),
            trivial_yes: false,
        };
    }
    let mut elements = instance.elements.clone();
    elements.push(fresh_element(&elements));
    let mut sets = instance.sets.clone();
    sets.extend(std::iter::repeat_n(vec![m], m + 2 - n));
    let inner = HittingSetInstance::new(elements, sets, k + 1).expect("padded instance is valid");
    RestrictedConversion {
        instance: RestrictedHittingSetInstance::new(inner).expect("padded instance is restricted"),
        trivial_yes: false,
    }
}
