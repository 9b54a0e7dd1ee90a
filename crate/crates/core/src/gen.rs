//! Seeded random instances and deterministic instance families.
//!
//! All randomness flows through [`rng`], a ChaCha8 generator seeded with a
//! `u64`, so equal seeds give equal output on every platform.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::control::{Budget, ControlInstance, ControlKind, ControlType, Goal};
use crate::election::{CandidateId, Election};
use crate::reductions::{HittingSetInstance, RestrictedHittingSetInstance, X3CInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a`, `b`, ... for up to 26 candidates, `c1`, `c2`, ... beyond.
pub fn candidate_names(n: usize) -> Vec<CandidateId> {
    (0..n)
        .map(|i| {
            let name = if n <= 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("c{}", i + 1)
            };
            CandidateId::new(name).expect("valid token")
        })
        .collect()
}

pub fn element_names(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("b{j}")).collect()
}

/// Election with `num_votes` uniformly random ballots, each of multiplicity 1.
pub fn random_election(rng: &mut impl Rng, num_candidates: usize, num_votes: usize) -> Election {
    let names = candidate_names(num_candidates);
    Election::from_indices(names, random_ballots(rng, num_candidates, num_votes)).expect("valid ballots")
}

fn random_ballots(rng: &mut impl Rng, num_candidates: usize, num_votes: usize) -> Vec<(u64, Vec<usize>)> {
    (0..num_votes)
        .map(|_| {
            let mut r: Vec<usize> = (0..num_candidates).collect();
            r.shuffle(rng);
            (1, r)
        })
        .collect()
}

/// Hitting Set instance over `b1..bm` with `n` uniform non-empty subsets.
pub fn random_hitting_set(rng: &mut impl Rng, m: usize, n: usize, k: usize) -> HittingSetInstance {
    let sets = (0..n).map(|_| mask_to_set(rng.gen_range(1..1u64 << m))).collect();
    HittingSetInstance::new(element_names(m), sets, k).expect("valid instance")
}

/// X3C instance over `b1..b(3m)` with `n` uniform 3-subsets.
pub fn random_x3c(rng: &mut impl Rng, m: usize, n: usize) -> X3CInstance {
    let sets = (0..n)
        .map(|_| {
            let mut s = sample(rng, 3 * m, 3).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    X3CInstance::new(element_names(3 * m), sets).expect("valid instance")
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| (mask >> b) & 1 == 1).collect()
}

/// All non-empty subsets of `0..m`, in mask order.
pub fn nonempty_subsets(m: usize) -> Vec<Vec<usize>> {
    (1..1u64 << m).map(mask_to_set).collect()
}

/// Indices `0..total` when `total <= limit`, else `limit` distinct indices
/// drawn with `seed`, ascending.
fn pick_indices(total: u128, limit: usize, seed: u64) -> Vec<u128> {
    if total <= limit as u128 {
        return (0..total).collect();
    }
    let mut r = rng(seed);
    let mut picked: Vec<u128> = Vec::with_capacity(limit);
    if total <= usize::MAX as u128 {
        picked.extend(sample(&mut r, total as usize, limit).into_iter().map(|i| i as u128));
    } else {
        while picked.len() < limit {
            let i = r.gen_range(0..total);
            if !picked.contains(&i) {
                picked.push(i);
            }
        }
    }
    picked.sort_unstable();
    picked
}

/// Hitting Set instances over `b1..bm` with `n` sets and budget `k`: every
/// sequence of `n` non-empty subsets when there are at most `limit`,
/// otherwise `limit` distinct sequences drawn with `seed`.
pub fn hitting_set_family(m: usize, n: usize, k: usize, limit: usize, seed: u64) -> Vec<HittingSetInstance> {
    let subsets = nonempty_subsets(m);
    let radix = subsets.len() as u128;
    let total = radix.checked_pow(n as u32).unwrap_or(u128::MAX);
    pick_indices(total, limit, seed)
        .into_iter()
        .map(|mut code| {
            let sets = (0..n)
                .map(|_| {
                    let s = subsets[(code % radix) as usize].clone();
                    code /= radix;
                    s
                })
                .collect();
            HittingSetInstance::new(element_names(m), sets, k).expect("valid instance")
        })
        .collect()
}

/// As [`hitting_set_family`], for `n > m > k >= 1`.
pub fn restricted_family(m: usize, n: usize, k: usize, limit: usize, seed: u64) -> Vec<RestrictedHittingSetInstance> {
    hitting_set_family(m, n, k, limit, seed)
        .into_iter()
        .map(|hs| RestrictedHittingSetInstance::new(hs).expect("n > m > k"))
        .collect()
}

/// X3C instances over `b1..b(3m)` whose sets are distinct 3-subsets,
/// `n = 1..=max_n`, at most `limit` in total. Sizes are taken whole while
/// they fit; the remaining quota is split evenly over the larger sizes and
/// filled by seeded sampling.
pub fn x3c_family(m: usize, max_n: usize, limit: usize, seed: u64) -> Vec<X3CInstance> {
    let triples: Vec<Vec<usize>> = (0..3 * m).combinations(3).collect();
    let count = |n: usize| -> u128 { binomial(triples.len() as u128, n as u128) };
    let mut out = Vec::new();
    let mut n = 1;
    while n <= max_n && out.len() as u128 + count(n) <= limit as u128 {
        out.extend((0..triples.len()).combinations(n).map(|c| build_x3c(m, &triples, &c)));
        n += 1;
    }
    let rest: Vec<usize> = (n..=max_n).collect();
    let quota = limit.saturating_sub(out.len());
    for (i, &size) in rest.iter().enumerate() {
        let share = quota / rest.len() + usize::from(i < quota % rest.len());
        for code in pick_indices(count(size), share, seed ^ size as u64) {
            out.push(build_x3c(m, &triples, &unrank_combination(triples.len(), size, code)));
        }
    }
    out
}

fn build_x3c(m: usize, triples: &[Vec<usize>], chosen: &[usize]) -> X3CInstance {
    let sets = chosen.iter().map(|&t| triples[t].clone()).collect();
    X3CInstance::new(element_names(3 * m), sets).expect("valid instance")
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The `rank`-th `k`-combination of `0..n` in lexicographic order.
fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for left in (1..=k).rev() {
        loop {
            let with = binomial((n - next - 1) as u128, (left - 1) as u128);
            if rank < with {
                out.push(next);
                next += 1;
                break;
            }
            rank -= with;
            next += 1;
        }
    }
    out
}

/// Every ranking of `0..n`.
pub fn ballot_alphabet(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

/// Every multiset of at most `max_size` ballots from `alphabet`, as vote
/// lists with multiplicities.
pub fn vote_multisets(alphabet: &[Vec<usize>], max_size: usize) -> Vec<Vec<(u64, Vec<usize>)>> {
    let mut out = Vec::new();
    for size in 0..=max_size {
        for combo in (0..alphabet.len()).combinations_with_replacement(size) {
            let votes = combo
                .into_iter()
                .dedup_with_count()
                .map(|(count, b)| (count as u64, alphabet[b].clone()))
                .collect();
            out.push(votes);
        }
    }
    out
}

/// A random DCAV or DCDV instance: 1..=`max_candidates` candidates,
/// 0..=`max_votes` registered votes, budget 0..=`max_budget`, and for DCAV
/// a pool of 0..=`max_pool` votes.
pub fn random_dc_voter_instance(
    rng: &mut impl Rng,
    max_candidates: usize,
    max_votes: usize,
    max_budget: u64,
    max_pool: usize,
) -> ControlInstance {
    let kind = if rng.gen_bool(0.5) {
        ControlKind::AddVoters
    } else {
        ControlKind::DeleteVoters
    };
    let n = rng.gen_range(1..=max_candidates);
    let names = candidate_names(n);
    let votes = rng.gen_range(0..=max_votes);
    let election = Election::from_indices(names.clone(), random_ballots(rng, n, votes)).expect("valid");
    let pool = (kind == ControlKind::AddVoters).then(|| {
        let size = rng.gen_range(0..=max_pool);
        Election::from_indices(names.clone(), random_ballots(rng, n, size)).expect("valid")
    });
    let designated = names[rng.gen_range(0..n)].clone();
    let budget = Budget::Limited(rng.gen_range(0..=max_budget));
    let code = ControlType::new(Goal::Destructive, kind);
    ControlInstance::new(code, designated.as_str(), election, &[], pool, Some(budget)).expect("valid instance")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_equal_output() {
        let a = random_election(&mut rng(7), 4, 9);
        let b = random_election(&mut rng(7), 4, 9);
        assert_eq!(a, b);
        assert_eq!(random_x3c(&mut rng(3), 2, 4), random_x3c(&mut rng(3), 2, 4));
        assert_eq!(random_hitting_set(&mut rng(3), 3, 4, 2), random_hitting_set(&mut rng(3), 3, 4, 2));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(hitting_set_family(2, 3, 1, 200, 0).len(), 27);
        assert_eq!(hitting_set_family(2, 5, 1, 200, 0).len(), 200);
        assert_eq!(hitting_set_family(3, 2, 1, 1000, 0).len(), 49);
        let fam = restricted_family(3, 5, 2, 200, 9);
        assert_eq!(fam.len(), 200);
        assert!(fam.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn x3c_family_layout() {
        let fam = x3c_family(2, 4, 500, 1);
        assert_eq!(fam.len(), 500);
        assert_eq!(fam.iter().filter(|x| x.num_sets() == 1).count(), 20);
        assert_eq!(fam.iter().filter(|x| x.num_sets() == 2).count(), 190);
        assert_eq!(fam.iter().filter(|x| x.num_sets() == 3).count(), 145);
        assert_eq!(fam.iter().filter(|x| x.num_sets() == 4).count(), 145);
        for x in &fam {
            assert!(x.sets().iter().all_unique());
        }
        assert_eq!(x3c_family(2, 2, 1000, 1).len(), 210);
    }

    #[test]
    fn unrank_matches_itertools() {
        let all: Vec<Vec<usize>> = (0..6).combinations(3).collect();
        for (r, c) in all.iter().enumerate() {
            assert_eq!(&unrank_combination(6, 3, r as u128), c);
        }
    }

    #[test]
    fn multisets_count() {
        let alphabet = ballot_alphabet(3);
        assert_eq!(alphabet.len(), 6);
        // sum over sizes 0..=5 of C(6 + s - 1, s)
        assert_eq!(vote_multisets(&alphabet, 5).len(), 462);
        let two = vote_multisets(&alphabet, 2);
        assert!(two.iter().any(|v| v == &vec![(2, vec![0, 1, 2])]));
    }

    #[test]
    fn random_voter_instances_are_valid() {
        let mut r = rng(11);
        for _ in 0..50 {
            let inst = random_dc_voter_instance(&mut r, 5, 7, 3, 4);
            assert!(!inst.control().is_constructive());
            assert!(inst.election().num_candidates() >= 1);
        }
    }
}
