//! Fibers of the `q`-projection `pi_qh`: the multisegments whose weights
//! `z qh^(m-1), ..., z qh^-(m-1)` exhaust a given multiset `sigma`.
//!
//! Entries only chain with entries of the same `qh`-free part and the same
//! `qh`-exponent parity, so the multiset splits into independent groups, each
//! a multiset of integers to be cut into arithmetic progressions of step 2.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_layout, LanglandsError, ReederParameter, Segment};
use crate::extquot::partitions;
use crate::torus::{Coordinate, TorusPoint};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FiberWitness {
    pub cycle_type: Vec<usize>,
    pub point: TorusPoint,
    pub segments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub count: usize,
    pub witnesses: Vec<FiberWitness>,
}

/// `(bottom exponent, length)` runs covering a multiset of exponents.
fn interval_decompositions(mut counts: BTreeMap<i64, usize>) -> Vec<Vec<(i64, usize)>> {
    fn go(
        counts: &mut BTreeMap<i64, usize>,
        last: Option<(i64, usize)>,
        acc: &mut Vec<(i64, usize)>,
        out: &mut Vec<Vec<(i64, usize)>>,
    ) {
        let Some((&x, _)) = counts.iter().next() else {
            out.push(acc.clone());
            return;
        };
        let min_len = match last {
            Some((b, m)) if b == x => m,
            _ => 1,
        };
        let mut max_len = 0;
        while counts.get(&(x + 2 * max_len as i64)).is_some_and(|&c| c > 0) {
            max_len += 1;
        }
        for m in min_len..=max_len {
            for k in 0..m {
                let key = x + 2 * k as i64;
                let c = counts.get_mut(&key).expect("present");
                *c -= 1;
                if *c == 0 {
                    counts.remove(&key);
                }
            }
            acc.push((x, m));
            go(counts, Some((x, m)), acc, out);
            acc.pop();
            for k in 0..m {
                *counts.entry(x + 2 * k as i64).or_insert(0) += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut counts, None, &mut Vec::new(), &mut out);
    out
}

/// Every way of reading `sigma` as the weights of a multisegment at
/// `s = qh`, each with its canonical point `(t, w)` of the extended quotient.
/// Witnesses are sorted by cycle type, then point.
pub fn fiber_count(sigma: &[Coordinate]) -> FiberCount {
    fiber_count_at(sigma, &Coordinate::qh_pow(1)).expect("qh is a valid step")
}

/// Fiber of `pi_s` over `sigma`, for `s = 1` or `s` a single free generator.
pub fn fiber_count_at(sigma: &[Coordinate], s: &Coordinate) -> Result<FiberCount, LanglandsError> {
    // per independent group, every admissible segment list
    let mut groups: Vec<Vec<Vec<Segment>>> = Vec::new();
    if s.is_one() {
        let mut counts: BTreeMap<&Coordinate, usize> = BTreeMap::new();
        for c in sigma {
            *counts.entry(c).or_insert(0) += 1;
        }
        for (c, k) in counts {
            groups.push(
                partitions(k)
                    .into_iter()
                    .map(|p| p.into_iter().map(|m| Segment::new(c.clone(), m)).collect())
                    .collect(),
            );
        }
    } else {
        let free = s.free_part();
        let name = match (free.iter().next(), free.len(), s.torsion_part().is_empty()) {
            (Some((name, 1)), 1, true) => name.clone(),
            _ => return Err(LanglandsError::Parse(format!("s = {s} must be 1 or a single generator"))),
        };
        let mut by_key: BTreeMap<(Coordinate, bool), BTreeMap<i64, usize>> = BTreeMap::new();
        for c in sigma {
            let e = c.free_exponent(&name);
            *by_key
                .entry((c.without(&name), e.rem_euclid(2) == 1))
                .or_default()
                .entry(e)
                .or_insert(0) += 1;
        }
        for ((base, _), counts) in by_key {
            groups.push(
                interval_decompositions(counts)
                    .into_iter()
                    .map(|opt| {
                        opt.into_iter()
                            .map(|(bottom, m)| {
                                let center = base.mul(&Coordinate::free_pow(&name, bottom + m as i64 - 1));
                                Segment::new(center, m)
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
    }
    let mut combos: Vec<Vec<Segment>> = vec![Vec::new()];
    for options in groups {
        let mut next = Vec::with_capacity(combos.len() * options.len());
        for prefix in &combos {
            for opt in &options {
                let mut segs = prefix.clone();
                segs.extend(opt.iter().cloned());
                next.push(segs);
            }
        }
        combos = next;
    }
    let mut witnesses: Vec<FiberWitness> = combos
        .into_iter()
        .map(|segs| {
            let p = ReederParameter::new(segs);
            let (coords, _) = canonical_layout(&p);
            let mut cycle_type = p.partition();
            cycle_type.reverse();
            FiberWitness {
                cycle_type,
                point: TorusPoint::new(coords),
                segments: p.segments.iter().map(ToString::to_string).collect(),
            }
        })
        .collect();
    witnesses.sort();
    Ok(FiberCount {
        count: witnesses.len(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::torus::ValueGroup;

    fn sigma(text: &str) -> Vec<Coordinate> {
        ValueGroup::default().parse_coordinate_list(text).unwrap()
    }

    /// All set partitions of `0..n` as block lists.
    fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for i in 0..n {
            let mut next = Vec::new();
            for p in out {
                for b in 0..p.len() {
                    let mut q = p.clone();
                    q[b].push(i);
                    next.push(q);
                }
                let mut q = p;
                q.push(vec![i]);
                next.push(q);
            }
            out = next;
        }
        out
    }

    /// Brute force: a block is a segment when its entries, sorted by the
    /// `qh` exponent, have consecutive ratios exactly `qh^2`.
    fn oracle(sigma: &[Coordinate]) -> usize {
        let step = Coordinate::qh_pow(2);
        let mut seen = BTreeSet::new();
        'parts: for p in set_partitions(sigma.len()) {
            let mut segs = Vec::new();
            for block in p {
                let mut vals: Vec<&Coordinate> = block.iter().map(|&i| &sigma[i]).collect();
                vals.sort_by_key(|c| c.qh_exponent());
                if vals.windows(2).any(|w| w[1].div(w[0]) != step) {
                    continue 'parts;
                }
                let center = vals[0].mul(&Coordinate::qh_pow(vals.len() as i64 - 1));
                segs.push((vals.len(), center));
            }
            segs.sort();
            seen.insert(segs);
        }
        seen.len()
    }

    #[test]
    fn named_counts() {
        assert_eq!(fiber_count(&sigma("qh,qh^-1")).count, 2);
        assert_eq!(fiber_count(&sigma("1,1")).count, 1);
        assert_eq!(fiber_count(&sigma("qh^2,1,qh^-2")).count, 4);
    }

    #[test]
    fn witnesses_are_sorted_and_canonical() {
        let r = fiber_count(&sigma("qh,qh^-1"));
        assert_eq!(r.witnesses[0].cycle_type, vec![1, 1]);
        assert_eq!(r.witnesses[1].cycle_type, vec![2]);
        assert_eq!(r.witnesses[1].point.to_string(), "(1, 1)");
        assert_eq!(r.witnesses[1].segments, vec!["1:2"]);
    }

    #[test]
    fn other_steps() {
        let r = fiber_count_at(&sigma("s*z,s^-1*z"), &Coordinate::free("s")).unwrap();
        assert_eq!(r.count, 2);
        // at s = 1 a value of multiplicity k splits as any partition of k
        let r = fiber_count_at(&sigma("z,z,z,y"), &Coordinate::one()).unwrap();
        assert_eq!(r.count, 3);
        assert!(fiber_count_at(&sigma("z"), &Coordinate::free_pow("s", 2)).is_err());
    }

    #[test]
    fn independent_groups_multiply() {
        // {z qh, z qh^-1} and {y qh, y qh^-1} each have two readings
        let r = fiber_count(&sigma("z*qh,z*qh^-1,y*qh,y*qh^-1"));
        assert_eq!(r.count, 4);
        // parity classes do not chain
        assert_eq!(fiber_count(&sigma("qh,1")).count, 1);
    }

    #[test]
    fn matches_oracle_on_random_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let names = ["z", "y"];
        for _ in 0..150 {
            let n = rng.gen_range(1..=5);
            let s: Vec<Coordinate> = (0..n)
                .map(|_| {
                    let base = Coordinate::free(names[rng.gen_range(0..names.len())]);
                    base.mul(&Coordinate::qh_pow(rng.gen_range(-3..=3)))
                })
                .collect();
            assert_eq!(fiber_count(&s).count, oracle(&s), "{s:?}");
        }
    }
}
