//! Pareto dominance, fast non-dominated sorting and crowding distance.
//!
//! All objectives are minimized.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::types::Solution;

/// `true` iff `a` is no worse than `b` in every objective and strictly better
/// in at least one.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(pareto_dominates(a, b))
}

/// Unchecked variant of [`dominates`] for equal-length slices.
#[inline]
pub(crate) fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Ordered partition of a population into non-dominated fronts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontSet {
    /// `fronts[k]` holds the indices of rank-`k` solutions, ascending.
    pub fronts: Vec<Vec<usize>>,
    /// Number of solutions dominating each solution (`n_p`).
    pub domination_count: Vec<usize>,
    /// Indices each solution dominates (`S_p`).
    pub dominated_set: Vec<Vec<usize>>,
}

impl FrontSet {
    /// Rank of every solution, indexed like the input.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.domination_count.len()];
        for (rank, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = rank;
            }
        }
        ranks
    }

    pub fn first(&self) -> &[usize] {
        self.fronts.first().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Deb's fast non-dominated sort over raw objective vectors.
pub fn sort_objectives<V: AsRef<[f64]>>(objectives: &[V]) -> Result<FrontSet> {
    let n = objectives.len();
    if n == 0 {
        return Err(Error::EmptyInput("non-dominated sorting"));
    }
    let m = objectives[0].as_ref().len();
    if let Some(bad) = objectives.iter().find(|o| o.as_ref().len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.as_ref().len(),
        });
    }

    let mut domination_count = vec![0usize; n];
    let mut dominated_set = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            let (a, b) = (objectives[p].as_ref(), objectives[q].as_ref());
            if pareto_dominates(a, b) {
                dominated_set[p].push(q);
                domination_count[q] += 1;
            } else if pareto_dominates(b, a) {
                dominated_set[q].push(p);
                domination_count[p] += 1;
            }
        }
    }

    let mut remaining = domination_count.clone();
    let mut current: Vec<usize> = (0..n).filter(|&i| remaining[i] == 0).collect();
    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_set[p] {
                remaining[q] -= 1;
                if remaining[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }

    Ok(FrontSet {
        fronts,
        domination_count,
        dominated_set,
    })
}

/// Sorts `pop` into fronts and stamps each solution's rank.
pub fn fast_nondominated_sort(pop: &mut [Solution]) -> Result<FrontSet> {
    let objectives: Vec<&[f64]> = pop.iter().map(|s| s.objectives.as_ref()).collect();
    let fronts = sort_objectives(&objectives)?;
    for (rank, front) in fronts.fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = rank;
        }
    }
    Ok(fronts)
}

/// Normalized-cuboid crowding distance of each point in a front.
///
/// Per objective, points holding the minimum or maximum value are boundary
/// points (distance +∞); any other point accumulates the gap between the
/// nearest strictly smaller and strictly larger values, divided by the
/// objective's range. Objectives with zero range contribute nothing. Fronts of
/// one or two points are all boundary.
pub fn crowding_distances<V: AsRef<[f64]>>(front: &[V]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let value = |i: usize| front[i].as_ref()[k];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
        let (lo, hi) = (value(order[0]), value(order[n - 1]));
        let range = hi - lo;
        if range.is_nan() || range <= 0.0 {
            continue;
        }
        // Walk groups of tied values so every member of a tie sees the same
        // neighbours regardless of input order.
        let mut start = 0;
        while start < n {
            let v = value(order[start]);
            let mut end = start + 1;
            while end < n && value(order[end]) == v {
                end += 1;
            }
            let contribution = if start == 0 || end == n {
                f64::INFINITY
            } else {
                (value(order[end]) - value(order[start - 1])) / range
            };
            for &i in &order[start..end] {
                distance[i] += contribution;
            }
            start = end;
        }
    }
    distance
}

/// Stamps crowding distance on the members of `front` (indices into `pop`).
pub fn assign_crowding(pop: &mut [Solution], front: &[usize]) {
    let objectives: Vec<&[f64]> = front.iter().map(|&i| pop[i].objectives.as_ref()).collect();
    let distances = crowding_distances(&objectives);
    for (&i, d) in front.iter().zip(distances) {
        pop[i].crowding = d;
    }
}

/// Stamps rank and crowding on every solution of a non-empty population.
pub fn stamp(pop: &mut [Solution]) -> Result<FrontSet> {
    let fronts = fast_nondominated_sort(pop)?;
    for front in &fronts.fronts {
        assign_crowding(pop, front);
    }
    Ok(fronts)
}

/// Crowded-comparison order: lower rank first, then larger crowding.
///
/// Returns `Equal` on exact ties; callers use stable sorts or explicit index
/// comparison so earlier solutions win ties.
pub fn crowded_compare(a: &Solution, b: &Solution) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.total_cmp(&a.crowding))
}

/// Keeps the `target` best solutions by crowded comparison after stamping
/// rank and crowding. Survivors are returned best-first.
///
/// Repeated objective vectors are kept only after every distinct vector has
/// been placed, so copies of one point cannot crowd out the rest of a front.
pub fn crowded_truncate(mut pop: Vec<Solution>, target: usize) -> Vec<Solution> {
    if pop.is_empty() {
        return pop;
    }
    let fronts = stamp(&mut pop).expect("non-empty population");
    let mut seen = HashSet::new();
    let mut keep = Vec::with_capacity(target.min(pop.len()));
    let mut repeats = Vec::new();
    for front in &fronts.fronts {
        if keep.len() >= target {
            break;
        }
        let (mut members, copies): (Vec<usize>, Vec<usize>) = front
            .iter()
            .partition(|&&i| seen.insert(objective_key(&pop[i].objectives)));
        by_crowding(&pop, &mut members);
        members.truncate(target - keep.len());
        keep.extend(members);
        repeats.push(copies);
    }
    for mut copies in repeats {
        if keep.len() >= target {
            break;
        }
        by_crowding(&pop, &mut copies);
        copies.truncate(target - keep.len());
        keep.extend(copies);
    }
    let mut slots: Vec<Option<Solution>> = pop.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("index selected once"))
        .collect()
}

/// Stable sort by crowding, largest first; equal crowding keeps input order.
fn by_crowding(pop: &[Solution], members: &mut [usize]) {
    members.sort_by(|&a, &b| pop[b].crowding.total_cmp(&pop[a].crowding));
}

fn objective_key(objectives: &[f64]) -> Vec<u64> {
    objectives.iter().map(|v| (v + 0.0).to_bits()).collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::rng::RngStream;

    fn sol(objectives: &[f64]) -> Solution {
        Solution::with_objectives(vec![0.0].into(), objectives.to_vec().into())
    }

    /// Reference partition: repeatedly peel the points no remaining point
    /// dominates.
    fn brute_force_fronts(objectives: &[Vec<f64>]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objectives.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&p| {
                    !remaining
                        .iter()
                        .any(|&q| q != p && pareto_dominates(&objectives[q], &objectives[p]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
    }

    #[test]
    fn dominance_dimension_mismatch() {
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_solution_one_front() {
        let mut pop = vec![sol(&[3.0, 4.0])];
        let fronts = fast_nondominated_sort(&mut pop).unwrap();
        assert_eq!(fronts.fronts, vec![vec![0]]);
    }

    #[test]
    fn chain_gives_one_front_per_point() {
        let mut pop = vec![sol(&[1.0, 1.0]), sol(&[2.0, 2.0]), sol(&[3.0, 3.0])];
        let fronts = fast_nondominated_sort(&mut pop).unwrap();
        assert_eq!(fronts.fronts, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(pop.iter().map(|s| s.rank).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn empty_population_is_an_error() {
        let mut pop: Vec<Solution> = Vec::new();
        assert_eq!(
            fast_nondominated_sort(&mut pop).unwrap_err(),
            Error::EmptyInput("non-dominated sorting")
        );
    }

    #[test]
    fn duplicates_share_a_front() {
        let mut pop = vec![sol(&[1.0, 1.0]), sol(&[1.0, 1.0]), sol(&[0.5, 2.0])];
        let fronts = fast_nondominated_sort(&mut pop).unwrap();
        assert_eq!(fronts.fronts, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn fifty_random_points_match_brute_force() {
        let mut rng = RngStream::new(50);
        let objectives: Vec<Vec<f64>> = (0..50)
            .map(|_| vec![rng.unit(), rng.unit()])
            .collect();
        let fronts = sort_objectives(&objectives).unwrap();
        assert_eq!(fronts.fronts, brute_force_fronts(&objectives));
        for &i in fronts.first() {
            assert_eq!(fronts.domination_count[i], 0);
        }
    }

    #[test]
    fn crowding_small_fronts_all_boundary() {
        assert_eq!(crowding_distances(&[[1.0, 2.0]]), vec![f64::INFINITY]);
        assert_eq!(
            crowding_distances(&[[1.0, 2.0], [2.0, 1.0]]),
            vec![f64::INFINITY; 2]
        );
    }

    #[test]
    fn crowding_three_point_front() {
        let d = crowding_distances(&[[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert!((d[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn crowding_zero_range_objective_contributes_nothing() {
        let front = [[1.0, 0.0], [1.0, 0.25], [1.0, 0.5], [1.0, 1.0]];
        let d = crowding_distances(&front);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[3], f64::INFINITY);
        assert!((d[1] - 0.5).abs() < 1e-15);
        assert!((d[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn crowded_compare_examples() {
        let mut a = sol(&[0.0, 0.0]);
        let mut b = sol(&[0.0, 0.0]);
        a.rank = 0;
        b.rank = 1;
        assert_eq!(crowded_compare(&a, &b), Ordering::Less);

        b.rank = 0;
        a.crowding = f64::INFINITY;
        b.crowding = 2.0;
        assert_eq!(crowded_compare(&a, &b), Ordering::Less);

        a.crowding = 2.0;
        assert_eq!(crowded_compare(&a, &b), Ordering::Equal);
        let mut v = [(0, a), (1, b)];
        v.sort_by(|x, y| crowded_compare(&x.1, &y.1));
        assert_eq!(v[0].0, 0);
    }

    #[test]
    fn truncation_is_elitist() {
        let pop = vec![
            sol(&[3.0, 3.0]),
            sol(&[0.0, 1.0]),
            sol(&[2.0, 2.0]),
            sol(&[1.0, 0.0]),
            sol(&[0.5, 0.5]),
        ];
        let kept = crowded_truncate(pop, 3);
        let objs: Vec<Vec<f64>> = kept.iter().map(|s| s.objectives.0.clone()).collect();
        assert_eq!(objs, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]]);
        assert!(kept.iter().all(|s| s.rank == 0));
    }

    #[test]
    fn truncation_defers_repeated_points() {
        let pop = vec![
            sol(&[0.0, 1.0]),
            sol(&[0.0, 1.0]),
            sol(&[0.0, 1.0]),
            sol(&[1.0, 0.0]),
            sol(&[0.5, 0.5]),
            sol(&[2.0, 2.0]),
        ];
        let kept = crowded_truncate(pop.clone(), 4);
        let objs: Vec<Vec<f64>> = kept.iter().map(|s| s.objectives.0.clone()).collect();
        assert_eq!(objs, vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5], vec![2.0, 2.0]]);
        // Copies fill in once the distinct points run out.
        assert_eq!(crowded_truncate(pop, 6).len(), 6);
    }

    fn population(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        (2usize..=3).prop_flat_map(move |m| {
            prop::collection::vec(prop::collection::vec(0u8..8, m), 1..=max_n)
                .prop_map(|pts| {
                    pts.into_iter()
                        .map(|p| p.into_iter().map(f64::from).collect())
                        .collect()
                })
        })
    }

    proptest! {
        #[test]
        fn sort_matches_brute_force(objectives in population(60)) {
            let fronts = sort_objectives(&objectives).unwrap();
            prop_assert_eq!(&fronts.fronts, &brute_force_fronts(&objectives));
            let total: usize = fronts.fronts.iter().map(Vec::len).sum();
            prop_assert_eq!(total, objectives.len());
        }

        #[test]
        fn dominance_is_a_strict_partial_order(
            a in prop::collection::vec(0u8..4, 3),
            b in prop::collection::vec(0u8..4, 3),
            c in prop::collection::vec(0u8..4, 3),
        ) {
            let f = |v: &Vec<u8>| v.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
            let (a, b, c) = (f(&a), f(&b), f(&c));
            prop_assert!(!pareto_dominates(&a, &a));
            prop_assert!(!(pareto_dominates(&a, &b) && pareto_dominates(&b, &a)));
            if pareto_dominates(&a, &b) && pareto_dominates(&b, &c) {
                prop_assert!(pareto_dominates(&a, &c));
            }
        }

        #[test]
        fn crowding_is_permutation_invariant(
            xs in prop::collection::vec(0u8..20, 1..30),
            seed in any::<u64>(),
        ) {
            // Points on a decreasing line are mutually non-dominated.
            let front: Vec<[f64; 2]> = xs.iter().map(|&x| [f64::from(x), 20.0 - f64::from(x)]).collect();
            let base = crowding_distances(&front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut RngStream::new(seed));
            let permuted: Vec<[f64; 2]> = order.iter().map(|&i| front[i]).collect();
            let d = crowding_distances(&permuted);
            for (k, &i) in order.iter().enumerate() {
                prop_assert_eq!(d[k].to_bits(), base[i].to_bits());
            }
        }
    }
}
