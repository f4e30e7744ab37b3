//! Global external archive of non-dominated solutions.

use crate::dominance::{crowding_distances, pareto_dominates};
use crate::types::Solution;

/// Store of mutually non-dominated solutions with distinct objective vectors,
/// optionally capped in size.
#[derive(Debug, Clone, Default)]
pub struct Archive {
    members: Vec<Solution>,
    cap: Option<usize>,
}

impl Archive {
    pub fn new(cap: Option<usize>) -> Self {
        Self {
            members: Vec::new(),
            cap,
        }
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    /// Offers one solution. Returns whether it was inserted.
    ///
    /// Rejected when a member dominates it or shares its objective vector;
    /// otherwise inserted, and every member it dominates is dropped. When the
    /// cap is exceeded the most crowded member is evicted.
    pub fn offer(&mut self, candidate: Solution) -> bool {
        let f = candidate.objectives.as_ref();
        if self.members.iter().any(|m| {
            let g = m.objectives.as_ref();
            g == f || pareto_dominates(g, f)
        }) {
            return false;
        }
        self.members
            .retain(|m| !pareto_dominates(f, m.objectives.as_ref()));
        self.members.push(candidate);
        if let Some(cap) = self.cap {
            while self.members.len() > cap {
                self.evict_most_crowded();
            }
        }
        true
    }

    /// Offers every solution of `batch` in order; returns how many were
    /// accepted.
    pub fn offer_all<I>(&mut self, batch: I) -> usize
    where
        I: IntoIterator<Item = Solution>,
    {
        batch.into_iter().filter(|s| self.offer(s.clone())).count()
    }

    fn evict_most_crowded(&mut self) {
        let objectives: Vec<&[f64]> = self.members.iter().map(|m| m.objectives.as_ref()).collect();
        let distances = crowding_distances(&objectives);
        // Smallest distance loses; boundary members only go once every member
        // is a boundary member. Ties evict the oldest.
        let victim = distances
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("archive over cap is non-empty");
        self.members.remove(victim);
    }
}
