//! Combinatorial distribution of shares.
//!
//! For an (n,t) scheme there are m = C(n, t-1) items. The (t-1)-subsets
//! A_1..A_m of {1..n} are enumerated lexicographically and item j goes to
//! participant i exactly when i is not in A_j. Any t participants jointly
//! cover all m item slots; any t-1 of them miss at least one.

use crate::error::{Error, Result};

/// Hard cap on m = C(n, t-1) so a typo cannot allocate gigabytes.
pub const DEFAULT_ITEM_CAP: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareDistribution {
    n: usize,
    t: usize,
    m: usize,
    /// A_j as sorted 1-based participant indices, lexicographic order.
    a_sets: Vec<Vec<usize>>,
    /// R_i as sorted 1-based item indices j.
    r_sets: Vec<Vec<usize>>,
}

impl ShareDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn item_count(&self) -> usize {
        self.m
    }

    pub fn a_sets(&self) -> &[Vec<usize>] {
        &self.a_sets
    }

    pub fn r_sets(&self) -> &[Vec<usize>] {
        &self.r_sets
    }

    /// Item slots of participant `i` (1-based).
    pub fn r_set(&self, i: usize) -> &[usize] {
        &self.r_sets[i - 1]
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// All k-subsets of {1..n} in lexicographic order.
fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next subset
        let mut idx = k;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if cur[idx] < n - (k - 1 - idx) {
                cur[idx] += 1;
                for p in idx + 1..k {
                    cur[p] = cur[p - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Builds the (n,t) distribution with the default size cap.
pub fn build_distribution(n: usize, t: usize) -> Result<ShareDistribution> {
    build_distribution_with_cap(n, t, DEFAULT_ITEM_CAP)
}

pub fn build_distribution_with_cap(n: usize, t: usize, cap: usize) -> Result<ShareDistribution> {
    if n == 0 || t == 0 || t > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= t <= n, got n = {n}, t = {t}"
        )));
    }
    let m = binomial(n, t - 1)
        .filter(|&m| m <= cap)
        .ok_or_else(|| Error::InvalidParams(format!("C({n},{}) exceeds item cap {cap}", t - 1)))?;
    let a_sets = lex_subsets(n, t - 1);
    debug_assert_eq!(a_sets.len(), m);
    let mut r_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j0, a) in a_sets.iter().enumerate() {
        for i in 1..=n {
            if !a.contains(&i) {
                r_sets[i - 1].push(j0 + 1);
            }
        }
    }
    let dist = ShareDistribution { n, t, m, a_sets, r_sets };
    dist.verify()?;
    Ok(dist)
}

impl ShareDistribution {
    /// Structural checks: each item sits in exactly n-(t-1) R-sets, and for
    /// small n the cover property is checked exhaustively.
    fn verify(&self) -> Result<()> {
        for j in 1..=self.m {
            let holders = self.r_sets.iter().filter(|r| r.contains(&j)).count();
            if holders != self.n - (self.t - 1) {
                return Err(Error::InvalidParams(format!(
                    "item {j} held by {holders} participants, expected {}",
                    self.n - (self.t - 1)
                )));
            }
        }
        if self.n <= 8 {
            for subset in lex_subsets(self.n, self.t) {
                if !self.covers(&subset) {
                    return Err(Error::InvalidParams(format!(
                        "t-subset {subset:?} fails to cover all items"
                    )));
                }
            }
            if self.t >= 1 {
                for subset in lex_subsets(self.n, self.t - 1) {
                    if self.t > 1 && self.covers(&subset) {
                        return Err(Error::InvalidParams(format!(
                            "(t-1)-subset {subset:?} unexpectedly covers all items"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn covers(&self, participants: &[usize]) -> bool {
        (1..=self.m).all(|j| participants.iter().any(|&i| self.r_sets[i - 1].contains(&j)))
    }
}

/// Reunites shares by slot index. `provided` holds, per participant, the
/// (slot, payload) pairs they contribute. Succeeds only when all m slots are
/// covered; the error lists the uncovered slots.
pub fn reconstruct<T: Clone + PartialEq>(
    m: usize,
    provided: &[(usize, Vec<(usize, T)>)],
) -> Result<Vec<T>> {
    let mut seen_participants = Vec::new();
    let mut slots: Vec<Option<T>> = vec![None; m];
    for (participant, items) in provided {
        if seen_participants.contains(participant) {
            return Err(Error::DuplicateParticipant(*participant));
        }
        seen_participants.push(*participant);
        for (j, payload) in items {
            if *j == 0 || *j > m {
                return Err(Error::InvalidParams(format!("item slot {j} out of range 1..={m}")));
            }
            match &slots[*j - 1] {
                None => slots[*j - 1] = Some(payload.clone()),
                Some(existing) if existing == payload => {}
                Some(_) => return Err(Error::SlotConflict { slot: *j }),
            }
        }
    }
    let missing: Vec<usize> = slots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(k, _)| k + 1)
        .collect();
    if !missing.is_empty() {
        return Err(Error::CoverageFailure { missing });
    }
    Ok(slots.into_iter().map(Option::unwrap).collect())
}
