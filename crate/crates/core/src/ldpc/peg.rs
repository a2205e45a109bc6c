//! Progressive edge growth.
//!
//! Variables are processed in order of increasing degree. Each new edge of
//! variable `v` goes to a check that is as far from `v` as possible in the
//! current Tanner graph; among equally distant checks, the one with the most
//! remaining capacity wins, and ties are broken with a seeded RNG.
//!
//! The breadth-first expansion stops once it has reached
//! `PegOptions::max_reached_checks` checks. Graphs with at most that many
//! checks get the classic unbounded construction; larger graphs still avoid
//! every check within the expanded neighbourhood, which keeps short cycles
//! out without an `O(E²)` construction cost.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SparseParityMatrix;
use crate::de::DegreeDistribution;
use crate::rng::{self, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PegOptions {
    pub max_reached_checks: usize,
}

impl Default for PegOptions {
    fn default() -> Self {
        PegOptions {
            max_reached_checks: 1024,
        }
    }
}

/// Builds an `m × n` matrix whose degree profile follows `dd`.
pub fn generate(n: usize, m: usize, dd: &DegreeDistribution, seed: u64) -> Result<SparseParityMatrix> {
    generate_with(n, m, dd, seed, &PegOptions::default())
}

pub fn generate_with(
    n: usize,
    m: usize,
    dd: &DegreeDistribution,
    seed: u64,
    options: &PegOptions,
) -> Result<SparseParityMatrix> {
    if m == 0 || m >= n {
        return Err(Error::InfeasibleDegrees(format!(
            "need 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    let (var_degrees, check_targets) = degree_sequences(n, m, dd)?;
    let mut rng = rng::rng_from(seed);
    let mut graph = Builder::new(n, check_targets);
    for (v, &deg) in var_degrees.iter().enumerate() {
        for k in 0..deg {
            let c = if k == 0 {
                graph.pick(&mut rng, |_| true)
            } else {
                graph.pick_far(v, options.max_reached_checks, &mut rng)
            };
            let c = match c {
                Some(c) => c,
                None => graph.fallback(v).ok_or_else(|| {
                    Error::InfeasibleDegrees(format!(
                        "variable {v} cannot reach degree {deg} with m = {m}"
                    ))
                })?,
            };
            graph.connect(v, c);
        }
    }
    graph.break_four_cycles(&mut rng);
    let rows = graph
        .check_adj
        .into_iter()
        .map(|row| row.into_iter().map(|v| v as usize).collect())
        .collect();
    SparseParityMatrix::from_checks(n, rows)
        .map_err(|e| Error::InfeasibleDegrees(format!("{e}")))
}

/// Splits `total` into integer counts proportional to `fractions`
/// (largest-remainder rounding).
fn apportion(total: usize, fractions: &[(usize, f64)]) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize, f64)> = fractions
        .iter()
        .map(|&(d, f)| {
            let exact = f * total as f64;
            (d, libm::floor(exact) as usize, exact - libm::floor(exact))
        })
        .collect();
    let assigned: usize = counts.iter().map(|c| c.1).sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].2.total_cmp(&counts[a].2).then(a.cmp(&b)));
    for &k in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[k].1 += 1;
    }
    counts.into_iter().map(|(d, c, _)| (d, c)).collect()
}

fn expand(counts: &[(usize, usize)]) -> Vec<usize> {
    counts
        .iter()
        .flat_map(|&(d, c)| core::iter::repeat_n(d, c))
        .collect()
}

/// Variable degrees (ascending) and check capacities with equal edge totals.
fn degree_sequences(n: usize, m: usize, dd: &DegreeDistribution) -> Result<(Vec<usize>, Vec<usize>)> {
    let var_degrees = expand(&apportion(n, &dd.variable_node_fractions()));
    if let Some(&d) = var_degrees.iter().find(|&&d| d > m) {
        return Err(Error::InfeasibleDegrees(format!(
            "variable degree {d} exceeds m = {m}"
        )));
    }
    let edges: usize = var_degrees.iter().sum();
    let mut targets = expand(&apportion(m, &dd.check_node_fractions()));
    let check_edges: usize = targets.iter().sum();
    if edges.abs_diff(check_edges) > m {
        return Err(Error::InfeasibleDegrees(format!(
            "{edges} variable edges cannot be matched by {m} checks with {check_edges} sockets; \
             m does not fit the ensemble's rate"
        )));
    }
    // Balance sockets one unit at a time: raise the smallest capacities,
    // lower the largest.
    let mut diff = edges as i64 - check_edges as i64;
    while diff != 0 {
        if diff > 0 {
            let j = (0..m).min_by_key(|&j| (targets[j], j)).unwrap_or(0);
            targets[j] += 1;
            diff -= 1;
        } else {
            let j = (0..m).max_by_key(|&j| (targets[j], usize::MAX - j)).unwrap_or(0);
            if targets[j] <= 1 {
                return Err(Error::InfeasibleDegrees("checks cannot be emptied".into()));
            }
            targets[j] -= 1;
            diff += 1;
        }
    }
    if let Some(&d) = targets.iter().find(|&&d| d > n) {
        return Err(Error::InfeasibleDegrees(format!(
            "check degree {d} exceeds n = {n}"
        )));
    }
    Ok((var_degrees, targets))
}

struct Builder {
    var_adj: Vec<Vec<u32>>,
    check_adj: Vec<Vec<u32>>,
    spare: Vec<usize>,
    // buckets[s] holds checks with s free sockets; bucket 0 is unused.
    buckets: Vec<Vec<u32>>,
    slot: Vec<usize>,
    // Checks with spare > 0.
    open: usize,
    stamp: u32,
    check_mark: Vec<u32>,
    check_level: Vec<u32>,
    var_mark: Vec<u32>,
}

impl Builder {
    fn new(n: usize, targets: Vec<usize>) -> Self {
        let m = targets.len();
        let max = targets.iter().copied().max().unwrap_or(0);
        let mut buckets = vec![Vec::new(); max + 1];
        let mut slot = vec![0; m];
        for (c, &t) in targets.iter().enumerate() {
            slot[c] = buckets[t].len();
            buckets[t].push(c as u32);
        }
        Builder {
            var_adj: vec![Vec::new(); n],
            check_adj: targets.iter().map(|&t| Vec::with_capacity(t)).collect(),
            spare: targets,
            buckets,
            slot,
            open: m,
            stamp: 0,
            check_mark: vec![0; m],
            check_level: vec![0; m],
            var_mark: vec![0; n],
        }
    }

    fn connect(&mut self, v: usize, c: usize) {
        self.var_adj[v].push(c as u32);
        self.check_adj[c].push(v as u32);
        let s = self.spare[c];
        if s > 0 {
            let bucket = &mut self.buckets[s];
            let at = self.slot[c];
            bucket.swap_remove(at);
            if let Some(&moved) = bucket.get(at) {
                self.slot[moved as usize] = at;
            }
            self.spare[c] = s - 1;
            if s - 1 > 0 {
                self.slot[c] = self.buckets[s - 1].len();
                self.buckets[s - 1].push(c as u32);
            } else {
                self.open -= 1;
            }
        }
    }

    /// Check with the most spare capacity among those accepted by `allowed`.
    fn pick(&self, rng: &mut Rng, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        for bucket in self.buckets.iter().skip(1).rev() {
            if bucket.is_empty() {
                continue;
            }
            // Cheap rejection sampling first; fall back to a full scan.
            if bucket.len() >= 16 {
                for _ in 0..8 {
                    let c = bucket[rng::index(rng, bucket.len())] as usize;
                    if allowed(c) {
                        return Some(c);
                    }
                }
            }
            let mut candidates: Vec<u32> = bucket.iter().copied().filter(|&c| allowed(c as usize)).collect();
            if !candidates.is_empty() {
                candidates.sort_unstable();
                return Some(candidates[rng::index(rng, candidates.len())] as usize);
            }
        }
        None
    }

    /// Breadth-first expansion from `v`, then a pick among the open checks
    /// outside the explored neighbourhood, or among those reached last if
    /// every open check is reachable.
    fn pick_far(&mut self, v: usize, budget: usize, rng: &mut Rng) -> Option<usize> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.check_mark.iter_mut().for_each(|x| *x = 0);
            self.var_mark.iter_mut().for_each(|x| *x = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.var_mark[v] = stamp;
        let mut frontier: Vec<u32> = self.var_adj[v].clone();
        let mut reached_open = 0;
        for &c in &frontier {
            self.check_mark[c as usize] = stamp;
            self.check_level[c as usize] = 0;
            reached_open += usize::from(self.spare[c as usize] > 0);
        }
        if reached_open == self.open {
            return None;
        }
        let mut reached = frontier.len();
        let mut level = 0u32;
        let mut next = Vec::new();
        loop {
            if reached >= budget {
                let marks = &self.check_mark;
                return self.pick(rng, |c| marks[c] != stamp);
            }
            next.clear();
            let mut new_open = 0;
            for &c in &frontier {
                for &u in &self.check_adj[c as usize] {
                    if self.var_mark[u as usize] == stamp {
                        continue;
                    }
                    self.var_mark[u as usize] = stamp;
                    for &c2 in &self.var_adj[u as usize] {
                        if self.check_mark[c2 as usize] != stamp {
                            self.check_mark[c2 as usize] = stamp;
                            self.check_level[c2 as usize] = level + 1;
                            new_open += usize::from(self.spare[c2 as usize] > 0);
                            next.push(c2);
                        }
                    }
                }
            }
            if next.is_empty() {
                let marks = &self.check_mark;
                return self.pick(rng, |c| marks[c] != stamp);
            }
            if reached_open + new_open == self.open {
                let (levels, marks) = (&self.check_level, &self.check_mark);
                let newest = level + 1;
                return self.pick(rng, |c| marks[c] == stamp && levels[c] == newest);
            }
            reached += next.len();
            reached_open += new_open;
            level += 1;
            core::mem::swap(&mut frontier, &mut next);
        }
    }

    /// A check of `v` other than `except` that shares a variable other than
    /// `v` with check `c`, i.e. whether edge `v–c` closes a 4-cycle.
    fn closes_four_cycle(&self, v: usize, c: usize, except: usize, skip: usize) -> bool {
        self.var_adj[v].iter().any(|&c2| {
            let c2 = c2 as usize;
            c2 != except
                && c2 != c
                && self.check_adj[c2].iter().any(|&u| {
                    let u = u as usize;
                    u != v && u != skip && self.check_adj[c].contains(&(u as u32))
                })
        })
    }

    /// First check of `v` lying on a 4-cycle.
    fn four_cycle_edge(&self, v: usize) -> Option<usize> {
        let checks = &self.var_adj[v];
        for (a, &c1) in checks.iter().enumerate() {
            for &c2 in &checks[a + 1..] {
                let shared = self.check_adj[c1 as usize]
                    .iter()
                    .any(|&u| u as usize != v && self.check_adj[c2 as usize].contains(&u));
                if shared {
                    return Some(c1 as usize);
                }
            }
        }
        None
    }

    /// Degree-preserving edge swaps that remove 4-cycles the greedy pass
    /// could not avoid near the end. A swap is only made if it closes no
    /// new 4-cycle.
    fn break_four_cycles(&mut self, rng: &mut Rng) {
        const ATTEMPTS: usize = 2000;
        let n = self.var_adj.len();
        for v in 0..n {
            while let Some(c) = self.four_cycle_edge(v) {
                let mut swapped = false;
                for _ in 0..ATTEMPTS {
                    let w = rng::index(rng, n);
                    if w == v || self.var_adj[w].is_empty() {
                        continue;
                    }
                    let d = self.var_adj[w][rng::index(rng, self.var_adj[w].len())] as usize;
                    if d == c
                        || self.var_adj[v].contains(&(d as u32))
                        || self.var_adj[w].contains(&(c as u32))
                        || self.closes_four_cycle(v, d, c, w)
                        || self.closes_four_cycle(w, c, d, v)
                    {
                        continue;
                    }
                    self.swap_edges(v, c, w, d);
                    swapped = true;
                    break;
                }
                if !swapped {
                    break;
                }
            }
        }
    }

    /// Replaces edges `v–c`, `w–d` with `v–d`, `w–c`.
    fn swap_edges(&mut self, v: usize, c: usize, w: usize, d: usize) {
        let replace = |list: &mut Vec<u32>, old: usize, new: usize| {
            if let Some(slot) = list.iter_mut().find(|x| **x as usize == old) {
                *slot = new as u32;
            }
        };
        replace(&mut self.var_adj[v], c, d);
        replace(&mut self.var_adj[w], d, c);
        replace(&mut self.check_adj[c], v, w);
        replace(&mut self.check_adj[d], w, v);
    }

    /// Any check not yet adjacent to `v`, preferring the least loaded.
    fn fallback(&self, v: usize) -> Option<usize> {
        let adj = &self.var_adj[v];
        (0..self.check_adj.len())
            .filter(|&c| !adj.contains(&(c as u32)))
            .max_by_key(|&c| (self.spare[c], usize::MAX - self.check_adj[c].len(), usize::MAX - c))
    }
}
