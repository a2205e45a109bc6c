use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::domain::BitString;
use crate::{Error, Result};

/// An `m × n` binary sparse matrix, stored as check-major and
/// variable-major adjacency lists of its Tanner graph.
///
/// Edges are numbered in check-major order; `variable_edges(i)` gives the
/// edge ids incident to variable `i`, in the same order as `variable(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityMatrix {
    n: usize,
    check_ptr: Vec<usize>,
    check_vars: Vec<usize>,
    var_ptr: Vec<usize>,
    var_checks: Vec<usize>,
    var_edges: Vec<usize>,
}

impl SparseParityMatrix {
    /// Builds a matrix from its rows. Rows are sorted; duplicate entries,
    /// empty rows or columns, out-of-range indices and `m >= n` are rejected.
    pub fn from_checks(n: usize, mut checks: Vec<Vec<usize>>) -> Result<Self> {
        let m = checks.len();
        if m == 0 || m >= n {
            return Err(Error::InvalidMatrix(format!(
                "need 0 < m < n, got m = {m}, n = {n}"
            )));
        }
        let mut check_ptr = Vec::with_capacity(m + 1);
        check_ptr.push(0);
        let mut var_degree = vec![0usize; n];
        for (j, row) in checks.iter_mut().enumerate() {
            if row.is_empty() {
                return Err(Error::InvalidMatrix(format!("check {j} is empty")));
            }
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidMatrix(format!(
                        "check {j} lists variable {} twice",
                        w[0]
                    )));
                }
            }
            if let Some(&last) = row.last() {
                if last >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "check {j} references variable {last} >= n = {n}"
                    )));
                }
            }
            for &i in row.iter() {
                var_degree[i] += 1;
            }
            check_ptr.push(check_ptr[j] + row.len());
        }
        if let Some(i) = var_degree.iter().position(|&d| d == 0) {
            return Err(Error::InvalidMatrix(format!(
                "variable {i} is in no check"
            )));
        }
        let check_vars: Vec<usize> = checks.into_iter().flatten().collect();

        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for i in 0..n {
            var_ptr.push(var_ptr[i] + var_degree[i]);
        }
        let edges = check_vars.len();
        let mut fill = var_ptr[..n].to_vec();
        let mut var_checks = vec![0usize; edges];
        let mut var_edges = vec![0usize; edges];
        for j in 0..m {
            let range = check_ptr[j]..check_ptr[j + 1];
            for (e, &i) in range.clone().zip(&check_vars[range]) {
                var_checks[fill[i]] = j;
                var_edges[fill[i]] = e;
                fill[i] += 1;
            }
        }
        Ok(SparseParityMatrix {
            n,
            check_ptr,
            check_vars,
            var_ptr,
            var_checks,
            var_edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.check_vars.len()
    }

    /// Compression rate `m / n`.
    pub fn rate(&self) -> f64 {
        self.m() as f64 / self.n as f64
    }

    /// Variables in check `j`, ascending.
    pub fn check(&self, j: usize) -> &[usize] {
        &self.check_vars[self.check_ptr[j]..self.check_ptr[j + 1]]
    }

    /// Checks containing variable `i`, ascending.
    pub fn variable(&self, i: usize) -> &[usize] {
        &self.var_checks[self.var_ptr[i]..self.var_ptr[i + 1]]
    }

    pub(crate) fn check_edge_range(&self, j: usize) -> core::ops::Range<usize> {
        self.check_ptr[j]..self.check_ptr[j + 1]
    }

    #[cfg(test)]
    pub(crate) fn edge_variable(&self, e: usize) -> usize {
        self.check_vars[e]
    }

    pub(crate) fn variable_edges(&self, i: usize) -> &[usize] {
        &self.var_edges[self.var_ptr[i]..self.var_ptr[i + 1]]
    }

    pub fn checks(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.m()).map(move |j| self.check(j))
    }

    pub fn variables(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.n).map(move |i| self.variable(i))
    }

    pub fn max_check_degree(&self) -> usize {
        self.checks().map(<[usize]>::len).max().unwrap_or(0)
    }

    pub fn max_variable_degree(&self) -> usize {
        self.variables().map(<[usize]>::len).max().unwrap_or(0)
    }

    /// `M x` over GF(2).
    pub fn syndrome(&self, x: &[u8]) -> Result<Syndrome> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "syndrome input",
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(Syndrome(
            self.checks()
                .map(|row| row.iter().fold(0u8, |acc, &i| acc ^ x[i]))
                .collect(),
        ))
    }

    /// True when `M x = s`; used for early stopping and re-verification.
    pub fn satisfies(&self, x: &[u8], s: &Syndrome) -> bool {
        x.len() == self.n
            && s.len() == self.m()
            && self
                .checks()
                .zip(s.iter())
                .all(|(row, &sj)| row.iter().fold(0u8, |acc, &i| acc ^ x[i]) == sj)
    }

    /// Length of the shortest cycle in the Tanner graph, `None` if acyclic.
    pub fn girth(&self) -> Option<usize> {
        // Node ids: variables 0..n, checks n..n+m.
        let total = self.n + self.m();
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        let mut best = usize::MAX;
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                let neighbors: &[usize] = if u < self.n {
                    self.variable(u)
                } else {
                    self.check(u - self.n)
                };
                for &w in neighbors {
                    let w = if u < self.n { w + self.n } else { w };
                    if w == parent[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }
}

/// The syndrome `M x`, the one-way message of the reconciliation scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome(Vec<u8>);

impl Syndrome {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(Error::InvalidBit { index, value });
        }
        Ok(Syndrome(bits))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }
}

impl core::ops::Deref for Syndrome {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

/// `M x` for a validated bit string.
pub fn syndrome(matrix: &SparseParityMatrix, x: &BitString) -> Result<Syndrome> {
    matrix.syndrome(x)
}
