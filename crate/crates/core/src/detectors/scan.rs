use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{uniform_subset, Graph};
use crate::randkit::{choose2, choose_u128, Seed};

/// Default cap on the number of `K`-subsets an exact scan may enumerate.
pub const DEFAULT_SCAN_BUDGET: u64 = 10_000_000;

/// A `K`-subset together with its internal edge count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub value: u64,
    /// Sorted vertex set attaining `value`.
    pub set: Vec<usize>,
}

/// How the scan statistic is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanMode {
    Exact { budget: u64 },
    Heuristic { restarts: usize },
}

impl ScanMode {
    pub fn exact() -> Self {
        ScanMode::Exact {
            budget: DEFAULT_SCAN_BUDGET,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScanMode::Exact { .. } => "exact",
            ScanMode::Heuristic { .. } => "heuristic",
        }
    }

    pub fn run(&self, g: &Graph, k: usize, seed: Seed) -> Result<ScanResult> {
        match *self {
            ScanMode::Exact { budget } => t_scan_exact(g, k, budget),
            ScanMode::Heuristic { restarts } => Ok(t_scan_heuristic(g, k, restarts, seed)),
        }
    }
}

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k > g.num_vertices() {
        return Err(Error::params(format!(
            "scan size K={k} exceeds vertex count {}",
            g.num_vertices()
        )));
    }
    Ok(())
}

/// Maximum internal edge count over all `K`-subsets, by exhaustive
/// enumeration. Ties resolve to the lexicographically smallest subset.
pub fn t_scan_exact(g: &Graph, k: usize, budget: u64) -> Result<ScanResult> {
    check_k(g, k)?;
    let n = g.num_vertices();
    let subsets = choose_u128(n as u64, k as u64);
    if subsets > budget as u128 {
        return Err(Error::BudgetExceeded { subsets, budget });
    }
    if k <= 1 {
        return Ok(ScanResult {
            value: 0,
            set: (0..k).collect(),
        });
    }
    if k == 2 {
        // Avoid the O(N^2) bitset for the many-vertex, tiny-K case.
        return Ok(match g.edges().next() {
            Some((u, v)) => ScanResult { value: 1, set: vec![u, v] },
            None => ScanResult { value: 0, set: vec![0, 1] },
        });
    }

    let (words, rows) = g.bit_rows();
    let mut search = ExactSearch {
        n,
        k,
        words,
        rows: &rows,
        chosen: vec![0u64; words],
        stack: Vec::with_capacity(k),
        best: 0,
        best_set: None,
        cap: choose2(k as u64),
    };
    search.dfs(0, 0);
    Ok(ScanResult {
        value: search.best,
        set: search.best_set.expect("at least one subset is visited"),
    })
}

struct ExactSearch<'a> {
    n: usize,
    k: usize,
    words: usize,
    rows: &'a [u64],
    chosen: Vec<u64>,
    stack: Vec<usize>,
    best: u64,
    best_set: Option<Vec<usize>>,
    cap: u64,
}

impl ExactSearch<'_> {
    fn dfs(&mut self, start: usize, current: u64) {
        let depth = self.stack.len();
        if depth == self.k {
            if self.best_set.is_none() || current > self.best {
                self.best = current;
                self.best_set = Some(self.stack.clone());
            }
            return;
        }
        // Remaining pairs bound the gain; only a strict improvement can
        // replace the lexicographically earlier incumbent.
        if self.best_set.is_some() && current + self.cap - choose2(depth as u64) <= self.best {
            return;
        }
        for v in start..=self.n - (self.k - depth) {
            let row = &self.rows[v * self.words..(v + 1) * self.words];
            let added: u64 = row
                .iter()
                .zip(&self.chosen)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            self.chosen[v >> 6] |= 1 << (v & 63);
            self.stack.push(v);
            self.dfs(v + 1, current + added);
            self.stack.pop();
            self.chosen[v >> 6] &= !(1 << (v & 63));
            if self.best == self.cap {
                return;
            }
        }
    }
}

/// Best-of-restarts 1-swap hill climbing for the densest `K`-subset.
///
/// Restart `r` starts from a uniform `K`-subset drawn from stream `r` of
/// `seed` and repeatedly applies the best improving swap until none
/// exists. The result is a real subset, so its value never exceeds the
/// exact scan statistic.
pub fn t_scan_heuristic(g: &Graph, k: usize, restarts: usize, seed: Seed) -> ScanResult {
    let n = g.num_vertices();
    assert!(k <= n, "scan size K={k} exceeds vertex count {n}");
    let mut best: Option<ScanResult> = None;
    for r in 0..restarts.max(1) {
        let start = uniform_subset(n, k, &mut seed.derive(r as u64).rng());
        let found = hill_climb(g, start);
        if best.as_ref().map_or(true, |b| found.value > b.value) {
            best = Some(found);
        }
    }
    best.unwrap()
}

fn hill_climb(g: &Graph, start: Vec<usize>) -> ScanResult {
    let n = g.num_vertices();
    let mut in_set = vec![false; n];
    for &v in &start {
        in_set[v] = true;
    }
    // Neighbours of each vertex inside the current set.
    let mut inner = vec![0i64; n];
    for &v in &start {
        for &w in g.neighbors(v) {
            inner[w as usize] += 1;
        }
    }
    let mut value: i64 = start.iter().map(|&v| inner[v]).sum::<i64>() / 2;
    let mut members = start;
    let mut outside: Vec<usize> = (0..n).filter(|&v| !in_set[v]).collect();

    loop {
        members.sort_by_key(|&v| (inner[v], v));
        outside.sort_by_key(|&v| (-inner[v], v));
        let mut best_gain = 0i64;
        let mut best_swap = None;
        for (mi, &u) in members.iter().enumerate() {
            if outside.first().map_or(true, |&w| inner[w] - inner[u] <= best_gain) {
                break;
            }
            for (oi, &w) in outside.iter().enumerate() {
                let bound = inner[w] - inner[u];
                if bound <= best_gain {
                    break;
                }
                let gain = bound - g.has_edge(u, w) as i64;
                if gain > best_gain {
                    best_gain = gain;
                    best_swap = Some((mi, oi));
                }
            }
        }
        let Some((mi, oi)) = best_swap else { break };
        let (u, w) = (members[mi], outside[oi]);
        for &x in g.neighbors(u) {
            inner[x as usize] -= 1;
        }
        for &x in g.neighbors(w) {
            inner[x as usize] += 1;
        }
        members[mi] = w;
        outside[oi] = u;
        value += best_gain;
    }
    members.sort_unstable();
    ScanResult {
        value: value as u64,
        set: members,
    }
}
