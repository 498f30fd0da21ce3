use std::collections::VecDeque;

use serde::Serialize;

use super::Witness;
use crate::complex::CubicalComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MedianFailure {
    Triple { triple: [usize; 3], medians: Vec<usize> },
    FourCycle { cycle: [usize; 4] },
}

impl MedianFailure {
    pub fn into_witness(self) -> Witness {
        match self {
            MedianFailure::Triple { triple, medians } => Witness::MedianTriple { triple, medians },
            MedianFailure::FourCycle { cycle } => Witness::UnfilledFourCycle { cycle },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MedianReport {
    pub vertices: usize,
    pub triples_checked: u64,
    pub four_cycles_checked: u64,
    pub failure: Option<MedianFailure>,
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w] == u32::MAX {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// Median-graph test of the 1-skeleton of a connected complex, followed by
/// the check that every 4-cycle spans a square. Stops at the first failure
/// in lexicographic order.
pub fn median_report(x: &CubicalComplex) -> MedianReport {
    let n = x.vertex_count();
    let adj = x.adjacency();
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs(&adj, s)).collect();
    let words = n.div_ceil(64);
    let pair = |u: usize, v: usize| u * n + v;
    let mut interval = vec![0u64; n * n * words];
    for u in 0..n {
        for v in u..n {
            let base = pair(u, v) * words;
            for m in 0..n {
                if dist[u][m] + dist[m][v] == dist[u][v] {
                    interval[base + m / 64] |= 1 << (m % 64);
                }
            }
        }
    }
    let row = |u: usize, v: usize| {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        &interval[pair(a, b) * words..pair(a, b) * words + words]
    };

    let mut report = MedianReport { vertices: n, triples_checked: 0, four_cycles_checked: 0, failure: None };
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                report.triples_checked += 1;
                let (a, b, c) = (row(u, v), row(v, w), row(u, w));
                let count: u32 = (0..words).map(|i| (a[i] & b[i] & c[i]).count_ones()).sum();
                if count != 1 {
                    let medians =
                        (0..n).filter(|&m| (a[m / 64] & b[m / 64] & c[m / 64]) >> (m % 64) & 1 == 1).collect();
                    report.failure = Some(MedianFailure::Triple { triple: [u, v, w], medians });
                    return report;
                }
            }
        }
    }

    for a in 0..n {
        for (i, &b) in adj[a].iter().enumerate() {
            for &c in &adj[a][i + 1..] {
                if b < a || c < a {
                    continue;
                }
                for &d in &adj[b] {
                    if d <= a || adj[c].binary_search(&d).is_err() {
                        continue;
                    }
                    report.four_cycles_checked += 1;
                    if x.cube_by_vertices(&[a, b, c, d]).is_none() {
                        report.failure = Some(MedianFailure::FourCycle { cycle: [a, b, d, c] });
                        return report;
                    }
                }
            }
        }
    }
    report
}
