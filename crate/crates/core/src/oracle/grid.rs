use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::OracleError;
use crate::complex::{AmbientPoint, CellComplex, PolyPath};

/// Default upper bound on grid nodes.
pub const DEFAULT_NODE_CAP: usize = 3_000_000;

/// Lattice graph of pitch `1/m` on every cube, with the full `3^k - 1`
/// stencil inside each cube. Lattice points on shared faces are one node.
pub struct GridGraph<'a> {
    cx: &'a CellComplex,
    m: usize,
    scale: f64,
    offsets: Vec<usize>,
    /// CSR adjacency.
    starts: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Single-source shortest paths on a grid.
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<f64>,
    pred: Vec<u32>,
}

impl ShortestPaths {
    /// Node sequence from the source to `target`.
    pub fn nodes_to(&self, target: usize) -> Option<Vec<usize>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut out = vec![target];
        let mut x = target;
        while x != self.source {
            x = self.pred[x] as usize;
            out.push(x);
        }
        out.reverse();
        Some(out)
    }
}

/// Nearest node to a point, with the Euclidean snapping distance.
#[derive(Clone, Debug)]
pub struct Snap {
    pub node: usize,
    pub cube: usize,
    pub distance: f64,
}

fn pitch_steps(h: f64) -> Result<usize, OracleError> {
    let m = (1.0 / h).round();
    if !(m >= 1.0 && ((1.0 / h) - m).abs() < 1e-9) {
        return Err(OracleError::BadPitch(h));
    }
    Ok(m as usize)
}

impl<'a> GridGraph<'a> {
    /// Grid of pitch `h` on unit cubes.
    pub fn build(cx: &'a CellComplex, h: f64) -> Result<Self, OracleError> {
        Self::build_scaled(cx, h, 1.0, DEFAULT_NODE_CAP)
    }

    /// Grid on cubes of side `scale`, with pitch `h` in the same units.
    pub fn build_scaled(cx: &'a CellComplex, h: f64, scale: f64, cap: usize) -> Result<Self, OracleError> {
        let m = pitch_steps(h / scale)?;
        if cx.max_dim() > 3 {
            log::warn!("oracle stencil dilation is not calibrated above dimension 3");
        }
        let mut offsets = Vec::with_capacity(cx.len() + 1);
        let mut total = 0usize;
        for c in 0..cx.len() {
            offsets.push(total);
            total = total.saturating_add((m - 1).saturating_pow(cx.dim(c) as u32));
            if total > cap {
                return Err(OracleError::TooFine { nodes: total, cap });
            }
        }
        offsets.push(total);
        let mut g = GridGraph { cx, m, scale, offsets, starts: Vec::new(), targets: Vec::new(), weights: Vec::new() };

        let mut edges: Vec<(u32, u32, f64)> = Vec::new();
        let step = scale / m as f64;
        for cube in cx.maximal_cells() {
            let k = cx.dim(cube);
            let side = m + 1;
            let count = side.pow(k as u32);
            let local: Vec<u32> = (0..count).map(|i| g.local_node(cube, &digits(i, side, k)) as u32).collect();
            let deltas = stencil(k);
            for i in 0..count {
                let z = digits(i, side, k);
                'd: for d in &deltas {
                    let mut j = 0;
                    let mut mul = 1;
                    for r in 0..k {
                        let y = z[r] as isize + d[r];
                        if y < 0 || y > m as isize {
                            continue 'd;
                        }
                        j += y as usize * mul;
                        mul *= side;
                    }
                    let (a, b) = (local[i], local[j]);
                    let w = step * (d.iter().filter(|&&x| x != 0).count() as f64).sqrt();
                    edges.push(if a < b { (a, b, w) } else { (b, a, w) });
                }
            }
        }
        edges.sort_unstable_by_key(|x| (x.0, x.1));
        edges.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);

        let mut deg = vec![0usize; total + 1];
        for &(a, b, _) in &edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut starts = Vec::with_capacity(total + 1);
        let mut acc = 0;
        for d in &deg[..total] {
            starts.push(acc);
            acc += d;
        }
        starts.push(acc);
        let mut fill = starts.clone();
        let mut targets = vec![0u32; acc];
        let mut weights = vec![0f64; acc];
        for &(a, b, w) in &edges {
            for (p, q) in [(a, b), (b, a)] {
                let slot = fill[p as usize];
                targets[slot] = q;
                weights[slot] = w;
                fill[p as usize] += 1;
            }
        }
        g.starts = starts;
        g.targets = targets;
        g.weights = weights;
        Ok(g)
    }

    pub fn complex(&self) -> &'a CellComplex {
        self.cx
    }

    pub fn steps(&self) -> usize {
        self.m
    }

    pub fn pitch(&self) -> f64 {
        self.scale / self.m as f64
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn node_count(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.starts[node]..self.starts[node + 1]).map(|s| (self.targets[s] as usize, self.weights[s]))
    }

    /// Node of the lattice point `z` (integer coordinates in `0..=m`) of `cube`.
    fn local_node(&self, cube: usize, z: &[usize]) -> usize {
        let m = self.m;
        let pattern: Vec<Option<u8>> = z
            .iter()
            .map(|&x| {
                if x == 0 {
                    Some(0)
                } else if x == m {
                    Some(1)
                } else {
                    None
                }
            })
            .collect();
        let e = self.cx.face_by_pattern(cube, &pattern);
        let mut q = vec![0usize; e.dim()];
        let free = z.iter().zip(&pattern).filter(|(_, p)| p.is_none()).map(|(x, _)| *x);
        for (x, &(r, f)) in free.zip(&e.frame) {
            q[r] = if f { m - x } else { x };
        }
        let mut idx = 0;
        for &x in q.iter().rev() {
            idx = idx * (m - 1) + (x - 1);
        }
        self.offsets[e.cell] + idx
    }

    /// The point a node stands for, in canonical form.
    pub fn node_point(&self, node: usize) -> AmbientPoint {
        let cell = self.offsets.partition_point(|&o| o <= node) - 1;
        let k = self.cx.dim(cell);
        let mut idx = node - self.offsets[cell];
        let coords = (0..k)
            .map(|_| {
                let x = idx % (self.m - 1) + 1;
                idx /= self.m - 1;
                x as f64 / self.m as f64
            })
            .collect();
        AmbientPoint::new(cell, coords)
    }

    /// Rounds a point to the lattice of a maximal cube containing it.
    pub fn snap(&self, p: &AmbientPoint) -> Result<Snap, OracleError> {
        let p = self.cx.canonicalize(p)?;
        let cube = *self.cx.star(p.cell).iter().filter(|&&c| self.cx.star(c).len() == 1).min().expect("a maximal cube");
        let y = self.cx.embed(&p, cube).expect("cube contains point");
        let z: Vec<usize> = y.iter().map(|&t| (t * self.m as f64).round() as usize).collect();
        let d = y.iter().zip(&z).map(|(&t, &q)| (t - q as f64 / self.m as f64).powi(2)).sum::<f64>().sqrt();
        Ok(Snap { node: self.local_node(cube, &z), cube, distance: d * self.scale })
    }

    /// Dijkstra from `source`, stopping once every node of `targets` is settled.
    pub fn shortest_paths(&self, source: usize, targets: &[usize]) -> ShortestPaths {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![u32::MAX; n];
        let mut settled = vec![false; n];
        let mut remaining = targets.len();
        let mut want = vec![false; n];
        for &t in targets {
            if !want[t] {
                want[t] = true;
            } else {
                remaining -= 1;
            }
        }
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Entry(0.0, source as u32)]);
        while let Some(Entry(d, x)) = heap.pop() {
            let x = x as usize;
            if settled[x] {
                continue;
            }
            settled[x] = true;
            if want[x] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for (y, w) in self.neighbors(x) {
                let nd = d + w;
                if nd < dist[y] {
                    dist[y] = nd;
                    pred[y] = x as u32;
                    heap.push(Entry(nd, y as u32));
                }
            }
        }
        ShortestPaths { source, dist, pred }
    }

    /// A path through consecutive nodes, each segment in a common cube.
    pub fn node_path(&self, nodes: &[usize]) -> PolyPath {
        let points: Vec<AmbientPoint> = nodes.iter().map(|&x| self.node_point(x)).collect();
        let segment_cubes = points.windows(2).map(|w| smallest_common_cube(self.cx, &w[0], &w[1])).collect();
        PolyPath { points, segment_cubes }
    }
}

/// Lowest-dimensional cube containing both points.
pub(crate) fn smallest_common_cube(cx: &CellComplex, a: &AmbientPoint, b: &AmbientPoint) -> usize {
    cx.common_cubes(a, b).into_iter().min_by_key(|&c| cx.dim(c)).expect("points share a cube")
}

fn digits(mut i: usize, side: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = i % side;
            i /= side;
            d
        })
        .collect()
}

/// Half of the `3^k - 1` neighbourhood: offsets whose first nonzero entry is positive.
fn stencil(k: usize) -> Vec<Vec<isize>> {
    (0..3usize.pow(k as u32))
        .map(|i| digits(i, 3, k).into_iter().map(|d| d as isize - 1).collect::<Vec<_>>())
        .filter(|d| d.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect()
}
