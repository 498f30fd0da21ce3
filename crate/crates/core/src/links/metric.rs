use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};

use super::{LinkError, SphericalComplex};

/// Default tolerance of the refinement metric, in radians.
pub const EPS_LINK: f64 = 0.01;

/// A point of an all-right spherical complex: nonnegative unit weights on
/// the vertices of its carrier simplex, ascending by vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkPoint {
    weights: Vec<(usize, f64)>,
}

impl LinkPoint {
    pub fn vertex(u: usize) -> Self {
        LinkPoint { weights: vec![(u, 1.0)] }
    }

    /// Normalises the given weights; zero weights are dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (usize, f64)>) -> Result<Self, LinkError> {
        let mut w: Vec<(usize, f64)> = weights.into_iter().filter(|p| p.1 != 0.0).collect();
        if w.iter().any(|p| !(p.1 > 0.0 && p.1.is_finite())) {
            return Err(LinkError::BadPoint("weights must be nonnegative and finite".into()));
        }
        w.sort_by_key(|p| p.0);
        if w.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(LinkError::BadPoint("repeated vertex".into()));
        }
        let norm = w.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(LinkError::BadPoint("empty support".into()));
        }
        Ok(LinkPoint { weights: w.into_iter().map(|(u, x)| (u, x / norm)).collect() })
    }

    /// The point of the simplex equidistant from its vertices.
    pub fn barycenter(verts: &[usize]) -> Self {
        Self::from_weights(verts.iter().map(|&u| (u, 1.0))).expect("nonempty simplex")
    }

    pub fn weights(&self) -> &[(usize, f64)] {
        &self.weights
    }

    pub fn weight(&self, u: usize) -> f64 {
        self.weights.iter().find(|p| p.0 == u).map_or(0.0, |p| p.1)
    }

    /// Vertices of the open simplex containing the point.
    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().map(|p| p.0).collect()
    }

    pub fn is_vertex(&self) -> Option<usize> {
        (self.weights.len() == 1).then(|| self.weights[0].0)
    }

    /// Cosine of the angle to `other`, valid when both lie in one simplex.
    pub fn dot(&self, other: &LinkPoint) -> f64 {
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < self.weights.len() && j < other.weights.len() {
            match self.weights[i].0.cmp(&other.weights[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    s += self.weights[i].1 * other.weights[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }

    /// Spherical distance to `other` inside a common simplex.
    pub fn angle(&self, other: &LinkPoint) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

/// A point of the Euclidean cone over a link.
#[derive(Clone, Debug, PartialEq)]
pub struct ConePoint {
    pub radius: f64,
    pub direction: LinkPoint,
}

/// Length metric of an all-right spherical complex.
///
/// Distances between vertices are exact up to the cap at `pi`: equal
/// vertices are at 0, adjacent ones at `pi/2`, and any other pair at least
/// `pi`. Other pairs are measured in a refinement graph whose nodes are a
/// lattice on the proper faces of every maximal simplex and whose edges are
/// straight arcs inside a simplex. The graph distance is the length of an
/// actual path, so it never underestimates; on one-dimensional complexes it
/// is exact.
pub struct LinkMetric<'a> {
    link: &'a SphericalComplex,
    tops: Vec<Vec<usize>>,
    nodes: Vec<LinkPoint>,
    node_tops: Vec<Vec<usize>>,
    top_nodes: Vec<Vec<usize>>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

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

/// Lattice subdivisions per edge, by dimension of the maximal simplex.
fn resolution(dim: usize) -> usize {
    match dim {
        0..=2 => 32,
        3 => 10,
        _ => 6,
    }
}

/// Compositions of `n` into `parts` positive parts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<'a> LinkMetric<'a> {
    pub fn new(link: &'a SphericalComplex) -> Self {
        let tops: Vec<Vec<usize>> = link.maximal_cells().into_iter().map(|c| link.cells[c].verts.clone()).collect();
        let mut key_to_node: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut top_nodes = vec![Vec::new(); tops.len()];
        for (t, top) in tops.iter().enumerate() {
            let m = top.len();
            let n = resolution(m - 1);
            let proper = if m == 1 { 1 } else { m - 1 };
            for mask in 1usize..(1 << m) {
                let face: Vec<usize> = (0..m).filter(|i| (mask >> i) & 1 == 1).map(|i| top[i]).collect();
                if face.len() > proper {
                    continue;
                }
                let parts = if face.len() == 1 { vec![vec![n]] } else { compositions(n, face.len()) };
                for comp in parts {
                    let g = comp.iter().fold(0, |a, &b| gcd(a, b));
                    let key: Vec<(usize, usize)> = face.iter().zip(&comp).map(|(&u, &c)| (u, c / g)).collect();
                    let id = *key_to_node.entry(key.clone()).or_insert_with(|| {
                        nodes.push(LinkPoint::from_weights(key.iter().map(|&(u, c)| (u, c as f64))).expect("positive"));
                        nodes.len() - 1
                    });
                    top_nodes[t].push(id);
                }
            }
        }
        let mut node_tops = vec![Vec::new(); nodes.len()];
        for (t, ns) in top_nodes.iter_mut().enumerate() {
            ns.sort_unstable();
            ns.dedup();
            for &x in ns.iter() {
                node_tops[x].push(t);
            }
        }
        LinkMetric { link, tops, nodes, node_tops, top_nodes }
    }

    pub fn link(&self) -> &SphericalComplex {
        self.link
    }

    fn check(&self, p: &LinkPoint) -> Result<(), LinkError> {
        if self.link.is_simplex(&p.support()) {
            Ok(())
        } else {
            Err(LinkError::BadPoint(format!("support {:?} is not a simplex", p.support())))
        }
    }

    fn tops_containing(&self, support: &[usize]) -> Vec<usize> {
        (0..self.tops.len()).filter(|&t| support.iter().all(|u| self.tops[t].binary_search(u).is_ok())).collect()
    }

    /// Length-metric distance; values `>= pi` carry only the information
    /// that the distance is at least `pi`.
    pub fn distance(&self, a: &LinkPoint, b: &LinkPoint) -> Result<f64, LinkError> {
        self.check(a)?;
        self.check(b)?;
        if let (Some(u), Some(w)) = (a.is_vertex(), b.is_vertex()) {
            if u == w {
                return Ok(0.0);
            }
            if self.link.adjacent(u, w) {
                return Ok(FRAC_PI_2);
            }
            return Ok(self.graph_distance(a, b).max(PI));
        }
        Ok(self.graph_distance(a, b))
    }

    /// `min(distance, pi)`.
    pub fn distance_capped(&self, a: &LinkPoint, b: &LinkPoint) -> Result<f64, LinkError> {
        Ok(self.distance(a, b)?.min(PI))
    }

    /// Distance from `a` to the nearest refinement node lying in `k`, a
    /// subcomplex on the same directions. Zero when `a` is in `k`.
    pub fn distance_to(&self, a: &LinkPoint, k: &SphericalComplex) -> Result<f64, LinkError> {
        self.check(a)?;
        if k.is_simplex(&a.support()) {
            return Ok(0.0);
        }
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        for t in self.tops_containing(&a.support()) {
            for &x in &self.top_nodes[t] {
                let d = a.angle(&self.nodes[x]);
                if d < dist[x] {
                    dist[x] = d;
                    heap.push(Entry(d, x));
                }
            }
        }
        while let Some(Entry(d, x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            if k.is_simplex(&self.nodes[x].support()) {
                return Ok(d);
            }
            for &t in &self.node_tops[x] {
                for &y in &self.top_nodes[t] {
                    let nd = d + self.nodes[x].angle(&self.nodes[y]);
                    if nd < dist[y] {
                        dist[y] = nd;
                        heap.push(Entry(nd, y));
                    }
                }
            }
        }
        Ok(f64::INFINITY)
    }

    fn graph_distance(&self, a: &LinkPoint, b: &LinkPoint) -> f64 {
        let mut joint = a.support();
        joint.extend(b.support());
        joint.sort_unstable();
        joint.dedup();
        let mut best = if self.link.is_simplex(&joint) { a.angle(b) } else { f64::INFINITY };
        let b_tops = self.tops_containing(&b.support());
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut heap = BinaryHeap::new();
        for t in self.tops_containing(&a.support()) {
            for &x in &self.top_nodes[t] {
                let d = a.angle(&self.nodes[x]);
                if d < dist[x] {
                    dist[x] = d;
                    heap.push(Entry(d, x));
                }
            }
        }
        while let Some(Entry(d, x)) = heap.pop() {
            if d > dist[x] {
                continue;
            }
            if d >= best {
                break;
            }
            if self.node_tops[x].iter().any(|t| b_tops.contains(t)) {
                best = best.min(d + self.nodes[x].angle(b));
            }
            for &t in &self.node_tops[x] {
                for &y in &self.top_nodes[t] {
                    let nd = d + self.nodes[x].angle(&self.nodes[y]);
                    if nd < dist[y] {
                        dist[y] = nd;
                        heap.push(Entry(nd, y));
                    }
                }
            }
        }
        best
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Distance in the Euclidean cone: `t^2 + t'^2 - 2 t t' cos(min(d, pi))`.
pub fn cone_distance(t: f64, y: &LinkPoint, t2: f64, y2: &LinkPoint, metric: &LinkMetric) -> Result<f64, LinkError> {
    if t == 0.0 || t2 == 0.0 {
        return Ok(t.max(t2));
    }
    let d = metric.distance_capped(y, y2)?;
    Ok(cone_formula(t, t2, d))
}

pub(crate) fn cone_formula(t: f64, t2: f64, d: f64) -> f64 {
    (t * t + t2 * t2 - 2.0 * t * t2 * d.min(PI).cos()).max(0.0).sqrt()
}
