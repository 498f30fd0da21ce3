//! Numerical approximation of the length metric by shortest paths in a
//! lattice graph, followed by local shortening.

mod cone;
mod grid;
mod straighten;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{AmbientPoint, CellComplex, ComplexError, PolyPath, Subcomplex};
use crate::links::LinkError;

pub use cone::{
    ball_cone_isometry_test, cone_point_in, random_cone_points, tangent_cone_escape, ConeEscape, ConeReport, StarModel,
};
pub use grid::{GridGraph, ShortestPaths, Snap, DEFAULT_NODE_CAP};
pub use straighten::straighten;

/// Worst-case length ratio of a stencil path to the straight segment
/// inside a `dim`-cube. The stencil length along a direction with sorted
/// absolute components `v` is `l . v` with `l_i = sqrt(i) - sqrt(i - 1)`,
/// so the ratio peaks at `|l|`.
pub fn stencil_dilation(dim: usize) -> f64 {
    (1..=dim.max(1)).map(|i| ((i as f64).sqrt() - ((i - 1) as f64).sqrt()).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid would have {nodes} nodes, above the cap {cap}")]
    TooFine { nodes: usize, cap: usize },
    #[error("pitch {0} is not 1/m for an integer m")]
    BadPitch(f64),
    #[error("points lie in different components")]
    Unreachable,
    #[error("the ambient complex is not CAT(0)")]
    PreconditionNotCAT0,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Graph distance between two points and the path realising it.
#[derive(Clone, Debug, Serialize)]
pub struct OracleDistance {
    /// Length of `path`, snapping legs included.
    pub length: f64,
    pub path: PolyPath,
    pub snap: [f64; 2],
}

/// Full path from `a` through the given nodes to `b`, with snapping legs.
fn stitched(g: &GridGraph, a: &AmbientPoint, b: &AmbientPoint, sa: &Snap, sb: &Snap, nodes: &[usize]) -> PolyPath {
    let cx = g.complex();
    let mut path = g.node_path(nodes);
    if sa.distance > 0.0 {
        path.points.insert(0, a.clone());
        path.segment_cubes.insert(0, sa.cube);
    }
    if sb.distance > 0.0 {
        path.points.push(b.clone());
        path.segment_cubes.push(sb.cube);
    }
    if path.points.len() == 1 && a != b {
        path.points = vec![a.clone(), b.clone()];
        path.segment_cubes = vec![cx.common_cubes(a, b)[0]];
    }
    path
}

impl GridGraph<'_> {
    /// Shortest grid path between the nodes nearest `a` and `b`, extended
    /// to the points themselves.
    pub fn distance(&self, a: &AmbientPoint, b: &AmbientPoint) -> Result<OracleDistance, OracleError> {
        self.distances_from(a, std::slice::from_ref(b))?.pop().expect("one target")
    }

    /// [`GridGraph::distance`] from one source to many targets with a single search.
    pub fn distances_from(
        &self,
        a: &AmbientPoint,
        targets: &[AmbientPoint],
    ) -> Result<Vec<Result<OracleDistance, OracleError>>, OracleError> {
        let cx = self.complex();
        let a = cx.canonicalize(a)?;
        let sa = self.snap(&a)?;
        let snaps: Vec<(AmbientPoint, Snap)> = targets
            .iter()
            .map(|b| {
                let b = cx.canonicalize(b)?;
                let s = self.snap(&b)?;
                Ok((b, s))
            })
            .collect::<Result<_, OracleError>>()?;
        let nodes: Vec<usize> = snaps.iter().map(|(_, s)| s.node).collect();
        let sp = self.shortest_paths(sa.node, &nodes);
        Ok(snaps
            .iter()
            .map(|(b, sb)| {
                let ns = sp.nodes_to(sb.node).ok_or(OracleError::Unreachable)?;
                let path = stitched(self, &a, b, &sa, sb, &ns);
                Ok(OracleDistance { length: path.length(cx, self.scale()), path, snap: [sa.distance, sb.distance] })
            })
            .collect())
    }

    /// Grid path between `a` and `b`, then [`straighten`]ed.
    pub fn geodesic(&self, a: &AmbientPoint, b: &AmbientPoint) -> Result<PolyPath, OracleError> {
        Ok(straighten(self.complex(), &self.distance(a, b)?.path, 200))
    }

    /// Straightened geodesics from `a` to each target.
    pub fn geodesics_from(&self, a: &AmbientPoint, targets: &[AmbientPoint]) -> Result<Vec<PolyPath>, OracleError> {
        self.distances_from(a, targets)?.into_iter().map(|d| Ok(straighten(self.complex(), &d?.path, 200))).collect()
    }
}

/// Upper bound on the distance from `p` to `w`: the least Euclidean
/// distance to a face in `w` of a cube containing `p`, measured inside that
/// cube. Zero on `w` and infinite when no cube at `p` meets `w`.
pub fn distance_to_subcomplex_upper(cx: &CellComplex, w: &Subcomplex, p: &AmbientPoint) -> f64 {
    if w.contains(p.cell) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for &c in cx.star(p.cell) {
        let y = cx.embed(p, c).expect("cube at the point");
        for e in cx.faces(c).iter().filter(|e| w.contains(e.cell)) {
            let d2: f64 = e.pattern.iter().zip(&y).filter_map(|(q, &t)| q.map(|b| (t - b as f64).powi(2))).sum();
            best = best.min(d2.sqrt());
        }
    }
    best
}

/// Largest upper-bounded distance from `w` over samples of `path`.
pub fn path_departure(cx: &CellComplex, w: &Subcomplex, path: &PolyPath, per_segment: usize, scale: f64) -> f64 {
    path.samples(cx, per_segment).iter().map(|p| distance_to_subcomplex_upper(cx, w, p) * scale).fold(0.0, f64::max)
}

/// A random point of `w`: uniform coordinates in a random maximal cell.
pub fn random_point(cx: &CellComplex, w: &Subcomplex, rng: &mut impl Rng) -> AmbientPoint {
    let tops = w.maximal_cells(cx);
    let c = tops[rng.gen_range(0..tops.len())];
    let coords: Vec<f64> = (0..cx.dim(c)).map(|_| rng.gen_range(0.0..1.0)).collect();
    cx.point_in(c, &coords).expect("unit coordinates")
}

#[cfg(test)]
mod tests;
