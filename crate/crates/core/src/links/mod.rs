//! Vertex links as all-right spherical complexes.
//!
//! The link of a vertex `v` has one vertex per edge-end at `v` and one
//! simplex per cube containing `v`, spanned by the cube's edges at `v`.
//! Every edge of the link has length `pi/2`.

mod develop;
mod metric;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellComplex, Subcomplex};

pub use develop::{
    develop_in_hemisphere, escape_segment, trace_star_geodesic, DevelopedPath, EscapeSegment, StarTrace,
};
pub use metric::{cone_distance, ConePoint, LinkMetric, LinkPoint, EPS_LINK};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("{0} is not a vertex of the complex")]
    NotAVertex(usize),
    #[error("vertex {0} is not in the subcomplex")]
    VertexNotInSubcomplex(usize),
    #[error("the first complex is not a subcomplex of the second")]
    NotASubcomplex,
    #[error("sample {0} is not in the closed star")]
    NotInClosedStar(usize),
    #[error("segment {0} has no carrier containing both samples and the star vertex")]
    InconsistentCarriers(usize),
    #[error("invalid link point: {0}")]
    BadPoint(String),
}

/// A direction at the base vertex: an edge and which of its ends the vertex is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinkVertex {
    pub edge: usize,
    pub end: usize,
}

/// The simplex contributed by one cube at one of its corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkCell {
    /// Link vertex ids, ascending.
    pub verts: Vec<usize>,
    pub cube: usize,
    pub corner: usize,
    /// `axis[i]` is the cube coordinate running along `verts[i]`.
    pub axis: Vec<usize>,
}

/// An all-right spherical complex given by its generating cells.
///
/// A restricted link keeps the direction list of the full link so that
/// vertex ids agree between the two; its own vertices are the directions
/// that occur as 0-simplices.
#[derive(Clone, Debug)]
pub struct SphericalComplex {
    pub base_vertex: usize,
    pub base_cell: usize,
    pub directions: Vec<LinkVertex>,
    pub cells: Vec<LinkCell>,
    index: HashMap<Vec<usize>, usize>,
}

/// Why a link fails to be a flag simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum FlagViolation {
    /// Two cells span the same vertex set.
    NotSimplicial { cells: [usize; 2], vertices: Vec<usize> },
    /// A vertex set whose proper subsets are all simplices but which is not one.
    EmptySimplex { vertices: Vec<usize> },
}

/// JSON export form.
#[derive(Clone, Debug, Serialize)]
pub struct LinkExport {
    pub vertices: Vec<LinkVertex>,
    pub simplices: Vec<Vec<usize>>,
}

/// The link of vertex `v`.
pub fn link(cx: &CellComplex, v: usize) -> Result<SphericalComplex, LinkError> {
    if v >= cx.vertex_count() {
        return Err(LinkError::NotAVertex(v));
    }
    let base_cell = cx.vertex_cell(v);
    let mut directions = Vec::new();
    for &c in cx.star(base_cell) {
        if cx.dim(c) == 1 {
            let end = cx.tuple(c).iter().position(|&u| u == v).expect("edge contains v");
            directions.push(LinkVertex { edge: c, end });
        }
    }
    directions.sort();
    let pos: HashMap<LinkVertex, usize> = directions.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut cells = Vec::new();
    for &c in cx.star(base_cell) {
        let k = cx.dim(c);
        if k == 0 {
            continue;
        }
        let corner = cx.tuple(c).iter().position(|&u| u == v).expect("cube contains v");
        let mut pairs: Vec<(usize, usize)> = (0..k)
            .map(|j| {
                let (edge, end) = cx.corner_edge(c, corner, j);
                (pos[&LinkVertex { edge, end }], j)
            })
            .collect();
        pairs.sort();
        cells.push(LinkCell {
            verts: pairs.iter().map(|p| p.0).collect(),
            cube: c,
            corner,
            axis: pairs.iter().map(|p| p.1).collect(),
        });
    }
    Ok(SphericalComplex::from_cells(v, base_cell, directions, cells))
}

/// The part of `l` coming from cubes of `w`.
pub fn restrict_link(l: &SphericalComplex, w: &Subcomplex) -> Result<SphericalComplex, LinkError> {
    if !w.contains(l.base_cell) {
        return Err(LinkError::VertexNotInSubcomplex(l.base_vertex));
    }
    let cells = l.cells.iter().filter(|c| w.contains(c.cube)).cloned().collect();
    Ok(SphericalComplex::from_cells(l.base_vertex, l.base_cell, l.directions.clone(), cells))
}

impl SphericalComplex {
    fn from_cells(base_vertex: usize, base_cell: usize, directions: Vec<LinkVertex>, cells: Vec<LinkCell>) -> Self {
        let mut index = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            index.entry(c.verts.clone()).or_insert(i);
        }
        SphericalComplex { base_vertex, base_cell, directions, cells, index }
    }

    /// Vertex ids present in this complex, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells.iter().filter(|c| c.verts.len() == 1).map(|c| c.verts[0]).collect();
        out.sort_unstable();
        out
    }

    pub fn contains_vertex(&self, u: usize) -> bool {
        self.index.contains_key(&vec![u])
    }

    /// Whether the sorted vertex set spans a simplex.
    pub fn is_simplex(&self, verts: &[usize]) -> bool {
        verts.is_empty() || self.index.contains_key(verts)
    }

    /// The first cell spanning this sorted vertex set.
    pub fn cell_of(&self, verts: &[usize]) -> Option<usize> {
        self.index.get(verts).copied()
    }

    /// Distinct simplices, ascending by dimension then vertices.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<(usize, &Vec<usize>)> = self.index.keys().map(|k| (k.len(), k)).collect();
        set.into_iter().map(|(_, k)| k.clone()).collect()
    }

    /// Maximal simplices, as cell ids.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            if self.index[&c.verts] != i {
                continue;
            }
            let covered = self
                .cells
                .iter()
                .any(|d| d.verts.len() > c.verts.len() && c.verts.iter().all(|u| d.verts.binary_search(u).is_ok()));
            if !covered {
                out.push(i);
            }
        }
        out
    }

    pub fn dimension(&self) -> isize {
        self.cells.iter().map(|c| c.verts.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let key = if a < b { vec![a, b] } else { vec![b, a] };
        self.index.contains_key(&key)
    }

    /// The first pair of cells with equal vertex sets, if any.
    pub fn non_simplicial_pair(&self) -> Option<[usize; 2]> {
        self.cells.iter().enumerate().find_map(|(i, c)| {
            let first = self.index[&c.verts];
            (first != i).then_some([first, i])
        })
    }

    /// `None` when the complex is simplicial and flag; otherwise a minimal witness.
    pub fn flag_violation(&self) -> Option<FlagViolation> {
        if let Some(cells) = self.non_simplicial_pair() {
            return Some(FlagViolation::NotSimplicial { cells, vertices: self.cells[cells[0]].verts.clone() });
        }
        let verts = self.vertices();
        let mut best: Option<Vec<usize>> = None;
        for s in self.simplices() {
            let Some(&top) = s.last() else { continue };
            for &w in verts.iter().filter(|&&w| w > top) {
                if !s.iter().all(|&u| self.adjacent(u, w)) {
                    continue;
                }
                let mut cand = s.clone();
                cand.push(w);
                if cand.len() < 3 || self.is_simplex(&cand) {
                    continue;
                }
                let facets_present = (0..cand.len()).all(|i| {
                    let mut f = cand.clone();
                    f.remove(i);
                    self.is_simplex(&f)
                });
                if facets_present && best.as_ref().is_none_or(|b| (cand.len(), &cand) < (b.len(), b)) {
                    best = Some(cand);
                }
            }
        }
        best.map(|vertices| FlagViolation::EmptySimplex { vertices })
    }

    pub fn is_flag(&self) -> bool {
        self.flag_violation().is_none()
    }

    pub fn export(&self) -> LinkExport {
        let present = self.vertices();
        let relabel: HashMap<usize, usize> = present.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        LinkExport {
            vertices: present.iter().map(|&u| self.directions[u]).collect(),
            simplices: self.simplices().iter().map(|s| s.iter().map(|u| relabel[u]).collect()).collect(),
        }
    }
}

/// A minimal simplex of `l` with all vertices in `k` that is not in `k`.
/// `Ok(None)` means `k` is full in `l`.
pub fn non_full_simplex(k: &SphericalComplex, l: &SphericalComplex) -> Result<Option<Vec<usize>>, LinkError> {
    if k.directions != l.directions || k.simplices().iter().any(|s| !l.is_simplex(s)) {
        return Err(LinkError::NotASubcomplex);
    }
    Ok(l.simplices().into_iter().find(|s| s.iter().all(|&u| k.contains_vertex(u)) && !k.is_simplex(s)))
}

pub fn is_full(k: &SphericalComplex, l: &SphericalComplex) -> Result<bool, LinkError> {
    Ok(non_full_simplex(k, l)?.is_none())
}
