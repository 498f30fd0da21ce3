//! The double of a complex along a subcomplex: two copies glued along `W`.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::certify::{is_cat0, is_clc, is_npc, Certificate, CertifyError};
use crate::complex::{AmbientPoint, CellComplex, ComplexError, CubicalComplex, FaceLink, Subcomplex};
use crate::oracle::{distance_to_subcomplex_upper, path_departure, GridGraph, OracleError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoubleError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `X *_W X` as a relaxed cell complex.
///
/// Copy one keeps the cell and vertex ids of `X`; copy two reuses the ids
/// of `W` and numbers its other cells and vertices after those of `X`.
#[derive(Clone, Debug)]
pub struct DoubledComplex {
    pub complex: CellComplex,
    /// `fold[i][c]` is the image of cell `c` of `X` in copy `i`.
    pub fold: [Vec<usize>; 2],
    pub vertex_fold: [Vec<usize>; 2],
    /// Cell map swapping the copies.
    pub involution: Vec<usize>,
    /// No two cells share a vertex set.
    pub simple: bool,
}

impl DoubledComplex {
    /// The double as a simple complex, when it is one.
    pub fn cubical(&self) -> Option<CubicalComplex> {
        if !self.simple {
            return None;
        }
        CubicalComplex::from_cells(self.complex.clone()).ok()
    }

    /// Cells fixed by the involution.
    pub fn fixed_cells(&self) -> Vec<usize> {
        (0..self.involution.len()).filter(|&c| self.involution[c] == c).collect()
    }
}

pub fn double(x: &CellComplex, w: &Subcomplex) -> Result<DoubledComplex, DoubleError> {
    if w.is_empty() {
        return Err(ComplexError::EmptySubcomplex.into());
    }
    let n = x.len();
    let mut vfold2: Vec<usize> = (0..x.vertex_count()).collect();
    let mut next_v = x.vertex_count();
    for v in 0..x.vertex_count() {
        if !w.contains_vertex(x, v) {
            vfold2[v] = next_v;
            next_v += 1;
        }
    }
    let mut fold2: Vec<usize> = (0..n).collect();
    let mut next = n;
    for c in 0..n {
        if !w.contains(c) {
            fold2[c] = next;
            next += 1;
        }
    }
    let mut cells: Vec<Vec<usize>> = x.tuples().to_vec();
    let mut faces: Vec<Vec<FaceLink>> = (0..n).map(|c| x.face_links(c).to_vec()).collect();
    for c in (0..n).filter(|&c| !w.contains(c)) {
        cells.push(x.tuple(c).iter().map(|&v| vfold2[v]).collect());
        faces.push(x.face_links(c).iter().map(|f| FaceLink { cell: fold2[f.cell], ..f.clone() }).collect());
    }
    let complex = CellComplex::from_parts(next_v, cells, faces)?;
    let mut involution: Vec<usize> = (0..next).collect();
    for c in 0..n {
        involution[c] = fold2[c];
        involution[fold2[c]] = c;
    }
    let simple = complex.non_simple_pair().is_none();
    Ok(DoubledComplex {
        complex,
        fold: [(0..n).collect(), fold2],
        vertex_fold: [(0..x.vertex_count()).collect(), vfold2],
        involution,
        simple,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleFlagReport {
    /// Link condition on every vertex of the double.
    pub links: Certificate,
    pub clc: Certificate,
    pub simple: bool,
    /// Whether the flag verdict equals the CLC verdict.
    pub agrees: bool,
}

/// Checks every link of the double for simpliciality and flagness and
/// compares the verdict with CLC of `W` in `X`.
pub fn double_flag_report(x: &CubicalComplex, w: &Subcomplex) -> Result<DoubleFlagReport, DoubleError> {
    if !is_cat0(x)?.holds {
        return Err(DoubleError::PreconditionFailed("X is not CAT(0)".into()));
    }
    let d = double(x, w)?;
    let links = is_npc(&d.complex);
    let clc = is_clc(x, w);
    let agrees = links.holds == clc.holds;
    Ok(DoubleFlagReport { links, clc, simple: d.simple, agrees })
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Whether each fold preserves graph distances between vertices.
pub fn fold_is_isometric_on_vertices(x: &CellComplex, d: &DoubledComplex) -> bool {
    let ax = x.adjacency();
    let ad = d.complex.adjacency();
    (0..x.vertex_count()).all(|s| {
        let dx = bfs(&ax, s);
        (0..2).all(|i| {
            let dd = bfs(&ad, d.vertex_fold[i][s]);
            (0..x.vertex_count()).all(|t| dx[t] == dd[d.vertex_fold[i][t]])
        })
    })
}

impl DoubledComplex {
    /// Image of a point under the involution; coordinates carry over since
    /// both copies keep the tuples of `X`.
    pub fn reflect(&self, p: &AmbientPoint) -> AmbientPoint {
        AmbientPoint::new(self.involution[p.cell], p.coords.clone())
    }

    /// `W` as a subcomplex of the double.
    pub fn fixed_subcomplex(&self) -> Subcomplex {
        Subcomplex::new(&self.complex, self.fixed_cells()).expect("fixed cells are face-closed")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionReport {
    pub pairs: usize,
    pub h: f64,
    pub tolerance: f64,
    /// Largest upper bound on `d(p, reflect(p))` over geodesic samples.
    pub max_asymmetry: f64,
    /// Largest upper bound on the distance from `W` over geodesic samples.
    pub max_departure: f64,
    pub vertex_isometry: bool,
}

/// Oracle geodesics in the double between points of `W` (given in `X`
/// coordinates, which are those of the first copy), compared with their
/// images under the involution.
pub fn double_geodesic_reflection_test(
    x: &CubicalComplex,
    w: &Subcomplex,
    pairs: &[(AmbientPoint, AmbientPoint)],
    h: f64,
) -> Result<ReflectionReport, DoubleError> {
    if !is_cat0(x)?.holds {
        return Err(DoubleError::PreconditionFailed("X is not CAT(0)".into()));
    }
    if !is_clc(x, w).holds {
        return Err(DoubleError::PreconditionFailed("W is not CLC in X".into()));
    }
    let d = double(x, w)?;
    let cx = &d.complex;
    let fixed = d.fixed_subcomplex();
    let grid = GridGraph::build(cx, h)?;
    let tolerance = 2.0 * h * (x.max_dim().max(1) as f64).sqrt();
    let mut report = ReflectionReport {
        pairs: pairs.len(),
        h,
        tolerance,
        max_asymmetry: 0.0,
        max_departure: 0.0,
        vertex_isometry: fold_is_isometric_on_vertices(x, &d),
    };
    for (a, b) in pairs {
        let (a, b) = (x.canonicalize(a)?, x.canonicalize(b)?);
        if !w.contains(a.cell) || !w.contains(b.cell) {
            return Err(DoubleError::PreconditionFailed("sample outside W".into()));
        }
        let path = grid.geodesic(&a, &b)?;
        for p in path.samples(cx, 8) {
            let q = d.reflect(&p);
            let sym = if p == q {
                0.0
            } else if let Some(c) = cx.common_cubes(&p, &q).first() {
                cx.segment_length(*c, &p, &q).expect("common cube")
            } else {
                2.0 * distance_to_subcomplex_upper(cx, &fixed, &p)
            };
            report.max_asymmetry = report.max_asymmetry.max(sym);
        }
        report.max_departure = report.max_departure.max(path_departure(cx, &fixed, &path, 8, 1.0));
    }
    Ok(report)
}
