//! Finite complexes of Euclidean unit cubes.
//!
//! A cube of dimension `k` is stored as a tuple of `2^k` vertex ids in
//! binary-corner order: bit `j` of the tuple index is coordinate `j` of the
//! corner. Faces are never part of the input encoding; they are derived by
//! fixing one coordinate and looked up in the complex.
//!
//! Two layers are provided:
//!
//! - [`CellComplex`] is the relaxed structure: cells with injective vertex
//!   tuples and explicit face links. Distinct cells may share a vertex set,
//!   which is how non-simple doubles are represented.
//! - [`CubicalComplex`] is a validated, simple [`CellComplex`]: faces are
//!   resolved by vertex set and no two cubes share one.
//!
//! Every cell carries a table of all its faces (one entry per pattern in
//! `{0, 1, *}^k`) together with the coordinate frame that maps the free
//! coordinates of the cell onto the stored coordinates of the face. Point
//! geometry, links and the lattice oracle are all built on these tables.

mod point;
mod subcomplex;
mod subdivision;

use std::collections::HashMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use point::{AmbientPoint, PolyPath};
pub use subcomplex::Subcomplex;
pub use subdivision::{cubical_subdivision, Subdivision};

/// Default bound on cube dimension.
pub const DEFAULT_MAX_DIM: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("cube {cube} has {len} vertices, which is not a power of two")]
    BadTupleLength { cube: usize, len: usize },
    #[error("cube {cube} has dimension {dim}, above the bound {max}")]
    DimensionExceeded { cube: usize, dim: usize, max: usize },
    #[error("cube {cube} references vertex {vertex} but the complex has {vertex_count} vertices")]
    VertexOutOfRange { cube: usize, vertex: usize, vertex_count: usize },
    #[error("cube {cube} repeats vertex {vertex}")]
    DegenerateCube { cube: usize, vertex: usize },
    #[error("cubes {first} and {second} have the same vertex set")]
    DuplicateCube { first: usize, second: usize },
    #[error("face of cube {cube} with coordinate {coord} fixed to {side} is missing")]
    MissingFace { cube: usize, coord: usize, side: u8 },
    #[error("face of cube {cube} with coordinate {coord} fixed to {side} has the vertex set of cube {face} but a different corner structure")]
    FaceMismatch { cube: usize, coord: usize, side: u8, face: usize },
    #[error("vertex {vertex} has no 0-cube")]
    MissingVertex { vertex: usize },
    #[error("coordinates {coords:?} do not lie in the unit cube of cell {cell}")]
    CoordOutOfRange { cell: usize, coords: Vec<f64> },
    #[error("cell {0} does not exist")]
    NoSuchCell(usize),
    #[error("subcomplex is empty")]
    EmptySubcomplex,
    #[error("subcomplex is not face-closed: cell {cell} is present but its face {face} is not")]
    NotFaceClosed { cell: usize, face: usize },
}

/// JSON interchange form of a complex: `{"vertices": N, "cubes": [[v...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDescription {
    pub vertices: usize,
    pub cubes: Vec<Vec<usize>>,
}

/// JSON interchange form of a subcomplex: `{"parent": "...", "cubes": [i, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcomplexDescription {
    pub parent: String,
    pub cubes: Vec<usize>,
}

/// Link from a cell to one of its codimension-one faces.
///
/// Coordinate `j` of the face *as derived from the parent* (the parent's
/// coordinates with the fixed one removed) is coordinate `perm[j]` of the
/// face's stored tuple, reversed when `flip[j]` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLink {
    pub cell: usize,
    pub perm: Vec<usize>,
    pub flip: Vec<bool>,
}

/// One face of a cell, identified by the pattern that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceEntry {
    pub cell: usize,
    /// Per parent coordinate: `Some(bit)` when fixed, `None` when free.
    pub pattern: Vec<Option<u8>>,
    /// For each free parent coordinate in ascending order: the coordinate of
    /// the face it becomes, and whether it runs backwards there.
    pub frame: Vec<(usize, bool)>,
}

impl FaceEntry {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Coordinates in the parent of a point given in the face's own coordinates.
    pub fn lift(&self, face_coords: &[f64]) -> Vec<f64> {
        let mut free = self.frame.iter();
        self.pattern
            .iter()
            .map(|p| match p {
                Some(b) => *b as f64,
                None => {
                    let &(r, f) = free.next().expect("frame matches pattern");
                    if f {
                        1.0 - face_coords[r]
                    } else {
                        face_coords[r]
                    }
                }
            })
            .collect()
    }
}

pub(crate) fn pattern_code(pattern: &[Option<u8>]) -> usize {
    pattern.iter().rev().fold(0, |acc, p| acc * 3 + p.map_or(2, |b| b as usize))
}

fn decode_pattern(mut code: usize, k: usize) -> Vec<Option<u8>> {
    (0..k)
        .map(|_| {
            let d = code % 3;
            code /= 3;
            if d == 2 {
                None
            } else {
                Some(d as u8)
            }
        })
        .collect()
}

/// Tuple index of the corner obtained by inserting `side` at bit `coord`.
pub(crate) fn insert_bit(index: usize, coord: usize, side: usize) -> usize {
    let low = index & ((1 << coord) - 1);
    let high = index >> coord;
    low | (side << coord) | (high << (coord + 1))
}

/// The tuple of the face of `tuple` with coordinate `coord` fixed to `side`,
/// in derived coordinate order.
pub(crate) fn derived_face(tuple: &[usize], coord: usize, side: usize) -> Vec<usize> {
    (0..tuple.len() / 2).map(|i| tuple[insert_bit(i, coord, side)]).collect()
}

/// Corner correspondence between two tuples on the same vertex set.
/// Returns `(perm, flip)` such that derived coordinate `j` is stored
/// coordinate `perm[j]`, reversed when `flip[j]`.
pub(crate) fn corner_map(derived: &[usize], stored: &[usize]) -> Option<(Vec<usize>, Vec<bool>)> {
    let pos: HashMap<usize, usize> = stored.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = derived.len().trailing_zeros() as usize;
    let origin = *pos.get(&derived[0])?;
    let mut perm = Vec::with_capacity(k);
    let mut flip = Vec::with_capacity(k);
    for j in 0..k {
        let q = pos.get(&derived[1 << j])? ^ origin;
        if !q.is_power_of_two() {
            return None;
        }
        let r = q.trailing_zeros() as usize;
        perm.push(r);
        flip.push((origin >> r) & 1 == 1);
    }
    for (i, v) in derived.iter().enumerate() {
        let mut expect = origin;
        for (j, &r) in perm.iter().enumerate() {
            if (i >> j) & 1 == 1 {
                expect ^= 1 << r;
            }
        }
        if pos.get(v) != Some(&expect) {
            return None;
        }
    }
    Some((perm, flip))
}

/// Cells with injective vertex tuples and explicit face links.
#[derive(Clone, Debug)]
pub struct CellComplex {
    vertex_count: usize,
    cells: Vec<Vec<usize>>,
    faces: Vec<Vec<FaceLink>>,
    tables: Vec<Vec<FaceEntry>>,
    face_lookup: Vec<HashMap<usize, usize>>,
    star: Vec<Vec<usize>>,
    vertex_cell: Vec<usize>,
    max_dim: usize,
}

impl CellComplex {
    /// Assembles a complex from tuples and codimension-one face links.
    /// `faces[c]` holds `2k` links, index `2j + s` for coordinate `j` fixed to `s`.
    pub fn from_parts(
        vertex_count: usize,
        cells: Vec<Vec<usize>>,
        faces: Vec<Vec<FaceLink>>,
    ) -> Result<Self, ComplexError> {
        let n = cells.len();
        let dims: Vec<usize> = cells.iter().map(|t| t.len().trailing_zeros() as usize).collect();
        let max_dim = dims.iter().copied().max().unwrap_or(0);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&c| dims[c]);

        let mut tables: Vec<Vec<FaceEntry>> = vec![Vec::new(); n];
        for &c in &order {
            let k = dims[c];
            let mut table = Vec::with_capacity(3usize.pow(k as u32));
            for code in 0..3usize.pow(k as u32) {
                let pattern = decode_pattern(code, k);
                let Some(j) = pattern.iter().position(|p| p.is_some()) else {
                    table.push(FaceEntry { cell: c, pattern, frame: (0..k).map(|i| (i, false)).collect() });
                    continue;
                };
                let s = pattern[j].unwrap() as usize;
                let link = &faces[c][2 * j + s];
                let mut stored = vec![None; k - 1];
                for (jd, p) in pattern.iter().enumerate().filter(|&(i, _)| i != j) {
                    let jd = if jd < j { jd } else { jd - 1 };
                    stored[link.perm[jd]] = p.map(|b| b ^ link.flip[jd] as u8);
                }
                let sub = &tables[link.cell][pattern_code(&stored)];
                let sub_free: Vec<usize> = (0..k - 1).filter(|&r| stored[r].is_none()).collect();
                let frame = (0..k)
                    .filter(|&i| pattern[i].is_none())
                    .map(|i| {
                        let jd = if i < j { i } else { i - 1 };
                        let r = link.perm[jd];
                        let idx = sub_free.iter().position(|&x| x == r).expect("free coordinate");
                        let (fin, f2) = sub.frame[idx];
                        (fin, f2 ^ link.flip[jd])
                    })
                    .collect();
                table.push(FaceEntry { cell: sub.cell, pattern, frame });
            }
            tables[c] = table;
        }

        let mut face_lookup = vec![HashMap::new(); n];
        let mut star = vec![Vec::new(); n];
        for c in 0..n {
            for (code, e) in tables[c].iter().enumerate() {
                face_lookup[c].insert(e.cell, code);
                star[e.cell].push(c);
            }
        }
        for s in &mut star {
            s.sort_unstable();
            s.dedup();
        }

        let mut vertex_cell = vec![usize::MAX; vertex_count];
        for c in 0..n {
            if dims[c] == 0 {
                vertex_cell[cells[c][0]] = c;
            }
        }
        if let Some(v) = vertex_cell.iter().position(|&c| c == usize::MAX) {
            return Err(ComplexError::MissingVertex { vertex: v });
        }

        Ok(CellComplex { vertex_count, cells, faces, tables, face_lookup, star, vertex_cell, max_dim })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of cells of all dimensions.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.cells[cell].len().trailing_zeros() as usize
    }

    pub fn tuple(&self, cell: usize) -> &[usize] {
        &self.cells[cell]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn face_links(&self, cell: usize) -> &[FaceLink] {
        &self.faces[cell]
    }

    /// All faces of `cell`, including itself, indexed by pattern code.
    pub fn faces(&self, cell: usize) -> &[FaceEntry] {
        &self.tables[cell]
    }

    pub fn face_by_pattern(&self, cell: usize, pattern: &[Option<u8>]) -> &FaceEntry {
        &self.tables[cell][pattern_code(pattern)]
    }

    /// The entry describing `face` as a face of `cell`, when it is one.
    pub fn face_entry(&self, cell: usize, face: usize) -> Option<&FaceEntry> {
        self.face_lookup[cell].get(&face).map(|&code| &self.tables[cell][code])
    }

    pub fn is_face(&self, face: usize, cell: usize) -> bool {
        self.face_lookup[cell].contains_key(&face)
    }

    /// Cells having `cell` as a face, including `cell` itself, ascending.
    pub fn star(&self, cell: usize) -> &[usize] {
        &self.star[cell]
    }

    /// The 0-cell of vertex `v`.
    pub fn vertex_cell(&self, v: usize) -> usize {
        self.vertex_cell[v]
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(move |&c| self.dim(c) == d)
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_dim + 1];
        for c in 0..self.cells.len() {
            out[self.dim(c)] += 1;
        }
        out
    }

    /// Cells not contained in any other cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.star[c].len() == 1).collect()
    }

    /// Edge endpoints as `(edge cell, [v0, v1])`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, [usize; 2])> + '_ {
        self.cells_of_dim(1).map(move |e| (e, [self.cells[e][0], self.cells[e][1]]))
    }

    /// Vertex adjacency lists of the 1-skeleton, sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (_, [a, b]) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// The edge of `cube` leaving corner `corner` in direction `coord`, and
    /// which end of that edge (0 or 1) is the corner.
    pub fn corner_edge(&self, cube: usize, corner: usize, coord: usize) -> (usize, usize) {
        let k = self.dim(cube);
        let pattern: Vec<Option<u8>> =
            (0..k).map(|i| if i == coord { None } else { Some(((corner >> i) & 1) as u8) }).collect();
        let e = self.face_by_pattern(cube, &pattern);
        let bit = (corner >> coord) & 1;
        (e.cell, bit ^ e.frame[0].1 as usize)
    }

    /// First pair of distinct cells sharing a vertex set, if any.
    pub fn non_simple_pair(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (c, t) in self.cells.iter().enumerate() {
            let mut key = t.clone();
            key.sort_unstable();
            if let Some(&prev) = seen.get(&key) {
                return Some((prev, c));
            }
            seen.insert(key, c);
        }
        None
    }

    pub fn description(&self) -> ComplexDescription {
        ComplexDescription { vertices: self.vertex_count, cubes: self.cells.clone() }
    }

    /// SHA-256 of the canonical JSON description.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(&self.description()).expect("serializable");
        hex::encode(Sha256::digest(&json))
    }
}

/// A validated simple cubical complex.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    cells: CellComplex,
    by_vertices: HashMap<Vec<usize>, usize>,
}

impl Deref for CubicalComplex {
    type Target = CellComplex;

    fn deref(&self) -> &CellComplex {
        &self.cells
    }
}

impl CubicalComplex {
    /// Validates a description with the default dimension bound.
    pub fn validate(desc: &ComplexDescription) -> Result<Self, ComplexError> {
        Self::validate_with_bound(desc, DEFAULT_MAX_DIM)
    }

    pub fn validate_with_bound(desc: &ComplexDescription, max_dim: usize) -> Result<Self, ComplexError> {
        let n = desc.vertices;
        let mut by_vertices: HashMap<Vec<usize>, usize> = HashMap::new();
        for (c, t) in desc.cubes.iter().enumerate() {
            if t.is_empty() || !t.len().is_power_of_two() {
                return Err(ComplexError::BadTupleLength { cube: c, len: t.len() });
            }
            let dim = t.len().trailing_zeros() as usize;
            if dim > max_dim {
                return Err(ComplexError::DimensionExceeded { cube: c, dim, max: max_dim });
            }
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(ComplexError::VertexOutOfRange { cube: c, vertex: v, vertex_count: n });
            }
            let mut key = t.clone();
            key.sort_unstable();
            if let Some(w) = key.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::DegenerateCube { cube: c, vertex: w[0] });
            }
            if let Some(&first) = by_vertices.get(&key) {
                return Err(ComplexError::DuplicateCube { first, second: c });
            }
            by_vertices.insert(key, c);
        }

        let mut faces = Vec::with_capacity(desc.cubes.len());
        for (c, t) in desc.cubes.iter().enumerate() {
            let k = t.len().trailing_zeros() as usize;
            let mut links = Vec::with_capacity(2 * k);
            for j in 0..k {
                for s in 0..2 {
                    let derived = derived_face(t, j, s);
                    let mut key = derived.clone();
                    key.sort_unstable();
                    let &f =
                        by_vertices.get(&key).ok_or(ComplexError::MissingFace { cube: c, coord: j, side: s as u8 })?;
                    let (perm, flip) = corner_map(&derived, &desc.cubes[f]).ok_or(ComplexError::FaceMismatch {
                        cube: c,
                        coord: j,
                        side: s as u8,
                        face: f,
                    })?;
                    links.push(FaceLink { cell: f, perm, flip });
                }
            }
            faces.push(links);
        }

        let cells = CellComplex::from_parts(n, desc.cubes.clone(), faces)?;
        Ok(CubicalComplex { cells, by_vertices })
    }

    /// Builds the face closure of the given cubes and validates it.
    /// Cells are ordered by dimension, then by sorted vertex set.
    pub fn from_top_cubes(vertex_count: usize, tops: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut found: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut stack: Vec<Vec<usize>> = tops.to_vec();
        for v in 0..vertex_count {
            stack.push(vec![v]);
        }
        while let Some(t) = stack.pop() {
            if t.is_empty() || !t.len().is_power_of_two() {
                return Err(ComplexError::BadTupleLength { cube: 0, len: t.len() });
            }
            let mut key = t.clone();
            key.sort_unstable();
            if found.contains_key(&key) {
                continue;
            }
            let k = t.len().trailing_zeros() as usize;
            for j in 0..k {
                for s in 0..2 {
                    stack.push(derived_face(&t, j, s));
                }
            }
            found.insert(key, t);
        }
        let mut cubes: Vec<(Vec<usize>, Vec<usize>)> = found.into_iter().collect();
        cubes.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let desc = ComplexDescription { vertices: vertex_count, cubes: cubes.into_iter().map(|(_, t)| t).collect() };
        Self::validate(&desc)
    }

    /// Accepts a relaxed complex whose cells have distinct vertex sets.
    pub fn from_cells(cells: CellComplex) -> Result<Self, ComplexError> {
        let mut by_vertices = HashMap::new();
        for (c, t) in cells.tuples().iter().enumerate() {
            let mut key = t.clone();
            key.sort_unstable();
            if let Some(first) = by_vertices.insert(key, c) {
                return Err(ComplexError::DuplicateCube { first, second: c });
            }
        }
        Ok(CubicalComplex { cells, by_vertices })
    }

    pub fn cells(&self) -> &CellComplex {
        &self.cells
    }

    /// The cube with exactly this vertex set.
    pub fn cube_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.by_vertices.get(&key).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_desc() -> ComplexDescription {
        ComplexDescription {
            vertices: 4,
            cubes: vec![
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![2, 3],
                vec![0, 2],
                vec![1, 3],
                vec![0, 1, 2, 3],
            ],
        }
    }

    #[test]
    fn square_validates_with_nine_cells() {
        let x = CubicalComplex::validate(&square_desc()).unwrap();
        assert_eq!(x.len(), 9);
        assert_eq!(x.counts_by_dim(), vec![4, 4, 1]);
    }

    #[test]
    fn missing_edge_is_reported() {
        let mut d = square_desc();
        d.cubes.remove(5);
        let err = CubicalComplex::validate(&d).unwrap_err();
        assert!(matches!(err, ComplexError::MissingFace { coord: 1, side: 1, .. }), "{err:?}");
    }

    #[test]
    fn degenerate_and_duplicate_cubes() {
        let d = ComplexDescription { vertices: 3, cubes: vec![vec![0], vec![1], vec![2], vec![0, 1, 1, 2]] };
        assert!(matches!(CubicalComplex::validate(&d), Err(ComplexError::DegenerateCube { vertex: 1, .. })));
        let d = ComplexDescription { vertices: 2, cubes: vec![vec![0], vec![1], vec![0, 1], vec![1, 0]] };
        assert!(matches!(CubicalComplex::validate(&d), Err(ComplexError::DuplicateCube { first: 2, second: 3 })));
    }

    #[test]
    fn dimension_bound_and_tuple_length() {
        let d = ComplexDescription { vertices: 3, cubes: vec![vec![0], vec![1], vec![2], vec![0, 1, 2]] };
        assert!(matches!(CubicalComplex::validate(&d), Err(ComplexError::BadTupleLength { .. })));
        let edge = ComplexDescription { vertices: 2, cubes: vec![vec![0], vec![1], vec![0, 1]] };
        assert!(matches!(
            CubicalComplex::validate_with_bound(&edge, 0),
            Err(ComplexError::DimensionExceeded { dim: 1, max: 0, .. })
        ));
    }

    #[test]
    fn twisted_face_is_a_mismatch() {
        // The square's listed tuple (0,1,3,2) is not a square on the edges
        // derived from the 3-cube below, only a vertex-set match.
        let top = vec![0, 1, 2, 3, 4, 5, 6, 7];
        let mut x = CubicalComplex::from_top_cubes(8, &[top]).unwrap().description();
        let sq = x.cubes.iter().position(|t| t == &vec![0, 1, 2, 3]).unwrap();
        x.cubes[sq] = vec![0, 1, 3, 2];
        let err = CubicalComplex::validate(&x).unwrap_err();
        assert!(matches!(err, ComplexError::MissingFace { .. } | ComplexError::FaceMismatch { .. }), "{err:?}");
    }

    #[test]
    fn every_face_pattern_is_present() {
        let x = CubicalComplex::from_top_cubes(8, &[vec![0, 1, 2, 3, 4, 5, 6, 7]]).unwrap();
        assert_eq!(x.counts_by_dim(), vec![8, 12, 6, 1]);
        for c in 0..x.len() {
            let k = x.dim(c);
            assert_eq!(x.faces(c).len(), 3usize.pow(k as u32));
            for e in x.faces(c) {
                let mut corner_verts: Vec<usize> = (0..1usize << k)
                    .filter(|&i| {
                        e.pattern.iter().enumerate().all(|(j, p)| p.is_none_or(|b| (i >> j) & 1 == b as usize))
                    })
                    .map(|i| x.tuple(c)[i])
                    .collect();
                corner_verts.sort_unstable();
                assert_eq!(x.cube_by_vertices(&corner_verts), Some(e.cell));
                assert_eq!(x.dim(e.cell), e.dim());
            }
        }
    }

    #[test]
    fn lifted_corners_land_on_the_right_vertices() {
        // Rotated square listing: faces have non-trivial frames.
        let desc = ComplexDescription {
            vertices: 4,
            cubes: vec![
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![1, 0],
                vec![3, 2],
                vec![2, 0],
                vec![3, 1],
                vec![0, 1, 2, 3],
            ],
        };
        let x = CubicalComplex::validate(&desc).unwrap();
        let sq = 8;
        for e in x.faces(sq).iter().filter(|e| e.dim() == 1) {
            let edge = x.tuple(e.cell);
            for (end, &v) in edge.iter().enumerate() {
                let p = e.lift(&[end as f64]);
                let idx = p.iter().enumerate().map(|(j, &c)| (c as usize) << j).sum::<usize>();
                assert_eq!(x.tuple(sq)[idx], v);
            }
        }
        assert_eq!(x.corner_edge(sq, 0, 0), (4, 1));
        assert_eq!(x.corner_edge(sq, 0, 1), (6, 1));
    }
}
