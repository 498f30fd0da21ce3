use std::collections::BTreeSet;

use super::{CellComplex, ComplexError};
use crate::unionfind::UnionFind;

/// A face-closed set of cells of a parent complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    cells: BTreeSet<usize>,
}

impl Subcomplex {
    /// Accepts `cells` only if it is already face-closed.
    pub fn new(cx: &CellComplex, cells: impl IntoIterator<Item = usize>) -> Result<Self, ComplexError> {
        let cells: BTreeSet<usize> = cells.into_iter().collect();
        for &c in &cells {
            if c >= cx.len() {
                return Err(ComplexError::NoSuchCell(c));
            }
            if let Some(f) = cx.face_links(c).iter().find(|f| !cells.contains(&f.cell)) {
                return Err(ComplexError::NotFaceClosed { cell: c, face: f.cell });
            }
        }
        Ok(Subcomplex { cells })
    }

    /// The smallest subcomplex containing `cells`.
    pub fn closure(cx: &CellComplex, cells: impl IntoIterator<Item = usize>) -> Result<Self, ComplexError> {
        let mut out = BTreeSet::new();
        for c in cells {
            if c >= cx.len() {
                return Err(ComplexError::NoSuchCell(c));
            }
            out.extend(cx.faces(c).iter().map(|e| e.cell));
        }
        Ok(Subcomplex { cells: out })
    }

    pub fn whole(cx: &CellComplex) -> Self {
        Subcomplex { cells: (0..cx.len()).collect() }
    }

    pub fn empty() -> Self {
        Subcomplex { cells: BTreeSet::new() }
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.cells.contains(&cell)
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Vertex ids of the 0-cells in the subcomplex.
    pub fn vertices(&self, cx: &CellComplex) -> Vec<usize> {
        self.cells.iter().filter(|&&c| cx.dim(c) == 0).map(|&c| cx.tuple(c)[0]).collect()
    }

    pub fn contains_vertex(&self, cx: &CellComplex, v: usize) -> bool {
        self.contains(cx.vertex_cell(v))
    }

    pub fn counts_by_dim(&self, cx: &CellComplex) -> Vec<usize> {
        let mut out = vec![0; cx.max_dim() + 1];
        for &c in &self.cells {
            out[cx.dim(c)] += 1;
        }
        out
    }

    /// Maximal cells of the subcomplex.
    pub fn maximal_cells(&self, cx: &CellComplex) -> Vec<usize> {
        self.cells.iter().copied().filter(|&c| !cx.star(c).iter().any(|&d| d != c && self.contains(d))).collect()
    }

    /// Connected components of the 1-skeleton, as sorted vertex lists.
    pub fn components(&self, cx: &CellComplex) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(cx.vertex_count());
        for &c in &self.cells {
            if cx.dim(c) == 1 {
                uf.union(cx.tuple(c)[0], cx.tuple(c)[1]);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in self.vertices(cx) {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self, cx: &CellComplex) -> Result<bool, ComplexError> {
        if self.is_empty() {
            return Err(ComplexError::EmptySubcomplex);
        }
        Ok(self.components(cx).len() == 1)
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { cells: self.cells.union(&other.cells).copied().collect() }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { cells: self.cells.intersection(&other.cells).copied().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CubicalComplex;

    #[test]
    fn connectivity_examples() {
        let x = CubicalComplex::from_top_cubes(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let one = Subcomplex::new(&x, [x.vertex_cell(0)]).unwrap();
        assert!(one.is_connected(&x).unwrap());
        let two = Subcomplex::new(&x, [x.vertex_cell(0), x.vertex_cell(2)]).unwrap();
        assert!(!two.is_connected(&x).unwrap());
        let all = Subcomplex::whole(&x);
        assert!(all.is_connected(&x).unwrap());
        assert_eq!(Subcomplex::empty().is_connected(&x), Err(ComplexError::EmptySubcomplex));
    }

    #[test]
    fn closure_and_face_check() {
        let x = CubicalComplex::from_top_cubes(4, &[vec![0, 1, 2, 3]]).unwrap();
        let sq = x.maximal_cells()[0];
        assert!(matches!(Subcomplex::new(&x, [sq]), Err(ComplexError::NotFaceClosed { .. })));
        let w = Subcomplex::closure(&x, [sq]).unwrap();
        assert_eq!(w, Subcomplex::whole(&x));
        assert_eq!(w.maximal_cells(&x), vec![sq]);
    }
}
