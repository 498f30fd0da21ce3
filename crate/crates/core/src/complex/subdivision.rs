use std::collections::HashMap;

use super::{AmbientPoint, ComplexDescription, ComplexError, CubicalComplex, Subcomplex};

/// First cubical subdivision `X'` of a complex `X`.
///
/// Vertices of `X'` are the barycentres of the cells of `X` (vertex `i` of
/// `X'` is the barycentre of cell `i` of `X`). A cell of `X'` is a pair
/// `(F, G)` of cells of `X` with `F` a face of `G`; it is the set of points
/// of `G` lying between the barycentre of `F` and that of `G`, and its
/// dimension is `dim G - dim F`. Each cell of `X'` is metrically a cube of
/// side `1/2`; [`Subdivision::scale`] records that factor.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: CubicalComplex,
    pairs: Vec<(usize, usize)>,
    patterns: Vec<Vec<Option<u8>>>,
    lookup: HashMap<(usize, usize), usize>,
    parent_faces: Vec<Vec<usize>>,
}

impl Subdivision {
    /// Side length of an `X'` cube measured in `X` units.
    pub fn scale(&self) -> f64 {
        0.5
    }

    /// `(F, G)` for a cell of `X'`.
    pub fn pair(&self, cell: usize) -> (usize, usize) {
        self.pairs[cell]
    }

    /// The cell of `X` whose open cell contains the open cell of `X'`.
    pub fn carrier(&self, cell: usize) -> usize {
        self.pairs[cell].1
    }

    pub fn cell_of_pair(&self, face: usize, cube: usize) -> Option<usize> {
        self.lookup.get(&(face, cube)).copied()
    }

    /// The `X'` cells making up a subcomplex of `X`.
    pub fn refine(&self, w: &Subcomplex) -> Subcomplex {
        Subcomplex::new(&self.complex, (0..self.pairs.len()).filter(|&c| w.contains(self.pairs[c].1)))
            .expect("refinement of a subcomplex is face-closed")
    }

    /// Maps a point of `X'` to the same point of `X`.
    pub fn to_parent(&self, x: &CubicalComplex, p: &AmbientPoint) -> Result<AmbientPoint, ComplexError> {
        let (_, g) = self.pairs[p.cell];
        let mut c = p.coords.iter();
        let coords: Vec<f64> = self.patterns[p.cell]
            .iter()
            .map(|f| match f {
                Some(b) => {
                    let f = *b as f64;
                    f + c.next().expect("coordinate per fixed direction") * (0.5 - f)
                }
                None => 0.5,
            })
            .collect();
        x.point_in(g, &coords)
    }

    /// Maps a canonical point of `X` to the same point of `X'`.
    pub fn from_parent(&self, p: &AmbientPoint) -> Result<AmbientPoint, ComplexError> {
        let corner: Vec<u8> = p.coords.iter().map(|&x| if x <= 0.5 { 0 } else { 1 }).collect();
        let face = if corner.is_empty() {
            p.cell
        } else {
            let pattern: Vec<Option<u8>> = corner.iter().map(|&b| Some(b)).collect();
            self.parent_face(p.cell, &pattern)
        };
        let cell = self.lookup[&(face, p.cell)];
        let coords: Vec<f64> = p.coords.iter().zip(&corner).map(|(&x, &b)| (x - b as f64) / (0.5 - b as f64)).collect();
        self.complex.point_in(cell, &coords)
    }

    fn parent_face(&self, cube: usize, pattern: &[Option<u8>]) -> usize {
        self.parent_faces[cube][super::pattern_code(pattern)]
    }
}

/// Builds `X'` together with its cell/point correspondences with `X`.
pub fn cubical_subdivision(x: &CubicalComplex) -> Result<Subdivision, ComplexError> {
    let mut pairs = Vec::new();
    let mut patterns = Vec::new();
    let mut tuples = Vec::new();
    for f in 0..x.len() {
        pairs.push((f, f));
        patterns.push(vec![None; x.dim(f)]);
        tuples.push(vec![f]);
    }
    for g in 0..x.len() {
        let k = x.dim(g);
        for e in x.faces(g) {
            let fixed: Vec<usize> = (0..k).filter(|&i| e.pattern[i].is_some()).collect();
            if fixed.is_empty() {
                continue;
            }
            let tuple = (0..1usize << fixed.len())
                .map(|bits| {
                    let mut h = vec![None; k];
                    for (a, &i) in fixed.iter().enumerate() {
                        if (bits >> a) & 1 == 0 {
                            h[i] = e.pattern[i];
                        }
                    }
                    x.face_by_pattern(g, &h).cell
                })
                .collect();
            pairs.push((e.cell, g));
            patterns.push(e.pattern.clone());
            tuples.push(tuple);
        }
    }
    let desc = ComplexDescription { vertices: x.len(), cubes: tuples };
    let complex = CubicalComplex::validate_with_bound(&desc, x.max_dim().max(super::DEFAULT_MAX_DIM))?;
    let lookup = pairs.iter().enumerate().map(|(c, &p)| (p, c)).collect();
    let parent_faces = (0..x.len()).map(|g| x.faces(g).iter().map(|e| e.cell).collect()).collect();
    Ok(Subdivision { complex, pairs, patterns, lookup, parent_faces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lshape() -> CubicalComplex {
        // Unit squares [0,1]x[0,1], [1,2]x[0,1], [0,1]x[1,2]; vertex (i,j) has id 3j+i.
        CubicalComplex::from_top_cubes(8, &[vec![0, 1, 3, 4], vec![1, 2, 4, 5], vec![3, 4, 6, 7]]).unwrap()
    }

    #[test]
    fn cell_counts() {
        let edge = CubicalComplex::from_top_cubes(2, &[vec![0, 1]]).unwrap();
        let s = cubical_subdivision(&edge).unwrap();
        assert_eq!(s.complex.counts_by_dim(), vec![3, 2]);
        let sq = CubicalComplex::from_top_cubes(4, &[vec![0, 1, 2, 3]]).unwrap();
        let s = cubical_subdivision(&sq).unwrap();
        assert_eq!(s.complex.counts_by_dim(), vec![9, 12, 4]);
        let s = cubical_subdivision(&lshape()).unwrap();
        assert_eq!(s.complex.counts_by_dim()[2], 12);
        assert_eq!(s.complex.vertex_count(), 21);
    }

    #[test]
    fn volume_is_preserved() {
        let cube = CubicalComplex::from_top_cubes(8, &[(0..8).collect()]).unwrap();
        let s = cubical_subdivision(&cube).unwrap();
        let counts = s.complex.counts_by_dim();
        assert_eq!(counts[3] as f64 * 0.125, 1.0);
        assert_eq!(counts, vec![27, 54, 36, 8]);
    }

    #[test]
    fn point_maps_round_trip() {
        let x = lshape();
        let s = cubical_subdivision(&x).unwrap();
        for g in x.maximal_cells() {
            for coords in [[0.3, 0.8], [0.5, 0.25], [0.0, 0.7], [0.5, 0.5], [1.0, 1.0]] {
                let p = x.point_in(g, &coords).unwrap();
                let q = s.from_parent(&p).unwrap();
                let back = s.to_parent(&x, &q).unwrap();
                assert_eq!(back.cell, p.cell);
                for (a, b) in back.coords.iter().zip(&p.coords) {
                    assert!((a - b).abs() < 1e-12);
                }
                assert!(x.is_face(p.cell, s.carrier(q.cell)) || s.carrier(q.cell) == p.cell);
            }
        }
    }
}
