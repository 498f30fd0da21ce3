use serde::{Deserialize, Serialize};

use super::{CellComplex, ComplexError};

/// A point of a complex: a cell and coordinates in its unit cube.
///
/// After [`CellComplex::canonicalize`] the cell is the unique one whose open
/// cell contains the point, so equality of canonical points is equality of
/// the underlying points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub cell: usize,
    pub coords: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(cell: usize, coords: Vec<f64>) -> Self {
        AmbientPoint { cell, coords }
    }

    /// Parses `cell:x,y,...`; a bare `cell` is a vertex cell.
    pub fn parse(s: &str) -> Option<Self> {
        let (cell, rest) = match s.split_once(':') {
            Some((c, r)) => (c, r),
            None => (s, ""),
        };
        let cell = cell.trim().parse().ok()?;
        let coords = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|x| x.trim().parse::<f64>().ok()).collect::<Option<Vec<_>>>()?
        };
        Some(AmbientPoint { cell, coords })
    }
}

/// Piecewise-linear path with one straight segment per listed cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    pub points: Vec<AmbientPoint>,
    /// `segment_cubes[i]` contains `points[i]` and `points[i + 1]`.
    pub segment_cubes: Vec<usize>,
}

impl PolyPath {
    pub fn single(p: AmbientPoint) -> Self {
        PolyPath { points: vec![p], segment_cubes: Vec::new() }
    }

    /// Sum of Euclidean segment lengths, each measured in its cube and
    /// multiplied by `scale` (the side length of a cell).
    pub fn length(&self, cx: &CellComplex, scale: f64) -> f64 {
        self.segment_cubes
            .iter()
            .enumerate()
            .map(|(i, &c)| cx.segment_length(c, &self.points[i], &self.points[i + 1]).unwrap_or(f64::INFINITY) * scale)
            .sum()
    }

    /// Points along the path: every breakpoint plus `per_segment - 1` interior
    /// samples per segment.
    pub fn samples(&self, cx: &CellComplex, per_segment: usize) -> Vec<AmbientPoint> {
        let mut out = vec![self.points[0].clone()];
        for (i, &c) in self.segment_cubes.iter().enumerate() {
            let (Some(a), Some(b)) = (cx.embed(&self.points[i], c), cx.embed(&self.points[i + 1], c)) else {
                continue;
            };
            for s in 1..=per_segment {
                let t = s as f64 / per_segment as f64;
                let x: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p + t * (q - p)).collect();
                out.push(cx.point_in(c, &x).expect("segment stays in its cube"));
            }
        }
        out
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl CellComplex {
    /// Descends to the carrier: the face whose open cell contains the point.
    pub fn canonicalize(&self, p: &AmbientPoint) -> Result<AmbientPoint, ComplexError> {
        if p.cell >= self.len() {
            return Err(ComplexError::NoSuchCell(p.cell));
        }
        let k = self.dim(p.cell);
        if p.coords.len() != k || p.coords.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(ComplexError::CoordOutOfRange { cell: p.cell, coords: p.coords.clone() });
        }
        let pattern: Vec<Option<u8>> = p
            .coords
            .iter()
            .map(|&x| {
                if x == 0.0 {
                    Some(0)
                } else if x == 1.0 {
                    Some(1)
                } else {
                    None
                }
            })
            .collect();
        if pattern.iter().all(|x| x.is_none()) {
            return Ok(p.clone());
        }
        let e = self.face_by_pattern(p.cell, &pattern);
        let mut coords = vec![0.0; e.dim()];
        let free = p.coords.iter().zip(&pattern).filter(|(_, q)| q.is_none()).map(|(x, _)| *x);
        for (x, &(r, f)) in free.zip(&e.frame) {
            coords[r] = if f { 1.0 - x } else { x };
        }
        Ok(AmbientPoint { cell: e.cell, coords })
    }

    /// Canonical point from coordinates in `cell`, clamping rounding noise
    /// of at most `1e-12` back into the unit cube.
    pub fn point_in(&self, cell: usize, coords: &[f64]) -> Result<AmbientPoint, ComplexError> {
        let coords = coords
            .iter()
            .map(|&x| {
                if (-1e-12..0.0).contains(&x) {
                    0.0
                } else if x > 1.0 && x <= 1.0 + 1e-12 {
                    1.0
                } else {
                    x
                }
            })
            .collect();
        self.canonicalize(&AmbientPoint { cell, coords })
    }

    /// The vertex `v` as a point.
    pub fn vertex_point(&self, v: usize) -> AmbientPoint {
        AmbientPoint { cell: self.vertex_cell(v), coords: Vec::new() }
    }

    /// Coordinates of a canonical point inside `cube`, if its carrier is a face of `cube`.
    pub fn embed(&self, p: &AmbientPoint, cube: usize) -> Option<Vec<f64>> {
        self.face_entry(cube, p.cell).map(|e| e.lift(&p.coords))
    }

    /// Euclidean distance of two points measured inside `cube`.
    pub fn segment_length(&self, cube: usize, a: &AmbientPoint, b: &AmbientPoint) -> Option<f64> {
        Some(euclid(&self.embed(a, cube)?, &self.embed(b, cube)?))
    }

    /// Cubes containing both canonical points, ascending.
    pub fn common_cubes(&self, a: &AmbientPoint, b: &AmbientPoint) -> Vec<usize> {
        let sb = self.star(b.cell);
        self.star(a.cell).iter().copied().filter(|c| sb.binary_search(c).is_ok()).collect()
    }
}
