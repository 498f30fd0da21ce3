//! Walls of a cubical complex and their hyperplanes in the first subdivision.
//!
//! Two edges are parallel when they are opposite edges of a square; a wall
//! is a class of the equivalence relation this generates. The hyperplane of
//! a wall is the union of the midcubes orthogonal to its edges, realised as
//! a subcomplex of `X'`: the cells `(F, G)` of `X'` where `F` has an edge
//! in the wall.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::certify::{is_convex, Cat0Complex, Certificate, CertifyError};
use crate::complex::{cubical_subdivision, ComplexError, CubicalComplex, Subcomplex, Subdivision};
use crate::links::{link, restrict_link};
use crate::unionfind::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WallError {
    #[error("wall {wall} meets cube {cube} in more than one midcube")]
    SelfIntersecting { wall: usize, cube: usize },
    #[error("wall {wall}: {reason}")]
    SageevViolation { wall: usize, reason: String },
    #[error("no wall with id {0}")]
    NoSuchWall(usize),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A cube met by a wall and the coordinate directions of the wall's edges in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub cube: usize,
    pub directions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub id: usize,
    pub edges: Vec<usize>,
    /// Cubes of dimension at least one having an edge in the wall, ascending.
    pub crossings: Vec<Crossing>,
}

impl Wall {
    pub fn crosses(&self, cube: usize) -> bool {
        self.crossings.binary_search_by_key(&cube, |c| c.cube).is_ok()
    }

    /// A cube met in more than one midcube, if any.
    pub fn self_intersection(&self) -> Option<usize> {
        self.crossings.iter().find(|c| c.directions.len() > 1).map(|c| c.cube)
    }
}

/// Walls ordered by their smallest edge.
pub fn wall_classes(x: &CubicalComplex) -> Vec<Wall> {
    let mut uf = UnionFind::new(x.len());
    for sq in x.cells_of_dim(2) {
        for j in 0..2 {
            let side = |b: u8| {
                let mut p = vec![None; 2];
                p[1 - j] = Some(b);
                x.face_by_pattern(sq, &p).cell
            };
            uf.union(side(0), side(1));
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, _) in x.edges() {
        classes.entry(uf.find(e)).or_default().push(e);
    }
    let mut walls: Vec<Vec<usize>> = classes.into_values().collect();
    walls.sort();
    let mut wall_of = vec![usize::MAX; x.len()];
    for (i, w) in walls.iter().enumerate() {
        for &e in w {
            wall_of[e] = i;
        }
    }
    let mut crossings: Vec<Vec<Crossing>> = vec![Vec::new(); walls.len()];
    for c in 0..x.len() {
        let k = x.dim(c);
        let mut by_wall: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..k {
            let p: Vec<Option<u8>> = (0..k).map(|i| if i == j { None } else { Some(0) }).collect();
            by_wall.entry(wall_of[x.face_by_pattern(c, &p).cell]).or_default().push(j);
        }
        for (w, directions) in by_wall {
            crossings[w].push(Crossing { cube: c, directions });
        }
    }
    walls.into_iter().zip(crossings).enumerate().map(|(id, (edges, crossings))| Wall { id, edges, crossings }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SageevReport {
    pub wall: usize,
    pub cubes_crossed: usize,
    pub single_midcube: bool,
    pub hyperplane_connected: bool,
    pub components: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfspacePair {
    pub wall: usize,
    pub sigma: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

/// Link of a hyperplane vertex in `X'` as the suspension of its link in the hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinCheck {
    pub vertices_checked: usize,
    pub failure: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfspaceBundle {
    pub pair: HalfspacePair,
    pub sigma: Certificate,
    pub side_a: Certificate,
    pub side_b: Certificate,
    pub join: JoinCheck,
}

/// Walls of `X` together with its first subdivision.
pub struct WallSystem<'a> {
    pub complex: &'a CubicalComplex,
    pub subdivision: Subdivision,
    pub walls: Vec<Wall>,
}

impl<'a> WallSystem<'a> {
    pub fn new(x: &'a CubicalComplex) -> Result<Self, WallError> {
        Ok(WallSystem { complex: x, subdivision: cubical_subdivision(x)?, walls: wall_classes(x) })
    }

    fn wall(&self, id: usize) -> Result<&Wall, WallError> {
        self.walls.get(id).ok_or(WallError::NoSuchWall(id))
    }

    /// Cells of `X'` lying on the wall's midcubes.
    fn sigma_cells(&self, w: &Wall) -> Subcomplex {
        let sub = &self.subdivision;
        let cells = (0..sub.complex.len()).filter(|&c| w.crosses(sub.pair(c).0));
        Subcomplex::new(&sub.complex, cells).expect("faces of crossing cells cross or lie in crossing cells")
    }

    pub fn hyperplane(&self, id: usize) -> Result<Subcomplex, WallError> {
        let w = self.wall(id)?;
        if let Some(cube) = w.self_intersection() {
            return Err(WallError::SelfIntersecting { wall: id, cube });
        }
        Ok(self.sigma_cells(w))
    }

    /// Components of `X'` minus the hyperplane, as labels per `X'` cell
    /// (`usize::MAX` on the hyperplane), and their number.
    fn complement(&self, sigma: &Subcomplex) -> (Vec<usize>, usize) {
        let xs = &self.subdivision.complex;
        let mut uf = UnionFind::new(xs.len());
        for c in (0..xs.len()).filter(|&c| !sigma.contains(c)) {
            for f in xs.face_links(c) {
                if !sigma.contains(f.cell) {
                    uf.union(c, f.cell);
                }
            }
        }
        let mut label = vec![usize::MAX; xs.len()];
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        for c in (0..xs.len()).filter(|&c| !sigma.contains(c)) {
            let n = roots.len();
            label[c] = *roots.entry(uf.find(c)).or_insert(n);
        }
        (label, roots.len())
    }

    pub fn check_sageev(&self, id: usize) -> Result<SageevReport, WallError> {
        let w = self.wall(id)?;
        let sigma = self.sigma_cells(w);
        let single = w.self_intersection().is_none();
        let connected = sigma.is_connected(&self.subdivision.complex)?;
        let (_, components) = self.complement(&sigma);
        Ok(SageevReport {
            wall: id,
            cubes_crossed: w.crossings.len(),
            single_midcube: single,
            hyperplane_connected: connected,
            components,
            passed: single && connected && components == 2,
        })
    }

    /// The two closed halfspaces of a wall, their convexity certificates,
    /// and the suspension check of links along the hyperplane.
    pub fn halfspaces(&self, x: Cat0Complex<'_>, id: usize) -> Result<HalfspaceBundle, WallError> {
        let report = self.check_sageev(id)?;
        if !report.passed {
            return Err(WallError::SageevViolation { wall: id, reason: format!("{report:?}") });
        }
        let xs = &self.subdivision.complex;
        let sigma = self.hyperplane(id)?;
        let (label, _) = self.complement(&sigma);
        let side = |k: usize| Subcomplex::closure(xs, (0..xs.len()).filter(|&c| label[c] == k)).expect("cells of X'");
        let (a, b) = (side(0), side(1));
        if a.union(&b) != Subcomplex::whole(xs) || a.intersection(&b) != sigma {
            return Err(WallError::SageevViolation {
                wall: id,
                reason: "halfspaces do not meet along the hyperplane".into(),
            });
        }
        let cat0 = Cat0Complex::subdivision(x, &self.subdivision);
        let bundle = HalfspaceBundle {
            sigma: is_convex(cat0, &sigma)?,
            side_a: is_convex(cat0, &a)?,
            side_b: is_convex(cat0, &b)?,
            join: self.join_check(&sigma),
            pair: HalfspacePair {
                wall: id,
                sigma: sigma.cells().collect(),
                side_a: a.cells().collect(),
                side_b: b.cells().collect(),
            },
        };
        Ok(bundle)
    }

    /// At each vertex of the hyperplane, the link in `X'` has exactly two
    /// directions off the hyperplane, no simplex contains both, and every
    /// simplex is a hyperplane-link simplex joined with at most one of them.
    fn join_check(&self, sigma: &Subcomplex) -> JoinCheck {
        let xs = &self.subdivision.complex;
        let verts = sigma.vertices(xs);
        for &v in &verts {
            let l = link(xs, v).expect("vertex");
            let k = restrict_link(&l, sigma).expect("vertex of sigma");
            let poles: Vec<usize> = l.vertices().into_iter().filter(|&u| !k.contains_vertex(u)).collect();
            let mut ok = poles.len() == 2;
            for s in l.simplices() {
                let base: Vec<usize> = s.iter().copied().filter(|u| !poles.contains(u)).collect();
                ok &= s.len() - base.len() <= 1 && k.is_simplex(&base);
            }
            for s in k.simplices().into_iter().chain([Vec::new()]) {
                for &p in &poles {
                    let mut t = s.clone();
                    t.push(p);
                    t.sort_unstable();
                    ok &= l.is_simplex(&t);
                }
            }
            if !ok {
                return JoinCheck { vertices_checked: verts.len(), failure: Some(v) };
            }
        }
        JoinCheck { vertices_checked: verts.len(), failure: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, named, GeneratorSpec, NamedExample};

    #[test]
    fn wall_counts() {
        let sq = named(NamedExample::Square);
        let w = wall_classes(&sq);
        assert_eq!(w.iter().map(|w| w.edges.len()).collect::<Vec<_>>(), vec![2, 2]);
        let l = named(NamedExample::LShape);
        let mut crossed: Vec<usize> =
            wall_classes(&l).iter().map(|w| w.crossings.iter().filter(|c| l.dim(c.cube) == 2).count()).collect();
        crossed.sort();
        assert_eq!(crossed, vec![1, 1, 2, 2]);
        let c = named(NamedExample::Cube);
        let w = wall_classes(&c);
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|w| w.edges.len() == 4));
    }

    #[test]
    fn walls_partition_edges() {
        let x = generate(&GeneratorSpec::GridRegion { dim: 3, cubes: 7, seed: 2 }).unwrap().complex;
        let mut all: Vec<usize> = wall_classes(&x).into_iter().flat_map(|w| w.edges).collect();
        all.sort();
        assert_eq!(all, x.cells_of_dim(1).collect::<Vec<_>>());
    }

    #[test]
    fn hyperplane_shapes() {
        let sq = named(NamedExample::Square);
        let ws = WallSystem::new(&sq).unwrap();
        let h = ws.hyperplane(0).unwrap();
        assert_eq!(h.counts_by_dim(&ws.subdivision.complex), vec![3, 2, 0]);

        let l = named(NamedExample::LShape);
        let ws = WallSystem::new(&l).unwrap();
        for w in &ws.walls {
            let h = ws.hyperplane(w.id).unwrap();
            let squares = w.crossings.iter().filter(|c| l.dim(c.cube) == 2).count();
            assert_eq!(h.counts_by_dim(&ws.subdivision.complex)[1], 2 * squares);
            let length = h.counts_by_dim(&ws.subdivision.complex)[1] as f64 * ws.subdivision.scale();
            assert_eq!(length, squares as f64);
        }

        let c = named(NamedExample::Cube);
        let ws = WallSystem::new(&c).unwrap();
        for w in &ws.walls {
            let h = ws.hyperplane(w.id).unwrap();
            assert_eq!(h.counts_by_dim(&ws.subdivision.complex), vec![9, 12, 4, 0]);
        }
    }

    #[test]
    fn sageev_checks_pass_on_cat0_examples() {
        for name in [NamedExample::LShape, NamedExample::Cube, NamedExample::Square] {
            let x = named(name);
            let ws = WallSystem::new(&x).unwrap();
            for w in &ws.walls {
                let r = ws.check_sageev(w.id).unwrap();
                assert!(r.passed, "{name:?}: {r:?}");
                assert_eq!(r.components, 2);
            }
        }
    }

    #[test]
    fn annulus_wall_fails_to_separate() {
        let x = generate(&GeneratorSpec::Annulus { squares: 4 }).unwrap().complex;
        let ws = WallSystem::new(&x).unwrap();
        let reports: Vec<SageevReport> = ws.walls.iter().map(|w| ws.check_sageev(w.id).unwrap()).collect();
        // The core circle (through the spokes) separates the two boundary
        // circles; each radial wall crosses one square and cuts nothing off.
        let core = reports.iter().find(|r| r.cubes_crossed == 8).expect("core wall");
        assert!(core.passed);
        let radial: Vec<&SageevReport> = reports.iter().filter(|r| r.cubes_crossed == 3).collect();
        assert_eq!(radial.len(), 4);
        assert!(radial.iter().all(|r| r.components == 1 && !r.passed));
    }

    #[test]
    fn halfspaces_are_convex() {
        for name in [NamedExample::Square, NamedExample::LShape, NamedExample::Cube] {
            let x = named(name);
            let (cat0, _) = Cat0Complex::certify(&x).unwrap();
            let ws = WallSystem::new(&x).unwrap();
            let top = x.max_dim();
            for w in &ws.walls {
                let b = ws.halfspaces(cat0, w.id).unwrap();
                assert!(b.sigma.holds && b.side_a.holds && b.side_b.holds, "{name:?} wall {}", w.id);
                assert_eq!(b.join.failure, None);
                let tops = |cells: &[usize]| cells.iter().filter(|&&c| ws.subdivision.complex.dim(c) == top).count();
                let mut sizes = [tops(&b.pair.side_a), tops(&b.pair.side_b)];
                sizes.sort();
                if name == NamedExample::LShape {
                    let crossed = w.crossings.iter().filter(|c| x.dim(c.cube) == 2).count();
                    assert_eq!(sizes, if crossed == 1 { [2, 10] } else { [4, 8] });
                } else {
                    assert_eq!(sizes[0], sizes[1]);
                }
            }
        }
    }
}
