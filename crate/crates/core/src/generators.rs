//! Instance generators: lattice regions, cube trees, staircases, annuli and named examples.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CubicalComplex, Subcomplex};

/// A unit cube of the integer lattice: its lowest corner and its free axes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeCell {
    pub origin: Vec<i64>,
    pub axes: Vec<usize>,
}

impl LatticeCell {
    pub fn full(origin: Vec<i64>) -> Self {
        let axes = (0..origin.len()).collect();
        LatticeCell { origin, axes }
    }
}

/// The complex made of the given lattice cubes and all their faces.
/// Vertices are numbered in lexicographic order of their coordinates.
pub fn lattice_complex(cells: &[LatticeCell]) -> CubicalComplex {
    lattice_complex_with_coords(cells).0
}

/// As [`lattice_complex`], also returning the coordinates of each vertex.
pub fn lattice_complex_with_coords(cells: &[LatticeCell]) -> (CubicalComplex, Vec<Vec<i64>>) {
    let corners = |c: &LatticeCell| -> Vec<Vec<i64>> {
        (0..1usize << c.axes.len())
            .map(|bits| {
                let mut p = c.origin.clone();
                for (j, &a) in c.axes.iter().enumerate() {
                    p[a] += ((bits >> j) & 1) as i64;
                }
                p
            })
            .collect()
    };
    let mut ids: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for c in cells {
        for p in corners(c) {
            ids.insert(p, 0);
        }
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    let tops: Vec<Vec<usize>> = cells.iter().map(|c| corners(c).iter().map(|p| ids[p]).collect()).collect();
    let cx = CubicalComplex::from_top_cubes(ids.len(), &tops).expect("lattice cubes form a cubical complex");
    (cx, ids.into_keys().collect())
}

/// Full-dimensional unit cubes with the given lowest corners.
pub fn unit_cubes(origins: &[Vec<i64>]) -> CubicalComplex {
    let cells: Vec<LatticeCell> = origins.iter().cloned().map(LatticeCell::full).collect();
    lattice_complex(&cells)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("bad generator spec: {0}")]
    BadSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedExample {
    Point,
    Square,
    LShape,
    Cube,
    CubeBoundary,
}

/// What a generator asks for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// A region of the `dim`-dimensional lattice (dim 1 to 3) grown cube by
    /// cube; each new cube meets the region in a contractible set without
    /// breaking the flag condition, so the result is CAT(0).
    GridRegion {
        dim: usize,
        cubes: usize,
        seed: u64,
    },
    /// A planar region times a path of one to three edges.
    Prism {
        cubes: usize,
        seed: u64,
    },
    /// `cubes` cubes of dimension `dim`, each glued to an earlier one along a single face.
    CubeTree {
        dim: usize,
        cubes: usize,
        seed: u64,
    },
    /// A Young diagram with `rows` rows of nonincreasing random lengths.
    Staircase {
        rows: usize,
        seed: u64,
    },
    /// A band of `squares` squares closed into a cycle.
    Annulus {
        squares: usize,
    },
    Named {
        name: NamedExample,
    },
}

/// Declared ground truth, where the construction determines it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedProperties {
    pub npc: Option<bool>,
    pub cat0: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub complex: CubicalComplex,
    pub expected: ExpectedProperties,
    pub label: String,
}

const CAT0: ExpectedProperties = ExpectedProperties { npc: Some(true), cat0: Some(true) };

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    let bad = |m: &str| Err(GenError::BadSpec(m.to_string()));
    let (complex, expected, label) = match *spec {
        GeneratorSpec::GridRegion { dim, cubes, seed } => {
            if !(1..=3).contains(&dim) || cubes == 0 {
                return bad("grid_region needs 1 <= dim <= 3 and cubes >= 1");
            }
            (
                unit_cubes(&grow_region(dim, cubes, seed)),
                CAT0,
                format!("grid_region(dim={dim},cubes={cubes},seed={seed})"),
            )
        }
        GeneratorSpec::Prism { cubes, seed } => {
            if cubes == 0 {
                return bad("prism needs cubes >= 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let height = rng.gen_range(1..=3usize).min(cubes);
            let base = grow_region(2, cubes.div_ceil(height), rng.gen());
            let origins: Vec<Vec<i64>> =
                base.iter().flat_map(|o| (0..height as i64).map(move |z| vec![o[0], o[1], z])).collect();
            (unit_cubes(&origins), CAT0, format!("prism(cubes={cubes},seed={seed})"))
        }
        GeneratorSpec::CubeTree { dim, cubes, seed } => {
            if !(1..=crate::complex::DEFAULT_MAX_DIM).contains(&dim) || cubes == 0 {
                return bad("cube_tree needs 1 <= dim <= 4 and cubes >= 1");
            }
            (cube_tree(dim, cubes, seed), CAT0, format!("cube_tree(dim={dim},cubes={cubes},seed={seed})"))
        }
        GeneratorSpec::Staircase { rows, seed } => {
            if rows == 0 {
                return bad("staircase needs rows >= 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut len = rng.gen_range(rows..=2 * rows) as i64;
            let mut origins = Vec::new();
            for y in 0..rows as i64 {
                origins.extend((0..len).map(|x| vec![x, y]));
                len = rng.gen_range(1..=len);
            }
            (unit_cubes(&origins), CAT0, format!("staircase(rows={rows},seed={seed})"))
        }
        GeneratorSpec::Annulus { squares } => {
            if squares < 3 {
                return bad("annulus needs at least 3 squares");
            }
            let n = squares;
            let tops: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n, n + i, n + (i + 1) % n]).collect();
            let cx = CubicalComplex::from_top_cubes(2 * n, &tops).expect("annulus is a cubical complex");
            (cx, ExpectedProperties { npc: Some(true), cat0: Some(false) }, format!("annulus({n})"))
        }
        GeneratorSpec::Named { name } => {
            let cx = named(name);
            let expected = match name {
                NamedExample::CubeBoundary => ExpectedProperties { npc: Some(false), cat0: Some(false) },
                _ => CAT0,
            };
            (cx, expected, format!("{name:?}"))
        }
    };
    Ok(Generated { complex, expected, label })
}

pub fn named(name: NamedExample) -> CubicalComplex {
    let cell = |o: [i64; 3], axes: &[usize]| LatticeCell { origin: o.to_vec(), axes: axes.to_vec() };
    match name {
        NamedExample::Point => lattice_complex(&[LatticeCell { origin: vec![0], axes: vec![] }]),
        NamedExample::Square => unit_cubes(&[vec![0, 0]]),
        NamedExample::LShape => unit_cubes(&[vec![0, 0], vec![1, 0], vec![0, 1]]),
        NamedExample::Cube => unit_cubes(&[vec![0, 0, 0]]),
        NamedExample::CubeBoundary => lattice_complex(&[
            cell([0, 0, 0], &[0, 1]),
            cell([0, 0, 1], &[0, 1]),
            cell([0, 0, 0], &[0, 2]),
            cell([0, 1, 0], &[0, 2]),
            cell([0, 0, 0], &[1, 2]),
            cell([1, 0, 0], &[1, 2]),
        ]),
    }
}

/// Lowest corners of the lattice cubes at distance one step (sharing at least a vertex).
fn touching(o: &[i64]) -> Vec<Vec<i64>> {
    let d = o.len();
    (0..3usize.pow(d as u32))
        .map(|mut code| {
            o.iter()
                .map(|&x| {
                    let off = (code % 3) as i64 - 1;
                    code /= 3;
                    x + off
                })
                .collect()
        })
        .filter(|p: &Vec<i64>| p.as_slice() != o)
        .collect()
}

/// Number of boundary faces of the cube at `o` that lie in the region, or
/// `None` when that intersection is empty or not contractible.
fn contractible_contact(region: &BTreeSet<Vec<i64>>, o: &[i64]) -> Option<usize> {
    let d = o.len();
    // A face of the new cube, given by a pattern in {0,1,*}^d, is in the region
    // exactly when some region cube contains it.
    let in_region = |pattern: &[Option<u8>]| -> bool {
        let choices: Vec<Vec<i64>> = pattern
            .iter()
            .zip(o)
            .map(|(p, &x)| match p {
                Some(0) => vec![x - 1, x],
                Some(_) => vec![x, x + 1],
                None => vec![x],
            })
            .collect();
        let mut idx = vec![0usize; d];
        loop {
            let c: Vec<i64> = (0..d).map(|i| choices[i][idx[i]]).collect();
            if c.as_slice() != o && region.contains(&c) {
                return true;
            }
            let mut i = 0;
            while i < d {
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == d {
                return false;
            }
        }
    };
    let mut present: Vec<Vec<Option<u8>>> = Vec::new();
    for code in 0..3usize.pow(d as u32) {
        let mut c = code;
        let pattern: Vec<Option<u8>> = (0..d)
            .map(|_| {
                let r = c % 3;
                c /= 3;
                if r == 2 {
                    None
                } else {
                    Some(r as u8)
                }
            })
            .collect();
        if pattern.iter().any(|p| p.is_some()) && in_region(&pattern) {
            present.push(pattern);
        }
    }
    if present.is_empty() {
        return None;
    }
    let euler: i64 =
        present.iter().map(|p| if p.iter().filter(|x| x.is_none()).count() % 2 == 0 { 1 } else { -1 }).sum();
    let verts: Vec<usize> = present
        .iter()
        .filter(|p| p.iter().all(|x| x.is_some()))
        .map(|p| p.iter().enumerate().map(|(i, x)| (x.unwrap() as usize) << i).sum())
        .collect();
    let mut uf = crate::unionfind::UnionFind::new(1 << d);
    for p in present.iter().filter(|p| p.iter().filter(|x| x.is_none()).count() == 1) {
        let j = p.iter().position(|x| x.is_none()).unwrap();
        let base: usize = p.iter().enumerate().filter_map(|(i, x)| x.map(|b| (b as usize) << i)).sum();
        uf.union(base, base | 1 << j);
    }
    let connected = verts.iter().all(|&v| uf.same(v, verts[0]));
    (connected && euler == 1).then_some(present.len())
}

/// Whether adding the cube at `o` keeps every link at its corners flag.
/// Only empty triangles can appear, and only in dimension 3.
fn keeps_flag(region: &BTreeSet<Vec<i64>>, o: &[i64]) -> bool {
    if o.len() < 3 {
        return true;
    }
    let occupied = |c: &[i64]| c == o || region.contains(c);
    for corner in 0..8usize {
        let p: Vec<i64> = (0..3).map(|i| o[i] + ((corner >> i) & 1) as i64).collect();
        // Octant s at p is the cube with lowest corner p - s.
        let cube_at = |s: usize| -> Vec<i64> { (0..3).map(|i| p[i] - ((s >> i) & 1) as i64).collect() };
        for s in 0..8usize {
            if occupied(&cube_at(s)) {
                continue;
            }
            // The quarter-plane of s orthogonal to axis k is shared with octant s ^ (1 << k).
            if (0..3).all(|k| occupied(&cube_at(s ^ (1 << k)))) {
                return false;
            }
        }
    }
    true
}

fn grow_region(dim: usize, cubes: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut region: BTreeSet<Vec<i64>> = BTreeSet::from([vec![0; dim]]);
    while region.len() < cubes {
        let frontier: BTreeSet<Vec<i64>> =
            region.iter().flat_map(|o| touching(o)).filter(|c| !region.contains(c)).collect();
        let ok: Vec<&Vec<i64>> =
            frontier.iter().filter(|c| contractible_contact(&region, c).is_some() && keeps_flag(&region, c)).collect();
        if ok.is_empty() {
            break;
        }
        let pick = ok[rng.gen_range(0..ok.len())].clone();
        region.insert(pick);
    }
    region.into_iter().collect()
}

fn cube_tree(dim: usize, cubes: usize, seed: u64) -> CubicalComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tops: Vec<Vec<usize>> = vec![(0..1usize << dim).collect()];
    let mut next = 1usize << dim;
    while tops.len() < cubes {
        let host = tops[rng.gen_range(0..tops.len())].clone();
        // A random proper face of the host, given by dimension and pattern.
        let k = rng.gen_range(0..dim);
        let mut axes: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            axes.swap(i, rng.gen_range(0..=i));
        }
        let free = &axes[..k];
        let fixed_bits: usize = axes[k..].iter().map(|&a| (rng.gen_range(0..2usize)) << a).sum();
        let face: Vec<usize> = (0..1usize << k)
            .map(|i| {
                let idx = free.iter().enumerate().fold(fixed_bits, |acc, (j, &a)| acc | ((i >> j) & 1) << a);
                host[idx]
            })
            .collect();
        let cube: Vec<usize> = (0..1usize << dim)
            .map(|i| {
                if i >> k == 0 {
                    face[i]
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        tops.push(cube);
    }
    CubicalComplex::from_top_cubes(next, &tops).expect("tree of cubes is a cubical complex")
}

/// How [`random_subcomplex`] chooses the cells it adds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMode {
    /// Any cell touching the current subcomplex.
    #[default]
    AnyCell,
    /// Only maximal cubes of `X` touching the current subcomplex.
    MaximalCubes,
}

/// A connected face-closed subcomplex grown from a random vertex by adding
/// closures of cells that share a vertex with it, until it holds at least
/// `target_fraction` of the cells of `X`.
pub fn random_subcomplex(x: &CubicalComplex, seed: u64, target_fraction: f64, mode: GrowthMode) -> Subcomplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = x.vertex_cell(rng.gen_range(0..x.vertex_count()));
    let mut w = Subcomplex::closure(x, [start]).expect("vertex cell");
    let target = (target_fraction.clamp(0.0, 1.0) * x.len() as f64).ceil() as usize;
    let maximal: BTreeSet<usize> = x.maximal_cells().into_iter().collect();
    while w.len() < target {
        let touches = |c: usize| x.tuple(c).iter().any(|&v| w.contains_vertex(x, v));
        let candidates: Vec<usize> = (0..x.len())
            .filter(|&c| !w.contains(c) && (mode == GrowthMode::AnyCell || maximal.contains(&c)) && touches(c))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let c = candidates[rng.gen_range(0..candidates.len())];
        w = w.union(&Subcomplex::closure(x, [c]).expect("cell of X"));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{is_cat0, is_npc};

    fn suite() -> Vec<GeneratorSpec> {
        let mut out = Vec::new();
        for seed in 0..6 {
            out.push(GeneratorSpec::GridRegion { dim: 2, cubes: 10, seed });
            out.push(GeneratorSpec::GridRegion { dim: 3, cubes: 9, seed });
            out.push(GeneratorSpec::GridRegion { dim: 1, cubes: 4, seed });
            out.push(GeneratorSpec::Prism { cubes: 8, seed });
            out.push(GeneratorSpec::CubeTree { dim: 3, cubes: 5, seed });
            out.push(GeneratorSpec::CubeTree { dim: 2, cubes: 7, seed });
            out.push(GeneratorSpec::Staircase { rows: 4, seed });
        }
        for squares in 3..9 {
            out.push(GeneratorSpec::Annulus { squares });
        }
        for name in [
            NamedExample::Point,
            NamedExample::Square,
            NamedExample::LShape,
            NamedExample::Cube,
            NamedExample::CubeBoundary,
        ] {
            out.push(GeneratorSpec::Named { name });
        }
        out
    }

    #[test]
    fn declared_truth_matches_the_certifiers() {
        for spec in suite() {
            let g = generate(&spec).unwrap();
            assert_eq!(Some(is_npc(&g.complex).holds), g.expected.npc, "{}", g.label);
            assert_eq!(Some(is_cat0(&g.complex).unwrap().holds), g.expected.cat0, "{}", g.label);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        for spec in suite() {
            let a = generate(&spec).unwrap().complex.description();
            let b = generate(&spec).unwrap().complex.description();
            assert_eq!(a, b);
        }
        let a = generate(&GeneratorSpec::GridRegion { dim: 2, cubes: 12, seed: 1 }).unwrap().complex;
        let b = generate(&GeneratorSpec::GridRegion { dim: 2, cubes: 12, seed: 2 }).unwrap().complex;
        assert_eq!(a.maximal_cells().len(), 12);
        assert_ne!(a.description(), b.description());
    }

    #[test]
    fn sizes_and_bad_specs() {
        let t = generate(&GeneratorSpec::CubeTree { dim: 3, cubes: 6, seed: 9 }).unwrap().complex;
        assert_eq!(t.maximal_cells().len(), 6);
        assert_eq!(named(NamedExample::LShape).maximal_cells().len(), 3);
        assert_eq!(named(NamedExample::CubeBoundary).counts_by_dim(), vec![8, 12, 6]);
        assert!(generate(&GeneratorSpec::Annulus { squares: 2 }).is_err());
        assert!(generate(&GeneratorSpec::GridRegion { dim: 5, cubes: 3, seed: 0 }).is_err());
        let json = serde_json::to_string(&GeneratorSpec::Annulus { squares: 4 }).unwrap();
        assert_eq!(json, r#"{"kind":"annulus","squares":4}"#);
    }

    #[test]
    fn random_subcomplex_extremes() {
        let l = named(NamedExample::LShape);
        assert_eq!(random_subcomplex(&l, 3, 1.0, GrowthMode::AnyCell), Subcomplex::whole(&l));
        let w = random_subcomplex(&l, 3, 0.0, GrowthMode::AnyCell);
        assert_eq!(w.len(), 1);
        assert_eq!(w.vertices(&l).len(), 1);
    }

    #[test]
    fn random_subcomplex_fixture() {
        let l = named(NamedExample::LShape);
        let w = random_subcomplex(&l, 7, 0.5, GrowthMode::AnyCell);
        let cells: Vec<usize> = w.cells().collect();
        assert_eq!(cells, vec![0, 1, 2, 3, 4, 5, 8, 9, 10, 11, 12, 13, 15, 18, 19]);
    }

    #[test]
    fn random_subcomplexes_are_closed_and_connected() {
        for seed in 0..20 {
            let x = generate(&GeneratorSpec::GridRegion { dim: 3, cubes: 6, seed }).unwrap().complex;
            for mode in [GrowthMode::AnyCell, GrowthMode::MaximalCubes] {
                let w = random_subcomplex(&x, seed, 0.4, mode);
                assert!(Subcomplex::new(&x, w.cells()).is_ok());
                assert!(w.is_connected(&x).unwrap());
                assert!(w.len() as f64 >= 0.4 * x.len() as f64);
            }
        }
    }
}
