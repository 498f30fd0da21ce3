use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::complex::CubicalComplex;
use crate::generators::{lattice_complex_with_coords, named, LatticeCell, NamedExample};
use crate::links::{link, ConePoint, LinkPoint};

fn l_shape() -> (CubicalComplex, Vec<Vec<i64>>) {
    lattice_complex_with_coords(&[
        LatticeCell::full(vec![0, 0]),
        LatticeCell::full(vec![1, 0]),
        LatticeCell::full(vec![0, 1]),
    ])
}

fn vertex_at(coords: &[Vec<i64>], p: &[i64]) -> usize {
    coords.iter().position(|c| c == p).unwrap()
}

fn point_at(x: &CubicalComplex, coords: &[Vec<i64>], p: [i64; 2]) -> AmbientPoint {
    x.vertex_point(vertex_at(coords, &p))
}

#[test]
fn grid_sizes() {
    let edge = CubicalComplex::from_top_cubes(2, &[vec![0, 1]]).unwrap();
    let g = GridGraph::build(&edge, 0.5).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (3, 2));

    let sq = named(NamedExample::Square);
    let g = GridGraph::build(&sq, 0.5).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (9, 20));
    let diag = (0..9).flat_map(|a| g.neighbors(a).map(|(_, w)| w).collect::<Vec<_>>());
    assert!(diag.into_iter().any(|w| (w - SQRT_2 / 2.0).abs() < 1e-15));

    // lattice points of the L at pitch 1/4, counted directly
    let (l, _) = l_shape();
    let g = GridGraph::build(&l, 0.25).unwrap();
    let direct = (0..=8).flat_map(|i| (0..=8).map(move |j| (i, j))).filter(|&(i, j)| i <= 4 || j <= 4).count();
    assert_eq!(g.node_count(), direct);
    assert_eq!(direct, 65);

    for n in 0..g.node_count() {
        let s = g.snap(&g.node_point(n)).unwrap();
        assert_eq!((s.node, s.distance), (n, 0.0));
    }
    assert!(matches!(GridGraph::build(&l, 0.3), Err(OracleError::BadPitch(_))));
    assert!(matches!(GridGraph::build_scaled(&l, 1.0 / 64.0, 1.0, 1000), Err(OracleError::TooFine { .. })));
}

#[test]
fn diagonals_and_bent_geodesic() {
    let sq = named(NamedExample::Square);
    let cube = named(NamedExample::Cube);
    let (l, lc) = l_shape();
    for h in [0.125, 0.0625] {
        let g = GridGraph::build(&sq, h).unwrap();
        let d = g.distance(&sq.vertex_point(0), &sq.vertex_point(3)).unwrap();
        assert!((d.length / SQRT_2 - 1.0).abs() < 0.02);
        let g = GridGraph::build(&cube, h).unwrap();
        let d = g.distance(&cube.vertex_point(0), &cube.vertex_point(7)).unwrap();
        assert!((d.length / 3f64.sqrt() - 1.0).abs() < 0.02);
        let g = GridGraph::build(&l, h).unwrap();
        let (a, b) = (point_at(&l, &lc, [1, 2]), point_at(&l, &lc, [2, 1]));
        let d = g.distance(&a, &b).unwrap();
        assert!((d.length / 2.0 - 1.0).abs() < 0.02);
        assert_eq!(g.distance(&a, &a).unwrap().length, 0.0);
    }
}

#[test]
fn unreachable_components() {
    let x = CubicalComplex::from_top_cubes(4, &[vec![0, 1], vec![2, 3]]).unwrap();
    let g = GridGraph::build(&x, 0.5).unwrap();
    assert_eq!(g.distance(&x.vertex_point(0), &x.vertex_point(3)).unwrap_err(), OracleError::Unreachable);
}

#[test]
fn dilation_constant() {
    // brute force over directions in a large square and cube
    let sq = named(NamedExample::Square);
    let g = GridGraph::build(&sq, 1.0 / 48.0).unwrap();
    let sp = g.shortest_paths(g.snap(&sq.vertex_point(0)).unwrap().node, &[]);
    let mut worst: f64 = 1.0;
    for n in 0..g.node_count() {
        let p = g.node_point(n);
        let y = sq.embed(&p, sq.maximal_cells()[0]).unwrap();
        let e = (y[0] * y[0] + y[1] * y[1]).sqrt();
        if e > 0.0 {
            worst = worst.max(sp.dist[n] / e);
        }
    }
    assert!(worst <= stencil_dilation(2) + 1e-12);
    assert!(worst > stencil_dilation(2) - 1e-3);
    assert!((stencil_dilation(2) - (4.0 - 2.0 * SQRT_2).sqrt()).abs() < 1e-15);
    assert!(stencil_dilation(3) < 1.13);
}

#[test]
fn grid_metric_is_symmetric_and_bounds_from_above() {
    let (l, _) = l_shape();
    let g = GridGraph::build(&l, 0.125).unwrap();
    let nodes: Vec<usize> = (0..g.node_count()).step_by(7).collect();
    let all: Vec<ShortestPaths> = nodes.iter().map(|&s| g.shortest_paths(s, &[])).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, &b) in nodes.iter().enumerate() {
            assert!((a.dist[b] - all[j].dist[nodes[i]]).abs() < 1e-12);
            for (k, &c) in nodes.iter().enumerate() {
                assert!(a.dist[c] <= a.dist[b] + all[j].dist[nodes[k]] + 1e-12);
            }
        }
    }
    // inside one square the geodesic is the straight segment
    let sq = named(NamedExample::Square);
    let top = sq.maximal_cells()[0];
    let g = GridGraph::build(&sq, 0.125).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        use rand::Rng;
        let p: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..1.0)).collect();
        let q: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..1.0)).collect();
        let exact = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
        let (a, b) = (sq.point_in(top, &p).unwrap(), sq.point_in(top, &q).unwrap());
        let d = g.distance(&a, &b).unwrap();
        assert!(d.length >= exact - 1e-12);
        let dil = stencil_dilation(2);
        assert!(d.length <= dil * exact + (1.0 + dil) * (d.snap[0] + d.snap[1]) + 1e-12);
        let s = g.geodesic(&a, &b).unwrap();
        assert!((s.length(&sq, 1.0) - exact).abs() < 1e-6);
    }
}

#[test]
fn straightening() {
    let sq = named(NamedExample::Square);
    let top = sq.maximal_cells()[0];
    let side = sq.point_in(top, &[1.0, 0.3]).unwrap();
    assert_eq!(sq.dim(side.cell), 1);
    let zig =
        PolyPath { points: vec![sq.vertex_point(0), side.clone(), sq.vertex_point(3)], segment_cubes: vec![top, top] };
    let s = straighten(&sq, &zig, 50);
    assert!((s.length(&sq, 1.0) - SQRT_2).abs() < 1e-12);
    assert_eq!(s.points.len(), 2);

    let seg = PolyPath { points: vec![sq.vertex_point(0), sq.vertex_point(3)], segment_cubes: vec![top] };
    assert_eq!(straighten(&sq, &seg, 50), seg);

    let (l, lc) = l_shape();
    let g = GridGraph::build(&l, 0.125).unwrap();
    let (a, b) = (point_at(&l, &lc, [1, 2]), point_at(&l, &lc, [2, 1]));
    let raw = g.distance(&a, &b).unwrap();
    let s = straighten(&l, &raw.path, 200);
    assert!((s.length(&l, 1.0) - 2.0).abs() < 1e-9);
    assert!(s.points.contains(&point_at(&l, &lc, [1, 1])));
}

#[test]
fn cone_fixtures() {
    let sq = named(NamedExample::Square);
    let l = link(&sq, 0).unwrap();
    let (u, w) = (l.vertices()[0], l.vertices()[1]);
    let p = |r: f64, d: LinkPoint| ConePoint { radius: r, direction: d };
    let r = ball_cone_isometry_test(&sq, 0, &[(p(0.4, LinkPoint::vertex(u)), p(0.4, LinkPoint::vertex(w)))], 0.0625)
        .unwrap();
    assert!(r.max_deviation < 1e-9 && r.max_raw_deviation < 0.1);
    let r = ball_cone_isometry_test(
        &sq,
        0,
        &[(p(0.3, LinkPoint::barycenter(&[u, w])), p(0.0, LinkPoint::vertex(u)))],
        0.0625,
    )
    .unwrap();
    assert!(r.max_deviation < 1e-9);

    let (lx, lc) = l_shape();
    let v = vertex_at(&lc, &[1, 1]);
    let ll = link(&lx, v).unwrap();
    // the two directions at link distance 3pi/2
    let ends: Vec<usize> = ll
        .vertices()
        .into_iter()
        .filter(|&u| ll.vertices().iter().filter(|&&w| w != u && ll.adjacent(u, w)).count() == 1)
        .collect();
    assert_eq!(ends.len(), 2);
    let metric = crate::links::LinkMetric::new(&ll);
    assert!(
        (metric.distance(&LinkPoint::vertex(ends[0]), &LinkPoint::vertex(ends[1])).unwrap() - 3.0 * FRAC_PI_2).abs()
            < 1e-9
    );
    let pairs = [(p(0.35, LinkPoint::vertex(ends[0])), p(0.2, LinkPoint::vertex(ends[1])))];
    let r = ball_cone_isometry_test(&lx, v, &pairs, 0.0625).unwrap();
    assert!(r.max_deviation < 1e-9);

    let annulus =
        crate::generators::generate(&crate::generators::GeneratorSpec::Annulus { squares: 4 }).unwrap().complex;
    assert_eq!(ball_cone_isometry_test(&annulus, 0, &[], 0.125).unwrap_err(), OracleError::PreconditionNotCAT0);
}

#[test]
fn random_cone_pairs_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (x, v) in [
        (named(NamedExample::Square), 0),
        (l_shape().0, vertex_at(&l_shape().1, &[1, 1])),
        (named(NamedExample::Cube), 0),
    ] {
        let l = link(&x, v).unwrap();
        let pts = random_cone_points(&l, 24, 0.5 - 0.0625, &mut rng);
        let pairs: Vec<_> = pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        let r = ball_cone_isometry_test(&x, v, &pairs, 0.0625).unwrap();
        assert!(r.max_deviation < 0.05, "{r:?}");
    }
}

#[test]
fn escape_in_the_tangent_cone() {
    let sq = named(NamedExample::Square);
    let corner =
        Subcomplex::closure(&sq, [sq.cube_by_vertices(&[0, 1]).unwrap(), sq.cube_by_vertices(&[0, 2]).unwrap()])
            .unwrap();
    let l = link(&sq, 0).unwrap();
    let e = tangent_cone_escape(&sq, &corner, 0, &l.vertices(), 3.0, 2.73, 0.125).unwrap();
    assert!((e.length - 2.73 * SQRT_2).abs() < 1e-6);
    assert!(e.escape > 2.73 / 2.0 - 0.03 && e.escape <= 2.73 / 2.0 + 1e-9, "{}", e.escape);

    let cube = named(NamedExample::Cube);
    let faces: Vec<usize> =
        [[0, 1, 2, 3], [0, 1, 4, 5], [0, 2, 4, 6]].iter().map(|f| cube.cube_by_vertices(f).unwrap()).collect();
    let w = Subcomplex::closure(&cube, faces).unwrap();
    let l = link(&cube, 0).unwrap();
    let e = tangent_cone_escape(&cube, &w, 0, &l.vertices(), 3.0, 2.73, 0.125).unwrap();
    assert!((e.length - 2.73 * 3f64.sqrt()).abs() < 1e-6);
    assert!(e.escape > 2.73 / 2.0 - 0.03, "{}", e.escape);
    assert!(e.escape >= 6.0 * 0.125 * 3f64.sqrt());
}
