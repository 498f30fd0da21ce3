use super::*;
use crate::generators::{generate, named, GeneratorSpec, NamedExample};

fn annulus(n: usize) -> CubicalComplex {
    generate(&GeneratorSpec::Annulus { squares: n }).unwrap().complex
}

/// Closure of the edges between the given vertex pairs.
fn edges(x: &CubicalComplex, pairs: &[[usize; 2]]) -> Subcomplex {
    Subcomplex::closure(x, pairs.iter().map(|p| x.cube_by_vertices(p).unwrap())).unwrap()
}

#[test]
fn npc_examples() {
    assert!(is_npc(&named(NamedExample::Cube)).holds);
    assert!(is_npc(&named(NamedExample::LShape)).holds);
    let b = named(NamedExample::CubeBoundary);
    let cert = is_npc(&b);
    assert_eq!(cert.claim, Claim::NotNpc);
    match cert.witness {
        Some(Witness::EmptyClique { vertex: 0, directions }) => assert_eq!(directions.len(), 3),
        w => panic!("unexpected witness {w:?}"),
    }
    assert!(cert.evidence.links.iter().all(|r| !r.flag));
}

#[test]
fn cat0_examples() {
    for name in [NamedExample::Point, NamedExample::Square, NamedExample::LShape, NamedExample::Cube] {
        assert!(is_cat0(&named(name)).unwrap().holds, "{name:?}");
    }
    let b = is_cat0(&named(NamedExample::CubeBoundary)).unwrap();
    assert_eq!(b.claim, Claim::NotCat0);
    assert!(matches!(b.witness, Some(Witness::EmptyClique { .. })));
}

#[test]
fn annuli_are_npc_but_not_cat0() {
    let four = annulus(4);
    assert!(is_npc(&four).holds);
    let c = is_cat0(&four).unwrap();
    assert!(!c.holds);
    // The band of four squares has the 3-cube graph as 1-skeleton, which is
    // median; the unfilled inner 4-cycle is what fails.
    assert_eq!(c.witness, Some(Witness::UnfilledFourCycle { cycle: [0, 1, 2, 3] }));
    for n in [3, 5, 6, 8] {
        let x = annulus(n);
        assert!(is_npc(&x).holds);
        let c = is_cat0(&x).unwrap();
        assert!(matches!(c.witness, Some(Witness::MedianTriple { .. })), "annulus({n}): {:?}", c.witness);
    }
}

#[test]
fn disconnected_complex_is_rejected() {
    let x = CubicalComplex::from_top_cubes(4, &[vec![0, 1], vec![2, 3]]).unwrap();
    assert_eq!(is_cat0(&x).unwrap_err(), CertifyError::NotConnected);
}

#[test]
fn clc_examples() {
    let sq = named(NamedExample::Square);
    // Vertices of the square at (0,0),(0,1),(1,0),(1,1) are 0,1,2,3.
    let w = edges(&sq, &[[0, 1], [0, 2]]);
    let c = is_clc(&sq, &w);
    assert_eq!(c.claim, Claim::NotClc);
    match &c.witness {
        Some(Witness::NonFullSimplex { vertex: 0, cube, directions }) => {
            assert_eq!(*cube, sq.cube_by_vertices(&[0, 1, 2, 3]).unwrap());
            assert_eq!(directions.len(), 2);
        }
        w => panic!("unexpected witness {w:?}"),
    }
    assert!(is_clc(&sq, &Subcomplex::whole(&sq)).holds);

    let l = named(NamedExample::LShape);
    // Vertex (1,1) is 4; (1,2) is 5 and (2,1) is 7.
    let w = edges(&l, &[[4, 5], [4, 7]]);
    assert!(is_clc(&l, &w).holds);
}

#[test]
fn convexity_examples() {
    let l = named(NamedExample::LShape);
    let (cat0, _) = Cat0Complex::certify(&l).unwrap();
    let inner = edges(&l, &[[4, 5], [4, 7]]);
    assert_eq!(is_convex(cat0, &inner).unwrap().claim, Claim::Convex);
    assert!(is_convex(cat0, &Subcomplex::whole(&l)).unwrap().holds);

    let sq = named(NamedExample::Square);
    let (cat0, _) = Cat0Complex::certify(&sq).unwrap();
    let corner = edges(&sq, &[[0, 1], [0, 2]]);
    let c = is_convex(cat0, &corner).unwrap();
    assert_eq!(c.claim, Claim::NotConvex);
    assert_eq!(c.subreports.len(), 2);
    assert!(c.subreports[0].holds && !c.subreports[1].holds);

    let apart = Subcomplex::closure(&sq, [sq.vertex_cell(0), sq.vertex_cell(3)]).unwrap();
    let c = is_convex(cat0, &apart).unwrap();
    assert!(matches!(c.witness, Some(Witness::Disconnected { vertices: [0, 3], components: 2 })));
    assert!(matches!(is_convex(cat0, &Subcomplex::empty()), Err(CertifyError::Complex(ComplexError::EmptySubcomplex))));

    let b = named(NamedExample::CubeBoundary);
    assert_eq!(is_convex_checked(&b, &Subcomplex::whole(&b)).unwrap_err(), CertifyError::PreconditionNotCAT0);
}

#[test]
fn certificates_are_deterministic() {
    let x = generate(&GeneratorSpec::GridRegion { dim: 3, cubes: 8, seed: 4 }).unwrap().complex;
    let a = is_cat0(&x).unwrap().to_json();
    let b = is_cat0(&x).unwrap().to_json();
    assert_eq!(a, b);
    let json: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in ["claim", "holds", "witness", "subreports", "input_sha"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["claim"], "CAT0");
}

#[test]
fn local_convexity_oracle_agrees_with_clc() {
    let l = named(NamedExample::LShape);
    let reflex = edges(&l, &[[4, 5], [4, 7]]);
    let r = is_locally_convex_oracle(&l, &reflex, 0.4, 200, 0.125, 1).unwrap();
    assert_eq!(r.violations, 0, "{r:?}");

    let sq = named(NamedExample::Square);
    let corner = edges(&sq, &[[0, 1], [0, 2]]);
    let r = is_locally_convex_oracle(&sq, &corner, 0.4, 200, 1.0 / 32.0, 1).unwrap();
    assert!(r.violations > 0);
    assert!(r.max_departure >= 0.1, "{r:?}");

    let r = is_locally_convex_oracle(&l, &Subcomplex::whole(&l), 0.4, 50, 0.125, 1).unwrap();
    assert_eq!((r.violations, r.max_departure), (0, 0.0));

    let b = named(NamedExample::CubeBoundary);
    assert!(matches!(
        is_locally_convex_oracle(&b, &Subcomplex::whole(&b), 0.4, 5, 0.125, 1),
        Err(CertifyError::PreconditionNotCAT0)
    ));
}
