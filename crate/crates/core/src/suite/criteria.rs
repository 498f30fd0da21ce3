use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CriterionResult, Instance, SuiteConfig};
use crate::certify::{is_cat0, is_clc, is_convex_checked, is_npc, Cat0Complex, Witness};
use crate::complex::{AmbientPoint, CubicalComplex, PolyPath, Subcomplex, Subdivision};
use crate::doubling::{double, double_flag_report, double_geodesic_reflection_test, fold_is_isometric_on_vertices};
use crate::generators::{generate, named, GeneratorSpec, NamedExample};
use crate::links::{
    develop_in_hemisphere, escape_segment, link, restrict_link, trace_star_geodesic, ConePoint, LinkMetric, LinkPoint,
    SphericalComplex, EPS_LINK,
};
use crate::oracle::{
    ball_cone_isometry_test, distance_to_subcomplex_upper, path_departure, random_cone_points, random_point,
    tangent_cone_escape, GridGraph,
};
use crate::walls::WallSystem;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn result(id: usize, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id, name, passed, detail, seconds: 0.0 }
}

fn random_link_point(l: &SphericalComplex, rng: &mut impl Rng) -> LinkPoint {
    let tops = l.maximal_cells();
    let verts = &l.cells[tops[rng.gen_range(0..tops.len())]].verts;
    let mut w = Vec::new();
    for &u in verts {
        if rng.gen_bool(0.7) {
            w.push((u, rng.gen_range(0.05..1.0)));
        }
    }
    if w.is_empty() {
        w.push((verts[rng.gen_range(0..verts.len())], 1.0));
    }
    LinkPoint::from_weights(w).expect("positive weights")
}

/// `n` random pairs of points of `w`, in groups of up to `per` sharing a source.
fn grouped_pairs(
    cx: &crate::complex::CellComplex,
    w: &Subcomplex,
    n: usize,
    per: usize,
    rng: &mut impl Rng,
) -> Vec<(AmbientPoint, Vec<AmbientPoint>)> {
    let per = per.clamp(1, n.max(1));
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = per.min(left);
        let a = random_point(cx, w, rng);
        out.push((a, (0..k).map(|_| random_point(cx, w, rng)).collect()));
        left -= k;
    }
    out
}

/// Convex iff CLC: geodesics between points of a CLC subcomplex stay
/// within `2 h sqrt3` of it; for a non-CLC one the witness vertex yields a
/// geodesic of the tangent cone escaping by at least `6 h sqrt3`.
pub fn convexity_equivalence(inst: &[Instance], cfg: &SuiteConfig) -> CriterionResult {
    let tol = 2.0 * cfg.h * SQRT3;
    let need = 3.0 * tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
    let (mut pos, mut neg, mut geodesics) = (0, 0, 0);
    let mut worst_pos: f64 = 0.0;
    let mut worst_neg = f64::INFINITY;
    let mut failures = Vec::new();
    for (i, it) in inst.iter().enumerate() {
        let (x, w) = (&it.complex, &it.sub);
        let clc = is_clc(x, w);
        let convex = is_convex_checked(x, w).expect("CAT(0) instance");
        if convex.holds != clc.holds {
            failures.push(format!("#{i}: convexity {} vs CLC {}", convex.holds, clc.holds));
        }
        if clc.holds {
            pos += 1;
            let grid = GridGraph::build(x, cfg.h).expect("grid");
            for (a, bs) in grouped_pairs(x, w, cfg.geodesics, 10, &mut rng) {
                for path in grid.geodesics_from(&a, &bs).expect("connected") {
                    let dep = path_departure(x, w, &path, 8, 1.0);
                    worst_pos = worst_pos.max(dep);
                    geodesics += 1;
                    if dep > tol {
                        failures.push(format!("#{i} {}: departure {dep:.4}", it.label));
                    }
                }
            }
        } else {
            neg += 1;
            let Some(Witness::NonFullSimplex { vertex, directions, .. }) = clc.witness else {
                failures.push(format!("#{i}: negative CLC without a non-full witness"));
                continue;
            };
            let l = link(x, vertex).expect("vertex");
            let sigma: Vec<usize> =
                directions.iter().map(|d| l.directions.iter().position(|e| e == d).expect("direction")).collect();
            match tangent_cone_escape(x, w, vertex, &sigma, 3.0, 2.73, cfg.h) {
                Ok(e) => {
                    worst_neg = worst_neg.min(e.escape);
                    if e.escape < need {
                        failures.push(format!("#{i} {}: escape {:.4}", it.label, e.escape));
                    }
                }
                Err(e) => failures.push(format!("#{i}: {e}")),
            }
        }
    }
    let passed = failures.is_empty() && pos > 0 && neg > 0;
    result(
        1,
        "convex iff CLC (oracle geodesics)",
        passed,
        format!(
            "{} instances, {pos} CLC ({geodesics} geodesics, max departure {worst_pos:.2e} <= {tol:.4}), {neg} non-CLC (min escape {worst_neg:.4} >= {need:.4}){}",
            inst.len(),
            first_failures(&failures)
        ),
    )
}

fn first_failures(f: &[String]) -> String {
    if f.is_empty() {
        String::new()
    } else {
        format!("; {} failures, first: {}", f.len(), f[..f.len().min(3)].join(" | "))
    }
}

/// Full link subcomplexes are pi-convex up to `EPS_LINK`, non-full ones
/// have an escaping segment, and star geodesics develop to length `>= pi`.
pub fn link_convexity(inst: &[Instance], cfg: &SuiteConfig) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let (mut full, mut nonfull, mut pairs, mut traces, mut incomplete) = (0, 0, 0, 0, 0);
    let mut min_dev = f64::INFINITY;
    let mut failures = Vec::new();
    for (i, it) in inst.iter().enumerate() {
        let (x, w) = (&it.complex, &it.sub);
        for v in 0..x.vertex_count() {
            let l = link(x, v).expect("vertex");
            let ml = LinkMetric::new(&l);
            if w.contains_vertex(x, v) {
                let k = restrict_link(&l, w).expect("vertex of W");
                let mk = LinkMetric::new(&k);
                match escape_segment(&k, &l).expect("subcomplex") {
                    None => {
                        full += 1;
                        for _ in 0..cfg.link_pairs {
                            let (a, b) = (random_link_point(&k, &mut rng), random_link_point(&k, &mut rng));
                            let dl = ml.distance(&a, &b).expect("points of L");
                            // Distance pi up to rounding: such pairs may lie in
                            // different components of K.
                            if dl >= PI - 1e-9 {
                                continue;
                            }
                            pairs += 1;
                            let dk = mk.distance(&a, &b).expect("points of K");
                            if dk > dl + EPS_LINK {
                                failures.push(format!("#{i} v{v}: d_K {dk:.4} > d_L {dl:.4} + eps"));
                            }
                        }
                    }
                    Some(e) => {
                        nonfull += 1;
                        let dl = ml.distance(&e.from, &e.to).expect("points of L");
                        let dk = mk.distance(&e.from, &e.to).expect("points of K");
                        if (dl - FRAC_PI_2).abs() > 1e-9 || k.is_simplex(&e.midpoint.support()) || dk <= dl + EPS_LINK {
                            failures.push(format!("#{i} v{v}: escape segment d_L {dl:.4} d_K {dk:.4}"));
                        }
                    }
                }
            }
            if l.dimension() < 1 {
                continue;
            }
            for _ in 0..cfg.traces {
                let tops: Vec<usize> = l.maximal_cells().into_iter().filter(|&c| l.cells[c].verts.len() >= 2).collect();
                let c = tops[rng.gen_range(0..tops.len())];
                let verts = l.cells[c].verts.clone();
                let star = verts[rng.gen_range(0..verts.len())];
                let others: Vec<usize> = verts.iter().copied().filter(|&u| u != star).collect();
                let start =
                    LinkPoint::from_weights(others.iter().map(|&u| (u, rng.gen_range(0.05..1.0)))).expect("positive");
                let mut t: Vec<(usize, f64)> =
                    verts.iter().map(|&u| (u, if u == star { 1.0 } else { rng.gen_range(-1.0..1.0) })).collect();
                let proj: f64 = t.iter().map(|&(u, a)| a * start.weight(u)).sum();
                for e in &mut t {
                    e.1 -= proj * start.weight(e.0);
                }
                let tr = trace_star_geodesic(&l, star, &start, c, &t).expect("valid start");
                if !tr.completed {
                    incomplete += 1;
                    continue;
                }
                let dev = develop_in_hemisphere(&l, star, &tr.samples, &tr.carriers).expect("closed star");
                traces += 1;
                min_dev = min_dev.min(dev.length);
                if dev.length < PI - 1e-6 {
                    failures.push(format!("#{i} v{v}: developed length {:.6}", dev.length));
                }
            }
        }
    }
    let passed = failures.is_empty() && full > 0 && nonfull > 0 && traces > 0;
    result(
        2,
        "link pi-convexity iff full; developments",
        passed,
        format!(
            "{full} full links ({pairs} pairs, d_K <= d_L + {EPS_LINK}), {nonfull} non-full with escape segments, {traces} developed star geodesics (min length {min_dev:.7}, {incomplete} left the star){}",
            first_failures(&failures)
        ),
    )
}

/// Flag certification on the controls and on the suite.
pub fn flag_certification(inst: &[Instance]) -> CriterionResult {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    check(is_npc(&named(NamedExample::Cube)).holds, "solid cube NPC");
    let b = is_npc(&named(NamedExample::CubeBoundary));
    check(
        !b.holds && matches!(&b.witness, Some(Witness::EmptyClique { directions, .. }) if directions.len() == 3),
        "cube boundary NOT_NPC with empty 3-cycle",
    );
    check(is_npc(&named(NamedExample::LShape)).holds, "L-shape NPC");
    for n in [3, 4, 5, 8] {
        let a = generate(&GeneratorSpec::Annulus { squares: n }).expect("annulus").complex;
        check(is_npc(&a).holds, "annulus NPC");
        let c = is_cat0(&a).expect("connected");
        check(
            !c.holds && matches!(c.witness, Some(Witness::MedianTriple { .. } | Witness::UnfilledFourCycle { .. })),
            "annulus refuted by the median test",
        );
    }
    let mut accepted = 0;
    for it in inst {
        if matches!(it.spec, GeneratorSpec::GridRegion { .. } | GeneratorSpec::CubeTree { .. }) {
            let ok = is_cat0(&it.complex).is_ok_and(|c| c.holds);
            check(ok, &format!("{} accepted", it.label));
            accepted += usize::from(ok);
        }
    }
    let passed = failures.is_empty() && accepted > 0;
    result(
        3,
        "flag / CAT(0) certification",
        passed,
        format!("controls checked, {accepted} grid regions and cube trees accepted{}", first_failures(&failures)),
    )
}

/// Upper bound on the largest distance from `h`, a subcomplex of `X'`, along
/// a path in `X`.
pub(crate) fn departure_in_subdivision(x: &CubicalComplex, sub: &Subdivision, h: &Subcomplex, path: &PolyPath) -> f64 {
    path.samples(x, 16)
        .iter()
        .map(|p| distance_to_subcomplex_upper(&sub.complex, h, &sub.from_parent(p).expect("point of X")))
        .fold(0.0, f64::max)
        * sub.scale()
}

#[derive(Default)]
struct WallTally {
    walls: usize,
    pairs: usize,
    worst: f64,
    failures: Vec<String>,
}

fn walls_of(i: usize, it: &Instance, cfg: &SuiteConfig) -> WallTally {
    let tol = 2.0 * cfg.h * SQRT3;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4 ^ ((i as u64) << 8));
    let mut t = WallTally::default();
    let x = &it.complex;
    let (cat0, _) = Cat0Complex::certify(x).expect("CAT(0) instance");
    let ws = match WallSystem::new(x) {
        Ok(ws) => ws,
        Err(e) => {
            t.failures.push(format!("#{i}: {e}"));
            return t;
        }
    };
    let (sub, xs) = (&ws.subdivision, &ws.subdivision.complex);
    // The pitch-h lattice of X' is that of X, so geodesics are computed in X.
    let grid = GridGraph::build(x, cfg.h).expect("grid");
    for id in 0..ws.walls.len() {
        t.walls += 1;
        match ws.check_sageev(id) {
            Ok(r) if r.passed && r.single_midcube && r.components == 2 => {}
            Ok(r) => t.failures.push(format!("#{i} wall {id}: {r:?}")),
            Err(e) => t.failures.push(format!("#{i} wall {id}: {e}")),
        }
        let bundle = match ws.halfspaces(cat0, id) {
            Ok(b) => b,
            Err(e) => {
                t.failures.push(format!("#{i} wall {id}: {e}"));
                continue;
            }
        };
        if !(bundle.sigma.holds && bundle.side_a.holds && bundle.side_b.holds) || bundle.join.failure.is_some() {
            t.failures.push(format!("#{i} wall {id}: certificates or join check failed"));
        }
        let half = cfg.wall_pairs / 2;
        for (k, side) in [&bundle.pair.side_a, &bundle.pair.side_b].into_iter().enumerate() {
            let h = Subcomplex::new(xs, side.iter().copied()).expect("closed halfspace");
            let n = if k == 0 { half } else { cfg.wall_pairs - half };
            for (a, bs) in grouped_pairs(xs, &h, n, n, &mut rng) {
                let a = sub.to_parent(x, &a).expect("point of X'");
                let bs: Vec<AmbientPoint> = bs.iter().map(|b| sub.to_parent(x, b).expect("point of X'")).collect();
                for path in grid.geodesics_from(&a, &bs).expect("connected") {
                    let dep = departure_in_subdivision(x, sub, &h, &path);
                    t.worst = t.worst.max(dep);
                    t.pairs += 1;
                    if dep > tol {
                        t.failures.push(format!("#{i} wall {id}: same-side departure {dep:.4}"));
                    }
                }
            }
        }
    }
    t
}

/// Walls: one midcube per crossed cube, two complementary components,
/// convex hyperplane and halfspaces, suspension links, and same-side
/// geodesics that stay on their side.
pub fn walls_and_halfspaces(inst: &[Instance], cfg: &SuiteConfig) -> CriterionResult {
    let tol = 2.0 * cfg.h * SQRT3;
    let tallies: Vec<WallTally> = inst.par_iter().enumerate().map(|(i, it)| walls_of(i, it, cfg)).collect();
    let walls: usize = tallies.iter().map(|t| t.walls).sum();
    let pairs: usize = tallies.iter().map(|t| t.pairs).sum();
    let worst = tallies.iter().map(|t| t.worst).fold(0.0, f64::max);
    let failures: Vec<String> = tallies.into_iter().flat_map(|t| t.failures).collect();
    let passed = failures.is_empty() && walls > 0;
    result(
        4,
        "walls, hyperplanes and halfspaces",
        passed,
        format!(
            "{walls} walls on {} instances, {pairs} same-side geodesics (max departure {worst:.2e} <= {tol:.4}){}",
            inst.len(),
            first_failures(&failures)
        ),
    )
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

/// The double along `W`: flag links iff CLC, cell counts, the involution,
/// and symmetric geodesics.
pub fn doubling(inst: &[Instance], cfg: &SuiteConfig) -> CriterionResult {
    let tol = 2.0 * cfg.h * SQRT3;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 5);
    let (mut positive, mut pairs) = (0, 0);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, it) in inst.iter().enumerate() {
        let (x, w) = (&it.complex, &it.sub);
        let report = double_flag_report(x, w).expect("CAT(0) instance");
        if !report.agrees {
            failures.push(format!("#{i}: double links {} vs CLC {}", report.links.holds, report.clc.holds));
        }
        let d = double(x, w).expect("nonempty W");
        let (cx, cw, cd) = (x.counts_by_dim(), w.counts_by_dim(x), d.complex.counts_by_dim());
        if (0..cx.len()).any(|k| cd[k] != 2 * cx[k] - cw[k]) {
            failures.push(format!("#{i}: cell counts {cd:?}"));
        }
        if (0..d.involution.len()).any(|c| d.involution[d.involution[c]] != c)
            || d.fixed_cells() != w.cells().collect::<Vec<_>>()
        {
            failures.push(format!("#{i}: involution"));
        }
        let adj = d.complex.adjacency();
        let vmap: Vec<usize> =
            (0..d.complex.vertex_count()).map(|v| d.complex.tuple(d.involution[d.complex.vertex_cell(v)])[0]).collect();
        let isometric = (0..adj.len()).all(|s| {
            let (a, b) = (bfs(&adj, s), bfs(&adj, vmap[s]));
            (0..adj.len()).all(|t| a[t] == b[vmap[t]])
        });
        if !isometric || !fold_is_isometric_on_vertices(x, &d) {
            failures.push(format!("#{i}: vertex distances not preserved"));
        }
        if report.clc.holds {
            positive += 1;
            let groups = grouped_pairs(x, w, cfg.double_pairs, 10, &mut rng);
            let ps: Vec<(AmbientPoint, AmbientPoint)> =
                groups.into_iter().flat_map(|(a, bs)| bs.into_iter().map(move |b| (a.clone(), b))).collect();
            match double_geodesic_reflection_test(x, w, &ps, cfg.h) {
                Ok(r) => {
                    pairs += r.pairs;
                    worst = worst.max(r.max_asymmetry);
                    if r.max_asymmetry > tol || !r.vertex_isometry {
                        failures.push(format!("#{i}: asymmetry {:.4}", r.max_asymmetry));
                    }
                }
                Err(e) => failures.push(format!("#{i}: {e}")),
            }
        }
    }
    let passed = failures.is_empty() && positive > 0;
    result(
        5,
        "doubling along W",
        passed,
        format!(
            "{} doubles, {positive} CLC with {pairs} reflected geodesics (max asymmetry {worst:.2e} <= {tol:.4}){}",
            inst.len(),
            first_failures(&failures)
        ),
    )
}

/// Oracle distances in `B(v, 1/2)` against the cone metric at three fixtures.
pub fn cone_metric(seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
    let mut lines = Vec::new();
    let mut passed = true;
    for (name, x, v) in [
        ("square corner", named(NamedExample::Square), 0),
        ("L reflex", named(NamedExample::LShape), 4),
        ("cube corner", named(NamedExample::Cube), 0),
    ] {
        let l = link(&x, v).expect("vertex");
        let pts = random_cone_points(&l, 80, 0.5 - 1.0 / 16.0, &mut rng);
        let mut pairs: Vec<(ConePoint, ConePoint)> = pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        let vs = l.vertices();
        let (u, w) = (vs[0], vs[vs.len() - 1]);
        pairs.push((
            ConePoint { radius: 0.4, direction: LinkPoint::vertex(u) },
            ConePoint { radius: 0.4, direction: LinkPoint::vertex(w) },
        ));
        pairs.push((
            ConePoint { radius: 0.3, direction: LinkPoint::vertex(u) },
            ConePoint { radius: 0.0, direction: LinkPoint::vertex(u) },
        ));
        let r16 = ball_cone_isometry_test(&x, v, &pairs, 1.0 / 16.0).expect("CAT(0) fixture");
        let r32 = ball_cone_isometry_test(&x, v, &pairs, 1.0 / 32.0).expect("CAT(0) fixture");
        let ok = r16.max_deviation <= 0.05 && r32.max_deviation <= r16.max_deviation + 1e-6;
        passed &= ok;
        lines.push(format!(
            "{name}: {:.2e} (h=1/16) -> {:.2e} (h=1/32), raw grid {:.3} -> {:.3}",
            r16.max_deviation, r32.max_deviation, r16.max_raw_deviation, r32.max_raw_deviation
        ));
    }
    result(6, "cone metric on B(v, 1/2)", passed, lines.join("; "))
}

/// Exact single-cube diagonals and the bent L geodesic.
pub fn calibration() -> CriterionResult {
    let sq = named(NamedExample::Square);
    let cube = named(NamedExample::Cube);
    let l = named(NamedExample::LShape);
    let cases = [("sqrt2", &sq, 0, 3, 2f64.sqrt()), ("sqrt3", &cube, 0, 7, SQRT3), ("L bend", &l, 5, 7, 2.0)];
    let mut passed = true;
    let mut lines = Vec::new();
    for (h, rel) in [(0.125, 0.02), (0.0625, 0.01)] {
        for (name, x, a, b, exact) in cases {
            let g = GridGraph::build(x, h).expect("grid");
            let d = g.distance(&x.vertex_point(a), &x.vertex_point(b)).expect("connected").length;
            let err = (d / exact - 1.0).abs();
            passed &= err <= rel;
            lines.push(format!("{name} h={h}: {d:.6} ({:.2}%)", 100.0 * err));
        }
    }
    result(7, "oracle calibration", passed, lines.join("; "))
}
