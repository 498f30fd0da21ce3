use crate::complex::{AmbientPoint, CellComplex, PolyPath};

use super::grid::smallest_common_cube;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Replaces runs of breakpoints lying in one cube by a single segment.
fn compress(cx: &CellComplex, path: &PolyPath) -> PolyPath {
    let pts = &path.points;
    let mut out = PolyPath::single(pts[0].clone());
    let mut i = 0;
    while i + 1 < pts.len() {
        let mut j = i + 1;
        while j + 1 < pts.len() && !cx.common_cubes(&pts[i], &pts[j + 1]).is_empty() {
            j += 1;
        }
        out.points.push(pts[j].clone());
        out.segment_cubes.push(smallest_common_cube(cx, &pts[i], &pts[j]));
        i = j;
    }
    out
}

/// Largest common face of `a` and `b` containing the carrier of `p`.
fn shared_face(cx: &CellComplex, a: usize, b: usize, p: &AmbientPoint) -> Option<usize> {
    cx.faces(a).iter().map(|e| e.cell).filter(|&f| cx.is_face(p.cell, f) && cx.is_face(f, b)).max_by_key(|&f| cx.dim(f))
}

/// Minimises `|pa - x|_A + |x - pb|_B` over `x` in face `f`, by cyclic
/// golden-section line searches from the current point.
fn best_on_face(
    cx: &CellComplex,
    f: usize,
    (ca, pa): (usize, &[f64]),
    (cb, pb): (usize, &[f64]),
    start: &[f64],
) -> (Vec<f64>, f64) {
    let ea = cx.face_entry(ca, f).expect("face of A");
    let eb = cx.face_entry(cb, f).expect("face of B");
    let cost = |y: &[f64]| dist(pa, &ea.lift(y)) + dist(&eb.lift(y), pb);
    let mut y = start.to_vec();
    let mut best = cost(&y);
    for _ in 0..6 {
        let before = best;
        for r in 0..y.len() {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let at = |t: f64, y: &mut Vec<f64>| {
                y[r] = t;
                cost(y)
            };
            let mut probe = y.clone();
            let mut x1 = hi - GOLDEN * (hi - lo);
            let mut x2 = lo + GOLDEN * (hi - lo);
            let mut f1 = at(x1, &mut probe);
            let mut f2 = at(x2, &mut probe);
            for _ in 0..60 {
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - GOLDEN * (hi - lo);
                    f1 = at(x1, &mut probe);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + GOLDEN * (hi - lo);
                    f2 = at(x2, &mut probe);
                }
            }
            for t in [0.5 * (lo + hi), 0.0, 1.0] {
                let c = at(t, &mut probe);
                if c < best {
                    best = c;
                    y[r] = t;
                }
            }
        }
        if before - best < 1e-13 {
            break;
        }
    }
    (y, best)
}

/// Iterative local shortening. Each pass drops breakpoints whose
/// neighbours share a cube and moves every other interior breakpoint to
/// the best point of the face shared by its two segment cubes; the length
/// never increases. Stops when a pass gains less than `1e-9` or after
/// `iterations` passes.
pub fn straighten(cx: &CellComplex, path: &PolyPath, iterations: usize) -> PolyPath {
    if path.points.len() <= 2 {
        return path.clone();
    }
    let mut p = compress(cx, path);
    let mut len = p.length(cx, 1.0);
    for _ in 0..iterations {
        let mut i = 1;
        while i + 1 < p.points.len() {
            let (a, b) = (&p.points[i - 1], &p.points[i + 1]);
            if let Some(c) = cx.common_cubes(a, b).into_iter().min_by_key(|&c| cx.dim(c)) {
                p.points.remove(i);
                p.segment_cubes.splice(i - 1..=i, [c]);
                continue;
            }
            let (ca, cb) = (p.segment_cubes[i - 1], p.segment_cubes[i]);
            if let Some(f) = shared_face(cx, ca, cb, &p.points[i]) {
                let pa = cx.embed(a, ca).expect("segment cube");
                let pb = cx.embed(b, cb).expect("segment cube");
                let start = cx.embed(&p.points[i], f).expect("carrier in face");
                let here =
                    dist(&pa, &cx.embed(&p.points[i], ca).unwrap()) + dist(&cx.embed(&p.points[i], cb).unwrap(), &pb);
                let (y, c) = best_on_face(cx, f, (ca, &pa), (cb, &pb), &start);
                if c < here {
                    p.points[i] = cx.point_in(f, &y).expect("inside face");
                }
            }
            i += 1;
        }
        let new = p.length(cx, 1.0);
        let gain = len - new;
        len = new;
        if gain < 1e-9 {
            break;
        }
    }
    p
}
