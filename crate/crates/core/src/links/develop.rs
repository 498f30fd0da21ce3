use std::f64::consts::{FRAC_PI_2, PI};

use super::{non_full_simplex, LinkError, LinkPoint, SphericalComplex};

/// Angle below which two tangent directions count as equal.
const TANGENT_TOL: f64 = 1e-6;

/// A path in the closed star of a vertex laid out in the northern hemisphere.
///
/// The star vertex goes to the pole `N = (0, 0, 1)`. Breakpoint `i` sits at
/// polar distance `d(v, y_i)`, the first one on the meridian through
/// `(1, 0, 0)`, and consecutive breakpoints are separated counterclockwise
/// (seen from `N`) by the angle at `v` of the triangle `(v, y_i, y_{i+1})`.
/// A path through `v` leaves the pole on the opposite meridian.
#[derive(Clone, Debug)]
pub struct DevelopedPath {
    pub breakpoints: Vec<[f64; 3]>,
    pub carriers: Vec<usize>,
    pub length: f64,
    /// Largest angle between arriving and departing tangents at a breakpoint.
    pub max_turn: f64,
    pub local_geodesic: bool,
}

fn on_sphere(r: f64, phi: f64) -> [f64; 3] {
    [r.sin() * phi.cos(), r.sin() * phi.sin(), r.cos()]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Unit tangent at `p` of the great-circle arc towards `q`.
fn tangent(p: &[f64; 3], q: &[f64; 3]) -> Option<[f64; 3]> {
    let c = dot3(p, q);
    let t = [q[0] - c * p[0], q[1] - c * p[1], q[2] - c * p[2]];
    let n = dot3(&t, &t).sqrt();
    (n > 1e-12).then(|| [t[0] / n, t[1] / n, t[2] / n])
}

/// Develops the path through `samples` into the hemisphere around `v_star`.
/// `carriers[i]` is a cell of `l` containing `v_star`, `samples[i]` and `samples[i + 1]`.
pub fn develop_in_hemisphere(
    l: &SphericalComplex,
    v_star: usize,
    samples: &[LinkPoint],
    carriers: &[usize],
) -> Result<DevelopedPath, LinkError> {
    if samples.is_empty() || carriers.len() + 1 != samples.len() {
        return Err(LinkError::InconsistentCarriers(carriers.len().min(samples.len())));
    }
    for (i, y) in samples.iter().enumerate() {
        let mut s = y.support();
        if !s.contains(&v_star) {
            s.push(v_star);
            s.sort_unstable();
        }
        if !l.is_simplex(&s) {
            return Err(LinkError::NotInClosedStar(i));
        }
    }
    for (i, &c) in carriers.iter().enumerate() {
        let verts = &l.cells.get(c).ok_or(LinkError::InconsistentCarriers(i))?.verts;
        let inside = |y: &LinkPoint| y.support().iter().all(|u| verts.binary_search(u).is_ok());
        if verts.binary_search(&v_star).is_err() || !inside(&samples[i]) || !inside(&samples[i + 1]) {
            return Err(LinkError::InconsistentCarriers(i));
        }
    }

    let r: Vec<f64> = samples.iter().map(|y| y.weight(v_star).clamp(-1.0, 1.0).acos()).collect();
    let mut phi = vec![0.0; samples.len()];
    let mut length = 0.0;
    for i in 0..carriers.len() {
        let ell = samples[i].angle(&samples[i + 1]);
        length += ell;
        phi[i + 1] = if r[i] < 1e-12 {
            if i == 0 {
                0.0
            } else {
                phi[i - 1] + PI
            }
        } else if r[i + 1] < 1e-12 {
            phi[i]
        } else {
            let c = (ell.cos() - r[i].cos() * r[i + 1].cos()) / (r[i].sin() * r[i + 1].sin());
            phi[i] + c.clamp(-1.0, 1.0).acos()
        };
    }
    let breakpoints: Vec<[f64; 3]> = r.iter().zip(&phi).map(|(&r, &p)| on_sphere(r, p)).collect();

    // Drop repeated breakpoints before comparing tangents.
    let mut distinct: Vec<[f64; 3]> = Vec::new();
    for p in &breakpoints {
        if distinct.last().is_none_or(|q| dot3(p, q) < 1.0 - 1e-14) {
            distinct.push(*p);
        }
    }
    let mut max_turn: f64 = 0.0;
    for w in distinct.windows(3) {
        let (Some(arrive), Some(leave)) = (tangent(&w[1], &w[0]), tangent(&w[1], &w[2])) else {
            continue;
        };
        let straight = (-dot3(&arrive, &leave)).clamp(-1.0, 1.0).acos();
        max_turn = max_turn.max(straight);
    }
    Ok(DevelopedPath {
        breakpoints,
        carriers: carriers.to_vec(),
        length,
        max_turn,
        local_geodesic: max_turn < TANGENT_TOL,
    })
}

/// A local geodesic traced exactly through the closed star of a vertex.
#[derive(Clone, Debug)]
pub struct StarTrace {
    pub samples: Vec<LinkPoint>,
    pub carriers: Vec<usize>,
    /// The trace reached the simplicial link of the star vertex.
    pub completed: bool,
}

/// Traces the great-circle arc leaving `start` with `tangent` inside `cell`,
/// continuing across faces into simplices of the same dimension (lowest cell
/// id first) until the weight of `v_star` returns to zero.
///
/// `tangent` is given on the vertices of `cell` and must be orthogonal to `start`.
pub fn trace_star_geodesic(
    l: &SphericalComplex,
    v_star: usize,
    start: &LinkPoint,
    cell: usize,
    tangent: &[(usize, f64)],
) -> Result<StarTrace, LinkError> {
    let verts0 = &l.cells.get(cell).ok_or(LinkError::InconsistentCarriers(0))?.verts;
    if verts0.binary_search(&v_star).is_err() || start.support().iter().any(|u| verts0.binary_search(u).is_err()) {
        return Err(LinkError::NotInClosedStar(0));
    }
    let mut verts = verts0.clone();
    let mut p: Vec<f64> = verts.iter().map(|&u| start.weight(u)).collect();
    let mut w: Vec<f64> = verts.iter().map(|&u| tangent.iter().find(|t| t.0 == u).map_or(0.0, |t| t.1)).collect();
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return Err(LinkError::BadPoint("zero tangent".into()));
    }
    w.iter_mut().for_each(|x| *x /= n);
    let mut cell = cell;
    let mut samples = vec![start.clone()];
    let mut carriers = Vec::new();

    let vertices = l.vertices();
    for _ in 0..10_000 {
        let vi = verts.binary_search(&v_star).expect("star simplex");
        let mut hit: Option<(f64, usize)> = None;
        for i in 0..verts.len() {
            if p[i] <= 0.0 && w[i] == 0.0 {
                continue;
            }
            let s = p[i].max(0.0).atan2(-w[i]);
            let better = match hit {
                None => true,
                Some((best, j)) => s < best - 1e-12 || (s < best + 1e-12 && i == vi && j != vi),
            };
            if better {
                hit = Some((s, i));
            }
        }
        let Some((s, i)) = hit else { break };
        let q: Vec<f64> = p.iter().zip(&w).map(|(a, b)| a * s.cos() + b * s.sin()).collect();
        let dq: Vec<f64> = p.iter().zip(&w).map(|(a, b)| -a * s.sin() + b * s.cos()).collect();
        let point = LinkPoint::from_weights(
            verts.iter().zip(&q).enumerate().map(|(j, (&u, &x))| (u, if j == i { 0.0 } else { x.max(0.0) })),
        )?;
        samples.push(point);
        carriers.push(cell);
        if i == vi {
            return Ok(StarTrace { samples, carriers, completed: true });
        }
        let mut face = verts.clone();
        face.remove(i);
        let next = vertices
            .iter()
            .filter(|u| verts.binary_search(u).is_err())
            .filter_map(|&u| {
                let mut t = face.clone();
                t.push(u);
                t.sort_unstable();
                l.cell_of(&t).map(|c| (c, u, t))
            })
            .min_by_key(|x| x.0);
        let Some((c, u, t)) = next else {
            return Ok(StarTrace { samples, carriers, completed: false });
        };
        let value = |vs: &[f64], x: usize| -> f64 {
            if x == u {
                -dq[i]
            } else {
                vs[verts.binary_search(&x).expect("shared face vertex")]
            }
        };
        let np: Vec<f64> = t.iter().map(|&x| if x == u { 0.0 } else { value(&q, x) }).collect();
        let nw: Vec<f64> = t.iter().map(|&x| value(&dq, x)).collect();
        cell = c;
        verts = t;
        p = np;
        w = nw;
    }
    Ok(StarTrace { samples, carriers, completed: false })
}

/// The escaping segment built from a non-full witness simplex `sigma`.
#[derive(Clone, Debug)]
pub struct EscapeSegment {
    pub sigma: Vec<usize>,
    pub from: LinkPoint,
    pub to: LinkPoint,
    pub midpoint: LinkPoint,
    pub length: f64,
}

/// For a non-full `k` in `l`: a vertex of the witness simplex and the
/// barycentre of the opposite face. Both ends lie in `k`, the segment has
/// length `pi/2`, and its interior lies in the open witness simplex.
pub fn escape_segment(k: &SphericalComplex, l: &SphericalComplex) -> Result<Option<EscapeSegment>, LinkError> {
    let Some(sigma) = non_full_simplex(k, l)? else {
        return Ok(None);
    };
    let v = sigma[0];
    let from = LinkPoint::vertex(v);
    let to = LinkPoint::barycenter(&sigma[1..]);
    let midpoint = LinkPoint::from_weights(from.weights().iter().chain(to.weights()).copied())?;
    Ok(Some(EscapeSegment { sigma, from, to, midpoint, length: FRAC_PI_2 }))
}
