use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::Serialize;

use super::{GridGraph, OracleError, DEFAULT_NODE_CAP};
use crate::certify::is_cat0;
use crate::complex::{AmbientPoint, CellComplex, CubicalComplex, FaceLink, PolyPath, Subcomplex};
use crate::links::{
    cone_distance, link, restrict_link, ConePoint, LinkError, LinkMetric, LinkPoint, SphericalComplex, EPS_LINK,
};

/// The point at distance `p.radius` from the base vertex in direction
/// `p.direction`, for radii up to 1 along every axis.
pub fn cone_point_in(cx: &CellComplex, l: &SphericalComplex, p: &ConePoint) -> Result<AmbientPoint, OracleError> {
    let v = cx.vertex_point(l.base_vertex);
    if p.radius == 0.0 {
        return Ok(v);
    }
    let support = p.direction.support();
    let cell = l.cell_of(&support).ok_or_else(|| LinkError::BadPoint(format!("{support:?} is not a simplex")))?;
    let c = &l.cells[cell];
    let k = cx.dim(c.cube);
    let mut coords: Vec<f64> = (0..k).map(|j| ((c.corner >> j) & 1) as f64).collect();
    for (i, &u) in c.verts.iter().enumerate() {
        let off = p.radius * p.direction.weight(u);
        if off > 1.0 + 1e-12 {
            return Err(LinkError::BadPoint(format!("radius {} leaves the cube", p.radius)).into());
        }
        let j = c.axis[i];
        coords[j] = if coords[j] == 1.0 { 1.0 - off } else { off };
    }
    Ok(cx.point_in(c.cube, &coords)?)
}

/// `(radius, direction)` of a point in a cube at the base vertex, with
/// radius measured in cubes of side `scale`. `None` at the apex.
fn cone_coords(cx: &CellComplex, l: &SphericalComplex, p: &AmbientPoint, scale: f64) -> Option<ConePoint> {
    let v = cx.vertex_point(l.base_vertex);
    let cube = cx.common_cubes(p, &v).into_iter().min_by_key(|&c| cx.dim(c))?;
    let c = l.cells.iter().find(|c| c.cube == cube)?;
    let y = cx.embed(p, cube)?;
    let w: Vec<(usize, f64)> =
        c.verts.iter().zip(&c.axis).map(|(&u, &j)| (u, (y[j] - ((c.corner >> j) & 1) as f64).abs() * scale)).collect();
    let radius = w.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
    Some(ConePoint { radius, direction: LinkPoint::from_weights(w).ok()? })
}

/// Random points of the cone with radius below `r_max`: a random vertex
/// direction one time in five, otherwise random weights on a random face
/// of a random maximal simplex.
pub fn random_cone_points(l: &SphericalComplex, n: usize, r_max: f64, rng: &mut impl Rng) -> Vec<ConePoint> {
    let tops = l.maximal_cells();
    (0..n)
        .map(|_| {
            let verts = &l.cells[tops[rng.gen_range(0..tops.len())]].verts;
            let direction = if rng.gen_bool(0.2) {
                LinkPoint::vertex(verts[rng.gen_range(0..verts.len())])
            } else {
                let mut w = Vec::new();
                for &u in verts {
                    if rng.gen_bool(0.8) {
                        w.push((u, rng.gen_range(0.05..1.0)));
                    }
                }
                if w.is_empty() {
                    w.push((verts[0], 1.0));
                }
                LinkPoint::from_weights(w).expect("positive weights")
            };
            ConePoint { radius: rng.gen_range(0.0..r_max), direction }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub vertex: usize,
    pub h: f64,
    pub pairs: usize,
    /// Largest `|oracle - cone distance|` after straightening.
    pub max_deviation: f64,
    /// The same for unstraightened grid paths.
    pub max_raw_deviation: f64,
}

/// Compares oracle distances in `B(v, 1/2)` with the cone metric over the
/// link of `v`, for the given pairs of cone points.
pub fn ball_cone_isometry_test(
    x: &CubicalComplex,
    v: usize,
    pairs: &[(ConePoint, ConePoint)],
    h: f64,
) -> Result<ConeReport, OracleError> {
    if !is_cat0(x).map_err(|_| OracleError::PreconditionNotCAT0)?.holds {
        return Err(OracleError::PreconditionNotCAT0);
    }
    let l = link(x, v)?;
    let metric = LinkMetric::new(&l);
    let grid = GridGraph::build(x, h)?;
    let mut report = ConeReport { vertex: v, h, pairs: pairs.len(), max_deviation: 0.0, max_raw_deviation: 0.0 };
    for (p, q) in pairs {
        if p.radius >= 0.5 || q.radius >= 0.5 {
            return Err(LinkError::BadPoint("sample outside B(v, 1/2)".into()).into());
        }
        let exact = cone_distance(p.radius, &p.direction, q.radius, &q.direction, &metric)?;
        let (a, b) = (cone_point_in(x, &l, p)?, cone_point_in(x, &l, q)?);
        let raw = grid.distance(&a, &b)?;
        let geo = super::straighten(x, &raw.path, 200);
        report.max_raw_deviation = report.max_raw_deviation.max((raw.length - exact).abs());
        report.max_deviation = report.max_deviation.max((geo.length(x, 1.0) - exact).abs());
    }
    Ok(report)
}

/// The closed star of a vertex as a complex of its own, together with the
/// part of a subcomplex made of cubes at the vertex.
///
/// Scaling its cubes to side `R` gives the ball of radius `R` about the
/// apex of the tangent cone, intersected with the cone's orthants.
pub struct StarModel {
    pub complex: CellComplex,
    pub vertex: usize,
    /// `cells[i]` is the cell of the ambient complex that model cell `i` copies.
    pub cells: Vec<usize>,
    /// Closure of the cubes at the vertex that lie in the subcomplex.
    pub subcomplex: Subcomplex,
}

impl StarModel {
    pub fn new(x: &CellComplex, v: usize, w: &Subcomplex) -> Result<Self, OracleError> {
        let closed = Subcomplex::closure(x, x.star(x.vertex_cell(v)).iter().copied())?;
        let cells: Vec<usize> = closed.cells().collect();
        let cell_id: HashMap<usize, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut verts: Vec<usize> = closed.vertices(x);
        verts.sort_unstable();
        let vid: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let tuples = cells.iter().map(|&c| x.tuple(c).iter().map(|u| vid[u]).collect()).collect();
        let faces = cells
            .iter()
            .map(|&c| x.face_links(c).iter().map(|f| FaceLink { cell: cell_id[&f.cell], ..f.clone() }).collect())
            .collect();
        let complex = CellComplex::from_parts(verts.len(), tuples, faces)?;
        let at_v = x.star(x.vertex_cell(v)).iter().filter(|c| w.contains(**c)).map(|c| cell_id[c]);
        let subcomplex = Subcomplex::closure(&complex, at_v.collect::<Vec<_>>())?;
        Ok(StarModel { complex, vertex: vid[&v], cells, subcomplex })
    }

    /// Model edge of an ambient edge at the vertex.
    fn local_cell(&self, cell: usize) -> Option<usize> {
        self.cells.binary_search(&cell).ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeEscape {
    pub vertex: usize,
    pub radius: f64,
    pub h: f64,
    /// Cone coordinates of the endpoints: `t` along the first direction,
    /// `t * sqrt(m)` toward the barycenter of the other `m`.
    pub t: f64,
    pub length: f64,
    /// Lower bound on the largest distance from the subcomplex along the path.
    pub escape: f64,
    pub path: PolyPath,
}

/// Geodesic in the tangent cone at `v` between a point on the ray of
/// `sigma[0]` and a point on the cone over the face `sigma[1..]`, where
/// every proper face of `sigma` lies in `Lk(v, W)` and `sigma` does not.
///
/// The cone is modelled by the closed star of `v` with cubes of side
/// `radius`; `h` is the grid pitch in the same units. The escape from the
/// cone over `Lk(v, W)` at a path point `(r, y)` is `r sin(min(d, pi/2))`
/// with `d` the link distance from `y` to `Lk(v, W)`, taken here less
/// `EPS_LINK` so that it bounds from below.
pub fn tangent_cone_escape(
    x: &CellComplex,
    w: &Subcomplex,
    v: usize,
    sigma: &[usize],
    radius: f64,
    t: f64,
    h: f64,
) -> Result<ConeEscape, OracleError> {
    let l = link(x, v)?;
    if sigma.len() < 2 {
        return Err(LinkError::BadPoint("a non-full simplex has at least two vertices".into()).into());
    }
    let model = StarModel::new(x, v, w)?;
    let lm = link(&model.complex, model.vertex)?;
    let km = restrict_link(&lm, &model.subcomplex)?;
    let local: Vec<usize> = sigma
        .iter()
        .map(|&u| {
            let d = l.directions[u];
            let edge = model.local_cell(d.edge).expect("edge at v");
            lm.directions.iter().position(|e| e.edge == edge && e.end == d.end).expect("direction in model")
        })
        .collect();
    let m = (local.len() - 1) as f64;
    let a = ConePoint { radius: t / radius, direction: LinkPoint::vertex(local[0]) };
    let b = ConePoint { radius: t * m.sqrt() / radius, direction: LinkPoint::barycenter(&local[1..]) };
    let (pa, pb) = (cone_point_in(&model.complex, &lm, &a)?, cone_point_in(&model.complex, &lm, &b)?);
    let grid = GridGraph::build_scaled(&model.complex, h, radius, DEFAULT_NODE_CAP)?;
    let path = grid.geodesic(&pa, &pb)?;
    let metric = LinkMetric::new(&lm);
    let mut escape: f64 = 0.0;
    for p in path.samples(&model.complex, 16) {
        let Some(c) = cone_coords(&model.complex, &lm, &p, radius) else {
            continue;
        };
        let d = metric.distance_to(&c.direction, &km)?;
        escape = escape.max(c.radius * (d - EPS_LINK).clamp(0.0, FRAC_PI_2).sin());
    }
    Ok(ConeEscape { vertex: v, radius, h, t, length: path.length(&model.complex, radius), escape, path })
}
