use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{is_cat0, CertifyError};
use crate::complex::{AmbientPoint, CellComplex, CubicalComplex, Subcomplex};
use crate::oracle::{path_departure, random_point, GridGraph};

/// One sampled geodesic of the local convexity test.
#[derive(Clone, Debug, Serialize)]
pub struct OracleProbe {
    pub center: AmbientPoint,
    pub a: AmbientPoint,
    pub b: AmbientPoint,
    /// Upper bound on the largest distance from `W` along the geodesic.
    pub departure: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalConvexityReport {
    pub radius: f64,
    pub h: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub violations: usize,
    pub max_departure: f64,
    pub worst: Option<OracleProbe>,
}

/// A point of a cell of `w` at `center`, within Euclidean distance `radius`
/// of it inside that cell.
fn point_near(
    cx: &CellComplex,
    w: &Subcomplex,
    center: &AmbientPoint,
    radius: f64,
    rng: &mut impl Rng,
) -> AmbientPoint {
    let cells: Vec<usize> = cx.star(center.cell).iter().copied().filter(|&c| w.contains(c)).collect();
    let c = cells[rng.gen_range(0..cells.len())];
    let y = cx.embed(center, c).expect("cell at the center");
    let dir: Vec<f64> = (0..y.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = dir.iter().map(|t| t * t).sum::<f64>().sqrt().max(1e-12);
    let r = radius * rng.gen_range(0.0f64..1.0).sqrt();
    let z: Vec<f64> = y.iter().zip(&dir).map(|(a, d)| (a + r * d / norm).clamp(0.0, 1.0)).collect();
    cx.point_in(c, &z).expect("clamped coordinates")
}

/// Samples centres in `W`, half of them vertices, and pairs of points of
/// `W` near each centre, and checks that oracle geodesics between them stay
/// within `2 h sqrt(D)` of `W`.
pub fn is_locally_convex_oracle(
    x: &CubicalComplex,
    w: &Subcomplex,
    radius: f64,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<LocalConvexityReport, CertifyError> {
    if !is_cat0(x)?.holds {
        return Err(CertifyError::PreconditionNotCAT0);
    }
    let grid = GridGraph::build(x, h).map_err(|e| CertifyError::Oracle(e.to_string()))?;
    let tolerance = 2.0 * h * (x.max_dim().max(1) as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts = w.vertices(x);
    let mut report =
        LocalConvexityReport { radius, h, tolerance, samples, violations: 0, max_departure: 0.0, worst: None };
    for _ in 0..samples {
        let center = if rng.gen_bool(0.5) {
            x.vertex_point(verts[rng.gen_range(0..verts.len())])
        } else {
            random_point(x, w, &mut rng)
        };
        let a = point_near(x, w, &center, radius, &mut rng);
        let b = point_near(x, w, &center, radius, &mut rng);
        let path = grid.geodesic(&a, &b).map_err(|e| CertifyError::Oracle(e.to_string()))?;
        let departure = path_departure(x, w, &path, 8, 1.0);
        if departure > tolerance {
            report.violations += 1;
        }
        if departure > report.max_departure || report.worst.is_none() {
            report.max_departure = departure;
            report.worst = Some(OracleProbe { center, a, b, departure });
        }
    }
    Ok(report)
}
