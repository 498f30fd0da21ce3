//! The acceptance battery: generated instances and one check per criterion.

mod criteria;

use std::time::Instant;

use serde::Serialize;

use crate::certify::is_cat0;
use crate::complex::{CubicalComplex, Subcomplex};
use crate::generators::{generate, random_subcomplex, GeneratorSpec, GrowthMode};

pub use criteria::{
    calibration, cone_metric, doubling, flag_certification, link_convexity, convexity_equivalence, walls_and_halfspaces,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub instances: usize,
    /// Oracle pitch.
    pub h: f64,
    pub seed: u64,
    /// Geodesics per CLC-positive instance.
    pub geodesics: usize,
    /// Same-side pairs per wall.
    pub wall_pairs: usize,
    /// W-to-W pairs per CLC-positive double.
    pub double_pairs: usize,
    /// Sampled point pairs per vertex link.
    pub link_pairs: usize,
    /// Traced star geodesics per vertex.
    pub traces: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instances: 200,
            h: 0.125,
            seed: 2024,
            geodesics: 100,
            wall_pairs: 50,
            double_pairs: 50,
            link_pairs: 8,
            traces: 3,
        }
    }
}

/// A CAT(0) complex with a connected subcomplex.
pub struct Instance {
    pub label: String,
    pub spec: GeneratorSpec,
    pub complex: CubicalComplex,
    pub sub: Subcomplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time, left out of serialized reports.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub instances: usize,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn spec_for(i: usize, seed: u64) -> GeneratorSpec {
    match i % 8 {
        0 | 1 => GeneratorSpec::GridRegion { dim: 2, cubes: 4 + (i * 7) % 17, seed },
        2 | 3 => GeneratorSpec::GridRegion { dim: 3, cubes: 2 + (i * 5) % 11, seed },
        4 => GeneratorSpec::Prism { cubes: 2 + i % 6, seed },
        5 => GeneratorSpec::CubeTree { dim: 2 + i % 2, cubes: 3 + i % 8, seed },
        6 => GeneratorSpec::Staircase { rows: 2 + i % 4, seed },
        _ => GeneratorSpec::GridRegion { dim: 3, cubes: 20 + (i * 3) % 31, seed },
    }
}

/// `n` CAT(0) instances of dimension at most 3 with at most 50 cubes, each
/// with a random connected subcomplex.
pub fn instances(n: usize, seed: u64) -> Vec<Instance> {
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while out.len() < n {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
        let spec = spec_for(i, s);
        i += 1;
        let Ok(g) = generate(&spec) else { continue };
        if !is_cat0(&g.complex).is_ok_and(|c| c.holds) {
            continue;
        }
        let fraction = 0.15 + 0.6 * ((i * 37) % 100) as f64 / 100.0;
        let mode = if (i / 8) % 2 == 0 { GrowthMode::AnyCell } else { GrowthMode::MaximalCubes };
        let sub = random_subcomplex(&g.complex, s, fraction, mode);
        out.push(Instance { label: g.label, spec, complex: g.complex, sub });
    }
    out
}

/// Runs all seven criteria.
pub fn run(config: &SuiteConfig) -> SuiteReport {
    let inst = instances(config.instances, config.seed);
    let timed = |f: &dyn Fn() -> CriterionResult| {
        let t = Instant::now();
        let mut r = f();
        r.seconds = t.elapsed().as_secs_f64();
        log::info!("criterion {} in {:.1}s", r.id, r.seconds);
        r
    };
    let criteria = vec![
        timed(&|| convexity_equivalence(&inst, config)),
        timed(&|| link_convexity(&inst, config)),
        timed(&|| flag_certification(&inst)),
        timed(&|| walls_and_halfspaces(&inst, config)),
        timed(&|| doubling(&inst, config)),
        timed(&|| cone_metric(config.seed)),
        timed(&calibration),
    ];
    SuiteReport { config: config.clone(), instances: inst.len(), criteria }
}
