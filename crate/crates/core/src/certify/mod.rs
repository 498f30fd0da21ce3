//! Decision procedures with machine-checkable certificates.
//!
//! - non-positive curvature: every vertex link is simplicial and flag;
//! - CAT(0): non-positive curvature plus the median-graph test on the
//!   1-skeleton (every triple has exactly one median, and every 4-cycle
//!   spans a square);
//! - CLC and convexity of a subcomplex: every vertex link of `W` is full in
//!   the link of `X`, plus connectivity of `W`.

mod local;
mod median;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{CellComplex, ComplexError, CubicalComplex, Subcomplex, Subdivision};
use crate::links::{link, non_full_simplex, restrict_link, FlagViolation, LinkVertex};

pub use local::{is_locally_convex_oracle, LocalConvexityReport, OracleProbe};
pub use median::{median_report, MedianFailure, MedianReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("the complex is not connected")]
    NotConnected,
    #[error("the ambient complex is not CAT(0)")]
    PreconditionNotCAT0,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Claim {
    Npc,
    NotNpc,
    Cat0,
    NotCat0,
    Clc,
    NotClc,
    Connected,
    NotConnected,
    Convex,
    NotConvex,
}

/// Counterexample carried by every negative certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// Link directions at `vertex` that pairwise span edges but no simplex.
    EmptyClique { vertex: usize, directions: Vec<LinkVertex> },
    /// Two cubes at `vertex` whose link simplices coincide.
    NonSimplicialLink { vertex: usize, cubes: [usize; 2] },
    /// A cube of `X` at `vertex` whose edges there all lie in `W` but which is not in `W`.
    NonFullSimplex { vertex: usize, cube: usize, directions: Vec<LinkVertex> },
    /// Two vertices in different components.
    Disconnected { vertices: [usize; 2], components: usize },
    /// A vertex triple without exactly one median.
    MedianTriple { triple: [usize; 3], medians: Vec<usize> },
    /// A 4-cycle of the 1-skeleton that bounds no square.
    UnfilledFourCycle { cycle: [usize; 4] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexReport {
    pub vertex: usize,
    pub link_vertices: usize,
    pub link_simplices: usize,
    pub flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<VertexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median: Option<MedianReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim: Claim,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub subreports: Vec<Certificate>,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub input_sha: String,
}

impl Certificate {
    fn new(holds: bool, yes: Claim, no: Claim, witness: Option<Witness>, input_sha: String) -> Self {
        Certificate {
            claim: if holds { yes } else { no },
            holds,
            witness,
            subreports: Vec::new(),
            evidence: Evidence::default(),
            notes: Vec::new(),
            input_sha,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// SHA-256 over the canonical JSON of a complex and, optionally, subcomplex cells.
pub fn input_digest(x: &CellComplex, w: Option<&Subcomplex>) -> String {
    let cells: Option<Vec<usize>> = w.map(|w| w.cells().collect());
    let json = serde_json::to_vec(&(x.description(), cells)).expect("serializable");
    hex::encode(Sha256::digest(&json))
}

fn link_witness(v: usize, f: FlagViolation, dirs: &[LinkVertex], cubes: &[usize]) -> Witness {
    match f {
        FlagViolation::NotSimplicial { cells, .. } => {
            Witness::NonSimplicialLink { vertex: v, cubes: [cubes[cells[0]], cubes[cells[1]]] }
        }
        FlagViolation::EmptySimplex { vertices } => {
            Witness::EmptyClique { vertex: v, directions: vertices.iter().map(|&u| dirs[u]).collect() }
        }
    }
}

/// Gromov's link condition at every vertex.
pub fn is_npc(x: &CellComplex) -> Certificate {
    let per_vertex: Vec<(VertexReport, Option<Witness>)> = (0..x.vertex_count())
        .into_par_iter()
        .map(|v| {
            let l = link(x, v).expect("vertex in range");
            let violation = l.flag_violation();
            let report = VertexReport {
                vertex: v,
                link_vertices: l.vertices().len(),
                link_simplices: l.simplices().len(),
                flag: violation.is_none(),
                full: None,
            };
            let cubes: Vec<usize> = l.cells.iter().map(|c| c.cube).collect();
            (report, violation.map(|f| link_witness(v, f, &l.directions, &cubes)))
        })
        .collect();
    let witness = per_vertex.iter().find_map(|(_, w)| w.clone());
    let mut cert = Certificate::new(witness.is_none(), Claim::Npc, Claim::NotNpc, witness, input_digest(x, None));
    cert.evidence.links = per_vertex.into_iter().map(|(r, _)| r).collect();
    cert
}

/// CAT(0) test for a finite connected complex.
pub fn is_cat0(x: &CubicalComplex) -> Result<Certificate, CertifyError> {
    if !Subcomplex::whole(x).is_connected(x)? {
        return Err(CertifyError::NotConnected);
    }
    let npc = is_npc(x);
    let median = median_report(x);
    let holds = npc.holds && median.failure.is_none();
    let witness = npc.witness.clone().or_else(|| median.failure.clone().map(MedianFailure::into_witness));
    let mut cert = Certificate::new(holds, Claim::Cat0, Claim::NotCat0, witness, input_digest(x, None));
    cert.evidence.median = Some(median);
    cert.subreports.push(npc);
    cert.notes.push(
        "simple connectivity is decided through the median-graph characterisation of CAT(0) cube complexes".into(),
    );
    Ok(cert)
}

/// A complex known to be CAT(0).
#[derive(Clone, Copy, Debug)]
pub struct Cat0Complex<'a> {
    complex: &'a CubicalComplex,
}

impl<'a> Cat0Complex<'a> {
    /// Runs [`is_cat0`] and keeps its certificate.
    pub fn certify(x: &'a CubicalComplex) -> Result<(Self, Certificate), CertifyError> {
        let cert = is_cat0(x)?;
        if cert.holds {
            Ok((Cat0Complex { complex: x }, cert))
        } else {
            Err(CertifyError::PreconditionNotCAT0)
        }
    }

    /// The subdivision of a CAT(0) complex is CAT(0): it is the same metric space.
    pub fn subdivision(_parent: Cat0Complex<'_>, sub: &'a Subdivision) -> Self {
        Cat0Complex { complex: &sub.complex }
    }

    pub fn complex(&self) -> &'a CubicalComplex {
        self.complex
    }
}

/// Connectivity of `W`, with two vertices of different components on failure.
pub fn connectivity(x: &CellComplex, w: &Subcomplex) -> Result<Certificate, CertifyError> {
    if w.is_empty() {
        return Err(ComplexError::EmptySubcomplex.into());
    }
    let comps = w.components(x);
    let witness = (comps.len() > 1)
        .then(|| Witness::Disconnected { vertices: [comps[0][0], comps[1][0]], components: comps.len() });
    let mut cert =
        Certificate::new(comps.len() == 1, Claim::Connected, Claim::NotConnected, witness, input_digest(x, Some(w)));
    cert.evidence.components = Some(comps.len());
    Ok(cert)
}

/// Every vertex link of `W` is full in the corresponding link of `X`.
pub fn is_clc(x: &CellComplex, w: &Subcomplex) -> Certificate {
    let per_vertex: Vec<(VertexReport, Option<Witness>)> = w
        .vertices(x)
        .into_par_iter()
        .map(|v| {
            let l = link(x, v).expect("vertex in range");
            let k = restrict_link(&l, w).expect("vertex of W");
            let bad = non_full_simplex(&k, &l).expect("restriction is a subcomplex");
            let report = VertexReport {
                vertex: v,
                link_vertices: k.vertices().len(),
                link_simplices: k.simplices().len(),
                flag: k.is_flag(),
                full: Some(bad.is_none()),
            };
            let witness = bad.map(|s| {
                let cell = &l.cells[l.cell_of(&s).expect("simplex of L")];
                Witness::NonFullSimplex {
                    vertex: v,
                    cube: cell.cube,
                    directions: s.iter().map(|&u| l.directions[u]).collect(),
                }
            });
            (report, witness)
        })
        .collect();
    let witness = per_vertex.iter().find_map(|(_, w)| w.clone());
    let mut cert = Certificate::new(witness.is_none(), Claim::Clc, Claim::NotClc, witness, input_digest(x, Some(w)));
    cert.evidence.links = per_vertex.into_iter().map(|(r, _)| r).collect();
    cert
}

/// Convexity of `W` in a CAT(0) complex: connected and CLC.
pub fn is_convex(x: Cat0Complex<'_>, w: &Subcomplex) -> Result<Certificate, CertifyError> {
    let cx = x.complex();
    let conn = connectivity(cx, w)?;
    let clc = is_clc(cx, w);
    let holds = conn.holds && clc.holds;
    let witness = conn.witness.clone().or_else(|| clc.witness.clone());
    let mut cert = Certificate::new(holds, Claim::Convex, Claim::NotConvex, witness, input_digest(cx, Some(w)));
    cert.subreports = vec![conn, clc];
    Ok(cert)
}

/// [`is_convex`] preceded by the CAT(0) test.
pub fn is_convex_checked(x: &CubicalComplex, w: &Subcomplex) -> Result<Certificate, CertifyError> {
    let (cat0, _) = Cat0Complex::certify(x)?;
    is_convex(cat0, w)
}

#[cfg(test)]
mod tests;
