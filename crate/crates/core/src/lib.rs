//! Certification of curvature and convexity properties of finite cubical complexes.

pub mod certify;
pub mod cli;
pub mod complex;
pub mod doubling;
pub mod generators;
pub mod links;
pub mod oracle;
pub mod suite;
pub mod unionfind;
pub mod walls;
