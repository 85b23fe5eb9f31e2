//! Exact pinwheel tilings, the aorta curve and fractile tilings.

pub mod aorta;
pub mod census;
pub mod classify;
pub mod error;
pub mod faces;
pub mod fixed;
pub mod fractile;
pub mod gallery;
pub mod geom;
pub mod io;
pub mod marking;
pub mod polygon;
pub mod quad;
pub mod render;
pub mod spectral;
pub mod substitution;

pub use error::{Error, Result};
pub use geom::{AffineMap, Isometry, Mat2, Point};
pub use quad::QuadNum;
pub use substitution::{
    kite_domino_rule, pinwheel_rule, pinwheel_supertile, ChildRole, Patch, PlacedTile, ProtoId, Prototile,
    SubstitutionRule,
};
