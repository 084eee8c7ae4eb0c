//! Spherical codes and their parameter space.
//!
//! * [`geometry`]: unit vectors, angles, hyperplane sections, projections.
//! * [`binary`]: binary codes, their spoilings and the cube embedding.
//! * [`spherical`]: spherical codes, the three spoiling operations and the
//!   composite pipelines built from them.
//! * [`bounds`], [`regions`], [`atlas`]: bound curves, controlling regions
//!   and an empirical estimate of the asymptotic bound.
//! * [`lattice`], [`packing`]: lattices, periodic packings, theta series,
//!   kissing and shell codes, densities.
//! * [`emit`], [`verify`]: CSV/SVG output and self-check suites.

pub mod atlas;
pub mod binary;
pub mod bounds;
pub mod emit;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod numfmt;
pub mod packing;
pub mod plane;
pub mod random;
pub mod regions;
pub mod spherical;
pub mod verify;

pub use atlas::{atlas_build, default_seeds, multiplicity_report, Atlas, AtlasConfig, Seed};
pub use binary::{
    code_parameters, controlling_cones, embed_binary, hamming_distance, numerical_spoil_points,
    spoil1_binary, spoil1_constant, spoil2_binary, spoil3_binary, BinaryCode, BinaryCodePoint,
    ConeSet, Word,
};
pub use bounds::{figure_curves, kl_bound, rankin_curve, simplex_code, BoundCurve, Figure};
pub use error::{Error, Result};
pub use geometry::{
    angle_between, chordal_distance, min_angle, project_and_normalize, section_radius, Hyperplane,
    LineThroughOrigin, UnitVector, EPS_ANGLE, EPS_UNIT,
};
pub use lattice::{Lattice, ThetaCoefficients};
pub use packing::{
    cap_area, code_density, density_bounds, kissing_configuration, max_code_density,
    packing_density, shell_code, sphere_area, MEstimate, PeriodicPacking,
};
pub use plane::{PlanePoint, Sector};
pub use regions::{controlling_regions, ControllingRegions, CutoffRegion, Region};
pub use spherical::{
    composite_spoil_down, composite_spoil_up, find_balanced_line, numerical_spoil, spoil1,
    spoil1_lambda, spoil2, spoil3, Hemisphere, SphericalCode, SphericalCodePoint,
    SpoilTemplate,
};
