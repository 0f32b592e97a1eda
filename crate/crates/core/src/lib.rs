//! Slice-regular functions of a quaternionic variable: the *-algebra of
//! polynomials and semiregular rationals, the σ-metric, spherical Laurent
//! expansions with principal parts, and a constructive Mittag-Leffler builder.

pub mod commands;
pub mod error;
pub mod function;
pub mod geometry;
pub mod grid;
pub mod mittag_leffler;
pub mod quat;
pub mod rational;
pub mod scalar;
pub mod series_examples;
pub mod spherical;
pub mod star_poly;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{omega, same_plane, sigma, SigmaBall, Sphere2, SymmetricShell};
pub use quat::{ImaginaryUnit, Quat, Quaternion};
pub use rational::{taylor_truncate, taylor_truncate_sum, DenFactor, PrincipalPart, SemiRational};
pub use scalar::{Exact, Scalar};
pub use star_poly::{star_pow, StarPoly, TruncatedSeries};
pub use function::{Certified, CertifiedFunction, Conjugate, Difference, FnFunction, QiQ, SliceFunction};
pub use series_examples::{Paired, ZSum};
pub use spherical::{
    extract_principal_part, extract_principal_part_at, pole_order, r_operator_on_slice, representation_extend,
    slice_laurent_coeffs, spherical_coeffs, spherical_coeffs_poly, spherical_laurent, SliceSamples, SphericalExpansion,
};
pub use mittag_leffler::{build, BuildOptions, LatticePrincipal, MLFunction, Prescription};
pub use verify::{check_affine_on_sphere, check_sigma_expansion, dbar_residual, regularity_probe};
pub use grid::{grid_csv, sample_grid, GridSpec};
