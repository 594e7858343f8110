//! Reconstruction of grid images from their line sums along a few lattice
//! directions.
//!
//! Given the sums of an `m x n` image along every line of each direction in a
//! set `D`, [`reconstruct`] recovers an image with those sums in `O(|D| m n)`
//! basic operations. When the grid is large compared with the direction set,
//! solutions differ by ghosts (images with all line sums zero); the [`ghost`]
//! module describes them and [`oracle`] cross-checks everything by exact
//! Gaussian elimination.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod ghost;
pub mod grid;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod projector;
pub mod reconstruct;
pub mod value;

pub use error::{Result, TomoError};
pub use geometry::{border_points, build_plan, stream_order, stream_trace, weight, BorderChain, Side, TraversalPlan, Weight};
pub use ghost::{
    free_block, ghost_combination, primitive_ghost, recover_coefficients, switching_domain_map, FreeBlock,
    GhostPolynomial, SwitchingDomainMap,
};
pub use grid::{is_valid, validate_directions, Direction, DirectionSet, Grid, GridImage};
pub use instance::{generate_instance, DirSpec, Instance, ValueMode};
pub use oracle::{solve_exact, unique_points, OracleSolution, TomographySystem};
pub use projector::{all_zero, project, LineSumTable};
pub use reconstruct::{
    reconstruct, reconstruct_nonvalid, reconstruct_with, verify_residuals, ReconstructOptions, ReconstructStats, Reconstruction,
    TraceEvent,
};
pub use value::{Counted, OpCount, Rational, Value};
