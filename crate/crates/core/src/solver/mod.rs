//! Rank-k factorized solver for the elliptope SDP
//!
//! ```text
//! SDP(M)   = max { <M, X> : X ⪰ 0, X_ii = 1 }
//! OPT_k(M) = max { Σ_ij M_ij <σ_i, σ_j> : σ_i ∈ S^{k-1} }
//! ```
//!
//! `OPT_k` is attacked by block-coordinate ascent over the rows of a
//! [`SphereFactor`]; every iterate is exactly feasible, so any value it
//! reports is a certified lower bound on `SDP(M)`. Upper bounds come from the
//! Grothendieck-type sandwich in [`sdp_sandwich`].

mod ascent;
mod bounds;
pub mod checkpoint;
mod factor;
mod grothendieck;
mod operator;

pub use ascent::{coordinate_ascent, default_rank, opt_k, opt_k_from, AscentParams, OptResult, SolveReport, SolverParams};
pub use bounds::{interpolation_gap_bound, zero_temp_gap_bound};
pub use factor::{init_factor, SphereFactor, ROW_NORM_TOL};
pub use grothendieck::{
    alpha_k, grothendieck_round, round_with_projection, sdp_sandwich, sdp_sandwich_dense, Sandwich, SpectralBounds,
};
pub use operator::{objective, Negated, SymOperator};
