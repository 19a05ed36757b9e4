//! Displacement inequalities for free Fuchsian groups.
//!
//! The crate evaluates `Σ arccos(tanh(dᵢ/2)) ≤ π/2` for the displacements
//! `dᵢ = d(z, gᵢz)` of free generators, together with the machinery that
//! surrounds it:
//!
//! - [`hyperbolic`]: half-plane points, isometries, disk frames and the Poisson kernel.
//! - [`freegroup`]: Schottky groups with ping-pong certificates, `Γ(2)`, reduced words and orbits.
//! - [`inequality`]: the angular defect, the bound `B(k)`, mass lower bounds and the corollaries.
//! - [`optimizer`]: min-max displacement and max angular sum over basepoints.
//! - [`measure`]: truncated Patterson–Sullivan measures and their first-letter decomposition.
//! - [`cli`]: the batch front-end behind the `fuchsian` binary.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/` directory.

pub mod cli;
pub mod freegroup;
pub mod hyperbolic;
pub mod inequality;
pub mod measure;
pub mod optimizer;
pub mod quadrature;
