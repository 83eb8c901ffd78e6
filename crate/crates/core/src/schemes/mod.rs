//! Time integrators on a single domain: the IMEX relaxation scheme, its relaxed
//! limit, source splitting and boundary ghosts.

mod boundary;
mod domain;
mod params;
mod relaxation;
mod relaxed;
mod source;

pub use boundary::{
    apply_boundary, ghost_states, truncation_v_ghost, BoundaryKind, BoundarySpec, GhostProvider, Ghosts, Side,
};
pub use domain::{Domain, RunStats, SchemeKind};
pub use params::{cfl_dt, RelaxationParams};
pub use relaxation::{cumulative_t, relaxation_step, well_prepared_v};
pub use relaxed::{fluctuations, relaxed_step};
pub use source::source_step;

pub(crate) use domain::{check_subchar, next_dt};
pub(crate) use relaxed::{relaxed_update, Edge};
