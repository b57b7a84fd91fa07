//! Program constructions over [`ittm_core`]: clocks, speed-up, races,
//! parameter fixing, universal simulation and the standard library.

pub mod clock;
pub mod compile;
pub mod count;
pub mod fixpoint;
pub mod length;
pub mod race;
pub mod smn;
pub mod speedup;
pub mod stdlib;
pub mod universal;
