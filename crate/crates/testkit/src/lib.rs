//! Reference implementations kept deliberately naive. Nothing here shares
//! code with the engine: tapes are plain arrays, ordinals are coefficient
//! vectors, limits are found by stepping far past the point where cells
//! settle.

pub mod mutate;
pub mod naive;
pub mod ord;
pub mod relation;
