//! Finite-radius ends diagnostics.
//!
//! Everything here works on a finite ball. "Unbounded" complement components
//! are approximated by components touching the frontier, and reports carry
//! the radius they were computed at.

mod almost;
mod components;
mod graph;
mod report;

pub use almost::{
    breakpoint_cells, count, member_a, sageev_cut, symdiff_ball, symdiff_exact, symdiff_exact_in,
    CutReport, Flip, FlipDirection, FlipLedger,
};
pub use components::{
    amplify, check_separation, components_minus, end_traces, end_traces_in, persistent_count, saturate,
    AmplifyReport, CompactSet, Component, ComponentKind, ComponentReport, SeparationCheck, Trace,
};
pub use graph::{free_reduce, BallGraph, FreeGroupBall};
pub use report::*;
