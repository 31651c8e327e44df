//! Iterative refinement solvers built on the shift-and-invert transform.

mod operators;
mod rational;
mod report;

pub use operators::{RatOperator, ShiftInvertOperator};
pub use rational::{
    eval_f_small, ra_solve, rat_solve, rat_start_vector, riley_solve, second_difference_matrix,
};
pub use report::{IterationRecord, SolveOptions, SolveReport, StopReason};

pub(crate) use report::HistoryRecorder;
