//! Resistance computation: the Δ–Y reduction schedule, the determinant
//! oracle, spanning tree / 2-forest counting, and a floating-point fallback.

mod determinant;
mod enumerate;
mod reduction;
mod solve;

use serde::{Deserialize, Serialize};

use crate::graph::Vertex;

pub use determinant::{
    bareiss_det, resistance_det, resistance_det_all, spanning_tree_count, two_forest_count,
};
pub use enumerate::{
    brute_force_tree_enumeration, brute_force_two_forest_enumeration, DEFAULT_ENUMERATION_LIMIT,
};
pub use reduction::{
    cut_vertex_step, delta_y_step, merge_rename_step, parallel_step, reduce_straight,
    reduce_straight_graph, series_step, ReductionTrace, StepKind, TraceStep,
};
pub use solve::{
    conjugate_gradient, resistance_exact_solve, resistance_float, solve_dense, FloatReport,
    DENSE_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DeltaY,
    Determinant,
    ClosedForm,
    Float,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DeltaY => "delta-y",
            Method::Determinant => "determinant",
            Method::ClosedForm => "closed-form",
            Method::Float => "float",
        }
    }
}

/// One resistance value together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceReport<S> {
    pub pair: (Vertex, Vertex),
    pub value: S,
    pub method: Method,
    pub trace: Option<ReductionTrace<S>>,
}
