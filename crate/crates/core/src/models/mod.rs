//! The influencer-guided attachment model and its variants.
//!
//! Nodes sit on the levels of a perfect `b`-ary skeleton tree of height `H`.
//! Two nodes are joined with probability `c^(-1 - min(h(u), h(v)))`, so the
//! link chance is set by the more prestigious endpoint alone.

mod expect;
mod laws;
mod params;
mod sample;
mod tree;

pub use expect::{
    asymptotic_domination_level, core_size, domination_level, expected_conductance, expected_cut_edges,
    expected_degree, expected_degree_exact, expected_edges, expected_edges_with_self, expected_triangles,
    expected_two_paths, log_domination_failure_bound, log_undominated_probability, rescale,
};
pub use laws::{arc_probability, edge_probability, edge_probability_delta, edge_probability_igam2, power_mean};
pub use params::{DeltaIgamParams, Igam2Params, IgamParams};
pub use sample::{
    continuous_height_quantile, sample_continuous_heights, sample_continuous_igam, sample_directed_igam, sample_igam,
    sample_igam2,
};
pub use tree::{full_level_sizes, full_tree_node_count, HeightAssignment};
