//! Influencer-guided attachment model (IGAM) toolkit.
//!
//! Nodes occupy the levels of a `b`-ary skeleton tree and attach with a
//! probability decided by the more prestigious endpoint. The crate samples
//! the model and its variants, fits it to observed graphs, builds almost
//! dominating sets from prestige and greedy orders, and provides three
//! logistic core-periphery baselines for comparison.
//!
//! ```
//! use igam::models::{sample_igam, IgamParams};
//!
//! let params = IgamParams::new(3, 2.0, 4)?;
//! let (graph, heights) = sample_igam(&params, 7)?;
//! assert_eq!(graph.node_count(), 121);
//! assert_eq!(heights.level_sizes(), vec![1, 3, 9, 27, 81]);
//! # Ok::<(), igam::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod domination;
pub mod error;
pub mod fitting;
pub mod graph;
pub mod io;
pub mod logistic;
pub mod metrics;
pub mod models;

pub use error::{Error, Rejection, Result};
pub use graph::{Graph, NodeId};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/domination.md")]
    mod domination {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
