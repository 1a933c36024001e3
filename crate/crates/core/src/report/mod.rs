//! Rank comparisons between two metrics and the SVG figures built on them.
//!
//! Every renderer is a pure function of its inputs: coordinates are printed
//! with two decimals, no timestamps or generated ids are emitted, and element
//! order follows the input order.

mod rank;
mod svg;

pub use rank::{rank_comparison, rank_comparison_from, Movement, RankComparison, RankedItem};
pub use svg::{
    cardinal_positions, histogram_counts, render_cardinal_plot, render_histogram,
    render_ratio_plot, render_slopegraph, CardinalPosition, FigureSpec, MovementColors,
};
