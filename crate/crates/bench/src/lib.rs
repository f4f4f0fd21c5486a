//! Inputs shared by the benchmarks.

use bracket_core::enumerate::enumerate_worms;
use bracket_core::{parse_ordinal, BracketWorm, Ordinal};

/// Every bracket worm with at most `pairs` bracket pairs.
pub fn worm_corpus(pairs: usize) -> Vec<BracketWorm> {
    enumerate_worms(pairs)
}

/// Ordinals of assorted shapes, from finite up to Veblen terms with
/// nested arguments.
pub fn ordinal_corpus() -> Vec<Ordinal> {
    [
        "7",
        "w+3",
        "w^w+w^2+1",
        "w^(w^w)+w",
        "phi(1,0)+phi(0,phi(1,0)+1)",
        "phi(2,phi(1,0))",
        "phi(phi(1,0),w)+phi(1,1)",
    ]
    .iter()
    .map(|s| parse_ordinal(s).expect("corpus ordinals parse"))
    .collect()
}
