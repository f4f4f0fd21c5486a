//! Exhaustive enumeration of small bracket worms.

use crate::syntax::BracketWorm;

/// All bracket worms with exactly `n` bracket pairs.
pub fn worms_with_pairs(n: usize) -> Vec<BracketWorm> {
    let mut table: Vec<Vec<BracketWorm>> = vec![vec![BracketWorm::top()]];
    for size in 1..=n {
        let mut level = Vec::new();
        // (x)y with pairs(x) + pairs(y) = size − 1
        for inner in 0..size {
            let outer = size - 1 - inner;
            for x in &table[inner] {
                for y in &table[outer] {
                    level.push(y.prepend(x.clone()));
                }
            }
        }
        table.push(level);
    }
    table.swap_remove(n)
}

/// All bracket worms with at most `k` bracket pairs, smallest first.
pub fn enumerate_worms(k: usize) -> Vec<BracketWorm> {
    (0..=k).flat_map(worms_with_pairs).collect()
}
