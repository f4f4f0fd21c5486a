//! Corpora and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod search;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use bracket_core::enumerate::enumerate_worms;
use bracket_core::{fs_veblen, o_star, parse_ordinal, parse_worm, BracketWorm, Ordinal};

pub fn w(s: &str) -> BracketWorm {
    parse_worm(s).unwrap_or_else(|e| panic!("bad worm {s}: {e}"))
}

pub fn o(s: &str) -> Ordinal {
    parse_ordinal(s).unwrap_or_else(|e| panic!("bad ordinal {s}: {e}"))
}

/// All bracket worms with at most `pairs` bracket pairs.
pub fn worms(pairs: usize) -> Vec<BracketWorm> {
    enumerate_worms(pairs)
}

/// Ordinals of assorted shapes below Γ₀.
pub fn ordinal_corpus() -> Vec<Ordinal> {
    [
        "0",
        "1",
        "2",
        "5",
        "w",
        "w+1",
        "w+w",
        "w+7",
        "w^2",
        "w^2+w+3",
        "w^w",
        "w^w+w^2",
        "w^(w+1)",
        "w^(w^w)",
        "w^(w^w)+w",
        "phi(1,0)",
        "phi(1,0)+1",
        "phi(1,0)+w",
        "phi(1,0)+phi(1,0)",
        "phi(1,1)",
        "phi(1,w)",
        "phi(1,phi(1,0))",
        "phi(1,phi(1,0)+1)",
        "phi(2,0)",
        "phi(2,1)",
        "phi(2,0)+phi(1,3)",
        "phi(w,0)",
        "phi(w,1)",
        "phi(w+1,0)",
        "phi(phi(1,0),0)",
        "phi(phi(1,0),w)",
        "phi(phi(2,0),0)+1",
    ]
    .iter()
    .map(|s| o(s))
    .collect()
}

/// Corpus ordinals together with some of their fundamental-sequence members.
pub fn enriched_ordinals() -> Vec<Ordinal> {
    let mut set: BTreeSet<Ordinal> = ordinal_corpus().into_iter().collect();
    set.extend(worms(5).iter().map(o_star));
    let base: Vec<Ordinal> = set.iter().cloned().collect();
    for x in &base {
        for k in 0..=3 {
            let y = fs_veblen(x, k);
            set.insert(fs_veblen(&y, 1));
            set.insert(y);
        }
    }
    set.into_iter().collect()
}

/// Cantor normal form below ε₀ as exponent trees with coefficients.
/// Kept deliberately separate from the library's Veblen representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf(pub Vec<(Cnf, u64)>);

impl Cnf {
    pub fn zero() -> Cnf {
        Cnf(Vec::new())
    }

    pub fn nat(n: u64) -> Cnf {
        if n == 0 {
            Cnf::zero()
        } else {
            Cnf(vec![(Cnf::zero(), n)])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// ω^x.
    pub fn omega_pow(x: Cnf) -> Cnf {
        Cnf(vec![(x, 1)])
    }

    pub fn cmp(&self, other: &Cnf) -> Ordering {
        for ((ea, ca), (eb, cb)) in self.0.iter().zip(other.0.iter()) {
            match ea.cmp(eb).then(ca.cmp(cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    pub fn add(&self, other: &Cnf) -> Cnf {
        let Some((lead, c)) = other.0.first() else {
            return self.clone();
        };
        let mut out: Vec<(Cnf, u64)> = self
            .0
            .iter()
            .take_while(|(e, _)| e.cmp(lead) != Ordering::Less)
            .cloned()
            .collect();
        match out.last_mut() {
            Some((e, k)) if e.cmp(lead) == Ordering::Equal => {
                *k += c;
                out.extend(other.0[1..].iter().cloned());
            }
            _ => out.extend(other.0.iter().cloned()),
        }
        Cnf(out)
    }

    /// Text in the library's ordinal grammar.
    pub fn text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.0 {
            let term = if e.is_zero() {
                "1".to_string()
            } else {
                format!("w^({})", e.text())
            };
            if e.is_zero() {
                parts.push(c.to_string());
            } else {
                for _ in 0..*c {
                    parts.push(term.clone());
                }
            }
        }
        parts.join("+")
    }

    pub fn to_ordinal(&self) -> Ordinal {
        o(&self.text())
    }
}

/// Order type of a worm with natural-number entries, computed by splitting
/// off the head before the leftmost 0: o(A₁⟨0⟩A₀) = o(A₀) + ω^{o(A₁↓)},
/// and o(A) = −1 + ω^{o(A↓)} when A has no 0 entry.
pub fn natural_worm_oracle(entries: &[u64]) -> Cnf {
    if entries.is_empty() {
        return Cnf::zero();
    }
    let lowered = |xs: &[u64]| xs.iter().map(|x| x - 1).collect::<Vec<_>>();
    match entries.iter().position(|&x| x == 0) {
        Some(i) => {
            let head = natural_worm_oracle(&lowered(&entries[..i]));
            natural_worm_oracle(&entries[i + 1..]).add(&Cnf::omega_pow(head))
        }
        None => {
            // −1 + ω^x with x ≥ 1, since the lowered worm is nonempty
            Cnf::omega_pow(natural_worm_oracle(&lowered(entries)))
        }
    }
}

/// A random strictly positive formula with `budget` connectives and
/// modality indices drawn from `indices`.
pub fn random_rc_formula<R: rand::Rng>(
    rng: &mut R,
    indices: &[Ordinal],
    budget: usize,
) -> bracket_core::RCFormula {
    use bracket_core::RCFormula;
    if budget == 0 {
        return if rng.gen_bool(0.5) {
            RCFormula::Top
        } else {
            RCFormula::Var(rng.gen_range(0..3))
        };
    }
    if rng.gen_bool(0.5) {
        let left = rng.gen_range(0..budget);
        RCFormula::conj(
            random_rc_formula(rng, indices, left),
            random_rc_formula(rng, indices, budget - 1 - left),
        )
    } else {
        let x = indices[rng.gen_range(0..indices.len())].clone();
        RCFormula::diamond(x, random_rc_formula(rng, indices, budget - 1))
    }
}
