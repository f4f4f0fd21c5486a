//! Bracket notation for ordinals below Γ₀ and the Bracket Calculus.
//!
//! * [`syntax`]: bracket worms and formulas, parsing and printing.
//! * [`ordinal`]: Veblen normal forms and their arithmetic.
//! * [`worm`]: ordinal-indexed worms, the order type o and normal forms.
//! * [`calculus`]: checkable derivations and certificate-producing provers.
//! * [`fundseq`]: fundamental sequences, step-down traces, growth witnesses.
//! * [`enumerate`]: exhaustive enumeration of small bracket worms.

pub mod calculus;
pub mod enumerate;
pub mod fundseq;
pub mod ordinal;
pub mod syntax;
pub mod worm;

pub use calculus::{
    check_derivation, conj_to_worm, decide_closed_geq, decide_le, decide_lt, derived_mono,
    prove_le, prove_lt, CalculusError, Certificate, CheckResult, Rule, Sequent,
};
pub use fundseq::{
    a_seq, descend, f_witness, fs_bracket, fs_veblen, g_witness, gamma, step_iter, xhat,
    DescentTrace, StepTrace, Witness,
};
pub use ordinal::{parse_ordinal, Ordinal, OrdinalError, OrdinalKind, VeblenTerm};
pub use syntax::{
    nesting_formula, nesting_worm, parse_formula, parse_worm, print_formula, print_worm,
    BracketFormula, BracketWorm, ParseError,
};
pub use worm::{o_star, order_type, star, tau, to_nf, RCFormula, Worm};
