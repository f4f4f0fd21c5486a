//! Fundamental sequences on bracket worms and on Veblen normal forms,
//! iterated step-down, and the growth functions F and G.

mod engine;

use std::collections::VecDeque;
use std::fmt;

use serde_json::{json, Value};

use crate::ordinal::{
    add, classify, mul_nat, omega_pow, pred, veblen, veblen_iter, Ordinal, OrdinalKind,
};
use crate::syntax::BracketWorm;

use engine::{fs_lw, LwBuilder, Stepper};

/// Worms with more bracket pairs than this are recorded in traces by length only.
pub const RENDER_CAP: usize = 4096;

pub const DEFAULT_WINDOW: usize = 64;

/// a{n}.
pub fn fs_bracket(a: &BracketWorm, n: u64) -> BracketWorm {
    fs_lw(&LwBuilder::default().build(a), n).to_bracket()
}

/// First and last items of a sequence too long to keep whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window<T> {
    cap: usize,
    seen: u64,
    head: Vec<T>,
    tail: VecDeque<T>,
}

impl<T: Clone> Window<T> {
    pub fn new(cap: usize) -> Self {
        Window {
            cap,
            seen: 0,
            head: Vec::new(),
            tail: VecDeque::new(),
        }
    }

    fn push(&mut self, x: T) {
        self.seen += 1;
        if self.head.len() < self.cap {
            self.head.push(x);
            return;
        }
        if self.cap == 0 {
            return;
        }
        if self.tail.len() == self.cap {
            self.tail.pop_front();
        }
        self.tail.push_back(x);
    }

    /// Whether some item was dropped between head and tail.
    pub fn is_complete(&self) -> bool {
        self.seen == (self.head.len() + self.tail.len()) as u64
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn tail(&self) -> Vec<T> {
        self.tail.iter().cloned().collect()
    }

    /// Every item, when none was dropped.
    pub fn all(&self) -> Option<Vec<T>> {
        self.is_complete()
            .then(|| self.head.iter().chain(self.tail.iter()).cloned().collect())
    }

    fn map<U>(&self, f: impl Fn(&T) -> U) -> Window<U> {
        Window {
            cap: self.cap,
            seen: self.seen,
            head: self.head.iter().map(&f).collect(),
            tail: self.tail.iter().map(&f).collect(),
        }
    }

    pub fn last(&self) -> Option<&T> {
        self.tail.back().or_else(|| self.head.last())
    }
}

/// A worm in a trace, or just its length when it is too long to print.
/// Lengths saturate at `u128::MAX`, which displays as `...[>=2^128]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Snapshot {
    Worm(BracketWorm),
    Elided { len: u128 },
}

impl Snapshot {
    pub fn worm(&self) -> Option<&BracketWorm> {
        match self {
            Snapshot::Worm(w) => Some(w),
            Snapshot::Elided { .. } => None,
        }
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Snapshot::Worm(w) => write!(f, "{w}"),
            Snapshot::Elided { len: u128::MAX } => write!(f, "...[>=2^128]"),
            Snapshot::Elided { len } => write!(f, "...[{len}]"),
        }
    }
}

/// The run a⟦0⟧, a⟦1⟧, … of a bracket worm.
#[derive(Debug, Clone)]
pub struct StepTrace {
    pub start: BracketWorm,
    pub steps: Window<Snapshot>,
    pub terminated: bool,
    pub steps_used: u64,
    pub budget: u64,
}

impl StepTrace {
    /// The whole sequence when it was short enough to keep.
    pub fn worms(&self) -> Option<Vec<BracketWorm>> {
        self.steps
            .all()?
            .into_iter()
            .map(|s| s.worm().cloned())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let text = |xs: &[Snapshot]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        json!({
            "start": self.start.to_string(),
            "terminated": self.terminated,
            "steps_used": self.steps_used,
            "budget": self.budget,
            "head": text(self.steps.head()),
            "tail": text(&self.steps.tail()),
        })
    }
}

fn snapshot(s: &Stepper) -> Snapshot {
    match s.materialize(RENDER_CAP) {
        Some(w) => Snapshot::Worm(w),
        None => Snapshot::Elided { len: s.len() },
    }
}

/// Steps a until ⊤ or until `budget` steps were taken.
pub fn step_iter(a: &BracketWorm, budget: u64) -> StepTrace {
    step_iter_with(a, budget, DEFAULT_WINDOW)
}

/// [`step_iter`] keeping the first and last `window` worms.
pub fn step_iter_with(a: &BracketWorm, budget: u64, window: usize) -> StepTrace {
    let mut s = Stepper::new(&LwBuilder::default().build(a));
    // ropes are cheap to clone; rendering waits until the window is settled
    let mut kept = Window::new(window);
    kept.push(s.clone());
    while !s.is_top() && s.index() < budget {
        s.step();
        kept.push(s.clone());
    }
    StepTrace {
        start: a.clone(),
        steps: kept.map(snapshot),
        terminated: s.is_top(),
        steps_used: s.index(),
        budget,
    }
}

/// Steps to ⊤ from a, without recording a trace.
fn steps_to_top(a: &BracketWorm, budget: u64) -> Option<u64> {
    let mut s = Stepper::new(&LwBuilder::default().build(a));
    while !s.is_top() {
        if s.index() >= budget {
            return None;
        }
        s.step();
    }
    Some(s.index())
}

/// x̂α: x+1 for successor α, otherwise 1.
pub fn xhat(x: u64, alpha: &Ordinal) -> u64 {
    if classify(alpha) == OrdinalKind::Successor {
        x + 1
    } else {
        1
    }
}

/// ξ[x].
pub fn fs_veblen(xi: &Ordinal, x: u64) -> Ordinal {
    let Some((prefix, last)) = xi.split_last() else {
        return Ordinal::zero();
    };
    if !prefix.is_zero() {
        return add(&prefix, &fs_veblen(&veblen(last.level(), last.arg()), x));
    }
    let (alpha, beta) = (last.level(), last.arg());
    let kind = classify(beta);
    if kind == OrdinalKind::Limit {
        return veblen(alpha, &fs_veblen(beta, x));
    }
    if alpha.is_zero() {
        return match kind {
            OrdinalKind::Zero => Ordinal::zero(),
            _ => mul_nat(&omega_pow(&pred(beta).expect("successor")), x + 2),
        };
    }
    let base = match kind {
        OrdinalKind::Zero => Ordinal::zero(),
        _ => veblen(alpha, &pred(beta).expect("successor")).succ(),
    };
    veblen_iter(&fs_veblen(alpha, x), xhat(x, alpha), &base)
}

/// The run ξ⟨0⟩, ξ⟨1⟩, … with ξ⟨n+1⟩ = ξ⟨n⟩[n+1].
#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub start: Ordinal,
    pub steps: Window<Ordinal>,
    pub terminated: bool,
    pub steps_used: u64,
    pub budget: u64,
}

impl DescentTrace {
    pub fn ordinals(&self) -> Option<Vec<Ordinal>> {
        self.steps.all()
    }

    pub fn to_json(&self) -> Value {
        let text = |xs: &[Ordinal]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        json!({
            "start": self.start.to_string(),
            "terminated": self.terminated,
            "steps_used": self.steps_used,
            "budget": self.budget,
            "head": text(self.steps.head()),
            "tail": text(&self.steps.tail()),
        })
    }
}

pub fn descend(xi: &Ordinal, budget: u64) -> DescentTrace {
    descend_with(xi, budget, DEFAULT_WINDOW)
}

pub fn descend_with(xi: &Ordinal, budget: u64, window: usize) -> DescentTrace {
    let mut steps = Window::new(window);
    let mut cur = xi.clone();
    let mut n = 0;
    steps.push(cur.clone());
    while !cur.is_zero() && n < budget {
        n += 1;
        cur = fs_veblen(&cur, n);
        steps.push(cur.clone());
    }
    DescentTrace {
        start: xi.clone(),
        steps,
        terminated: cur.is_zero(),
        steps_used: n,
        budget,
    }
}

/// γ₀ = 0, γ_{n+1} = φ_{γ_n} 0.
pub fn gamma(n: usize) -> Ordinal {
    (0..n).fold(Ordinal::zero(), |g, _| veblen(&g, &Ordinal::zero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Found(u64),
    BudgetExhausted(u64),
}

/// F(m): the least ℓ with γ_m⟨ℓ⟩ = 0.
pub fn f_witness(m: usize, budget: u64) -> Witness {
    let mut cur = gamma(m);
    let mut n = 0;
    while !cur.is_zero() {
        if n == budget {
            return Witness::BudgetExhausted(budget);
        }
        n += 1;
        cur = fs_veblen(&cur, n);
    }
    Witness::Found(n)
}

/// a₀ = ⊤, a₁ = (), a_{n+2} = (((a_n))).
pub fn a_seq(n: usize) -> BracketWorm {
    let wrap = |w: BracketWorm| BracketWorm::new(vec![w]);
    let mut a = if n.is_multiple_of(2) {
        BracketWorm::top()
    } else {
        wrap(BracketWorm::top())
    };
    for _ in 0..n / 2 {
        a = wrap(wrap(wrap(a)));
    }
    a
}

/// ()a_m.
pub fn a_prime(m: usize) -> BracketWorm {
    a_seq(m).prepend(BracketWorm::top())
}

/// G(m): the least k with a′_m⟦k+1⟧ = ⊤.
pub fn g_witness(m: usize, budget: u64) -> Witness {
    match steps_to_top(&a_prime(m), budget) {
        Some(i) => Witness::Found(i - 1),
        None => Witness::BudgetExhausted(budget),
    }
}
