//! Worms with ordinal entries, the order-type function o, and the
//! translations between bracket notation and ordinal-indexed notation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::ordinal::{add, hyper_exp, left_sub, omega_pow, Ordinal};
use crate::syntax::{BracketFormula, BracketWorm};

/// A worm ⟨ξ₁⟩…⟨ξ_n⟩⊤ with explicit ordinal entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Worm {
    entries: Vec<Ordinal>,
}

impl Worm {
    pub fn top() -> Self {
        Worm::default()
    }

    pub fn new(entries: Vec<Ordinal>) -> Self {
        Worm { entries }
    }

    pub fn entries(&self) -> &[Ordinal] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Ordinal> {
        self.entries
    }

    pub fn is_top(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_formula(&self) -> RCFormula {
        self.entries.iter().rev().fold(RCFormula::Top, |body, x| {
            RCFormula::diamond(x.clone(), body)
        })
    }
}

impl fmt::Display for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.entries {
            write!(f, "<{x}>")?;
        }
        f.write_str("T")
    }
}

impl fmt::Debug for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A strictly positive formula with ordinal modalities.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RCFormula {
    Top,
    Var(u32),
    Conj(Arc<RCFormula>, Arc<RCFormula>),
    Diamond(Ordinal, Arc<RCFormula>),
}

impl RCFormula {
    pub fn conj(l: RCFormula, r: RCFormula) -> Self {
        RCFormula::Conj(Arc::new(l), Arc::new(r))
    }

    pub fn diamond(index: Ordinal, body: RCFormula) -> Self {
        RCFormula::Diamond(index, Arc::new(body))
    }
}

impl fmt::Display for RCFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RCFormula::Top => f.write_str("T"),
            RCFormula::Var(i) => write!(f, "p{i}"),
            RCFormula::Conj(l, r) => match &**r {
                RCFormula::Conj(..) => write!(f, "{l}&[{r}]"),
                _ => write!(f, "{l}&{r}"),
            },
            RCFormula::Diamond(x, body) => match &**body {
                RCFormula::Conj(..) => write!(f, "<{x}>[{body}]"),
                _ => write!(f, "<{x}>{body}"),
            },
        }
    }
}

impl fmt::Debug for RCFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The set of modality indices occurring in φ.
pub fn signature(phi: &RCFormula) -> BTreeSet<Ordinal> {
    let mut out = BTreeSet::new();
    let mut stack = vec![phi];
    while let Some(f) = stack.pop() {
        match f {
            RCFormula::Top | RCFormula::Var(_) => {}
            RCFormula::Conj(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            RCFormula::Diamond(x, body) => {
                out.insert(x.clone());
                stack.push(body);
            }
        }
    }
    out
}

pub fn concat(a: &Worm, b: &Worm) -> Worm {
    let mut entries = a.entries.clone();
    entries.extend(b.entries.iter().cloned());
    Worm::new(entries)
}

/// B⟨λ⟩A.
pub fn splice(b: &Worm, lambda: &Ordinal, a: &Worm) -> Worm {
    let mut entries = b.entries.clone();
    entries.push(lambda.clone());
    entries.extend(a.entries.iter().cloned());
    Worm::new(entries)
}

/// λ↑A: every entry ξ becomes λ+ξ.
pub fn uparrow(lambda: &Ordinal, a: &Worm) -> Worm {
    Worm::new(a.entries.iter().map(|x| add(lambda, x)).collect())
}

/// The order type o(A).
pub fn order_type(a: &Worm) -> Ordinal {
    order_type_of(&a.entries)
}

pub(crate) fn order_type_of(entries: &[Ordinal]) -> Ordinal {
    let Some(mu) = entries.iter().min() else {
        return Ordinal::zero();
    };
    if !mu.is_zero() {
        // o(μ↑A) = e^μ o(A)
        let shifted: Vec<Ordinal> = entries
            .iter()
            .map(|x| left_sub(mu, x).expect("mu is the minimum"))
            .collect();
        return hyper_exp(mu, &order_type_of(&shifted));
    }
    // A = B₁⟨0⟩B₂⟨0⟩…⟨0⟩B_m gives o(A) = o(B_m)+1+o(B_{m−1})+…+1+o(B₁)
    let blocks: Vec<&[Ordinal]> = entries.split(|x| x.is_zero()).collect();
    let (last, rest) = blocks
        .split_last()
        .expect("split yields at least one block");
    let one = Ordinal::one();
    let mut acc = order_type_of(last);
    for b in rest.iter().rev() {
        acc = add(&add(&acc, &one), &order_type_of(b));
    }
    acc
}

/// Memo table for o* confined to one computation.
#[derive(Default)]
pub(crate) struct OStar {
    memo: HashMap<BracketWorm, Ordinal>,
}

impl OStar {
    pub(crate) fn new() -> Self {
        OStar::default()
    }

    pub(crate) fn get(&mut self, a: &BracketWorm) -> Ordinal {
        if a.is_top() {
            return Ordinal::zero();
        }
        if let Some(x) = self.memo.get(a) {
            return x.clone();
        }
        let entries: Vec<Ordinal> = a.entries().iter().map(|e| self.get(e)).collect();
        let x = order_type_of(&entries);
        self.memo.insert(a.clone(), x.clone());
        x
    }

    pub(crate) fn star(&mut self, a: &BracketWorm) -> Worm {
        Worm::new(a.entries().iter().map(|e| self.get(e)).collect())
    }
}

/// ((a)b)* = ⟨o*(a)⟩b*.
pub fn star(a: &BracketWorm) -> Worm {
    OStar::new().star(a)
}

pub fn o_star(a: &BracketWorm) -> Ordinal {
    OStar::new().get(a)
}

pub fn tau(phi: &BracketFormula) -> RCFormula {
    fn go(phi: &BracketFormula, os: &mut OStar) -> RCFormula {
        match phi {
            BracketFormula::Top => RCFormula::Top,
            BracketFormula::Var(i) => RCFormula::Var(*i),
            BracketFormula::Conj(l, r) => RCFormula::conj(go(l, os), go(r, os)),
            BracketFormula::Diamond(a, body) => RCFormula::diamond(os.get(a), go(body, os)),
        }
    }
    go(phi, &mut OStar::new())
}

/// The normal-form worm W with o(W) = ξ.
///
/// With ξ = s₁+…+s_k in Cantor normal form, W is
/// block(s_k)⟨0⟩…⟨0⟩block(s₂)⟨0⟩block(s₁), where block(1) = ⊤ and the
/// trailing block becomes ⟨0⟩⊤ when s₁ = 1. For an infinite summand
/// ω^δ = φ_γ δ' the block is 1↑W(δ) when γ = 0 and ω^γ↑W(1+δ') otherwise;
/// the second form avoids the fixpoint ω^ε = ε.
pub fn worm_of_ordinal(xi: &Ordinal) -> Worm {
    let mut parts_rev: Vec<Vec<Ordinal>> = Vec::new();
    for (i, t) in xi.expanded_terms().into_iter().enumerate() {
        let infinite = !(t.level().is_zero() && t.arg().is_zero());
        if i == 0 && infinite {
            parts_rev.push(principal_block(t.level(), t.arg()));
        } else {
            parts_rev.push(vec![Ordinal::zero()]);
            parts_rev.push(if infinite {
                principal_block(t.level(), t.arg())
            } else {
                Vec::new()
            });
        }
    }
    Worm::new(parts_rev.into_iter().rev().flatten().collect())
}

fn principal_block(level: &Ordinal, arg: &Ordinal) -> Vec<Ordinal> {
    if level.is_zero() {
        uparrow(&Ordinal::one(), &worm_of_ordinal(arg)).into_entries()
    } else {
        let base = omega_pow(level);
        uparrow(&base, &worm_of_ordinal(&add(&Ordinal::one(), arg))).into_entries()
    }
}

#[derive(Default)]
pub(crate) struct Iota {
    memo: HashMap<Ordinal, BracketWorm>,
}

impl Iota {
    pub(crate) fn worm(&mut self, xi: &Ordinal) -> BracketWorm {
        if let Some(a) = self.memo.get(xi) {
            return a.clone();
        }
        let w = worm_of_ordinal(xi);
        let a = BracketWorm::new(w.entries().iter().map(|e| self.worm(e)).collect());
        self.memo.insert(xi.clone(), a.clone());
        a
    }
}

/// The canonical bracket worm denoting ξ.
pub fn iota_worm(xi: &Ordinal) -> BracketWorm {
    Iota::default().worm(xi)
}

pub fn iota(phi: &RCFormula) -> BracketFormula {
    fn go(phi: &RCFormula, io: &mut Iota) -> BracketFormula {
        match phi {
            RCFormula::Top => BracketFormula::Top,
            RCFormula::Var(i) => BracketFormula::Var(*i),
            RCFormula::Conj(l, r) => BracketFormula::conj(go(l, io), go(r, io)),
            RCFormula::Diamond(x, body) => BracketFormula::diamond(io.worm(x), go(body, io)),
        }
    }
    go(phi, &mut Iota::default())
}

pub fn to_nf(a: &BracketWorm) -> BracketWorm {
    iota_worm(&o_star(a))
}

/// h(0) = 0, h(n+1) = e^{h(n)} 1.
pub fn h(n: usize) -> Ordinal {
    static MEMO: OnceLock<Mutex<Vec<Ordinal>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(vec![Ordinal::zero()]));
    let mut values = memo.lock().unwrap_or_else(|e| e.into_inner());
    while values.len() <= n {
        let next = hyper_exp(values.last().expect("seeded"), &Ordinal::one());
        values.push(next);
    }
    values[n].clone()
}

/// (α↑a*)^ι, translated back entry by entry.
pub fn uparrow_bracket(alpha: &Ordinal, a: &BracketWorm) -> BracketWorm {
    let mut io = Iota::default();
    let shifted = uparrow(alpha, &star(a));
    BracketWorm::new(shifted.entries().iter().map(|x| io.worm(x)).collect())
}
