//! Ordinals below Γ₀ in Veblen normal form.
//!
//! An [`Ordinal`] is a non-increasing sum of principal terms φ_α β. Equal
//! adjacent terms are stored once with a multiplicity, so values such as
//! ω·10⁶ stay small. Every constructor normalizes, which makes the
//! representation unique and lets `==` coincide with ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("left subtraction undefined: {mu} is greater than {xi}")]
    NotLeftSubtractable { mu: Ordinal, xi: Ordinal },
    #[error("{0} is not additively principal")]
    NotPrincipal(Ordinal),
    #[error("{0} is not a successor")]
    NotSuccessor(Ordinal),
}

/// A principal term φ_level(arg), always normal: `arg` is not a single
/// term of level greater than `level`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VeblenTerm {
    level: Ordinal,
    arg: Ordinal,
}

impl VeblenTerm {
    pub fn level(&self) -> &Ordinal {
        &self.level
    }

    pub fn arg(&self) -> &Ordinal {
        &self.arg
    }

    fn one() -> Self {
        VeblenTerm {
            level: Ordinal::zero(),
            arg: Ordinal::zero(),
        }
    }

    fn is_one(&self) -> bool {
        self.level.is_zero() && self.arg.is_zero()
    }
}

impl fmt::Debug for VeblenTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi({},{})", self.level, self.arg)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Run {
    term: VeblenTerm,
    mult: u64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal(Arc<[Run]>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal(Arc::from(Vec::new()))
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn omega() -> Self {
        veblen(&Ordinal::zero(), &Ordinal::one())
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            return Ordinal::zero();
        }
        Ordinal::from_runs(vec![Run {
            term: VeblenTerm::one(),
            mult: n,
        }])
    }

    fn from_runs(runs: Vec<Run>) -> Self {
        Ordinal(Arc::from(runs))
    }

    fn from_term(term: VeblenTerm) -> Self {
        Ordinal::from_runs(vec![Run { term, mult: 1 }])
    }

    fn runs(&self) -> &[Run] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.runs() {
            [] => Some(0),
            [r] if r.term.is_one() => Some(r.mult),
            _ => None,
        }
    }

    /// The terms of the normal form, each with its multiplicity.
    pub fn terms(&self) -> impl Iterator<Item = (&VeblenTerm, u64)> {
        self.0.iter().map(|r| (&r.term, r.mult))
    }

    /// The terms of the normal form with multiplicities expanded.
    pub fn expanded_terms(&self) -> Vec<VeblenTerm> {
        let mut out = Vec::new();
        for r in self.runs() {
            for _ in 0..r.mult {
                out.push(r.term.clone());
            }
        }
        out
    }

    /// The leading (largest) term.
    pub fn leading_term(&self) -> Option<&VeblenTerm> {
        self.0.first().map(|r| &r.term)
    }

    /// True iff the value is a single principal term φ_α β.
    pub fn is_principal(&self) -> bool {
        matches!(self.runs(), [r] if r.mult == 1)
    }

    fn single_term(&self) -> Option<&VeblenTerm> {
        match self.runs() {
            [r] if r.mult == 1 => Some(&r.term),
            _ => None,
        }
    }

    /// ξ = prefix + last, splitting off one copy of the last term.
    pub fn split_last(&self) -> Option<(Ordinal, VeblenTerm)> {
        let mut runs = self.runs().to_vec();
        let last = runs.last_mut()?;
        let term = last.term.clone();
        if last.mult == 1 {
            runs.pop();
        } else {
            last.mult -= 1;
        }
        Some((Ordinal::from_runs(runs), term))
    }

    /// This ordinal plus one.
    pub fn succ(&self) -> Ordinal {
        add(self, &Ordinal::one())
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp(self, other)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_term(a: &VeblenTerm, b: &VeblenTerm) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    match cmp(&a.level, &b.level) {
        Ordering::Equal => cmp(&a.arg, &b.arg),
        // φ_α β < φ_α' β' iff β < φ_α' β' when α < α'
        Ordering::Less => match cmp_with_term(&a.arg, b) {
            Ordering::Less => Ordering::Less,
            _ => Ordering::Greater,
        },
        Ordering::Greater => match cmp_with_term(&b.arg, a) {
            Ordering::Less => Ordering::Greater,
            _ => Ordering::Less,
        },
    }
}

/// Compares an ordinal with the value of a single term.
fn cmp_with_term(x: &Ordinal, t: &VeblenTerm) -> Ordering {
    match x.runs().first() {
        None => Ordering::Less,
        Some(first) => match cmp_term(&first.term, t) {
            Ordering::Equal if first.mult == 1 && x.runs().len() == 1 => Ordering::Equal,
            Ordering::Equal => Ordering::Greater,
            o => o,
        },
    }
}

/// Total order on normal forms: leading terms first, then the remainders.
pub fn cmp(xi: &Ordinal, zeta: &Ordinal) -> Ordering {
    if Arc::ptr_eq(&xi.0, &zeta.0) {
        return Ordering::Equal;
    }
    let (a, b) = (xi.runs(), zeta.runs());
    for (ra, rb) in a.iter().zip(b.iter()) {
        match cmp_term(&ra.term, &rb.term) {
            Ordering::Equal => match ra.mult.cmp(&rb.mult) {
                Ordering::Equal => continue,
                o => return o,
            },
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn add(xi: &Ordinal, zeta: &Ordinal) -> Ordinal {
    let Some(lead) = zeta.runs().first() else {
        return xi.clone();
    };
    if xi.is_zero() {
        return zeta.clone();
    }
    let mut runs: Vec<Run> = Vec::with_capacity(xi.runs().len() + zeta.runs().len());
    let mut merged = false;
    for r in xi.runs() {
        match cmp_term(&r.term, &lead.term) {
            Ordering::Greater => runs.push(r.clone()),
            Ordering::Equal => {
                runs.push(Run {
                    term: r.term.clone(),
                    mult: checked_mult(r.mult.checked_add(lead.mult)),
                });
                merged = true;
                break;
            }
            Ordering::Less => break,
        }
    }
    let rest = if merged {
        &zeta.runs()[1..]
    } else {
        zeta.runs()
    };
    runs.extend(rest.iter().cloned());
    Ordinal::from_runs(runs)
}

fn checked_mult(m: Option<u64>) -> u64 {
    m.expect("ordinal coefficient overflow")
}

/// The unique δ with μ + δ = ξ.
pub fn left_sub(mu: &Ordinal, xi: &Ordinal) -> Result<Ordinal, OrdinalError> {
    let err = || OrdinalError::NotLeftSubtractable {
        mu: mu.clone(),
        xi: xi.clone(),
    };
    let (m, x) = (mu.runs(), xi.runs());
    let mut i = 0;
    while i < m.len() && i < x.len() && m[i] == x[i] {
        i += 1;
    }
    if i == m.len() {
        return Ok(Ordinal::from_runs(x[i..].to_vec()));
    }
    if i == x.len() {
        return Err(err());
    }
    match cmp_term(&m[i].term, &x[i].term) {
        Ordering::Less => Ok(Ordinal::from_runs(x[i..].to_vec())),
        Ordering::Greater => Err(err()),
        Ordering::Equal => {
            if m[i].mult > x[i].mult {
                return Err(err());
            }
            let mut runs = vec![Run {
                term: x[i].term.clone(),
                mult: x[i].mult - m[i].mult,
            }];
            runs.extend(x[i + 1..].iter().cloned());
            Ok(Ordinal::from_runs(runs))
        }
    }
}

/// ξ·n, the n-fold sum ξ+…+ξ.
pub fn mul_nat(xi: &Ordinal, n: u64) -> Ordinal {
    if n == 0 || xi.is_zero() {
        return Ordinal::zero();
    }
    let mut runs = xi.runs().to_vec();
    runs[0].mult = checked_mult(runs[0].mult.checked_mul(n));
    Ordinal::from_runs(runs)
}

/// φ_α β, absorbing fixpoints: returns β when β is a single term of
/// level greater than α.
pub fn veblen(alpha: &Ordinal, beta: &Ordinal) -> Ordinal {
    if let Some(t) = beta.single_term() {
        if cmp(&t.level, alpha) == Ordering::Greater {
            return beta.clone();
        }
    }
    Ordinal::from_term(VeblenTerm {
        level: alpha.clone(),
        arg: beta.clone(),
    })
}

/// n-fold application of φ_α to β.
pub fn veblen_iter(alpha: &Ordinal, n: u64, beta: &Ordinal) -> Ordinal {
    let mut x = beta.clone();
    for _ in 0..n {
        x = veblen(alpha, &x);
    }
    x
}

pub fn omega_pow(xi: &Ordinal) -> Ordinal {
    veblen(&Ordinal::zero(), xi)
}

/// Inverse of [`omega_pow`] on principal ordinals.
pub fn log_principal(xi: &Ordinal) -> Result<Ordinal, OrdinalError> {
    let t = xi
        .single_term()
        .ok_or_else(|| OrdinalError::NotPrincipal(xi.clone()))?;
    if t.level.is_zero() {
        Ok(t.arg.clone())
    } else {
        Ok(xi.clone())
    }
}

/// e(ξ) = −1 + ω^ξ.
pub fn exp_e(xi: &Ordinal) -> Ordinal {
    if xi.is_zero() {
        Ordinal::zero()
    } else {
        omega_pow(xi)
    }
}

/// e^{ω^η}(β) for a single principal factor.
fn exp_principal(eta: &Ordinal, beta: &Ordinal) -> Ordinal {
    if beta.is_zero() {
        return Ordinal::zero();
    }
    if eta.is_zero() {
        return exp_e(beta);
    }
    // e^{ω^η}(1+β') = φ_η(β')
    let beta_prime = left_sub(&Ordinal::one(), beta).expect("beta is nonzero");
    veblen(eta, &beta_prime)
}

/// The hyperexponential e^α β.
pub fn hyper_exp(alpha: &Ordinal, beta: &Ordinal) -> Ordinal {
    let mut x = beta.clone();
    // e^{α₁+…+α_k} = e^{α₁}∘…∘e^{α_k}: apply the smallest summand first
    for r in alpha.runs().iter().rev() {
        let eta = log_principal(&Ordinal::from_term(r.term.clone())).expect("single term");
        for _ in 0..r.mult {
            if x.is_zero() {
                return x;
            }
            x = exp_principal(&eta, &x);
        }
    }
    x
}

pub fn classify(xi: &Ordinal) -> OrdinalKind {
    match xi.runs().last() {
        None => OrdinalKind::Zero,
        Some(r) if r.term.is_one() => OrdinalKind::Successor,
        Some(_) => OrdinalKind::Limit,
    }
}

pub fn pred(xi: &Ordinal) -> Result<Ordinal, OrdinalError> {
    if classify(xi) != OrdinalKind::Successor {
        return Err(OrdinalError::NotSuccessor(xi.clone()));
    }
    let mut runs = xi.runs().to_vec();
    let last = runs.last_mut().expect("successor is nonzero");
    if last.mult == 1 {
        runs.pop();
    } else {
        last.mult -= 1;
    }
    Ok(Ordinal::from_runs(runs))
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for r in self.runs() {
            if r.term.is_one() {
                if !first {
                    f.write_str("+")?;
                }
                write!(f, "{}", r.mult)?;
                first = false;
                continue;
            }
            for _ in 0..r.mult {
                if !first {
                    f.write_str("+")?;
                }
                write!(f, "phi({},{})", r.term.level, r.term.arg)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses the textual ordinal grammar:
///
/// ```text
/// ord  := term ("+" term)*
/// term := nat | "w" | "w^" expo | "phi(" ord "," ord ")"
/// expo := "(" ord ")" | term
/// ```
///
/// Sums need not be in normal form; `1+w` reads as `w`.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, ParseError> {
    let mut p = OrdParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let x = p.sum()?;
    match p.peek() {
        None => Ok(x),
        Some(c) => Err(ParseError::new(
            p.pos,
            format!("unexpected '{}'", c as char),
        )),
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                return Some(*c);
            }
        }
        None
    }

    fn eat(&mut self, s: &str) -> Result<(), ParseError> {
        self.peek();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{s}'")))
        }
    }

    fn sum(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let t = self.term()?;
            acc = add(&acc, &t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                digits
                    .parse::<u64>()
                    .map(Ordinal::nat)
                    .map_err(|_| ParseError::new(start, "natural number too large"))
            }
            Some(b'w') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = if self.peek() == Some(b'(') {
                        self.pos += 1;
                        let e = self.sum()?;
                        self.eat(")")?;
                        e
                    } else {
                        self.term()?
                    };
                    Ok(omega_pow(&e))
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some(b'p') => {
                self.eat("phi(")?;
                let a = self.sum()?;
                self.eat(",")?;
                let b = self.sum()?;
                self.eat(")")?;
                Ok(veblen(&a, &b))
            }
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("expected an ordinal term, found '{}'", c as char),
            )),
            None => Err(ParseError::new(
                self.pos,
                "expected an ordinal term, found end of input",
            )),
        }
    }
}
