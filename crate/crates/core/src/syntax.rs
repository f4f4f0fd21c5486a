//! Bracket worms and strictly positive bracket formulas: data model,
//! parsing, canonical printing and nesting depth.
//!
//! Surface syntax:
//!
//! ```text
//! worm    := "T" | item+ "T"?
//! item    := "(" label ")"
//! label   := "" | worm
//! formula := atom ("&" atom)*
//! atom    := "T" | "p" digit+ | "[" formula "]" | item atom?
//! ```
//!
//! Whitespace is ignored everywhere. `()` is the diamond labelled by the
//! empty worm. Square brackets group a conjunction that sits under a
//! diamond or on the right of another conjunction; the printer emits them
//! only where the tree requires them.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Parse failure with the byte offset of the offending input position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// A bracket worm `(a₁)(a₂)…(a_k)⊤`, stored as the sequence of its labels.
///
/// Entries are shared, so cloning is cheap and equal subtrees built from
/// the same source compare by pointer first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketWorm(Arc<[BracketWorm]>);

impl BracketWorm {
    /// The empty worm ⊤.
    pub fn top() -> Self {
        BracketWorm(Arc::from(Vec::new()))
    }

    pub fn new(entries: Vec<BracketWorm>) -> Self {
        BracketWorm(Arc::from(entries))
    }

    /// `(label)self`.
    pub fn prepend(&self, label: BracketWorm) -> Self {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(label);
        v.extend(self.0.iter().cloned());
        BracketWorm::new(v)
    }

    /// The worm `()…()` with `n` empty labels.
    pub fn natural(n: usize) -> Self {
        BracketWorm::new(vec![BracketWorm::top(); n])
    }

    pub fn entries(&self) -> &[BracketWorm] {
        &self.0
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation of the label sequences.
    pub fn concat(&self, other: &BracketWorm) -> Self {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend(self.0.iter().cloned());
        v.extend(other.0.iter().cloned());
        BracketWorm::new(v)
    }

    /// Number of bracket pairs.
    pub fn pairs(&self) -> usize {
        self.0.iter().map(|e| 1 + e.pairs()).sum()
    }

    /// The worm read as a formula: nested diamonds ending in ⊤.
    pub fn to_formula(&self) -> BracketFormula {
        self.0
            .iter()
            .rev()
            .fold(BracketFormula::Top, |body, label| {
                BracketFormula::diamond(label.clone(), body)
            })
    }

    fn write_items(&self, out: &mut String) {
        for e in self.0.iter() {
            out.push('(');
            e.write_items(out);
            out.push(')');
        }
    }
}

impl fmt::Display for BracketWorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_worm(self))
    }
}

impl fmt::Debug for BracketWorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BracketWorm({})", print_worm(self))
    }
}

/// A strictly positive bracket formula.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BracketFormula {
    Top,
    Var(u32),
    Conj(Arc<BracketFormula>, Arc<BracketFormula>),
    Diamond(BracketWorm, Arc<BracketFormula>),
}

impl BracketFormula {
    pub fn conj(l: BracketFormula, r: BracketFormula) -> Self {
        BracketFormula::Conj(Arc::new(l), Arc::new(r))
    }

    pub fn diamond(label: BracketWorm, body: BracketFormula) -> Self {
        BracketFormula::Diamond(label, Arc::new(body))
    }

    /// Reads the formula back as a worm if it is a chain of diamonds ending in ⊤.
    pub fn as_worm(&self) -> Option<BracketWorm> {
        let mut labels = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                BracketFormula::Top => return Some(BracketWorm::new(labels)),
                BracketFormula::Diamond(l, body) => {
                    labels.push(l.clone());
                    cur = body;
                }
                _ => return None,
            }
        }
    }

    pub fn has_variables(&self) -> bool {
        match self {
            BracketFormula::Top => false,
            BracketFormula::Var(_) => true,
            BracketFormula::Conj(l, r) => l.has_variables() || r.has_variables(),
            BracketFormula::Diamond(_, b) => b.has_variables(),
        }
    }
}

impl fmt::Display for BracketFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Debug for BracketFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BracketFormula({})", print_formula(self))
    }
}

pub fn print_worm(a: &BracketWorm) -> String {
    if a.is_top() {
        return "T".to_string();
    }
    let mut out = String::new();
    a.write_items(&mut out);
    out
}

pub fn print_formula(phi: &BracketFormula) -> String {
    let mut out = String::new();
    write_formula(phi, &mut out);
    out
}

fn write_formula(phi: &BracketFormula, out: &mut String) {
    match phi {
        BracketFormula::Conj(l, r) => {
            write_formula(l, out);
            out.push('&');
            write_atom(r, out);
        }
        _ => write_atom(phi, out),
    }
}

fn write_atom(phi: &BracketFormula, out: &mut String) {
    let mut cur = phi;
    let mut after_label = false;
    loop {
        match cur {
            BracketFormula::Top => {
                if !after_label {
                    out.push('T');
                }
                return;
            }
            BracketFormula::Var(i) => {
                out.push('p');
                out.push_str(&i.to_string());
                return;
            }
            BracketFormula::Conj(..) => {
                out.push('[');
                write_formula(cur, out);
                out.push(']');
                return;
            }
            BracketFormula::Diamond(label, body) => {
                out.push('(');
                label.write_items(out);
                out.push(')');
                after_label = true;
                cur = body;
            }
        }
    }
}

pub fn parse_worm(text: &str) -> Result<BracketWorm, ParseError> {
    let mut p = Parser::new(text);
    let w = p.worm()?;
    p.expect_end()?;
    Ok(w)
}

pub fn parse_formula(text: &str) -> Result<BracketFormula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// N(⊤) = 0, N((a)b) = max(N(a)+1, N(b)).
pub fn nesting_worm(a: &BracketWorm) -> usize {
    a.entries()
        .iter()
        .map(|e| nesting_worm(e) + 1)
        .max()
        .unwrap_or(0)
}

pub fn nesting_formula(phi: &BracketFormula) -> usize {
    let mut best = 0;
    let mut stack = vec![phi];
    while let Some(f) = stack.pop() {
        match f {
            BracketFormula::Top | BracketFormula::Var(_) => {}
            BracketFormula::Conj(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            BracketFormula::Diamond(label, body) => {
                best = best.max(nesting_worm(label) + 1);
                stack.push(body);
            }
        }
    }
    best
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

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

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found '{}'", c as char, d as char),
            )),
            None => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            )),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("unexpected '{}'", c as char),
            )),
        }
    }

    fn worm(&mut self) -> Result<BracketWorm, ParseError> {
        match self.peek() {
            Some(b'T') => {
                self.bump();
                Ok(BracketWorm::top())
            }
            Some(b'(') => {
                let w = self.items()?;
                if self.peek() == Some(b'T') {
                    self.bump();
                }
                Ok(w)
            }
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("expected '(' or 'T', found '{}'", c as char),
            )),
            None => Err(ParseError::new(
                self.pos,
                "expected a worm, found end of input",
            )),
        }
    }

    fn items(&mut self) -> Result<BracketWorm, ParseError> {
        let mut entries = Vec::new();
        while self.peek() == Some(b'(') {
            entries.push(self.item()?);
        }
        Ok(BracketWorm::new(entries))
    }

    fn item(&mut self) -> Result<BracketWorm, ParseError> {
        self.expect(b'(')?;
        let label = match self.peek() {
            Some(b')') => BracketWorm::top(),
            _ => self.worm()?,
        };
        self.expect(b')')?;
        Ok(label)
    }

    fn formula(&mut self) -> Result<BracketFormula, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'&') {
            self.bump();
            let rhs = self.atom()?;
            acc = BracketFormula::conj(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<BracketFormula, ParseError> {
        let mut labels = Vec::new();
        while self.peek() == Some(b'(') {
            labels.push(self.item()?);
        }
        let tail = match self.peek() {
            Some(b'T') => {
                self.bump();
                BracketFormula::Top
            }
            Some(b'p') => {
                self.bump();
                self.var()?
            }
            Some(b'[') => {
                self.bump();
                let f = self.formula()?;
                self.expect(b']')?;
                f
            }
            _ if !labels.is_empty() => BracketFormula::Top,
            Some(c) => {
                return Err(ParseError::new(
                    self.pos,
                    format!("expected a formula, found '{}'", c as char),
                ))
            }
            None => {
                return Err(ParseError::new(
                    self.pos,
                    "expected a formula, found end of input",
                ))
            }
        };
        Ok(labels
            .into_iter()
            .rev()
            .fold(tail, |body, l| BracketFormula::diamond(l, body)))
    }

    fn var(&mut self) -> Result<BracketFormula, ParseError> {
        // digits directly follow 'p'; whitespace inside a variable name is not allowed
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected digits after 'p'"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(0) => Err(ParseError::new(start, "variable index must be positive")),
            Ok(i) => Ok(BracketFormula::Var(i)),
            Err(_) => Err(ParseError::new(start, "variable index too large")),
        }
    }
}
