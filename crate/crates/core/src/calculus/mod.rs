//! The Bracket Calculus as an executable proof system.
//!
//! A [`Certificate`] is a derivation tree. Rules 3 and 4 carry their
//! ordering side conditions as embedded derivations, so [`check_derivation`]
//! needs no ordinal oracle. The deciders [`decide_le`] and [`decide_lt`]
//! answer through o* instead; the provers build certificates syntactically
//! and the tests play the two against each other.

mod json;
mod prover;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{BracketFormula, BracketWorm};
use crate::worm::o_star;

pub use json::CertificateFormatError;
pub use prover::{conj_to_worm, decide_closed_geq, derived_mono, prove_le, prove_lt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("no derivation exists: {0}")]
    NotProvable(String),
    #[error("formula contains propositional variables")]
    HasVariables,
    #[error("side derivation {index} does not conclude an ordering between worms")]
    SideMismatch { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    AxId,
    AxTop,
    AxConjL,
    AxConjR,
    RConjIntro,
    RCut,
    RMonoOuter,
    RMonoAbsorb,
    RNeg5,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::AxId,
        Rule::AxTop,
        Rule::AxConjL,
        Rule::AxConjR,
        Rule::RConjIntro,
        Rule::RCut,
        Rule::RMonoOuter,
        Rule::RMonoAbsorb,
        Rule::RNeg5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::AxId => "AxId",
            Rule::AxTop => "AxTop",
            Rule::AxConjL => "AxConjL",
            Rule::AxConjR => "AxConjR",
            Rule::RConjIntro => "RConjIntro",
            Rule::RCut => "RCut",
            Rule::RMonoOuter => "RMonoOuter",
            Rule::RMonoAbsorb => "RMonoAbsorb",
            Rule::RNeg5 => "RNeg5",
        }
    }

    fn premise_count(self) -> usize {
        match self {
            Rule::RConjIntro | Rule::RCut => 2,
            Rule::RMonoOuter | Rule::RMonoAbsorb => 1,
            _ => 0,
        }
    }

    fn needs_side(self) -> bool {
        matches!(self, Rule::RMonoOuter | Rule::RMonoAbsorb | Rule::RNeg5)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule '{s}'"))
    }
}

/// φ ⊢ ψ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: BracketFormula,
    pub rhs: BracketFormula,
}

impl Sequent {
    pub fn new(lhs: BracketFormula, rhs: BracketFormula) -> Self {
        Sequent { lhs, rhs }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Node {
    rule: Rule,
    conclusion: Sequent,
    premises: Vec<Certificate>,
    side: Option<Certificate>,
}

/// An immutable derivation tree. Subtrees may be shared.
#[derive(Clone)]
pub struct Certificate(Arc<Node>);

impl Certificate {
    /// Builds a node without checking it.
    pub fn new(
        rule: Rule,
        conclusion: Sequent,
        premises: Vec<Certificate>,
        side: Option<Certificate>,
    ) -> Self {
        Certificate(Arc::new(Node {
            rule,
            conclusion,
            premises,
            side,
        }))
    }

    pub fn rule(&self) -> Rule {
        self.0.rule
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.0.conclusion
    }

    pub fn premises(&self) -> &[Certificate] {
        &self.0.premises
    }

    pub fn side(&self) -> Option<&Certificate> {
        self.0.side.as_ref()
    }

    /// Every node of the tree in preorder, shared subtrees visited once.
    pub fn nodes(&self) -> Vec<Certificate> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&c.0)) {
                continue;
            }
            if let Some(s) = c.side() {
                stack.push(s.clone());
            }
            stack.extend(c.premises().iter().rev().cloned());
            out.push(c);
        }
        out
    }

    /// Number of nodes when shared subtrees are counted once per use.
    pub fn tree_size(&self) -> u64 {
        fn go(c: &Certificate) -> u64 {
            1 + c.premises().iter().map(go).sum::<u64>() + c.side().map_or(0, go)
        }
        go(self)
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.rule(), self.conclusion())
    }
}

/// Address of a node: `root`, then `premises/<i>` or `side` steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodePath(Vec<PathStep>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    Premise(usize),
    Side,
}

impl NodePath {
    pub fn steps(&self) -> &[PathStep] {
        &self.0
    }

    fn child(&self, step: PathStep) -> NodePath {
        let mut v = self.0.clone();
        v.push(step);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            match s {
                PathStep::Premise(i) => write!(f, "/premises/{i}")?,
                PathStep::Side => f.write_str("/side")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    Invalid { path: NodePath, reason: String },
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid)
    }
}

/// Verifies every node against its rule schema, reporting the first
/// failing node in preorder (node, then premises, then side).
pub fn check_derivation(c: &Certificate) -> CheckResult {
    let mut seen: HashSet<*const Node> = HashSet::new();
    let mut stack = vec![(c.clone(), NodePath::default())];
    while let Some((node, path)) = stack.pop() {
        // a shared subtree met again was already checked in full
        if !seen.insert(Arc::as_ptr(&node.0)) {
            continue;
        }
        if let Err(reason) = check_node(&node) {
            return CheckResult::Invalid { path, reason };
        }
        if let Some(s) = node.side() {
            stack.push((s.clone(), path.child(PathStep::Side)));
        }
        for (i, p) in node.premises().iter().enumerate().rev() {
            stack.push((p.clone(), path.child(PathStep::Premise(i))));
        }
    }
    CheckResult::Valid
}

fn check_node(c: &Certificate) -> Result<(), String> {
    let rule = c.rule();
    if c.premises().len() != rule.premise_count() {
        return Err(format!(
            "{rule} expects {} premises, found {}",
            rule.premise_count(),
            c.premises().len()
        ));
    }
    match (rule.needs_side(), c.side().is_some()) {
        (true, false) => return Err(format!("{rule} requires a side derivation")),
        (false, true) => return Err(format!("{rule} takes no side derivation")),
        _ => {}
    }
    let Sequent { lhs, rhs } = c.conclusion();
    let premise = |i: usize| c.premises()[i].conclusion();
    match rule {
        Rule::AxId => ensure(lhs == rhs, "conclusion is not of the form φ ⊢ φ"),
        Rule::AxTop => ensure(
            *rhs == BracketFormula::Top,
            "conclusion is not of the form φ ⊢ T",
        ),
        Rule::AxConjL | Rule::AxConjR => match lhs {
            BracketFormula::Conj(l, r) => {
                let picked = if rule == Rule::AxConjL { l } else { r };
                ensure(
                    **picked == *rhs,
                    "conclusion is not a conjunct of the left side",
                )
            }
            _ => Err("left side is not a conjunction".into()),
        },
        Rule::RConjIntro => {
            let (p, q) = (premise(0), premise(1));
            ensure(
                p.lhs == *lhs && q.lhs == *lhs,
                "premise left sides differ from the conclusion",
            )?;
            match rhs {
                BracketFormula::Conj(l, r) if **l == p.rhs && **r == q.rhs => Ok(()),
                _ => Err("right side is not the conjunction of the premise right sides".into()),
            }
        }
        Rule::RCut => {
            let (p, q) = (premise(0), premise(1));
            ensure(
                p.lhs == *lhs,
                "first premise left side differs from the conclusion",
            )?;
            ensure(p.rhs == q.lhs, "cut formulas differ")?;
            ensure(
                q.rhs == *rhs,
                "second premise right side differs from the conclusion",
            )
        }
        Rule::RMonoOuter => {
            let (BracketFormula::Diamond(a, phi), BracketFormula::Diamond(b, psi)) = (lhs, rhs)
            else {
                return Err("conclusion is not of the form (a)φ ⊢ (b)ψ".into());
            };
            let p = premise(0);
            ensure(
                p.lhs == **phi && p.rhs == **psi,
                "premise does not match the conclusion",
            )?;
            check_le_side(c.side().expect("checked above").conclusion(), a, b)
        }
        Rule::RMonoAbsorb => {
            let (BracketFormula::Diamond(a, inner), BracketFormula::Diamond(b, psi)) = (lhs, rhs)
            else {
                return Err("conclusion is not of the form (a)(b)φ ⊢ (b)ψ".into());
            };
            let BracketFormula::Diamond(b_inner, phi) = &**inner else {
                return Err("conclusion is not of the form (a)(b)φ ⊢ (b)ψ".into());
            };
            ensure(b_inner == b, "inner label differs from the right label")?;
            let p = premise(0);
            ensure(
                p.lhs == **phi && p.rhs == **psi,
                "premise does not match the conclusion",
            )?;
            check_le_side(c.side().expect("checked above").conclusion(), a, b)
        }
        Rule::RNeg5 => {
            let BracketFormula::Conj(l, r) = lhs else {
                return Err("left side is not of the form (a)φ & (b)ψ".into());
            };
            let (BracketFormula::Diamond(a, phi), BracketFormula::Diamond(b, psi)) = (&**l, &**r)
            else {
                return Err("left side is not of the form (a)φ & (b)ψ".into());
            };
            let expected = BracketFormula::diamond(
                a.clone(),
                BracketFormula::conj(
                    (**phi).clone(),
                    BracketFormula::diamond(b.clone(), (**psi).clone()),
                ),
            );
            ensure(*rhs == expected, "right side is not (a)[φ & (b)ψ]")?;
            let side = c.side().expect("checked above").conclusion();
            ensure(
                side.lhs.as_worm().as_ref() == Some(a),
                "side derivation does not start from the outer label",
            )?;
            if side.rhs == strict_form(b) {
                Ok(())
            } else if side.rhs.as_worm().as_ref() == Some(b) {
                Err("side condition must be strict".into())
            } else {
                Err("side derivation does not conclude a |- ()b".into())
            }
        }
    }
}

fn ensure(cond: bool, reason: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason.to_string())
    }
}

/// `()b` as a formula.
fn strict_form(b: &BracketWorm) -> BracketFormula {
    BracketFormula::diamond(BracketWorm::top(), b.to_formula())
}

fn check_le_side(side: &Sequent, a: &BracketWorm, b: &BracketWorm) -> Result<(), String> {
    ensure(
        side.lhs.as_worm().as_ref() == Some(a),
        "side derivation does not start from the outer label",
    )?;
    ensure(
        side.rhs == strict_form(b) || side.rhs.as_worm().as_ref() == Some(b),
        "side derivation does not conclude a |- ()b or a |- b",
    )
}

/// b ⊴ a, decided through o*.
pub fn decide_le(a: &BracketWorm, b: &BracketWorm) -> bool {
    o_star(b) <= o_star(a)
}

/// b ◁ a, decided through o*.
pub fn decide_lt(a: &BracketWorm, b: &BracketWorm) -> bool {
    o_star(b) < o_star(a)
}
