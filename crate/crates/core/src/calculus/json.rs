//! Certificate JSON: `{"rule", "conclusion": {"lhs", "rhs"}, "premises", "side"}`
//! with formulas in canonical text.

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_formula, print_formula, ParseError};

use super::{Certificate, Rule, Sequent};

#[derive(Debug, Error)]
pub enum CertificateFormatError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
    #[error("bad formula '{text}': {source}")]
    Formula { text: String, source: ParseError },
}

struct WireSequent<'a>(&'a Sequent);

impl Serialize for WireSequent<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Sequent", 2)?;
        st.serialize_field("lhs", &print_formula(&self.0.lhs))?;
        st.serialize_field("rhs", &print_formula(&self.0.rhs))?;
        st.end()
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Certificate", 4)?;
        st.serialize_field("rule", self.rule().as_str())?;
        st.serialize_field("conclusion", &WireSequent(self.conclusion()))?;
        st.serialize_field("premises", self.premises())?;
        st.serialize_field("side", &self.side())?;
        st.end()
    }
}

#[derive(Deserialize)]
struct InSequent {
    lhs: String,
    rhs: String,
}

#[derive(Deserialize)]
struct InNode {
    rule: String,
    conclusion: InSequent,
    premises: Vec<InNode>,
    side: Option<Box<InNode>>,
}

fn formula(text: &str) -> Result<crate::syntax::BracketFormula, CertificateFormatError> {
    parse_formula(text).map_err(|source| CertificateFormatError::Formula {
        text: text.to_string(),
        source,
    })
}

fn build(n: InNode) -> Result<Certificate, CertificateFormatError> {
    let rule: Rule = n
        .rule
        .parse()
        .map_err(|_| CertificateFormatError::UnknownRule(n.rule.clone()))?;
    let conclusion = Sequent::new(formula(&n.conclusion.lhs)?, formula(&n.conclusion.rhs)?);
    let premises = n
        .premises
        .into_iter()
        .map(build)
        .collect::<Result<Vec<_>, _>>()?;
    let side = n.side.map(|s| build(*s)).transpose()?;
    Ok(Certificate::new(rule, conclusion, premises, side))
}

impl Certificate {
    /// Pretty-printed JSON, stable for golden files.
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::pretty(&mut out);
        self.serialize(&mut ser)
            .expect("writing to memory cannot fail");
        String::from_utf8(out).expect("serde_json emits UTF-8")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertificateFormatError> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let node = InNode::deserialize(&mut de)?;
        de.end()?;
        build(node)
    }
}
