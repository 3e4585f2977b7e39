//! JSON form of derivation trees.
//!
//! ```json
//! {"rule": "var'",
//!  "conclusion": {"ctx": [["nat", "*"], ["z", "nat"]], "term": "z", "type": "nat"},
//!  "side": {"sort": "*"},
//!  "premises": [ ... ]}
//! ```
//!
//! Terms are printed in surface syntax. Fields always appear in this order;
//! absent side data is omitted. Shared sub-derivations are written out in
//! full at every use.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DerivationTree, Judgement, RuleName, Side};
use crate::context::{Context, Declaration};
use crate::spec::PtsSpec;
use crate::syntax::{ParseError, Syntax};
use crate::term::Term;

#[derive(Serialize, Deserialize)]
struct Node {
    rule: String,
    conclusion: Conclusion,
    side: SideJson,
    premises: Vec<Node>,
}

#[derive(Serialize, Deserialize)]
struct Conclusion {
    ctx: Vec<(String, String)>,
    term: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Default, Serialize, Deserialize)]
struct SideJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axiom: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule: Option<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sort: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conversion: Option<(String, String)>,
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed derivation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("in `{src}`: {error}")]
    Term { src: String, error: Box<ParseError> },
    #[error("{0}")]
    Context(#[from] crate::context::ContextError),
}

fn encode(tree: &DerivationTree) -> Node {
    let c = &tree.conclusion;
    Node {
        rule: tree.rule.label().to_string(),
        conclusion: Conclusion {
            ctx: c.ctx.iter().map(|d| (d.var.clone(), d.ty.to_string())).collect(),
            term: c.subject.to_string(),
            ty: c.ty.to_string(),
        },
        side: SideJson {
            axiom: tree.side.axiom.clone(),
            rule: tree.side.rule.clone(),
            sort: tree.side.sort.clone(),
            conversion: tree.side.conversion.as_ref().map(|(a, b)| (a.to_string(), b.to_string())),
        },
        premises: tree.premises.iter().map(|p| encode(p)).collect(),
    }
}

pub fn to_json(tree: &DerivationTree) -> String {
    serde_json::to_string_pretty(&encode(tree)).expect("derivations always serialize")
}

pub fn to_value(tree: &DerivationTree) -> serde_json::Value {
    serde_json::to_value(encode(tree)).expect("derivations always serialize")
}

/// Reads a derivation back; sorts are recognised from `spec`.
pub fn from_json(src: &str, spec: &PtsSpec) -> Result<DerivationTree, JsonError> {
    let node: Node = serde_json::from_str(src)?;
    decode(&node, &Syntax::for_spec(spec))
}

fn term(syntax: &Syntax, src: &str) -> Result<Term, JsonError> {
    syntax.term(src).map_err(|error| JsonError::Term {
        src: src.to_string(),
        error: Box::new(error),
    })
}

fn decode(node: &Node, syntax: &Syntax) -> Result<DerivationTree, JsonError> {
    let rule = RuleName::from_label(&node.rule).ok_or_else(|| JsonError::UnknownRule(node.rule.clone()))?;
    let decls = node
        .conclusion
        .ctx
        .iter()
        .map(|(x, a)| Ok(Declaration::new(x, term(syntax, a)?)))
        .collect::<Result<Vec<_>, JsonError>>()?;
    let conclusion = Judgement::new(
        Context::from_decls(decls)?,
        term(syntax, &node.conclusion.term)?,
        term(syntax, &node.conclusion.ty)?,
    );
    let conversion = match &node.side.conversion {
        Some((a, b)) => Some((term(syntax, a)?, term(syntax, b)?)),
        None => None,
    };
    let side = Side {
        axiom: node.side.axiom.clone(),
        rule: node.side.rule.clone(),
        sort: node.side.sort.clone(),
        conversion,
    };
    let premises = node
        .premises
        .iter()
        .map(|p| decode(p, syntax).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DerivationTree::new(rule, conclusion, side, premises))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Kernel, System};
    use crate::spec::builtin;
    use crate::syntax::{parse_context, parse_term};

    #[test]
    fn shape_and_round_trip() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("nat : *, z : nat").unwrap();
        let (_, d) = k.infer_tprime(&g, &parse_term("z").unwrap()).unwrap();
        let json = to_json(&d);
        let keys: Vec<usize> = ["\"rule\"", "\"conclusion\"", "\"side\"", "\"premises\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let v = to_value(&d);
        assert_eq!(v["rule"], "var'");
        assert_eq!(v["conclusion"]["ctx"][1][0], "z");
        assert_eq!(v["conclusion"]["type"], "nat");
        assert_eq!(v["side"]["sort"], "*");
        assert!(v["side"].get("axiom").is_none());

        let back = from_json(&json, &coc).unwrap();
        assert_eq!(back, d);
        k.validate_derivation(&back, System::TPrime).unwrap();
    }

    #[test]
    fn unknown_rule() {
        let coc = builtin("coc").unwrap();
        let src = r#"{"rule":"magic","conclusion":{"ctx":[],"term":"*","type":"BOX"},"side":{},"premises":[]}"#;
        assert!(matches!(from_json(src, &coc), Err(JsonError::UnknownRule(_))));
    }
}
