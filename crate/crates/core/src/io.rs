//! JSON and DOT serialization of proofs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cyclic::{CNode, CyclicProof};
use crate::formula::{parse_with, Formula, FormulaError};
use crate::proof::Proof;
use crate::rules::{CalculusId, ModalData, RuleApp};
use crate::sequent::{Multiset, Sequent, Side};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula in JSON: {0}")]
    Formula(#[from] FormulaError),
    #[error("malformed proof document: {0}")]
    Structure(String),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonSequent {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonRule {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonNode {
    pub id: usize,
    pub sequent: JsonSequent,
    pub rule: JsonRule,
    pub children: Vec<usize>,
    pub backlink: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct JsonProof {
    pub calculus: String,
    pub nodes: Vec<JsonNode>,
}

fn fstr(f: &Formula) -> Value {
    Value::String(f.print(true))
}

fn mstr(m: &Multiset) -> Value {
    Value::Array(m.iter().map(fstr).collect())
}

pub fn sequent_to_json(s: &Sequent) -> JsonSequent {
    JsonSequent {
        left: s.left.iter().map(|f| f.print(true)).collect(),
        right: s.right.iter().map(|f| f.print(true)).collect(),
    }
}

pub fn sequent_from_json(s: &JsonSequent) -> Result<Sequent, IoError> {
    let side = |v: &[String]| -> Result<Vec<Formula>, IoError> {
        v.iter().map(|t| parse_with(t, true).map_err(IoError::from)).collect()
    };
    Ok(Sequent::from_vecs(side(&s.left)?, side(&s.right)?))
}

pub fn rule_to_json(r: Option<&RuleApp>) -> JsonRule {
    let Some(r) = r else {
        return JsonRule {
            name: "Assumption".into(),
            params: json!({}),
        };
    };
    let params = match r {
        RuleApp::Ax { atom } => json!({ "atom": fstr(atom) }),
        RuleApp::ImpL { left, right } | RuleApp::ImpR { left, right } => {
            json!({ "left": fstr(left), "right": fstr(right) })
        }
        RuleApp::InterpIL(d) | RuleApp::InterpIK4(d) | RuleApp::InterpIK4Slim(d) => json!({
            "ordering": d.ordering.iter().map(|(a, b)| json!([fstr(a), fstr(b)])).collect::<Vec<_>>(),
            "principal": [fstr(&d.principal.0), fstr(&d.principal.1)],
            "weak_left": mstr(&d.weak_left),
            "weak_right": mstr(&d.weak_right),
        }),
        RuleApp::Cut { formula } => json!({ "formula": fstr(formula) }),
        RuleApp::Wk { add_left, add_right } => json!({ "add_left": mstr(add_left), "add_right": mstr(add_right) }),
        RuleApp::Ctr { dup_left, dup_right } => json!({ "dup_left": mstr(dup_left), "dup_right": mstr(dup_right) }),
        RuleApp::Equiv {
            from,
            to,
            side,
            certificate,
        } => json!({
            "from": fstr(from),
            "to": fstr(to),
            "side": match side { Side::Left => "left", Side::Right => "right" },
            "certificate": certificate.as_ref().map(|c| serde_json::to_value(cyclic_to_json(c)).expect("serializable")),
        }),
        RuleApp::BotL | RuleApp::BotR | RuleApp::Empty | RuleApp::Repeat => json!({}),
    };
    JsonRule {
        name: r.name().into(),
        params,
    }
}

fn get<'a>(params: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    params
        .get(key)
        .ok_or_else(|| IoError::Structure(format!("missing parameter `{key}`")))
}

fn pformula(params: &Value, key: &str) -> Result<Formula, IoError> {
    formula_value(get(params, key)?)
}

fn formula_value(v: &Value) -> Result<Formula, IoError> {
    let s = v
        .as_str()
        .ok_or_else(|| IoError::Structure(format!("expected a formula string, found {v}")))?;
    Ok(parse_with(s, true)?)
}

fn pmulti(params: &Value, key: &str) -> Result<Multiset, IoError> {
    let arr = get(params, key)?
        .as_array()
        .ok_or_else(|| IoError::Structure(format!("`{key}` is not an array")))?;
    Ok(Multiset::from_vec(arr.iter().map(formula_value).collect::<Result<_, _>>()?))
}

fn ppair(v: &Value) -> Result<(Formula, Formula), IoError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((formula_value(a)?, formula_value(b)?)),
        _ => Err(IoError::Structure(format!("expected a pair, found {v}"))),
    }
}

/// None for assumption leaves.
pub fn rule_from_json(r: &JsonRule) -> Result<Option<RuleApp>, IoError> {
    let p = &r.params;
    let rule = match r.name.as_str() {
        "Assumption" => return Ok(None),
        "Ax" => RuleApp::Ax {
            atom: pformula(p, "atom")?,
        },
        "BotL" => RuleApp::BotL,
        "BotR" => RuleApp::BotR,
        "Empty" => RuleApp::Empty,
        "Repeat" => RuleApp::Repeat,
        "ImpL" => RuleApp::ImpL {
            left: pformula(p, "left")?,
            right: pformula(p, "right")?,
        },
        "ImpR" => RuleApp::ImpR {
            left: pformula(p, "left")?,
            right: pformula(p, "right")?,
        },
        "InterpIL" | "InterpIK4" | "InterpIK4Slim" => {
            let ordering = get(p, "ordering")?
                .as_array()
                .ok_or_else(|| IoError::Structure("`ordering` is not an array".into()))?
                .iter()
                .map(ppair)
                .collect::<Result<Vec<_>, _>>()?;
            let d = ModalData {
                ordering,
                principal: ppair(get(p, "principal")?)?,
                weak_left: pmulti(p, "weak_left")?,
                weak_right: pmulti(p, "weak_right")?,
            };
            match r.name.as_str() {
                "InterpIL" => RuleApp::InterpIL(d),
                "InterpIK4" => RuleApp::InterpIK4(d),
                _ => RuleApp::InterpIK4Slim(d),
            }
        }
        "Cut" => RuleApp::Cut {
            formula: pformula(p, "formula")?,
        },
        "Wk" => RuleApp::Wk {
            add_left: pmulti(p, "add_left")?,
            add_right: pmulti(p, "add_right")?,
        },
        "Ctr" => RuleApp::Ctr {
            dup_left: pmulti(p, "dup_left")?,
            dup_right: pmulti(p, "dup_right")?,
        },
        "Equiv" => {
            let side = match get(p, "side")?.as_str() {
                Some("left") => Side::Left,
                Some("right") => Side::Right,
                _ => return Err(IoError::Structure("`side` must be left or right".into())),
            };
            let certificate = match p.get("certificate") {
                None | Some(Value::Null) => None,
                Some(v) => {
                    let jp: JsonProof = serde_json::from_value(v.clone())?;
                    Some(Arc::new(cyclic_from_json(&jp)?))
                }
            };
            RuleApp::Equiv {
                from: pformula(p, "from")?,
                to: pformula(p, "to")?,
                side,
                certificate,
            }
        }
        other => return Err(IoError::Structure(format!("unknown rule `{other}`"))),
    };
    Ok(Some(rule))
}

/// Nodes in preorder, ids equal to positions.
pub fn proof_to_json(p: &Proof, calculus: CalculusId) -> JsonProof {
    fn go(p: &Proof, nodes: &mut Vec<JsonNode>) -> usize {
        let id = nodes.len();
        nodes.push(JsonNode {
            id,
            sequent: sequent_to_json(&p.sequent),
            rule: rule_to_json(p.rule.as_ref()),
            children: vec![],
            backlink: None,
        });
        let kids = p.children.iter().map(|c| go(c, nodes)).collect();
        nodes[id].children = kids;
        id
    }
    let mut nodes = Vec::new();
    go(p, &mut nodes);
    JsonProof {
        calculus: calculus.name().into(),
        nodes,
    }
}

fn index_nodes(doc: &JsonProof) -> Result<Vec<&JsonNode>, IoError> {
    if doc.nodes.is_empty() {
        return Err(IoError::Structure("no nodes".into()));
    }
    let mut by_id: Vec<Option<&JsonNode>> = vec![None; doc.nodes.len()];
    for n in &doc.nodes {
        if n.id >= by_id.len() || by_id[n.id].is_some() {
            return Err(IoError::Structure(format!("node ids must be 0..{} without gaps", doc.nodes.len())));
        }
        by_id[n.id] = Some(n);
    }
    Ok(by_id.into_iter().map(|n| n.expect("filled")).collect())
}

pub fn calculus_of(doc: &JsonProof) -> Result<CalculusId, IoError> {
    CalculusId::from_name(&doc.calculus).ok_or_else(|| IoError::Structure(format!("unknown calculus `{}`", doc.calculus)))
}

/// Reads a tree document; backlinks are rejected.
pub fn proof_from_json(doc: &JsonProof) -> Result<(Proof, CalculusId), IoError> {
    let nodes = index_nodes(doc)?;
    let calc = calculus_of(doc)?;
    fn go(nodes: &[&JsonNode], id: usize, depth: usize) -> Result<Proof, IoError> {
        if depth > nodes.len() {
            return Err(IoError::Structure("children form a cycle".into()));
        }
        let n = nodes
            .get(id)
            .ok_or_else(|| IoError::Structure(format!("child {id} out of range")))?;
        if n.backlink.is_some() {
            return Err(IoError::Structure("backlink in a wellfounded proof".into()));
        }
        Ok(Proof {
            sequent: sequent_from_json(&n.sequent)?,
            rule: rule_from_json(&n.rule)?,
            children: n
                .children
                .iter()
                .map(|&c| go(nodes, c, depth + 1))
                .collect::<Result<_, _>>()?,
        })
    }
    Ok((go(&nodes, 0, 0)?, calc))
}

pub fn cyclic_to_json(p: &CyclicProof) -> JsonProof {
    JsonProof {
        calculus: p.calculus.name().into(),
        nodes: p
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| JsonNode {
                id,
                sequent: sequent_to_json(&n.sequent),
                rule: rule_to_json(Some(&n.rule)),
                children: n.children.clone(),
                backlink: n.backlink,
            })
            .collect(),
    }
}

pub fn cyclic_from_json(doc: &JsonProof) -> Result<CyclicProof, IoError> {
    let nodes = index_nodes(doc)?;
    let calculus = calculus_of(doc)?;
    let nodes = nodes
        .iter()
        .map(|n| {
            Ok(CNode {
                sequent: sequent_from_json(&n.sequent)?,
                rule: rule_from_json(&n.rule)?
                    .ok_or_else(|| IoError::Structure("assumption in a cyclic proof".into()))?,
                children: n.children.clone(),
                backlink: n.backlink,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(CyclicProof { calculus, nodes })
}

pub fn to_pretty(doc: &JsonProof) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<JsonProof, IoError> {
    Ok(serde_json::from_str(text)?)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per sequent, dashed edges for backlinks.
pub fn to_dot(doc: &JsonProof) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in &doc.nodes {
        let seq = format!("{} => {}", n.sequent.left.join(", "), n.sequent.right.join(", "));
        out.push_str(&format!(
            "  n{} [label=\"{}\\n[{}]\"];\n",
            n.id,
            dot_escape(seq.trim()),
            dot_escape(&n.rule.name)
        ));
    }
    for n in &doc.nodes {
        for c in &n.children {
            out.push_str(&format!("  n{} -> n{};\n", c, n.id));
        }
        if let Some(t) = n.backlink {
            out.push_str(&format!("  n{} -> n{} [style=dashed];\n", n.id, t));
        }
    }
    out.push_str("}\n");
    out
}
