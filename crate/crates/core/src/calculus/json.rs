//! JSON form of derivations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::syntax::{parse_expr, parse_formula, Alphabet};

use super::{Claim, Derivation, Hyp, Rel, Statement, Step, System, Tier, Verdict};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tier: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    props: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<RawClaim>,
    steps: Vec<RawStep>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    id: Value,
    claim: RawClaim,
    rule: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subst: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hyp: Option<RawHyp>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawHyp {
    fresh: Vec<String>,
    steps: Vec<RawStep>,
}

/// Why conversion stopped: the document itself is malformed, or one step's
/// claim does not parse (which is a rejection of that step).
enum Failure {
    Document(Error),
    Step(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Document(e)
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Document(Error::Proof(msg.into()))
}

fn id_text(v: &Value) -> std::result::Result<String, Failure> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(malformed(format!("step id must be a string or number, got {other}"))),
    }
}

fn statement(system: System, raw: &RawClaim, alphabet: &Alphabet) -> std::result::Result<Statement, String> {
    match system {
        System::Rll => {
            let (Some(rel), Some(lhs), Some(rhs), None) = (&raw.rel, &raw.lhs, &raw.rhs, &raw.formula) else {
                return Err("an equational claim needs `rel`, `lhs` and `rhs`".into());
            };
            let rel = match rel.as_str() {
                "eq" | "=" => Rel::Eq,
                "leq" | "<=" => Rel::Leq,
                other => return Err(format!("unknown relation `{other}`")),
            };
            let lhs = parse_expr(lhs, alphabet).map_err(|e| format!("lhs: {e}"))?;
            let rhs = parse_expr(rhs, alphabet).map_err(|e| format!("rhs: {e}"))?;
            Ok(Statement::Rll(Claim { rel, lhs, rhs }))
        }
        System::Multl => {
            let (None, None, None, Some(f)) = (&raw.rel, &raw.lhs, &raw.rhs, &raw.formula) else {
                return Err("a formula claim needs exactly `formula`".into());
            };
            parse_formula(f, alphabet).map(Statement::Multl).map_err(|e| e.to_string())
        }
    }
}

fn steps(system: System, raw: &[RawStep], alphabet: &Alphabet) -> std::result::Result<Vec<Step>, Failure> {
    raw.iter()
        .map(|r| {
            let id = id_text(&r.id)?;
            let claim = statement(system, &r.claim, alphabet).map_err(|m| Failure::Step(id.clone(), m))?;
            let premises = r.premises.iter().map(id_text).collect::<std::result::Result<_, _>>()?;
            let hyp = match &r.hyp {
                Some(h) => Some(Hyp { fresh: h.fresh.clone(), steps: steps(system, &h.steps, alphabet)? }),
                None => None,
            };
            Ok(Step { id, claim, rule: r.rule.clone(), subst: r.subst.clone(), premises, hyp })
        })
        .collect()
}

fn convert(text: &str) -> std::result::Result<Derivation, Failure> {
    let raw: RawDerivation =
        serde_json::from_str(text).map_err(|e| malformed(format!("line {}:{}: {e}", e.line(), e.column())))?;
    let system = match raw.system.as_str() {
        "rll" => System::Rll,
        "multl" => System::Multl,
        other => return Err(malformed(format!("unknown system `{other}`"))),
    };
    let tier = match raw.tier.as_deref() {
        None | Some("strict") => Tier::Strict,
        Some("extended") => Tier::Extended,
        Some(other) => return Err(malformed(format!("unknown tier `{other}`"))),
    };
    let alphabet = match (&raw.alphabet, &raw.props) {
        (Some(letters), None) => Alphabet::new(letters.iter().cloned())?,
        (None, Some(props)) => Alphabet::powerset(props.iter().cloned())?,
        _ => return Err(malformed("give exactly one of `alphabet` and `props`")),
    };
    if system == System::Multl && !alphabet.is_powerset() {
        return Err(Failure::Document(Error::NotPowerset));
    }
    let goal = match &raw.goal {
        Some(g) => Some(statement(system, g, &alphabet).map_err(|m| malformed(format!("goal: {m}")))?),
        None => None,
    };
    let steps = steps(system, &raw.steps, &alphabet)?;
    Ok(Derivation { system, tier, alphabet, goal, steps })
}

/// Reads a derivation from JSON. Any claim that fails to parse is an error.
pub fn parse_derivation(text: &str) -> Result<Derivation> {
    convert(text).map_err(|f| match f {
        Failure::Document(e) => e,
        Failure::Step(id, m) => Error::Proof(format!("step {id}: {m}")),
    })
}

/// Reads and checks a derivation. Malformed documents are errors; a claim
/// that does not parse rejects its step.
pub fn check_proof_text(text: &str) -> Result<Verdict> {
    match convert(text) {
        Ok(d) => Ok(d.check()),
        Err(Failure::Document(e)) => Err(e),
        Err(Failure::Step(id, m)) => Ok(Verdict::reject(&id, m)),
    }
}

fn raw_claim(s: &Statement, alphabet: &Alphabet) -> RawClaim {
    match s {
        Statement::Rll(c) => RawClaim {
            rel: Some(if c.rel == Rel::Eq { "eq" } else { "leq" }.into()),
            lhs: Some(c.lhs.to_text(alphabet)),
            rhs: Some(c.rhs.to_text(alphabet)),
            formula: None,
        },
        Statement::Multl(f) => RawClaim { rel: None, lhs: None, rhs: None, formula: Some(f.to_string()) },
    }
}

fn raw_id(id: &str) -> Value {
    match id.parse::<u64>() {
        Ok(n) if n.to_string() == id => Value::from(n),
        _ => Value::from(id),
    }
}

fn raw_steps(steps: &[Step], alphabet: &Alphabet) -> Vec<RawStep> {
    steps
        .iter()
        .map(|s| RawStep {
            id: raw_id(&s.id),
            claim: raw_claim(&s.claim, alphabet),
            rule: s.rule.clone(),
            subst: s.subst.clone(),
            premises: s.premises.iter().map(|p| raw_id(p)).collect(),
            hyp: s.hyp.as_ref().map(|h| RawHyp { fresh: h.fresh.clone(), steps: raw_steps(&h.steps, alphabet) }),
        })
        .collect()
}

pub(super) fn to_json(d: &Derivation) -> String {
    let (alphabet, props) = match d.alphabet.props() {
        Some(p) => (None, Some(p.to_vec())),
        None => (Some(d.alphabet.names().to_vec()), None),
    };
    let raw = RawDerivation {
        system: match d.system {
            System::Rll => "rll",
            System::Multl => "multl",
        }
        .into(),
        tier: Some(
            match d.tier {
                Tier::Strict => "strict",
                Tier::Extended => "extended",
            }
            .into(),
        ),
        alphabet,
        props,
        goal: d.goal.as_ref().map(|g| raw_claim(g, &d.alphabet)),
        steps: raw_steps(&d.steps, &d.alphabet),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}
