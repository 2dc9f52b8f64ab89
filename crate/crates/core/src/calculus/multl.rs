//! Checker for Hilbert-style derivations of formulas.

use std::collections::HashMap;

use crate::syntax::Formula;

use super::boolean::propositional_taut;
use super::{Derivation, Statement, Step, Verdict};

type Check<T = ()> = Result<T, String>;

pub(super) fn check(d: &Derivation) -> Verdict {
    let mut known: HashMap<&str, &Formula> = HashMap::new();
    if d.steps.is_empty() {
        return Verdict::reject("-", "derivation has no steps");
    }
    for step in &d.steps {
        let result = (|| {
            if known.contains_key(step.id.as_str()) {
                return Err(format!("duplicate step id `{}`", step.id));
            }
            let Statement::Multl(phi) = &step.claim else {
                return Err("claim is not a formula".into());
            };
            need(phi.is_closed(), || "claim has free variables".into())?;
            need(step.hyp.is_none(), || format!("rule `{}` takes no hypothetical block", step.rule))?;
            need(step.subst.is_empty(), || format!("malformed substitution: rule `{}` takes none", step.rule))?;
            let premises = step
                .premises
                .iter()
                .map(|p| known.get(p.as_str()).copied().ok_or_else(|| format!("premise `{p}` is not an earlier step")))
                .collect::<Check<Vec<_>>>()?;
            rule(step, phi, &premises)?;
            Ok(phi)
        })();
        match result {
            Ok(phi) => {
                known.insert(&step.id, phi);
            }
            Err(reason) => return Verdict::reject(&step.id, reason),
        }
    }
    let last = d.steps.last().expect("nonempty");
    if let Some(goal) = &d.goal {
        if !goal.alpha_eq(&last.claim) {
            return Verdict::reject(&last.id, "final claim does not match the goal");
        }
    }
    Verdict::Accepted { assumptions: Vec::new() }
}

fn need(ok: bool, reason: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(reason())
    }
}

fn rule(step: &Step, phi: &Formula, premises: &[&Formula]) -> Check {
    let r = step.rule.as_str();
    let arity = match r {
        "taut" | "next_or" | "next_and" | "mu_prefix" | "nu_postfix" => 0,
        "nec" | "mu_ind" | "nu_coind" => 1,
        "mp" => 2,
        _ => return Err(format!("unknown rule `{r}`")),
    };
    need(premises.len() == arity, || format!("rule `{r}` takes {arity} premise(s), got {}", premises.len()))?;
    let show = |f: &Formula| f.to_string();
    match r {
        "taut" => {
            let ok = propositional_taut(phi).map_err(|e| e.to_string())?;
            need(ok, || "not a propositional tautology".into())
        }
        "next_or" | "next_and" => {
            let ok = match phi {
                Formula::And(l, r) => match (implication(l), implication(r)) {
                    (Some((a, b)), Some((c, d))) => {
                        a.alpha_eq(d) && b.alpha_eq(&c) && distributes(step.rule == "next_or", &a, b)
                    }
                    _ => false,
                },
                _ => false,
            } || implication(phi).is_some_and(|(a, b)| distributes(step.rule == "next_or", &a, b));
            need(ok, || format!("claim is not an instance of `{}`", step.rule))
        }
        "mu_prefix" => {
            let (a, m) = implication(phi).ok_or("claim must be an implication")?;
            need(matches!(m, Formula::Mu(..)), || "conclusion must be a `mu` formula".into())?;
            need(a.alpha_eq(&unfold(m)), || format!("antecedent must be `{}`", show(&unfold(m))))
        }
        "nu_postfix" => {
            let (n, b) = implication(phi).ok_or("claim must be an implication")?;
            need(matches!(n, Formula::Nu(..)), || "antecedent must be a `nu` formula".into())?;
            need(b.alpha_eq(&unfold(&n)), || format!("conclusion must be `{}`", show(&unfold(&n))))
        }
        "mp" => {
            let ok = [(premises[0], premises[1]), (premises[1], premises[0])]
                .into_iter()
                .any(|(p, imp)| implication(imp).is_some_and(|(a, b)| a.alpha_eq(p) && b.alpha_eq(phi)));
            need(ok, || "premises are not `A` and `A -> claim`".into())
        }
        "nec" => {
            let ok = matches!(phi, Formula::Next(f) if f.alpha_eq(premises[0]));
            need(ok, || "claim is not `O` applied to the premise".into())
        }
        "mu_ind" => {
            let (m, psi) = implication(phi).ok_or("claim must be an implication")?;
            let Formula::Mu(x, body) = &m else {
                return Err("antecedent must be a `mu` formula".into());
            };
            let want = Formula::implies(&body.substitute(x, psi), psi.clone());
            need(premises[0].alpha_eq(&want), || format!("premise must be `{}`", show(&want)))
        }
        "nu_coind" => {
            let (psi, n) = implication(phi).ok_or("claim must be an implication")?;
            let Formula::Nu(x, body) = n else {
                return Err("conclusion must be a `nu` formula".into());
            };
            let want = Formula::implies(&psi, body.substitute(x, &psi));
            need(premises[0].alpha_eq(&want), || format!("premise must be `{}`", show(&want)))
        }
        _ => unreachable!(),
    }
}

fn implication(phi: &Formula) -> Option<(Formula, &Formula)> {
    phi.as_implication()
}

fn unfold(f: &Formula) -> Formula {
    match f {
        Formula::Mu(x, b) | Formula::Nu(x, b) => b.substitute(x, f),
        _ => f.clone(),
    }
}

/// Whether `a -> b` is `O(p * q) -> Op * Oq` or its converse, where `*` is
/// disjunction (`or`) or conjunction.
fn distributes(or: bool, a: &Formula, b: &Formula) -> bool {
    let split = |f: &Formula| -> Option<(Formula, Formula)> {
        match (or, f) {
            (true, Formula::Or(l, r)) | (false, Formula::And(l, r)) => Some(((**l).clone(), (**r).clone())),
            _ => None,
        }
    };
    let join = |l: Formula, r: Formula| if or { Formula::or(l, r) } else { Formula::and(l, r) };
    let one_way = |inner: &Formula, outer: &Formula| -> bool {
        let Formula::Next(body) = inner else { return false };
        let Some((p, q)) = split(body) else { return false };
        outer.alpha_eq(&join(Formula::next(p), Formula::next(q)))
    };
    one_way(a, b) || one_way(b, a)
}
