//! Checker for derivations in the equational calculus.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{parse_expr, Alphabet, Expr, Letter};

use super::boolean::{bool_taut, lattice_taut};
use super::{Claim, Derivation, Hyp, Rel, Statement, Step, Tier, Verdict};

type Check<T = ()> = Result<T, String>;

#[derive(Debug, Clone)]
struct Known {
    claim: Claim,
    /// Ids of the assumptions this step depends on.
    deps: BTreeSet<String>,
}

struct Checker<'d> {
    alphabet: &'d Alphabet,
    tier: Tier,
    scopes: Vec<HashMap<String, Known>>,
    /// Assumptions in scope, innermost last.
    assumptions: Vec<(String, Claim)>,
    seen: BTreeSet<String>,
}

pub(super) fn check(d: &Derivation) -> Verdict {
    let mut c = Checker {
        alphabet: &d.alphabet,
        tier: d.tier,
        scopes: vec![HashMap::new()],
        assumptions: Vec::new(),
        seen: BTreeSet::new(),
    };
    if d.steps.is_empty() {
        return Verdict::reject("-", "derivation has no steps");
    }
    for step in &d.steps {
        if let Err(reason) = c.step(step, false) {
            return Verdict::reject(&step.id, reason);
        }
    }
    let last = d.steps.last().expect("nonempty");
    let known = &c.scopes[0][&last.id];
    if let Some(goal) = &d.goal {
        let Statement::Rll(goal) = goal else {
            return Verdict::reject(&last.id, "goal is not an equation");
        };
        if !known.claim.alpha_eq(goal) {
            return Verdict::reject(
                &last.id,
                format!("final claim does not match the goal `{}`", goal.to_text(c.alphabet)),
            );
        }
    }
    Verdict::Accepted { assumptions: known.deps.iter().cloned().collect() }
}

fn same(a: &Expr, b: &Expr) -> bool {
    a.alpha_eq(b)
}

fn need(ok: bool, reason: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(reason())
    }
}

impl<'d> Checker<'d> {
    fn show(&self, e: &Expr) -> String {
        e.display(self.alphabet).to_string()
    }

    fn show_claim(&self, c: &Claim) -> String {
        c.to_text(self.alphabet)
    }

    fn lookup(&self, id: &str) -> Option<&Known> {
        self.scopes.iter().rev().find_map(|s| s.get(id))
    }

    fn premises(&self, step: &Step, count: Option<usize>) -> Check<Vec<Known>> {
        if let Some(n) = count {
            need(step.premises.len() == n, || {
                format!("rule `{}` takes {n} premise(s), got {}", step.rule, step.premises.len())
            })?;
        }
        step.premises
            .iter()
            .map(|p| self.lookup(p).cloned().ok_or_else(|| format!("premise `{p}` is not an earlier step in scope")))
            .collect()
    }

    fn step(&mut self, step: &Step, first_in_hyp: bool) -> Check {
        need(self.seen.insert(step.id.clone()), || format!("duplicate step id `{}`", step.id))?;
        let Statement::Rll(claim) = &step.claim else {
            return Err("claim is not an equation".into());
        };
        if step.hyp.is_some() && !matches!(step.rule.as_str(), "dual_join" | "dual_meet") {
            return Err(format!("rule `{}` takes no hypothetical block", step.rule));
        }
        let deps = match step.rule.as_str() {
            "assume" => {
                need(self.scopes.len() == 1 || first_in_hyp, || {
                    "inside a hypothetical block only the first step may be an assumption".into()
                })?;
                self.premises(step, Some(0))?;
                self.no_subst(step)?;
                self.assumptions.push((step.id.clone(), claim.clone()));
                BTreeSet::from([step.id.clone()])
            }
            "dual_join" | "dual_meet" => self.duality(step, claim)?,
            _ => {
                let premises = self.premises(step, None)?;
                self.rule(step, claim, &premises)?;
                premises.iter().flat_map(|p| p.deps.iter().cloned()).collect()
            }
        };
        self.scopes.last_mut().expect("scope").insert(step.id.clone(), Known { claim: claim.clone(), deps });
        Ok(())
    }

    fn no_subst(&self, step: &Step) -> Check {
        need(step.subst.is_empty(), || format!("malformed substitution: rule `{}` takes none", step.rule))
    }

    fn rule(&self, step: &Step, claim: &Claim, premises: &[Known]) -> Check {
        let rule = step.rule.as_str();
        let count = |n: usize| {
            need(premises.len() == n, || format!("rule `{rule}` takes {n} premise(s), got {}", premises.len()))
        };
        match rule {
            "refl" => {
                count(0)?;
                self.no_subst(step)?;
                need(same(&claim.lhs, &claim.rhs), || "sides differ".into())
            }
            "sym" => {
                count(1)?;
                self.no_subst(step)?;
                let (a, b) = premises[0].claim.as_eq();
                let (l, r) = claim.as_eq();
                need(same(&l, &b) && same(&r, &a), || "claim is not the premise reversed".into())
            }
            "trans" => {
                count(2)?;
                self.no_subst(step)?;
                self.trans(claim, &premises[0].claim, &premises[1].claim)
            }
            "weaken" => {
                count(1)?;
                self.no_subst(step)?;
                let p = &premises[0].claim;
                need(p.rel == Rel::Eq, || "premise must be an equation".into())?;
                let ok = claim.as_leq().is_some_and(|(l, r)| same(&l, &p.lhs) && same(&r, &p.rhs));
                need(ok, || "claim is not the premise weakened to `<=`".into())
            }
            "antisym" => {
                count(2)?;
                self.no_subst(step)?;
                need(claim.rel == Rel::Eq, || "claim must be an equation".into())?;
                let (a, b) = (&claim.lhs, &claim.rhs);
                let p = premises[0].claim.as_leq();
                let q = premises[1].claim.as_leq();
                let ok = matches!((p, q), (Some((p1, p2)), Some((q1, q2)))
                    if same(&p1, a) && same(&p2, b) && same(&q1, b) && same(&q2, a));
                need(ok, || "premises must be `lhs <= rhs` and `rhs <= lhs`".into())
            }
            "cong" | "mono" => {
                count(1)?;
                self.no_subst(step)?;
                self.congruence(rule == "mono", claim, &premises[0])
            }
            "prefix" | "postfix" => {
                count(0)?;
                self.no_subst(step)?;
                self.fixpoint_axiom(rule == "prefix", claim)
            }
            "induction" | "coinduction" => {
                count(1)?;
                self.no_subst(step)?;
                self.induction(rule == "induction", claim, &premises[0].claim)
            }
            "top_partition" => {
                count(0)?;
                self.no_subst(step)?;
                let sum = Expr::sum_all(self.alphabet.letters().map(|a| Expr::act(a, Expr::Top))).expect("nonempty");
                let (l, r) = claim.as_eq();
                need((l == Expr::Top && same(&r, &sum)) || (r == Expr::Top && same(&l, &sum)), || {
                    format!("claim is not `top = {}`", self.show(&sum))
                })
            }
            "lattice_taut" | "bool_taut" => {
                need(self.tier == Tier::Extended, || format!("rule `{rule}` needs the extended tier"))?;
                let ps: Vec<Claim> = premises.iter().map(|p| p.claim.clone()).collect();
                let valid = if rule == "lattice_taut" {
                    self.no_subst(step)?;
                    lattice_taut(claim, &ps)
                } else {
                    let atoms = step
                        .subst
                        .values()
                        .map(|v| parse_expr(v, self.alphabet).map_err(|e| format!("malformed substitution: {e}")))
                        .collect::<Check<Vec<_>>>()?;
                    bool_taut(claim, &ps, &atoms, self.alphabet)
                };
                let valid = valid.map_err(|e| e.to_string())?;
                need(valid, || "not a consequence of the premises in the two-element algebra".into())
            }
            _ => match axiom(rule) {
                Some(schema) => {
                    count(0)?;
                    self.axiom(step, claim, &schema)
                }
                None => Err(format!("unknown rule `{rule}`")),
            },
        }
    }

    fn trans(&self, claim: &Claim, p: &Claim, q: &Claim) -> Check {
        let (a, c) = claim.as_eq();
        let (p1, p2) = p.as_eq();
        let (q1, q2) = q.as_eq();
        if same(&a, &p1) && same(&p2, &q1) && same(&q2, &c) {
            return Ok(());
        }
        if let (Some((a, c)), Some((p1, p2)), Some((q1, q2))) = (claim.as_leq(), p.as_leq(), q.as_leq()) {
            if same(&a, &p1) && same(&p2, &q1) && same(&q2, &c) {
                return Ok(());
            }
        }
        Err("premises do not chain to the claim".into())
    }

    fn fixpoint_axiom(&self, prefix: bool, claim: &Claim) -> Check {
        let (l, r) = claim.as_leq().ok_or("claim must be an inequation")?;
        let (fix, unfolded) = if prefix { (&r, &l) } else { (&l, &r) };
        let ok = match fix {
            Expr::Mu(..) => prefix,
            Expr::Nu(..) => !prefix,
            _ => false,
        };
        let binder = if prefix { "mu" } else { "nu" };
        need(ok, || format!("expected a `{binder}` expression on the {} side", if prefix { "right" } else { "left" }))?;
        need(same(unfolded, &fix.unfold().expect("fixpoint")), || {
            format!("the other side is not the unfolding of `{}`", self.show(fix))
        })
    }

    fn induction(&self, least: bool, claim: &Claim, premise: &Claim) -> Check {
        let (l, r) = claim.as_leq().ok_or("claim must be an inequation")?;
        let (fix, f) = if least { (&l, &r) } else { (&r, &l) };
        let (x, body) = match (fix, least) {
            (Expr::Mu(x, b), true) | (Expr::Nu(x, b), false) => (x, b),
            _ => return Err(format!("expected a `{}` expression", if least { "mu" } else { "nu" })),
        };
        let (p1, p2) = premise.as_leq().ok_or("premise must be an inequation")?;
        let applied = body.substitute(x, f);
        let ok = if least { same(&p1, &applied) && same(&p2, f) } else { same(&p1, f) && same(&p2, &applied) };
        need(ok, || {
            let want = if least {
                format!("{} <= {}", self.show(&applied), self.show(f))
            } else {
                format!("{} <= {}", self.show(f), self.show(&applied))
            };
            format!("premise must be `{want}`")
        })
    }

    /// Equal (`cong`) or smaller (`mono`) terms placed in the same context.
    fn congruence(&self, mono: bool, claim: &Claim, premise: &Known) -> Check {
        let (s, t, l, r) = if mono {
            let (s, t) = premise.claim.as_leq().ok_or("premise must be an inequation")?;
            let (l, r) = claim.as_leq().ok_or("claim must be an inequation")?;
            (s, t, l, r)
        } else {
            let (s, t) = premise.claim.as_eq();
            (s, t, claim.lhs.clone(), claim.rhs.clone())
        };
        let mut walk = ContextWalk { s: &s, t: &t, swap: !mono, bound: Vec::new(), captured: BTreeSet::new() };
        need(walk.matches(&l, &r), || {
            format!("claim is not a context applied to `{}` and `{}`", self.show(&s), self.show(&t))
        })?;
        need(walk.captured.is_empty() || premise.deps.is_empty(), || {
            let vars: Vec<_> = walk.captured.into_iter().collect();
            format!("replacement under a binder capturing {} needs a premise free of assumptions", vars.join(", "))
        })
    }

    fn axiom(&self, step: &Step, claim: &Claim, schema: &Schema) -> Check {
        let (l, r) = claim.as_eq();
        let found = [(&schema.lhs, &schema.rhs), (&schema.rhs, &schema.lhs)].into_iter().find_map(|(pl, pr)| {
            let mut b = Bindings::default();
            (b.matches(pl, &l) && b.matches(pr, &r) && (schema.guard)(&b)).then_some(b)
        });
        let b = found.ok_or_else(|| format!("claim is not an instance of `{}`", step.rule))?;
        for (k, v) in &step.subst {
            if let Some(letter) = b.letters.get(k.as_str()) {
                let given = self
                    .alphabet
                    .letter(v.trim())
                    .ok_or_else(|| format!("malformed substitution: `{v}` is not a letter"))?;
                need(given == *letter, || format!("substitution for `{k}` disagrees with the claim"))?;
            } else if let Some(e) = b.exprs.get(k.as_str()) {
                let given = parse_expr(v, self.alphabet).map_err(|err| format!("malformed substitution: {err}"))?;
                need(same(&given, e), || format!("substitution for `{k}` disagrees with the claim"))?;
            } else {
                return Err(format!("malformed substitution: `{k}` is not a metavariable of `{}`", step.rule));
            }
        }
        Ok(())
    }

    fn duality(&mut self, step: &Step, claim: &Claim) -> Check<BTreeSet<String>> {
        let join = step.rule == "dual_join";
        self.premises(step, Some(0))?;
        self.no_subst(step)?;
        let hyp: &Hyp = step.hyp.as_ref().ok_or("missing hypothetical block")?;
        let (mu, nu) = split_dual(join, claim).ok_or_else(|| {
            if join {
                "claim must have the form `top <= mu X. e + nu Y. f`".to_string()
            } else {
                "claim must have the form `mu X. e & nu Y. f <= 0`".to_string()
            }
        })?;
        let (Expr::Mu(x, e), Expr::Nu(y, f)) = (mu, nu) else { unreachable!() };
        let [u, v] = hyp.fresh.as_slice() else {
            return Err("hypothetical block must declare exactly two fresh variables".into());
        };
        need(u != v, || "fresh variables must be distinct".into())?;
        for w in [u, v] {
            need(crate::syntax::is_identifier(w), || format!("`{w}` is not a variable name"))?;
            need(!claim.lhs.free_vars().contains(w) && !claim.rhs.free_vars().contains(w), || {
                format!("fresh variable `{w}` occurs free in the conclusion")
            })?;
            for (id, a) in &self.assumptions {
                need(!a.lhs.free_vars().contains(w) && !a.rhs.free_vars().contains(w), || {
                    format!("fresh variable `{w}` occurs free in assumption `{id}`")
                })?;
            }
        }
        let (uu, vv) = (Expr::var(u.clone()), Expr::var(v.clone()));
        let assumption = if join {
            Claim::leq(Expr::Top, Expr::sum(uu.clone(), vv.clone()))
        } else {
            Claim::leq(Expr::meet(uu.clone(), vv.clone()), Expr::Zero)
        };
        let target = if join {
            Claim::leq(Expr::Top, Expr::sum(e.substitute(x, &uu), f.substitute(y, &vv)))
        } else {
            Claim::leq(Expr::meet(e.substitute(x, &uu), f.substitute(y, &vv)), Expr::Zero)
        };
        let first = hyp.steps.first().ok_or("empty hypothetical block")?;
        let assumed = match &first.claim {
            Statement::Rll(c) if first.rule == "assume" => c,
            _ => return Err("the first step of the block must assume the duality hypothesis".into()),
        };
        need(same_leq(assumed, &assumption), || format!("the block must assume `{}`", self.show_claim(&assumption)))?;

        self.scopes.push(HashMap::new());
        let outer_assumptions = self.assumptions.len();
        let mut result = Ok(());
        for (k, s) in hyp.steps.iter().enumerate() {
            if let Err(reason) = self.step(s, k == 0) {
                result = Err(format!("in step {}: {reason}", s.id));
                break;
            }
        }
        let scope = self.scopes.pop().expect("scope");
        self.assumptions.truncate(outer_assumptions);
        result?;
        let last = hyp.steps.last().expect("nonempty");
        let known = &scope[&last.id];
        need(same_leq(&known.claim, &target), || format!("the block must conclude `{}`", self.show_claim(&target)))?;
        let mut deps = known.deps.clone();
        deps.remove(&first.id);
        Ok(deps)
    }
}

fn same_leq(a: &Claim, b: &Claim) -> bool {
    match (a.as_leq(), b.as_leq()) {
        (Some((a1, a2)), Some((b1, b2))) => same(&a1, &b1) && same(&a2, &b2),
        _ => false,
    }
}

fn split_dual(join: bool, claim: &Claim) -> Option<(&Expr, &Expr)> {
    let (pair, other) = match claim.rel {
        Rel::Leq if join => (&claim.rhs, &claim.lhs),
        Rel::Leq => (&claim.lhs, &claim.rhs),
        Rel::Eq => return None,
    };
    let (mu, nu) = match (join, pair, other) {
        (true, Expr::Sum(m, n), Expr::Top) | (false, Expr::Meet(m, n), Expr::Zero) => (&**m, &**n),
        _ => return None,
    };
    (matches!(mu, Expr::Mu(..)) && matches!(nu, Expr::Nu(..))).then_some((mu, nu))
}

struct ContextWalk<'a> {
    s: &'a Expr,
    t: &'a Expr,
    swap: bool,
    bound: Vec<String>,
    captured: BTreeSet<String>,
}

impl ContextWalk<'_> {
    fn hole(&mut self) {
        for v in self.s.free_vars().into_iter().chain(self.t.free_vars()) {
            if self.bound.contains(&v) {
                self.captured.insert(v);
            }
        }
    }

    fn matches(&mut self, l: &Expr, r: &Expr) -> bool {
        if same(l, r) {
            return true;
        }
        if (same(l, self.s) && same(r, self.t)) || (self.swap && same(l, self.t) && same(r, self.s)) {
            self.hole();
            return true;
        }
        match (l, r) {
            (Expr::Act(a, x), Expr::Act(b, y)) if a == b => self.matches(x, y),
            (Expr::Sum(l1, l2), Expr::Sum(r1, r2)) | (Expr::Meet(l1, l2), Expr::Meet(r1, r2)) => {
                self.matches(l1, r1) && self.matches(l2, r2)
            }
            (Expr::Mu(x, b1), Expr::Mu(y, b2)) | (Expr::Nu(x, b1), Expr::Nu(y, b2)) => {
                if x != y && crate::syntax::binding::occurs_free(&**b2, x) {
                    return false;
                }
                let b2 = if x == y { (**b2).clone() } else { b2.substitute(y, &Expr::var(x.clone())) };
                self.bound.push(x.clone());
                let ok = self.matches(b1, &b2);
                self.bound.pop();
                ok
            }
            _ => false,
        }
    }
}

// ---- axiom schemas ----

enum Pat {
    M(&'static str),
    Act(&'static str, Box<Pat>),
    Sum(Box<Pat>, Box<Pat>),
    Meet(Box<Pat>, Box<Pat>),
    Zero,
    Top,
}

struct Schema {
    lhs: Pat,
    rhs: Pat,
    guard: fn(&Bindings) -> bool,
}

#[derive(Default)]
struct Bindings {
    exprs: HashMap<&'static str, Expr>,
    letters: HashMap<&'static str, Letter>,
}

impl Bindings {
    fn matches(&mut self, p: &Pat, e: &Expr) -> bool {
        match (p, e) {
            (Pat::M(m), _) => match self.exprs.get(m) {
                Some(bound) => same(bound, e),
                None => {
                    self.exprs.insert(m, e.clone());
                    true
                }
            },
            (Pat::Act(m, p), Expr::Act(a, body)) => {
                if *self.letters.entry(m).or_insert(*a) != *a {
                    return false;
                }
                self.matches(p, body)
            }
            (Pat::Sum(p, q), Expr::Sum(l, r)) | (Pat::Meet(p, q), Expr::Meet(l, r)) => {
                self.matches(p, l) && self.matches(q, r)
            }
            (Pat::Zero, Expr::Zero) | (Pat::Top, Expr::Top) => true,
            _ => false,
        }
    }
}

fn m(name: &'static str) -> Pat {
    Pat::M(name)
}

fn sum(l: Pat, r: Pat) -> Pat {
    Pat::Sum(Box::new(l), Box::new(r))
}

fn meet(l: Pat, r: Pat) -> Pat {
    Pat::Meet(Box::new(l), Box::new(r))
}

fn act(a: &'static str, p: Pat) -> Pat {
    Pat::Act(a, Box::new(p))
}

fn any(_: &Bindings) -> bool {
    true
}

fn axiom(name: &str) -> Option<Schema> {
    let (lhs, rhs) = match name {
        "join_zero" => (sum(m("e"), Pat::Zero), m("e")),
        "join_assoc" => (sum(m("e"), sum(m("f"), m("g"))), sum(sum(m("e"), m("f")), m("g"))),
        "join_comm" => (sum(m("e"), m("f")), sum(m("f"), m("e"))),
        "join_idem" => (sum(m("e"), m("e")), m("e")),
        "join_absorb" => (sum(m("e"), meet(m("e"), m("f"))), m("e")),
        "join_distrib" => (sum(m("e"), meet(m("f"), m("g"))), meet(sum(m("e"), m("f")), sum(m("e"), m("g")))),
        "meet_top" => (meet(m("e"), Pat::Top), m("e")),
        "meet_assoc" => (meet(m("e"), meet(m("f"), m("g"))), meet(meet(m("e"), m("f")), m("g"))),
        "meet_comm" => (meet(m("e"), m("f")), meet(m("f"), m("e"))),
        "meet_idem" => (meet(m("e"), m("e")), m("e")),
        "meet_absorb" => (meet(m("e"), sum(m("e"), m("f"))), m("e")),
        "meet_distrib" => (meet(m("e"), sum(m("f"), m("g"))), sum(meet(m("e"), m("f")), meet(m("e"), m("g")))),
        "act_zero" => (act("a", Pat::Zero), Pat::Zero),
        "act_join" => (act("a", sum(m("e"), m("f"))), sum(act("a", m("e")), act("a", m("f")))),
        "act_meet" => (act("a", meet(m("e"), m("f"))), meet(act("a", m("e")), act("a", m("f")))),
        "act_disjoint" => {
            return Some(Schema {
                lhs: meet(act("a", m("e")), act("b", m("f"))),
                rhs: Pat::Zero,
                guard: |b| b.letters.get("a") != b.letters.get("b"),
            })
        }
        _ => return None,
    };
    Some(Schema { lhs, rhs, guard: any })
}
