//! Derivations of `top <= e + e^c` and `e & e^c <= 0`, by induction on `e`.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::complement;
use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Expr};

use super::{Claim, Derivation, Hyp, Statement, Step, System, Tier};

/// Left and right names of a bound variable, and the step assuming they
/// are complementary.
#[derive(Clone)]
struct Entry {
    left: String,
    right: String,
    hyp: String,
}

type Ctx = HashMap<String, Entry>;

struct Gen<'a> {
    alphabet: &'a Alphabet,
    join: bool,
    next_id: usize,
    next_name: usize,
    avoid: BTreeSet<String>,
}

impl Gen<'_> {
    fn id(&mut self) -> String {
        self.next_id += 1;
        self.next_id.to_string()
    }

    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.next_name += 1;
            let name = format!("{base}{}", self.next_name);
            if self.avoid.insert(name.clone()) {
                return name;
            }
        }
    }

    /// The two sides for `g` under `ctx`: `g` and `g^c` with free variables
    /// renamed to their left and right names.
    fn sides(&self, g: &Expr, ctx: &Ctx) -> (Expr, Expr) {
        let mut l = g.clone();
        let mut r = complement(g, self.alphabet);
        for x in g.free_vars() {
            let entry = &ctx[&x];
            l = l.substitute(&x, &Expr::var(entry.left.clone()));
            r = r.substitute(&x, &Expr::var(entry.right.clone()));
        }
        (l, r)
    }

    fn claim(&self, l: Expr, r: Expr) -> Claim {
        if self.join {
            Claim::leq(Expr::Top, Expr::sum(l, r))
        } else {
            Claim::leq(Expr::meet(l, r), Expr::Zero)
        }
    }

    fn push(&mut self, out: &mut Vec<Step>, claim: Claim, rule: &str, premises: &[&str]) -> String {
        let id = self.id();
        out.push(Step::new(id.clone(), Statement::Rll(claim), rule, premises));
        id
    }

    fn prove(&mut self, g: &Expr, ctx: &Ctx, out: &mut Vec<Step>) -> String {
        let (l, r) = self.sides(g, ctx);
        let goal = self.claim(l.clone(), r.clone());
        match g {
            Expr::Var(x) => {
                let hyp = ctx[x].hyp.clone();
                self.push(out, goal, "lattice_taut", &[&hyp])
            }
            Expr::Zero | Expr::Top => self.push(out, goal, "lattice_taut", &[]),
            Expr::Sum(g1, g2) | Expr::Meet(g1, g2) => {
                let p1 = self.prove(g1, ctx, out);
                let p2 = self.prove(g2, ctx, out);
                self.push(out, goal, "lattice_taut", &[&p1, &p2])
            }
            Expr::Act(a, g1) => {
                let p = self.prove(g1, ctx, out);
                let (l1, r1) = self.sides(g1, ctx);
                let a = *a;
                let mut premises = Vec::new();
                if self.join {
                    let both = Expr::sum(l1.clone(), r1.clone());
                    premises.push(self.push(
                        out,
                        Claim::leq(Expr::act(a, Expr::Top), Expr::act(a, both.clone())),
                        "mono",
                        &[&p],
                    ));
                    premises.push(self.push(
                        out,
                        Claim::eq(Expr::act(a, both), Expr::sum(Expr::act(a, l1), Expr::act(a, r1))),
                        "act_join",
                        &[],
                    ));
                    let all = Expr::sum_all(self.alphabet.letters().map(|b| Expr::act(b, Expr::Top)));
                    premises.push(self.push(out, Claim::eq(Expr::Top, all.expect("nonempty")), "top_partition", &[]));
                } else {
                    let both = Expr::meet(l1.clone(), r1.clone());
                    premises.push(self.push(
                        out,
                        Claim::leq(Expr::act(a, both.clone()), Expr::act(a, Expr::Zero)),
                        "mono",
                        &[&p],
                    ));
                    premises.push(self.push(out, Claim::eq(Expr::act(a, Expr::Zero), Expr::Zero), "act_zero", &[]));
                    premises.push(self.push(
                        out,
                        Claim::eq(Expr::act(a, both), Expr::meet(Expr::act(a, l1.clone()), Expr::act(a, r1))),
                        "act_meet",
                        &[],
                    ));
                    for b in self.alphabet.letters().filter(|&b| b != a) {
                        let disjoint =
                            Claim::eq(Expr::meet(Expr::act(a, l1.clone()), Expr::act(b, Expr::Top)), Expr::Zero);
                        premises.push(self.push(out, disjoint, "act_disjoint", &[]));
                    }
                }
                let refs: Vec<&str> = premises.iter().map(String::as_str).collect();
                self.push(out, goal, "lattice_taut", &refs)
            }
            Expr::Mu(x, g1) | Expr::Nu(x, g1) => {
                let least = g.is_mu();
                // The rule wants the least fixpoint on the left; for `nu` the
                // complement is that side and the result is swapped back.
                let (mu_name, nu_name) = (self.fresh("U"), self.fresh("V"));
                let (left, right) = if least { (&mu_name, &nu_name) } else { (&nu_name, &mu_name) };
                let mut hyp = Vec::new();
                let (mu_var, nu_var) = (Expr::var(mu_name.clone()), Expr::var(nu_name.clone()));
                let assumed = self.push(&mut hyp, self.claim(mu_var.clone(), nu_var.clone()), "assume", &[]);
                let hyp_id = if least {
                    assumed
                } else {
                    self.push(&mut hyp, self.claim(nu_var, mu_var), "lattice_taut", &[&assumed])
                };
                let mut inner = ctx.clone();
                inner.insert(x.clone(), Entry { left: left.clone(), right: right.clone(), hyp: hyp_id });
                let p = self.prove(g1, &inner, &mut hyp);
                if !least {
                    let (l1, r1) = self.sides(g1, &inner);
                    self.push(&mut hyp, self.claim(r1, l1), "lattice_taut", &[&p]);
                }
                let rule = if self.join { "dual_join" } else { "dual_meet" };
                let conclusion = if least { goal.clone() } else { self.claim(r, l) };
                let id = self.id();
                out.push(Step {
                    hyp: Some(Hyp { fresh: vec![mu_name, nu_name], steps: hyp }),
                    ..Step::new(id.clone(), Statement::Rll(conclusion), rule, &[])
                });
                if least {
                    id
                } else {
                    self.push(out, goal, "lattice_taut", &[&id])
                }
            }
        }
    }
}

/// Derivations of `top <= e + e^c` and of `e & e^c <= 0` for a closed
/// expression, in the extended tier.
pub fn derive_complement(e: &Expr, alphabet: &Alphabet) -> Result<(Derivation, Derivation)> {
    let free: Vec<String> = e.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(Error::OpenExpression(free));
    }
    let mut avoid = e.names();
    avoid.extend(alphabet.names().iter().cloned());
    let derive = |join: bool| {
        let mut g = Gen { alphabet, join, next_id: 0, next_name: 0, avoid: avoid.clone() };
        let mut steps = Vec::new();
        g.prove(e, &Ctx::new(), &mut steps);
        let goal = g.claim(e.clone(), complement(e, alphabet));
        Derivation {
            system: System::Rll,
            tier: Tier::Extended,
            alphabet: alphabet.clone(),
            goal: Some(Statement::Rll(goal)),
            steps,
        }
    };
    Ok((derive(true), derive(false)))
}
