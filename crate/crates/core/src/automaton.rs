//! Alternating parity automata whose states are the members of an FL
//! closure.

use std::fmt::Write;

use crate::closure::{EdgeKind, FlClosure};
use crate::syntax::{Alphabet, Expr, Letter};

/// Who resolves the choice at a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Existential,
    Universal,
}

impl Owner {
    /// `0` and sums are existential, `top` and meets universal. The
    /// remaining states have at most one successor; they are existential.
    pub fn of(e: &Expr) -> Owner {
        match e {
            Expr::Top | Expr::Meet(..) => Owner::Universal,
            _ => Owner::Existential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apa {
    pub alphabet: Alphabet,
    /// Printed member expression for each state.
    pub labels: Vec<String>,
    pub initial: usize,
    pub letter_transitions: Vec<(usize, Letter, usize)>,
    pub epsilon_transitions: Vec<(usize, usize)>,
    pub owner: Vec<Owner>,
    pub priority: Vec<usize>,
}

/// Reads the automaton off a closure: letter steps become letter
/// transitions, all other FL steps become epsilon transitions.
pub fn build_apa(closure: &FlClosure, alphabet: &Alphabet) -> Apa {
    let mut letter_transitions = Vec::new();
    let mut epsilon_transitions = Vec::new();
    for e in closure.edges() {
        match e.kind {
            EdgeKind::Act(a) => letter_transitions.push((e.source, a, e.target)),
            _ => epsilon_transitions.push((e.source, e.target)),
        }
    }
    Apa {
        alphabet: alphabet.clone(),
        labels: closure.members().iter().map(|m| m.to_text(alphabet)).collect(),
        initial: 0,
        letter_transitions,
        epsilon_transitions,
        owner: closure.members().iter().map(Owner::of).collect(),
        priority: closure.priorities().to_vec(),
    }
}

impl Apa {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// Graphviz rendering: diamonds are existential states, boxes universal
    /// ones, and the initial state has a double border.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph apa {\n  rankdir=LR;\n");
        for i in 0..self.num_states() {
            let shape = match self.owner[i] {
                Owner::Existential => "diamond",
                Owner::Universal => "box",
            };
            let label = escape(&format!("{} [p={}]", self.labels[i], self.priority[i]));
            let init = if i == self.initial { ", peripheries=2" } else { "" };
            let _ = writeln!(s, "  s{i} [shape={shape}, label=\"{label}\"{init}];");
        }
        let mut edges: Vec<(usize, usize, Option<Letter>)> = self
            .letter_transitions
            .iter()
            .map(|&(p, a, q)| (p, q, Some(a)))
            .chain(self.epsilon_transitions.iter().map(|&(p, q)| (p, q, None)))
            .collect();
        edges.sort_by_key(|&(p, _, _)| p);
        for (p, q, a) in edges {
            match a {
                Some(a) => {
                    let _ = writeln!(s, "  s{p} -> s{q} [label=\"{}\"];", escape(self.alphabet.name(a)));
                }
                None => {
                    let _ = writeln!(s, "  s{p} -> s{q};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Convenience: closure and automaton in one go.
pub fn apa_of(e: &Expr, alphabet: &Alphabet) -> crate::Result<Apa> {
    Ok(build_apa(&crate::closure::fl_closure(e)?, alphabet))
}
