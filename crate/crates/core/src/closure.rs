//! Fischer-Ladner closure of a closed expression, the subterm order on its
//! members and the parity priorities derived from it.
//!
//! Non-fixpoint members get even priorities too. On a play that never
//! settles, the subterm-least member seen infinitely often is a fixpoint,
//! and since ranks are injective and monotone its priority is the strict
//! minimum seen infinitely often, so min-parity agrees with the
//! "smallest expression occurring infinitely often" winning condition.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Expr, Letter};

/// The kind of a single FL step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Act(Letter),
    SumLeft,
    SumRight,
    MeetLeft,
    MeetRight,
    Unfold,
}

impl EdgeKind {
    fn label(&self, alphabet: &Alphabet) -> String {
        match self {
            EdgeKind::Act(a) => format!("act {}", alphabet.name(*a)),
            EdgeKind::SumLeft => "sum-left".into(),
            EdgeKind::SumRight => "sum-right".into(),
            EdgeKind::MeetLeft => "meet-left".into(),
            EdgeKind::MeetRight => "meet-right".into(),
            EdgeKind::Unfold => "unfold".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub kind: EdgeKind,
}

/// `FL(e)`: members in breadth-first discovery order, the root first.
#[derive(Debug, Clone)]
pub struct FlClosure {
    members: Vec<Expr>,
    index: HashMap<Expr, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    below: Vec<Vec<usize>>,
    rank: Vec<usize>,
    priority: Vec<usize>,
}

/// One FL step from `e`, in left-to-right order.
pub fn fl_steps(e: &Expr) -> Vec<(EdgeKind, Expr)> {
    match e {
        Expr::Act(a, f) => vec![(EdgeKind::Act(*a), (**f).clone())],
        Expr::Sum(l, r) => vec![(EdgeKind::SumLeft, (**l).clone()), (EdgeKind::SumRight, (**r).clone())],
        Expr::Meet(l, r) => vec![(EdgeKind::MeetLeft, (**l).clone()), (EdgeKind::MeetRight, (**r).clone())],
        Expr::Mu(..) | Expr::Nu(..) => vec![(EdgeKind::Unfold, e.unfold().expect("fixpoint"))],
        Expr::Var(_) | Expr::Zero | Expr::Top => vec![],
    }
}

fn closed_subterms(e: &Expr, out: &mut HashSet<Expr>) {
    e.visit(&mut |s| {
        if s.is_closed() {
            out.insert(s.canonical());
        }
    });
}

/// Computes `FL(e)` with edges, the subterm order and priorities.
pub fn fl_closure(e: &Expr) -> Result<FlClosure> {
    let free = e.free_vars();
    if !free.is_empty() {
        return Err(Error::OpenExpression(free.into_iter().collect()));
    }
    let mut members = vec![e.clone()];
    let mut index = HashMap::from([(e.canonical(), 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for (kind, g) in fl_steps(&members[i]) {
            let key = g.canonical();
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    let j = members.len();
                    members.push(g);
                    index.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge { source: i, target: j, kind });
        }
    }
    let n = members.len();
    let mut out = vec![Vec::new(); n];
    for (k, edge) in edges.iter().enumerate() {
        out[edge.source].push(k);
    }

    // below[g] = members that are proper closed subterms of g.
    let mut below = vec![Vec::new(); n];
    for (g, m) in members.iter().enumerate() {
        let mut subs = HashSet::new();
        closed_subterms(m, &mut subs);
        for s in &subs {
            if let Some(&f) = index.get(s) {
                if f != g {
                    below[g].push(f);
                }
            }
        }
        below[g].sort_unstable();
    }

    let rank = topological_ranks(&below);
    let priority = (0..n)
        .map(|i| {
            let r = 2 * rank[i];
            if members[i].is_mu() {
                r + 1
            } else {
                r
            }
        })
        .collect();
    Ok(FlClosure { members, index, edges, out, below, rank, priority })
}

// Kahn's algorithm, always taking the earliest-discovered available member.
fn topological_ranks(below: &[Vec<usize>]) -> Vec<usize> {
    let n = below.len();
    let mut waiting: Vec<usize> = below.iter().map(Vec::len).collect();
    let mut above = vec![Vec::new(); n];
    for (g, fs) in below.iter().enumerate() {
        for &f in fs {
            above[f].push(g);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| waiting[i] == 0).collect();
    let mut rank = vec![0; n];
    let mut next = 0;
    while let Some(f) = ready.pop_first() {
        rank[f] = next;
        next += 1;
        for &g in &above[f] {
            waiting[g] -= 1;
            if waiting[g] == 0 {
                ready.insert(g);
            }
        }
    }
    debug_assert_eq!(next, n, "subterm order is acyclic");
    rank
}

impl FlClosure {
    pub fn root(&self) -> &Expr {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Expr] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Expr {
        &self.members[i]
    }

    /// Index of the member alpha-equivalent to `e`.
    pub fn index_of(&self, e: &Expr) -> Option<usize> {
        self.index.get(&e.canonical()).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of member `i`, in FL-step order.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out[i].iter().map(move |&k| &self.edges[k])
    }

    /// Whether member `f` is a closed subterm of member `g` (reflexive).
    pub fn is_subformula(&self, f: usize, g: usize) -> bool {
        f == g || self.below[g].binary_search(&f).is_ok()
    }

    /// All pairs `(f, g)` with `f` a subterm of `g`, including `f == g`.
    pub fn subformula_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for g in 0..self.len() {
            pairs.push((g, g));
            pairs.extend(self.below[g].iter().map(|&f| (f, g)));
        }
        pairs.sort_unstable();
        pairs
    }

    /// Position of member `i` in the chosen linear extension of the
    /// subterm order.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn priority(&self, i: usize) -> usize {
        self.priority[i]
    }

    pub fn priorities(&self) -> &[usize] {
        &self.priority
    }

    /// Line-oriented listing of members, priorities and edges.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", alphabet.header());
        let _ = writeln!(s, "members {}", self.len());
        for (i, m) in self.members.iter().enumerate() {
            let _ = writeln!(s, "{i} p={} {}", self.priority[i], m.display(alphabet));
        }
        let _ = writeln!(s, "edges {}", self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} -> {} {}", e.source, e.target, e.kind.label(alphabet));
        }
        s
    }
}
