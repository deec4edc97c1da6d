//! Quasi-matrix enumeration as a fixed-order DPLL search.
//!
//! Every admissibility clause is compiled to CNF over closure indices.
//! Decisions are made on the smallest unassigned index, trying 0 before 1,
//! and unit propagation only removes assignments that cannot be extended to
//! a solution. Solutions therefore come out in lexicographic order of the
//! closure, which is the enumeration order.

use std::sync::Arc;

use crate::formula::{ball, Formula};
use crate::semantics::closure::ClosureSet;
use crate::semantics::valuation::Bivaluation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Lit {
    var: u32,
    value: bool,
}

impl Lit {
    fn pos(var: usize) -> Self {
        Lit {
            var: var as u32,
            value: true,
        }
    }

    fn neg(var: usize) -> Self {
        Lit {
            var: var as u32,
            value: false,
        }
    }
}

/// CNF form of the admissibility clauses over one closure set.
#[derive(Clone, Debug)]
pub(crate) struct ClauseDb {
    clauses: Vec<Vec<Lit>>,
    /// `watch[2 * v + b]`: clauses containing the literal `v = !b`, which
    /// become falsified when `v` is assigned `b`.
    watch: Vec<Vec<u32>>,
    vars: usize,
}

impl ClauseDb {
    pub(crate) fn compile(cs: &ClosureSet) -> Self {
        let mut clauses = Vec::new();
        let idx = |f: &Formula| cs.index_of(f);
        for (i, f) in cs.members().iter().enumerate() {
            match f {
                Formula::And(a, b) => {
                    let (a, b) = (idx(a).unwrap(), idx(b).unwrap());
                    clauses.push(vec![Lit::neg(i), Lit::pos(a)]);
                    clauses.push(vec![Lit::neg(i), Lit::pos(b)]);
                    clauses.push(vec![Lit::pos(i), Lit::neg(a), Lit::neg(b)]);
                }
                Formula::Or(a, b) => {
                    let (a, b) = (idx(a).unwrap(), idx(b).unwrap());
                    clauses.push(vec![Lit::neg(i), Lit::pos(a), Lit::pos(b)]);
                    clauses.push(vec![Lit::pos(i), Lit::neg(a)]);
                    clauses.push(vec![Lit::pos(i), Lit::neg(b)]);
                }
                Formula::Implies(a, b) => {
                    let (a, b) = (idx(a).unwrap(), idx(b).unwrap());
                    clauses.push(vec![Lit::neg(i), Lit::neg(a), Lit::pos(b)]);
                    clauses.push(vec![Lit::pos(i), Lit::pos(a)]);
                    clauses.push(vec![Lit::pos(i), Lit::neg(b)]);
                }
                Formula::Not(a) => {
                    // (c-not): v(A) = 0 gives v(~A) = 1
                    clauses.push(vec![Lit::pos(idx(a).unwrap()), Lit::pos(i)]);
                    // (c-notnot): v(~~A) = 1 gives v(A) = 1
                    if let Formula::Not(inner) = a.as_ref() {
                        clauses.push(vec![Lit::neg(i), Lit::pos(idx(inner).unwrap())]);
                    }
                }
                Formula::Atom { .. } | Formula::ForAll(..) | Formula::Exists(..) => {}
            }
            let Some(b) = f.as_ball() else { continue };
            let bi = idx(b).unwrap();
            let nb = b.clone().not();
            let nbi = idx(&nb).unwrap();
            // (c-ball'): B^o and B and ~B cannot all hold
            clauses.push(vec![Lit::neg(i), Lit::neg(bi), Lit::neg(nbi)]);
            // (c-ball): B^o, A -> B, A -> ~B give ~A... i.e. v(A) = 0
            for (j, g) in cs.members().iter().enumerate() {
                if let Formula::Implies(a, b2) = g {
                    if b2.as_ref() != b {
                        continue;
                    }
                    if let Some(k) = idx(&(**a).clone().implies(nb.clone())) {
                        let ai = idx(a).unwrap();
                        clauses.push(vec![Lit::neg(i), Lit::neg(j), Lit::neg(k), Lit::neg(ai)]);
                    }
                }
            }
            // (c-prop): X^o and Y^o give (X # Y)^o
            if let Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) = b {
                if let (Some(lb), Some(rb)) = (idx(&ball((**l).clone())), idx(&ball((**r).clone())))
                {
                    clauses.push(vec![Lit::neg(lb), Lit::neg(rb), Lit::pos(i)]);
                }
            }
        }
        Self::from_clauses(cs.len(), clauses)
    }

    fn from_clauses(vars: usize, clauses: Vec<Vec<Lit>>) -> Self {
        let mut watch = vec![Vec::new(); 2 * vars];
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause {
                watch[2 * lit.var as usize + usize::from(!lit.value)].push(ci as u32);
            }
        }
        ClauseDb {
            clauses,
            watch,
            vars,
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.clauses.len()
    }
}

/// Resumable depth-first search over admissible assignments.
#[derive(Clone, Debug)]
pub(crate) struct Search {
    db: Arc<ClauseDb>,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
    /// (trail length before the decision, variable, value, flipped)
    decisions: Vec<(usize, usize, bool, bool)>,
    /// Decisions are only made below this index.
    limit: usize,
    state: State,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Fresh,
    Yielded,
    Exhausted,
}

impl Search {
    /// `assumptions` are fixed before the search starts (premises set to 1,
    /// the target to 0, or a branch prefix).
    pub(crate) fn new(db: Arc<ClauseDb>, assumptions: &[(usize, bool)], limit: usize) -> Self {
        let vars = db.vars;
        let mut s = Search {
            db,
            assign: vec![None; vars],
            trail: Vec::new(),
            decisions: Vec::new(),
            limit: limit.min(vars),
            state: State::Fresh,
        };
        let mut ok = true;
        for &(var, value) in assumptions {
            match s.assign[var] {
                Some(v) if v != value => ok = false,
                Some(_) => {}
                None => ok &= s.assign_and_propagate(var, value),
            }
            if !ok {
                break;
            }
        }
        if ok {
            ok = s.propagate_units();
        }
        if !ok {
            s.state = State::Exhausted;
        }
        s
    }

    fn propagate_units(&mut self) -> bool {
        let db = Arc::clone(&self.db);
        for clause in &db.clauses {
            match clause.as_slice() {
                [] => return false,
                [lit] => match self.assign[lit.var as usize] {
                    Some(v) if v != lit.value => return false,
                    Some(_) => {}
                    None => {
                        if !self.assign_and_propagate(lit.var as usize, lit.value) {
                            return false;
                        }
                    }
                },
                _ => {}
            }
        }
        true
    }

    /// Assigns and propagates. Returns false on conflict; the trail then
    /// holds the partial assignment, which the caller undoes.
    fn assign_and_propagate(&mut self, var: usize, value: bool) -> bool {
        let mut queue = vec![(var, value)];
        self.assign[var] = Some(value);
        self.trail.push(var);
        while let Some((v, b)) = queue.pop() {
            for &ci in &self.db.watch[2 * v + usize::from(b)] {
                let clause = &self.db.clauses[ci as usize];
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for lit in clause {
                    match self.assign[lit.var as usize] {
                        Some(x) if x == lit.value => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some(*lit);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(lit)) => {
                        let u = lit.var as usize;
                        self.assign[u] = Some(lit.value);
                        self.trail.push(u);
                        queue.push((u, lit.value));
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.assign[v] = None;
        }
    }

    /// Pops decisions until one can be flipped without conflict. Returns
    /// false when the tree is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some((mark, var, value, flipped)) = self.decisions.pop() {
            self.undo_to(mark);
            if flipped {
                continue;
            }
            self.decisions.push((mark, var, !value, true));
            if self.assign_and_propagate(var, !value) {
                return true;
            }
        }
        false
    }

    /// The next assignment in enumeration order. With a limit below the
    /// variable count, the result is a prefix: every index below the limit
    /// is set, later ones only where propagation fixed them.
    pub(crate) fn next_assignment(&mut self) -> Option<Vec<Option<bool>>> {
        match self.state {
            State::Exhausted => return None,
            State::Yielded => {
                if !self.backtrack() {
                    self.state = State::Exhausted;
                    return None;
                }
            }
            State::Fresh => {}
        }
        loop {
            match (0..self.limit).find(|&i| self.assign[i].is_none()) {
                None => {
                    self.state = State::Yielded;
                    return Some(self.assign.clone());
                }
                Some(var) => {
                    let mark = self.trail.len();
                    self.decisions.push((mark, var, false, false));
                    if !self.assign_and_propagate(var, false) && !self.backtrack() {
                        self.state = State::Exhausted;
                        return None;
                    }
                }
            }
        }
    }
}

/// Lazily enumerates the admissible bivaluations of a closure set.
pub struct Valuations {
    closure: Arc<ClosureSet>,
    search: Search,
}

impl Valuations {
    pub(crate) fn new(closure: Arc<ClosureSet>, assumptions: &[(usize, bool)]) -> Self {
        let db = Arc::new(ClauseDb::compile(&closure));
        let n = closure.len();
        Valuations {
            search: Search::new(db, assumptions, n),
            closure,
        }
    }
}

impl Iterator for Valuations {
    type Item = Bivaluation;

    fn next(&mut self) -> Option<Bivaluation> {
        let assignment = self.search.next_assignment()?;
        let values = assignment.into_iter().map(|v| v.unwrap()).collect();
        Some(Bivaluation::new(Arc::clone(&self.closure), values))
    }
}

/// Every admissible bivaluation over `cs`, in enumeration order.
pub fn enumerate_valuations(cs: &ClosureSet) -> Valuations {
    Valuations::new(Arc::new(cs.clone()), &[])
}
