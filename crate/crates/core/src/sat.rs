//! A small complete CNF satisfiability procedure: unit propagation with
//! chronological backtracking, branching on the first unassigned variable
//! with `false` tried first. Clauses can be added between calls.

/// Positive `v` or negative `-v` literal over variable `v >= 1`.
pub type Lit = i32;

#[derive(Clone, Debug, Default)]
pub struct SatSolver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// Number of `solve` calls so far.
    pub calls: usize,
}

const UNSET: i8 = -1;

impl SatSolver {
    pub fn new(num_vars: usize) -> Self {
        SatSolver {
            num_vars,
            clauses: Vec::new(),
            calls: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        debug_assert!(clause
            .iter()
            .all(|l| *l != 0 && l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(clause);
    }

    /// A model indexed by variable (index 0 unused), or `None` if
    /// unsatisfiable.
    pub fn solve(&mut self) -> Option<Vec<bool>> {
        self.calls += 1;
        let mut assign = vec![UNSET; self.num_vars + 1];
        let mut trail = Vec::new();
        if self.search(&mut assign, &mut trail) {
            Some(assign.iter().map(|&a| a == 1).collect())
        } else {
            None
        }
    }

    fn value(assign: &[i8], lit: Lit) -> i8 {
        let a = assign[lit.unsigned_abs() as usize];
        match (a, lit > 0) {
            (UNSET, _) => UNSET,
            (a, true) => a,
            (a, false) => 1 - a,
        }
    }

    /// Returns false on conflict.
    fn propagate(&self, assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &l in clause {
                    match Self::value(assign, l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        UNSET => {
                            open += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        let v = l.unsigned_abs() as usize;
                        assign[v] = i8::from(l > 0);
                        trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&self, assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
        if !self.propagate(assign, trail) {
            return false;
        }
        let Some(v) = (1..=self.num_vars).find(|&v| assign[v] == UNSET) else {
            return true;
        };
        for val in [0, 1] {
            let mark = trail.len();
            assign[v] = val;
            trail.push(v);
            if self.search(assign, trail) {
                return true;
            }
            for u in trail.drain(mark..) {
                assign[u] = UNSET;
            }
        }
        false
    }
}
