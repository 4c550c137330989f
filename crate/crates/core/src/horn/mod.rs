//! Propositional Horn reasoning: linear-time satisfiability by counter-based
//! unit propagation, minimal correction subsets, and exact MaxSAT over unit
//! soft clauses.

pub mod encode;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Variable ids are dense from 1.
pub type Var = usize;

/// `body_1 ∧ … ∧ body_k → head`, where a missing head is ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornClause {
    pub body: Vec<Var>,
    pub head: Option<Var>,
}

impl HornClause {
    pub fn fact(head: Var) -> Self {
        HornClause {
            body: Vec::new(),
            head: Some(head),
        }
    }

    pub fn implies(body: Vec<Var>, head: Var) -> Self {
        HornClause {
            body,
            head: Some(head),
        }
    }

    pub fn goal(body: Vec<Var>) -> Self {
        HornClause { body, head: None }
    }

    pub fn len(&self) -> usize {
        self.body.len() + usize::from(self.head.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        !self.body.iter().all(|&v| model[v]) || self.head.is_some_and(|h| model[h])
    }
}

/// Hard Horn clauses plus unit positive soft clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HornProblem {
    pub num_vars: usize,
    pub hard: Vec<HornClause>,
    /// Group label per hard clause, used only by [`HornProblem::dump`].
    pub hard_tags: Vec<String>,
    /// Each entry `v` is the soft clause `(v)`.
    pub soft: Vec<Var>,
    /// `var_names[v]` names variable `v`; index 0 is unused.
    pub var_names: Vec<String>,
}

impl HornProblem {
    pub fn new(num_vars: usize) -> Self {
        HornProblem {
            num_vars,
            var_names: (0..=num_vars).map(|v| format!("v{v}")).collect(),
            ..Default::default()
        }
    }

    pub fn add_hard(&mut self, clause: HornClause, tag: &str) {
        self.hard.push(clause);
        self.hard_tags.push(tag.to_string());
    }

    pub fn solver(&self) -> HornSolver {
        HornSolver::new(self.num_vars, &self.hard)
    }

    /// Hard clauses carrying `tag`, in emission order.
    pub fn tagged(&self, tag: &str) -> Vec<&HornClause> {
        self.hard
            .iter()
            .zip(&self.hard_tags)
            .filter(|(_, t)| t.as_str() == tag)
            .map(|(c, _)| c)
            .collect()
    }

    /// DIMACS-like text: `h` lines for hard clauses, `s` lines for soft ones,
    /// `c` comments naming variables and clause groups.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "p horn {} {} {}",
            self.num_vars,
            self.hard.len(),
            self.soft.len()
        );
        for v in 1..=self.num_vars {
            let _ = writeln!(out, "c {v} {}", self.var_names[v]);
        }
        let mut last = None;
        for (c, tag) in self.hard.iter().zip(&self.hard_tags) {
            if last != Some(tag) && !tag.is_empty() {
                let _ = writeln!(out, "c {tag}");
            }
            last = Some(tag);
            out.push('h');
            for &b in &c.body {
                let _ = write!(out, " -{b}");
            }
            if let Some(h) = c.head {
                let _ = write!(out, " {h}");
            }
            out.push_str(" 0\n");
        }
        if !self.soft.is_empty() {
            out.push_str("c soft\n");
        }
        for &s in &self.soft {
            let _ = writeln!(out, "s {s} 0");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HornResult {
    /// The minimal model: variables forced true.
    Sat(BTreeSet<Var>),
    /// Indices of the hard clauses that fired, ending with the violated one.
    Unsat(Vec<usize>),
}

impl HornResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, HornResult::Sat(_))
    }
}

/// Reusable propagation structure over a fixed list of hard clauses.
#[derive(Clone, Debug)]
pub struct HornSolver {
    num_vars: usize,
    clauses: Vec<HornClause>,
    /// Distinct body variables per clause.
    body_len: Vec<usize>,
    occurs: Vec<Vec<usize>>,
    /// Counter updates and clause firings across all calls.
    pub work: usize,
    pub calls: usize,
}

impl HornSolver {
    pub fn new(num_vars: usize, hard: &[HornClause]) -> Self {
        let mut occurs = vec![Vec::new(); num_vars + 1];
        let mut body_len = Vec::with_capacity(hard.len());
        let mut clauses = Vec::with_capacity(hard.len());
        for (k, c) in hard.iter().enumerate() {
            let mut body = c.body.clone();
            body.sort_unstable();
            body.dedup();
            for &v in &body {
                occurs[v].push(k);
            }
            body_len.push(body.len());
            clauses.push(HornClause { body, head: c.head });
        }
        HornSolver {
            num_vars,
            clauses,
            body_len,
            occurs,
            work: 0,
            calls: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn total_literals(&self) -> usize {
        self.clauses.iter().map(HornClause::len).sum()
    }

    /// Unit propagation from the facts and the assumed-true variables.
    pub fn solve(&mut self, assumptions: &[Var]) -> HornResult {
        self.calls += 1;
        let mut value = vec![false; self.num_vars + 1];
        let mut pending = self.body_len.clone();
        let mut queue: Vec<Var> = Vec::new();
        let mut trail: Vec<usize> = Vec::new();
        for &a in assumptions {
            if !value[a] {
                value[a] = true;
                queue.push(a);
            }
        }
        for k in 0..self.clauses.len() {
            if pending[k] == 0 {
                self.work += 1;
                trail.push(k);
                match self.clauses[k].head {
                    None => return HornResult::Unsat(trail),
                    Some(h) if !value[h] => {
                        value[h] = true;
                        queue.push(h);
                    }
                    Some(_) => {}
                }
            }
        }
        while let Some(v) = queue.pop() {
            for &k in &self.occurs[v] {
                self.work += 1;
                pending[k] -= 1;
                if pending[k] == 0 {
                    trail.push(k);
                    match self.clauses[k].head {
                        None => return HornResult::Unsat(trail),
                        Some(h) if !value[h] => {
                            value[h] = true;
                            queue.push(h);
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        HornResult::Sat((1..=self.num_vars).filter(|&v| value[v]).collect())
    }
}

pub fn horn_sat(num_vars: usize, hard: &[HornClause], assumptions: &[Var]) -> HornResult {
    HornSolver::new(num_vars, hard).solve(assumptions)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McsResult {
    /// Indices into `HornProblem::soft` of the falsified soft clauses.
    pub mcs: Vec<usize>,
    /// Minimal model of the hard clauses plus the kept soft clauses.
    pub model: BTreeSet<Var>,
    pub sat_calls: usize,
}

/// Linear-search MCS: soft clauses are tried in index order and kept iff the
/// kept set stays satisfiable.
pub fn horn_mcs(problem: &HornProblem) -> Result<McsResult> {
    let mut solver = problem.solver();
    let HornResult::Sat(mut model) = solver.solve(&[]) else {
        return Err(Error::HardUnsat);
    };
    let mut kept: Vec<Var> = Vec::new();
    let mut mcs = Vec::new();
    for (k, &s) in problem.soft.iter().enumerate() {
        kept.push(s);
        match solver.solve(&kept) {
            HornResult::Sat(m) => model = m,
            HornResult::Unsat(_) => {
                kept.pop();
                mcs.push(k);
            }
        }
    }
    Ok(McsResult {
        mcs,
        model,
        sat_calls: solver.calls,
    })
}

/// Post-hoc check: the complement of `mcs` is satisfiable with the hard
/// clauses and re-adding any member of `mcs` is not.
pub fn is_minimal_correction_set(problem: &HornProblem, mcs: &[usize]) -> bool {
    let mut solver = problem.solver();
    let kept: Vec<Var> = (0..problem.soft.len())
        .filter(|k| !mcs.contains(k))
        .map(|k| problem.soft[k])
        .collect();
    if !solver.solve(&kept).is_sat() {
        return false;
    }
    mcs.iter().all(|&k| {
        let mut more = kept.clone();
        more.push(problem.soft[k]);
        !solver.solve(&more).is_sat()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSatResult {
    /// Number of satisfied soft clauses.
    pub cost: usize,
    /// Indices into `HornProblem::soft` of the falsified soft clauses.
    pub falsified: Vec<usize>,
    pub model: BTreeSet<Var>,
}

/// Exact maximum number of soft clauses satisfiable with the hard clauses,
/// by branch and bound over the soft variables.
pub fn horn_maxsat(problem: &HornProblem) -> Result<MaxSatResult> {
    struct Search<'p> {
        soft: &'p [Var],
        solver: HornSolver,
        best: usize,
        best_kept: Vec<usize>,
        best_model: BTreeSet<Var>,
    }

    impl Search<'_> {
        fn go(&mut self, k: usize, kept: &mut Vec<usize>, model: &BTreeSet<Var>) {
            let satisfied = kept.len();
            if satisfied + (self.soft.len() - k) <= self.best {
                return;
            }
            if k == self.soft.len() {
                self.best = satisfied;
                self.best_kept = kept.clone();
                self.best_model = model.clone();
                return;
            }
            if model.contains(&self.soft[k]) {
                // already forced true: including it costs nothing
                kept.push(k);
                self.go(k + 1, kept, model);
                kept.pop();
                return;
            }
            kept.push(k);
            let vars: Vec<Var> = kept.iter().map(|&j| self.soft[j]).collect();
            if let HornResult::Sat(m) = self.solver.solve(&vars) {
                self.go(k + 1, kept, &m);
            }
            kept.pop();
            self.go(k + 1, kept, model);
        }
    }

    let mut solver = problem.solver();
    let HornResult::Sat(model) = solver.solve(&[]) else {
        return Err(Error::HardUnsat);
    };
    let mut search = Search {
        soft: &problem.soft,
        solver,
        best: 0,
        best_kept: Vec::new(),
        best_model: model.clone(),
    };
    search.go(0, &mut Vec::new(), &model);
    // with no soft clause kept the root model is the answer
    let falsified = (0..problem.soft.len())
        .filter(|k| !search.best_kept.contains(k))
        .collect();
    Ok(MaxSatResult {
        cost: search.best,
        falsified,
        model: search.best_model,
    })
}
