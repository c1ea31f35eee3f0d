//! Exact rational linear programming: dense two-phase simplex with Bland's
//! rule.
//!
//! Problems are `maximize c·x` subject to rows `a·x {<=,=,>=} b` and `x >= 0`.
//! Optimal outcomes carry a dual vector so that optimality can be certified
//! independently with [`verify_certificate`].

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

pub const DEFAULT_PIVOT_LIMIT: u64 = 1_000_000;

/// Environment variable that overrides the pivot ceiling (read by the CLI).
pub const PIVOT_LIMIT_ENV: &str = "SRRHAM_PIVOT_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coefficients,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coefficients
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(num_vars: usize, objective: Vec<Rational>) -> Self {
        LpProblem {
            num_vars,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint::new(coefficients, relation, rhs));
    }

    fn check_dimensions(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != self.num_vars {
                return Err(Error::DimensionMismatch(format!(
                    "constraint {} has {} coefficients for {} variables",
                    i,
                    c.coefficients.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    /// Exact primal feasibility of `x`, including `x >= 0`.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub value: Rational,
    pub values: Vec<Rational>,
    /// One multiplier per constraint, in the orientation of the input rows.
    pub duals: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(Solution),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal(s) => Some(&s.value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpOptions {
    pub pivot_limit: u64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            pivot_limit: DEFAULT_PIVOT_LIMIT,
        }
    }
}

impl LpOptions {
    /// Defaults, with the pivot ceiling overridden by `SRRHAM_PIVOT_LIMIT`
    /// when that variable holds a positive integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PIVOT_LIMIT_ENV) {
            Ok(v) => {
                let limit: u64 = v.trim().parse().map_err(|_| {
                    Error::Parse(format!("{PIVOT_LIMIT_ENV} must be a positive integer, got {v:?}"))
                })?;
                if limit == 0 {
                    return Err(Error::Parse(format!("{PIVOT_LIMIT_ENV} must be positive")));
                }
                Ok(LpOptions { pivot_limit: limit })
            }
            Err(_) => Ok(LpOptions::default()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColumnKind {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last slot holds `-z`.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    /// Per row: the column that started as the unit vector of that row.
    identity_col: Vec<usize>,
    /// Per row: whether the input row was negated to make `rhs >= 0`.
    negated: Vec<bool>,
    width: usize,
    pivots: u64,
    limit: u64,
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |v: &Rational| format!("{v:>6}");
        writeln!(f, "obj | {}", self.obj.iter().map(cell).collect::<Vec<_>>().join(" "))?;
        for (r, row) in self.rows.iter().enumerate() {
            writeln!(
                f,
                "x{:<2}| {}",
                self.basis[r],
                row.iter().map(cell).collect::<Vec<_>>().join(" ")
            )?;
        }
        Ok(())
    }
}

enum Progress {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(problem: &LpProblem) -> Tableau {
        let m = problem.constraints.len();
        let nv = problem.num_vars;
        let mut negated = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        for c in &problem.constraints {
            let neg = c.rhs.is_negative();
            negated.push(neg);
            relations.push(match (c.relation, neg) {
                (Relation::Le, false) | (Relation::Ge, true) => Relation::Le,
                (Relation::Ge, false) | (Relation::Le, true) => Relation::Ge,
                (Relation::Eq, _) => Relation::Eq,
            });
        }
        let n_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = relations.iter().filter(|r| **r != Relation::Le).count();
        let width = nv + n_slack + n_art;
        let mut kinds = vec![ColumnKind::Original; nv];
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, n_slack));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, n_art));

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut identity_col = Vec::with_capacity(m);
        let mut next_slack = nv;
        let mut next_art = nv + n_slack;
        for (i, c) in problem.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            for (j, a) in c.coefficients.iter().enumerate() {
                if !a.is_zero() {
                    row[j] = if negated[i] { -a.clone() } else { a.clone() };
                }
            }
            row[width] = if negated[i] { -c.rhs.clone() } else { c.rhs.clone() };
            match relations[i] {
                Relation::Le => {
                    row[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    identity_col.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    identity_col.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    identity_col.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            obj: vec![Rational::zero(); width + 1],
            basis,
            kinds,
            identity_col,
            negated,
            width,
            pivots: 0,
            limit: DEFAULT_PIVOT_LIMIT,
        }
    }

    /// Installs reduced costs for the cost vector `cost` (indexed by column).
    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o -= cb * a;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.limit {
            return Err(Error::PivotLimit(self.limit));
        }
        let inv = self.rows[pr][pc].recip();
        for v in self.rows[pr].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let support: Vec<usize> = (0..=self.width)
            .filter(|&j| !self.rows[pr][j].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[pc].is_zero() {
            let f = self.obj[pc].clone();
            for &j in &support {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[pr] = pivot_row;
        self.basis[pr] = pc;
        if log::log_enabled!(log::Level::Trace) {
            log::trace!("pivot {} on row {pr}, column {pc}\n{self:?}", self.pivots);
        }
        Ok(())
    }

    /// Bland's rule: lowest-index improving column, ratio ties broken by
    /// lowest basic variable index.
    fn run(&mut self, allow_artificial: bool) -> Result<Progress> {
        loop {
            let entering = (0..self.width).find(|&j| {
                (allow_artificial || self.kinds[j] != ColumnKind::Artificial)
                    && self.obj[j].is_positive()
            });
            let Some(pc) = entering else {
                return Ok(Progress::Optimal);
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let a = &row[pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((pr, _)) = best else {
                return Ok(Progress::Unbounded);
            };
            self.pivot(pr, pc)?;
        }
    }

    /// Phase 1. Returns false when the problem is infeasible.
    fn phase_one(&mut self) -> Result<bool> {
        if self.kinds.iter().all(|k| *k != ColumnKind::Artificial) {
            return Ok(true);
        }
        let cost: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| {
                if *k == ColumnKind::Artificial {
                    Rational::from_integer((-1).into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        self.set_objective(&cost);
        self.run(true)?;
        // obj[width] = -z and z = -(sum of artificials) at optimum.
        if !self.obj[self.width].is_zero() {
            return Ok(false);
        }
        // Drive remaining (zero-valued) artificials out of the basis where a
        // non-artificial column allows it; otherwise the row is redundant.
        for r in 0..self.rows.len() {
            if self.kinds[self.basis[r]] != ColumnKind::Artificial {
                continue;
            }
            if let Some(pc) = (0..self.width)
                .find(|&j| self.kinds[j] != ColumnKind::Artificial && !self.rows[r][j].is_zero())
            {
                self.pivot(r, pc)?;
            }
        }
        Ok(true)
    }

    fn primal(&self, nv: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); nv];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < nv {
                x[b] = self.rows[r][self.width].clone();
            }
        }
        x
    }

    fn duals(&self) -> Vec<Rational> {
        self.identity_col
            .iter()
            .zip(&self.negated)
            .map(|(&c, &neg)| {
                let y = -self.obj[c].clone();
                if neg {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}

/// Solves `problem` exactly with the default pivot ceiling.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    solve_with(problem, &LpOptions::default())
}

pub fn solve_with(problem: &LpProblem, options: &LpOptions) -> Result<LpOutcome> {
    problem.check_dimensions()?;
    let mut t = Tableau::build(problem);
    t.limit = options.pivot_limit;
    if !t.phase_one()? {
        return Ok(LpOutcome::Infeasible);
    }
    let mut cost = problem.objective.clone();
    cost.resize(t.width, Rational::zero());
    t.set_objective(&cost);
    match t.run(false)? {
        Progress::Unbounded => Ok(LpOutcome::Unbounded),
        Progress::Optimal => {
            let values = t.primal(problem.num_vars);
            let value = problem.objective_value(&values);
            debug_assert_eq!(value, -t.obj[t.width].clone());
            Ok(LpOutcome::Optimal(Solution {
                value,
                values,
                duals: t.duals(),
            }))
        }
    }
}

/// Phase 1 only: a feasible point when one exists.
pub fn check_feasible(problem: &LpProblem) -> Result<Option<Vec<Rational>>> {
    check_feasible_with(problem, &LpOptions::default())
}

pub fn check_feasible_with(problem: &LpProblem, options: &LpOptions) -> Result<Option<Vec<Rational>>> {
    problem.check_dimensions()?;
    let mut t = Tableau::build(problem);
    t.limit = options.pivot_limit;
    if !t.phase_one()? {
        return Ok(None);
    }
    Ok(Some(t.primal(problem.num_vars)))
}

/// Checks an optimal solution by exact arithmetic: primal feasibility, dual
/// feasibility (sign conditions and `Aᵀy >= c`), and equal objective values.
pub fn verify_certificate(problem: &LpProblem, solution: &Solution) -> std::result::Result<(), String> {
    if !problem.is_feasible_point(&solution.values) {
        return Err("primal point violates a constraint".into());
    }
    if problem.objective_value(&solution.values) != solution.value {
        return Err("objective value does not match the point".into());
    }
    if solution.duals.len() != problem.constraints.len() {
        return Err("dual vector has the wrong length".into());
    }
    for (c, y) in problem.constraints.iter().zip(&solution.duals) {
        let ok = match c.relation {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err("dual multiplier has the wrong sign".into());
        }
    }
    for j in 0..problem.num_vars {
        let col: Rational = problem
            .constraints
            .iter()
            .zip(&solution.duals)
            .filter(|(c, y)| !y.is_zero() && !c.coefficients[j].is_zero())
            .map(|(c, y)| &c.coefficients[j] * y)
            .sum();
        if col < problem.objective[j] {
            return Err(format!("reduced cost of variable {j} is positive"));
        }
    }
    let dual_value: Rational = problem
        .constraints
        .iter()
        .zip(&solution.duals)
        .map(|(c, y)| &c.rhs * y)
        .sum();
    if dual_value != solution.value {
        return Err(format!(
            "dual objective {dual_value} differs from primal {}",
            solution.value
        ));
    }
    Ok(())
}
