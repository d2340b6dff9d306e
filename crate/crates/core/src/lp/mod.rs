//! Dense linear programming with independent certificate checks.

mod certificate;
mod simplex;

pub use certificate::{check_certificate, CertificateCheck};
pub use simplex::{solve, solve_with, SolverOptions};

use crate::error::{Error, Result};
use crate::scalar::LpFloat;
use std::fmt::Write as _;

/// Certificate tolerance applied to every optimal outcome.
pub const CERT_TOL: f64 = 1e-7;
/// Pivot cap; exceeding it is [`Error::IterationLimit`].
pub const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Variable bounds; `None` is unbounded on that side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

impl<T: LpFloat> Bound<T> {
    pub fn non_negative() -> Self {
        Self {
            lower: Some(T::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }

    pub fn between(lower: T, upper: T) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// `optimize c·x` subject to row constraints and variable bounds.
/// Variables default to `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    direction: Direction,
    constraints: Vec<Constraint<T>>,
    bounds: Vec<Bound<T>>,
}

impl<T: LpFloat> LinearProgram<T> {
    pub fn new(direction: Direction, objective: Vec<T>) -> Self {
        let num_vars = objective.len();
        Self {
            num_vars,
            objective,
            direction,
            constraints: Vec::new(),
            bounds: vec![Bound::non_negative(); num_vars],
        }
    }

    pub fn minimize(objective: Vec<T>) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn maximize(objective: Vec<T>) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Bound<T>] {
        &self.bounds
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Sparse form of [`add_constraint`](Self::add_constraint).
    pub fn add_sparse(&mut self, terms: &[(usize, T)], relation: Relation, rhs: T) -> &mut Self {
        let mut coeffs = vec![T::zero(); self.num_vars];
        for &(j, a) in terms {
            coeffs[j] = coeffs[j] + a;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn set_bound(&mut self, var: usize, bound: Bound<T>) -> &mut Self {
        self.bounds[var] = bound;
        self
    }

    pub fn scale_objective(&self, lambda: T) -> Self {
        let mut lp = self.clone();
        for c in &mut lp.objective {
            *c = *c * lambda;
        }
        lp
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: &T| x.is_finite();
        if self.objective.len() != self.num_vars || self.bounds.len() != self.num_vars {
            return Err(Error::MalformedLp("objective/bounds width mismatch".into()));
        }
        if !self.objective.iter().all(finite) {
            return Err(Error::MalformedLp("non-finite objective coefficient".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::MalformedLp(format!(
                    "row {i} has {} coefficients, expected {}",
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
            if !c.coeffs.iter().all(finite) || !c.rhs.is_finite() {
                return Err(Error::MalformedLp(format!("row {i} has a non-finite entry")));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (b.lower, b.upper) {
                if !(l.is_finite() && u.is_finite()) || l > u {
                    return Err(Error::MalformedLp(format!("variable {j} has bounds [{l:?}, {u:?}]")));
                }
            }
        }
        Ok(())
    }

    /// Plain-text dump, one constraint per line.
    pub fn to_text(&self) -> String {
        let term_list = |coeffs: &[T]| {
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(j, a)| format!("{:e} x{j}", a.to_f64_lossy()))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let mut out = String::new();
        let dir = match self.direction {
            Direction::Minimize => "minimize",
            Direction::Maximize => "maximize",
        };
        let _ = writeln!(out, "{dir}: {}", term_list(&self.objective));
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = writeln!(
                out,
                "c{i}: {} {} {:e}",
                term_list(&c.coeffs),
                c.relation.symbol(),
                c.rhs.to_f64_lossy()
            );
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let fmt = |v: Option<T>, inf: &str| v.map_or(inf.to_string(), |v| format!("{:e}", v.to_f64_lossy()));
            if *b != Bound::non_negative() {
                let _ = writeln!(out, "bound x{j}: {} <= x{j} <= {}", fmt(b.lower, "-inf"), fmt(b.upper, "inf"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    /// Primal point; meaningful for `Optimal` only.
    pub solution: Vec<T>,
    pub objective: T,
    /// Worst constraint or bound violation of `solution`, re-measured with
    /// compensated summation.
    pub max_violation: f64,
    pub pivots: usize,
}

impl<T: LpFloat> LpOutcome<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// The optimal point, or an error naming the status.
    pub fn optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::LpStatus("infeasible")),
            LpStatus::Unbounded => Err(Error::LpStatus("unbounded")),
        }
    }
}
