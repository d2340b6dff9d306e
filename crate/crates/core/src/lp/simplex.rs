//! Two-phase dense tableau simplex.
//!
//! Entering columns use Dantzig's largest-reduced-cost rule; after a run of
//! degenerate pivots the solver switches to Bland's smallest-index rule
//! until the objective moves again, which rules out cycling. Leaving-row
//! ties are always broken by the smallest basic column index, so the pivot
//! sequence is a pure function of the program.

use super::{check_certificate, Bound, Direction, LinearProgram, LpOutcome, LpStatus, Relation, CERT_TOL, MAX_PIVOTS};
use crate::error::{Error, Result};
use crate::scalar::LpFloat;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub max_pivots: usize,
    /// Certificate tolerance applied to optimal outcomes.
    pub cert_tol: f64,
    /// Consecutive degenerate pivots tolerated before Bland's rule kicks in.
    pub degenerate_run: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_pivots: MAX_PIVOTS,
            cert_tol: CERT_TOL,
            degenerate_run: 50,
        }
    }
}

pub fn solve<T: LpFloat>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    solve_with(lp, SolverOptions::default())
}

/// How an original variable is expressed through non-negative columns.
#[derive(Debug, Clone, Copy)]
enum VarMap<T> {
    /// `x = shift + col`
    Shift { col: usize, shift: T },
    /// `x = upper - col`
    Mirror { col: usize, upper: T },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Tableau<T> {
    rows: usize,
    width: usize,
    /// `rows` constraint rows followed by one reduced-cost row; the last
    /// column of each row is its right-hand side.
    data: Vec<T>,
    basis: Vec<usize>,
    artificial_start: usize,
    pivots: usize,
    tol: T,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: LpFloat> Tableau<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.data[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> T {
        self.at(i, self.width - 1)
    }

    fn cost_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.at(r, q);
        let inv = T::one() / p;
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v = *v * inv;
        }
        self.data[r * w + q] = T::one();
        let drop = self.tol * T::ratio(1, 1000);
        let nz: Vec<usize> = (0..w).filter(|&j| !self.data[r * w + j].is_zero()).collect();
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        let eliminate = |row: &mut [T]| {
            let f = row[q];
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let v = row[j] - f * prow[j];
                row[j] = if v.abs() < drop { T::zero() } else { v };
            }
            row[q] = T::zero();
        };
        before.chunks_exact_mut(w).for_each(eliminate);
        after.chunks_exact_mut(w).for_each(eliminate);
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Runs simplex iterations on the current cost row; columns at or beyond
    /// `limit` never enter.
    fn optimize(&mut self, limit: usize, opts: &SolverOptions) -> Result<Step> {
        let cost = self.cost_row();
        let mut degenerate = 0usize;
        loop {
            if self.pivots >= opts.max_pivots {
                return Err(Error::IterationLimit(opts.max_pivots));
            }
            let bland = degenerate >= opts.degenerate_run;
            let mut enter = None;
            let mut best = -self.tol;
            for j in 0..limit {
                let d = self.at(cost, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = enter else {
                return Ok(Step::Optimal);
            };
            // Two-pass ratio test: bound the step with rhs relaxed by the
            // tolerance, then among rows within that bound take the largest
            // pivot (or, under Bland's rule, the smallest basic index).
            let mut bound: Option<T> = None;
            for i in 0..self.rows {
                let a = self.at(i, q);
                if a > self.tol {
                    let ratio = (self.rhs(i) + self.tol) / a;
                    bound = Some(bound.map_or(ratio, |b: T| b.min(ratio)));
                }
            }
            let mut leave: Option<(usize, T)> = None;
            if let Some(bound) = bound {
                for i in 0..self.rows {
                    let a = self.at(i, q);
                    if a > self.tol && self.rhs(i) / a <= bound {
                        let better = match leave {
                            None => true,
                            Some((r, _)) if bland => self.basis[i] < self.basis[r],
                            Some((r, _)) => {
                                let ar = self.at(r, q);
                                a > ar || (a == ar && self.basis[i] < self.basis[r])
                            }
                        };
                        if better {
                            leave = Some((i, self.rhs(i).max(T::zero()) / a));
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(Step::Unbounded);
            };
            if ratio <= self.tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }

    fn load_costs(&mut self, costs: &[T]) {
        let w = self.width;
        let cost = self.cost_row();
        for j in 0..w {
            let mut d = if j < costs.len() { costs[j] } else { T::zero() };
            for i in 0..self.rows {
                let cb = costs.get(self.basis[i]).copied().unwrap_or_else(T::zero);
                if !cb.is_zero() {
                    d = d - cb * self.at(i, j);
                }
            }
            self.data[cost * w + j] = d;
        }
    }
}

pub fn solve_with<T: LpFloat>(lp: &LinearProgram<T>, opts: SolverOptions) -> Result<LpOutcome<T>> {
    lp.validate()?;
    let zero = T::zero();

    // Column layout for the original variables.
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for b in lp.bounds() {
        let m = match *b {
            Bound { lower: Some(l), upper } => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = upper {
                    bound_rows.push((col, u - l));
                }
                VarMap::Shift { col, shift: l }
            }
            Bound { lower: None, upper: Some(u) } => {
                let col = ncols;
                ncols += 1;
                VarMap::Mirror { col, upper: u }
            }
            Bound { lower: None, upper: None } => {
                ncols += 2;
                VarMap::Split { pos: ncols - 2, neg: ncols - 1 }
            }
        };
        maps.push(m);
    }
    let structural = ncols;

    // Rows over structural columns with non-negative right-hand sides.
    let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::new();
    for c in lp.constraints() {
        let mut coeffs = vec![zero; structural];
        let mut rhs = c.rhs;
        for (a, m) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match *m {
                VarMap::Shift { col, shift } => {
                    coeffs[col] = *a;
                    rhs = rhs - *a * shift;
                }
                VarMap::Mirror { col, upper } => {
                    coeffs[col] = -*a;
                    rhs = rhs - *a * upper;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] = *a;
                    coeffs[neg] = -*a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for &(col, cap) in &bound_rows {
        let mut coeffs = vec![zero; structural];
        coeffs[col] = T::one();
        rows.push((coeffs, Relation::Le, cap));
    }
    for (coeffs, rel, rhs) in &mut rows {
        if *rhs < zero {
            coeffs.iter_mut().for_each(|a| *a = -*a);
            *rhs = -*rhs;
            *rel = match *rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let artificial_start = structural + n_slack;
    let total_cols = artificial_start + n_art;
    let width = total_cols + 1;
    let mut t = Tableau {
        rows: m,
        width,
        data: vec![zero; (m + 1) * width],
        basis: vec![0; m],
        artificial_start,
        pivots: 0,
        tol: T::pivot_tol(),
    };
    let (mut next_slack, mut next_art) = (structural, artificial_start);
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let row = &mut t.data[i * width..(i + 1) * width];
        row[..structural].copy_from_slice(coeffs);
        row[width - 1] = *rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = T::one();
                t.basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -T::one();
                next_slack += 1;
                row[next_art] = T::one();
                t.basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = T::one();
                t.basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    // Phase I: minimise the sum of artificials.
    if n_art > 0 {
        let mut phase1 = vec![zero; total_cols];
        phase1[artificial_start..].iter_mut().for_each(|c| *c = T::one());
        t.load_costs(&phase1);
        t.optimize(total_cols, &opts)?;
        let infeasibility = -t.at(t.cost_row(), width - 1);
        let scale = rows.iter().fold(T::one(), |acc, r| acc.max(r.2));
        if infeasibility > T::from_f64(opts.cert_tol).unwrap() * scale {
            return Ok(outcome(lp, LpStatus::Infeasible, vec![zero; lp.num_vars()], t.pivots));
        }
        // Drive remaining artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= t.artificial_start {
                if let Some(q) = (0..t.artificial_start).find(|&j| t.at(i, j).abs() > t.tol) {
                    t.pivot(i, q);
                }
            }
        }
    }

    // Phase II on the (minimisation form) objective.
    let sign = match lp.direction() {
        Direction::Minimize => T::one(),
        Direction::Maximize => -T::one(),
    };
    let mut costs = vec![zero; total_cols];
    for (c, m) in lp.objective().iter().zip(&maps) {
        let c = *c * sign;
        match *m {
            VarMap::Shift { col, .. } => costs[col] = c,
            VarMap::Mirror { col, .. } => costs[col] = -c,
            VarMap::Split { pos, neg } => {
                costs[pos] = c;
                costs[neg] = -c;
            }
        }
    }
    t.load_costs(&costs);
    let step = t.optimize(t.artificial_start, &opts)?;

    let mut col_vals = vec![zero; total_cols];
    for i in 0..m {
        col_vals[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<T> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, shift } => shift + col_vals[col],
            VarMap::Mirror { col, upper } => upper - col_vals[col],
            VarMap::Split { pos, neg } => col_vals[pos] - col_vals[neg],
        })
        .collect();
    match step {
        Step::Unbounded => Ok(outcome(lp, LpStatus::Unbounded, x, t.pivots)),
        Step::Optimal => {
            let out = outcome(lp, LpStatus::Optimal, x, t.pivots);
            if out.max_violation > opts.cert_tol {
                return Err(Error::Certificate {
                    violation: out.max_violation,
                    tolerance: opts.cert_tol,
                });
            }
            Ok(out)
        }
    }
}

fn outcome<T: LpFloat>(lp: &LinearProgram<T>, status: LpStatus, solution: Vec<T>, pivots: usize) -> LpOutcome<T> {
    let objective = lp
        .objective()
        .iter()
        .zip(&solution)
        .fold(T::zero(), |acc, (c, x)| acc + *c * *x);
    let max_violation = check_certificate(lp, &solution, 0.0).worst_violation;
    LpOutcome {
        status,
        solution,
        objective,
        max_violation,
        pivots,
    }
}
