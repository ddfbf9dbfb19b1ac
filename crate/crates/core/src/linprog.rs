//! Exact two-phase simplex over rationals.
//!
//! Dense tableau, Bland's rule for both entering and leaving variables, so
//! every solve terminates without perturbation. Alongside the primal answer
//! each outcome carries a certificate:
//!
//! * optimal: dual multipliers `y` with `yᵀ b` equal to the optimum;
//! * infeasible: Farkas multipliers `y` (sign-compatible with each row's
//!   sense) with `yᵀ A_j ≥ 0` on nonnegative columns, `= 0` on free
//!   columns, and `yᵀ b < 0`;
//! * unbounded: a feasible direction `d` along which the objective grows.

use crate::error::{Error, Result};
use crate::matrix::dot;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

/// `maximize cᵀx` subject to row constraints and per-variable sign bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    senses: Vec<Sense>,
    bounds: Vec<Bound>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational>, dual: Vec<Rational> },
    Infeasible { farkas: Vec<Rational> },
    Unbounded { ray: Vec<Rational> },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }

    pub fn certificate(&self) -> &[Rational] {
        match self {
            LpOutcome::Optimal { dual, .. } => dual,
            LpOutcome::Infeasible { farkas } => farkas,
            LpOutcome::Unbounded { ray } => ray,
        }
    }
}

impl LinearProgram {
    /// Starts a program maximizing `objective` over nonnegative variables
    /// with no constraints.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
            senses: Vec::new(),
            bounds: vec![Bound::NonNegative; n],
        }
    }

    /// Starts a program minimizing `objective`; the outcome's value is the
    /// maximum of `−objective`, so negate it to read the minimum.
    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn new(
        objective: Vec<Rational>,
        rows: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
        senses: Vec<Sense>,
        bounds: Vec<Bound>,
    ) -> Result<Self> {
        let n = objective.len();
        if rows.len() != rhs.len() || rows.len() != senses.len() {
            return Err(Error::Dimension(format!(
                "{} constraint rows, {} right-hand sides, {} senses",
                rows.len(),
                rhs.len(),
                senses.len()
            )));
        }
        if bounds.len() != n {
            return Err(Error::Dimension(format!("{} bounds for {n} variables", bounds.len())));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "constraint row {i} has {} coefficients, expected {n}",
                rows[i].len()
            )));
        }
        Ok(LinearProgram { objective, rows, rhs, senses, bounds })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bounds[var] = Bound::Free;
        self
    }

    /// Adds `row · x (sense) rhs`.
    ///
    /// # Panics
    /// Panics if `row` has the wrong length.
    pub fn constrain(&mut self, row: Vec<Rational>, sense: Sense, rhs: Rational) -> &mut Self {
        assert_eq!(row.len(), self.num_vars(), "constraint width");
        self.rows.push(row);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Exact substitution check of every constraint and bound.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.bounds).all(|(v, b)| *b == Bound::Free || !v.is_negative())
            && self.rows.iter().zip(&self.rhs).zip(&self.senses).all(|((r, b), s)| {
                let lhs = dot(r, x);
                match s {
                    Sense::Le => &lhs <= b,
                    Sense::Eq => &lhs == b,
                    Sense::Ge => &lhs >= b,
                }
            })
    }

    /// Dual feasibility of multipliers `y` for this (max) program: sign
    /// conventions per row sense, and `yᵀA_j ≥ c_j` (`= c_j` for free
    /// variables).
    pub fn is_dual_feasible(&self, y: &[Rational]) -> bool {
        self.multipliers_compatible(y, &self.objective)
    }

    /// Whether `y` proves infeasibility (Farkas alternative).
    pub fn is_farkas_certificate(&self, y: &[Rational]) -> bool {
        let zeros = vec![Rational::ZERO; self.num_vars()];
        self.multipliers_compatible(y, &zeros) && dot(y, &self.rhs).is_negative()
    }

    fn multipliers_compatible(&self, y: &[Rational], c: &[Rational]) -> bool {
        if y.len() != self.num_constraints() {
            return false;
        }
        let signs_ok = y.iter().zip(&self.senses).all(|(v, s)| match s {
            Sense::Le => !v.is_negative(),
            Sense::Ge => !v.is_positive(),
            Sense::Eq => true,
        });
        signs_ok
            && (0..self.num_vars()).all(|j| {
                let col: Rational = self.rows.iter().zip(y).map(|(r, yi)| &r[j] * yi).sum();
                match self.bounds[j] {
                    Bound::NonNegative => col >= c[j],
                    Bound::Free => col == c[j],
                }
            })
    }

    pub fn dual_objective(&self, y: &[Rational]) -> Rational {
        dot(y, &self.rhs)
    }

    pub fn solve(&self) -> LpOutcome {
        solve_lp(self)
    }
}

/// Solves `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    Tableau::build(lp).run(lp)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    /// Column holding the initial identity entry for each row.
    unit_col: Vec<usize>,
    /// `-1` where the row was negated to make its rhs nonnegative.
    flipped: Vec<bool>,
    /// For each original variable, its `(positive, negative)` columns.
    var_cols: Vec<(usize, Option<usize>)>,
    ncols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.num_constraints();
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0;
        for b in &lp.bounds {
            match b {
                Bound::NonNegative => {
                    var_cols.push((ncols, None));
                    ncols += 1;
                }
                Bound::Free => {
                    var_cols.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let nstruct = ncols;

        let mut senses = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        for (b, s) in lp.rhs.iter().zip(&lp.senses) {
            let flip = b.is_negative();
            flipped.push(flip);
            senses.push(match (s, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => *s,
            });
        }
        let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
        let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
        let total = nstruct + n_slack + n_art;

        let mut kinds = vec![ColKind::Structural; nstruct];
        kinds.extend(std::iter::repeat_n(ColKind::Slack, n_slack));
        kinds.extend(std::iter::repeat_n(ColKind::Artificial, n_art));

        let mut t = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (nstruct, nstruct + n_slack);
        for i in 0..m {
            let sign = if flipped[i] { -Rational::ONE } else { Rational::ONE };
            let mut row = vec![Rational::ZERO; total + 1];
            for (j, (pos, neg)) in var_cols.iter().enumerate() {
                let v = &lp.rows[i][j] * &sign;
                if let Some(neg) = neg {
                    row[*neg] = -&v;
                }
                row[*pos] = v;
            }
            row[total] = &lp.rhs[i] * &sign;
            match senses[i] {
                Sense::Le => {
                    row[next_slack] = Rational::ONE;
                    basis.push(next_slack);
                    unit_col.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = -Rational::ONE;
                    next_slack += 1;
                    row[next_art] = Rational::ONE;
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = Rational::ONE;
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
            }
            t.push(row);
        }
        Tableau { t, basis, kinds, unit_col, flipped, var_cols, ncols: total }
    }

    fn pivot(&mut self, obj: &mut [Rational], r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
        }
        self.t[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Reduced-cost row `c_Bᵀ B⁻¹ A − c` with the objective value last.
    fn objective_row(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = (0..self.ncols).map(|j| -&cost[j]).collect();
        obj.push(Rational::ZERO);
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o += &(&cost[b] * v);
                }
            }
        }
        obj
    }

    /// Runs Bland-rule simplex iterations. Returns the entering column that
    /// proved unboundedness, if any.
    fn iterate(&mut self, obj: &mut [Rational], allow: impl Fn(usize) -> bool) -> Option<usize> {
        loop {
            let enter = (0..self.ncols).find(|&j| allow(j) && obj[j].is_negative())?;
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(obj, r, enter),
                None => return Some(enter),
            }
        }
    }

    /// `c_Bᵀ B⁻¹`, read through each row's initial unit column, mapped back
    /// to the caller's row orientation.
    fn multipliers(&self, cost: &[Rational]) -> Vec<Rational> {
        self.unit_col
            .iter()
            .zip(&self.flipped)
            .map(|(&u, &flip)| {
                let y: Rational = self
                    .t
                    .iter()
                    .zip(&self.basis)
                    .filter(|(_, &b)| !cost[b].is_zero())
                    .map(|(row, &b)| &cost[b] * &row[u])
                    .sum();
                if flip {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut vals = vec![Rational::ZERO; self.ncols];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            vals[b] = row[self.ncols].clone();
        }
        vals
    }

    fn to_original(&self, cols: &[Rational]) -> Vec<Rational> {
        self.var_cols
            .iter()
            .map(|(p, n)| match n {
                Some(n) => &cols[*p] - &cols[*n],
                None => cols[*p].clone(),
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let has_artificial = self.kinds.contains(&ColKind::Artificial);
        if has_artificial {
            let phase1: Vec<Rational> = self
                .kinds
                .iter()
                .map(|k| if *k == ColKind::Artificial { -Rational::ONE } else { Rational::ZERO })
                .collect();
            let mut obj = self.objective_row(&phase1);
            let unbounded = self.iterate(&mut obj, |_| true);
            debug_assert!(unbounded.is_none(), "phase one is bounded above by zero");
            if obj[self.ncols].is_negative() {
                return LpOutcome::Infeasible { farkas: self.multipliers(&phase1) };
            }
            // Drive zero-valued artificials out of the basis where possible;
            // rows where that fails are redundant and stay inert.
            for r in 0..self.t.len() {
                if self.kinds[self.basis[r]] != ColKind::Artificial {
                    continue;
                }
                if let Some(c) =
                    (0..self.ncols).find(|&j| self.kinds[j] != ColKind::Artificial && !self.t[r][j].is_zero())
                {
                    let mut scratch = vec![Rational::ZERO; self.ncols + 1];
                    self.pivot(&mut scratch, r, c);
                }
            }
        }

        let mut cost = vec![Rational::ZERO; self.ncols];
        for (j, (p, n)) in self.var_cols.iter().enumerate() {
            cost[*p] = lp.objective[j].clone();
            if let Some(n) = n {
                cost[*n] = -&lp.objective[j];
            }
        }
        let mut obj = self.objective_row(&cost);
        let kinds = self.kinds.clone();
        if let Some(enter) = self.iterate(&mut obj, |j| kinds[j] != ColKind::Artificial) {
            let mut dir = vec![Rational::ZERO; self.ncols];
            dir[enter] = Rational::ONE;
            for (row, &b) in self.t.iter().zip(&self.basis) {
                dir[b] = -&row[enter];
            }
            return LpOutcome::Unbounded { ray: self.to_original(&dir) };
        }
        let solution = self.to_original(&self.column_values());
        let value = lp.objective_value(&solution);
        debug_assert_eq!(value, obj[self.ncols]);
        LpOutcome::Optimal { value, solution, dual: self.multipliers(&cost) }
    }
}
