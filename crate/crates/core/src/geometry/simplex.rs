//! Exact two-phase primal simplex on a dense rational tableau.
//!
//! Problems here are tiny (a handful of convex multipliers, `n + 2` rows),
//! so the tableau is dense and every pivot is exact. Entering and leaving
//! choices follow Bland's lowest-index rule, which rules out cycling, and
//! phase one's terminal dual doubles as the Farkas certificate when the
//! problem is infeasible.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `min objective . x` subject to the rows, over `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct StandardLp {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    /// Farkas dual per input row: the combination `sum_i y_i row_i` has
    /// nonpositive coefficients on every variable yet a positive right-hand
    /// side, with `y_i <= 0` on `<=` rows and `y_i >= 0` on `>=` rows.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    /// `rows + 1` by `cols + 1`; last row is reduced costs, last column rhs.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_structural: usize,
    num_slacks: usize,
    rows: usize,
    cols: usize,
}

impl Tableau {
    fn artificial_col(&self, row: usize) -> usize {
        self.num_structural + self.num_slacks + row
    }

    fn rhs(&self, row: usize) -> &Rational {
        &self.t[row][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for cell in &mut self.t[row] {
            *cell = &*cell * &inv;
        }
        for r in 0..=self.rows {
            if r == row {
                continue;
            }
            let factor = self.t[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..=self.cols {
                if !self.t[row][c].is_zero() {
                    let delta = &factor * &self.t[row][c];
                    self.t[r][c] = &self.t[r][c] - &delta;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: lowest-index entering column with a negative reduced
    /// cost among `enterable`, lowest basic index among the ratio-test ties.
    /// Returns `false` on optimality, `Err` when unbounded.
    fn step(&mut self, enterable: usize) -> Result<bool, ()> {
        let Some(col) = (0..enterable).find(|&j| self.t[self.rows][j].is_negative()) else {
            return Ok(false);
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..self.rows {
            if !self.t[r][col].is_positive() {
                continue;
            }
            let ratio = self.rhs(r) / &self.t[r][col];
            let better = match &leave {
                None => true,
                Some((best, best_ratio)) => {
                    ratio < *best_ratio
                        || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        match leave {
            Some((r, _)) => {
                self.pivot(r, col);
                Ok(true)
            }
            None => Err(()),
        }
    }

    fn objective_value(&self) -> Rational {
        -self.rhs(self.rows).clone()
    }
}

pub(crate) fn solve(lp: &StandardLp) -> LpOutcome {
    debug_assert!(lp.objective.len() == lp.num_vars);
    debug_assert!(lp.rows.iter().all(|r| r.coeffs.len() == lp.num_vars));

    let m = lp.rows.len();
    let n = lp.num_vars;
    let num_slacks = lp
        .rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let cols = n + num_slacks + m;

    // Rows are sign-flipped as needed so every right-hand side starts
    // nonnegative; `negated` undoes the flip in the Farkas vector.
    let mut negated = vec![false; m];
    let mut t = vec![vec![Rational::zero(); cols + 1]; m + 1];
    let mut slack_at = n;
    for (i, row) in lp.rows.iter().enumerate() {
        negated[i] = row.rhs.is_negative();
        let sign = if negated[i] { -Rational::one() } else { Rational::one() };
        for (j, coeff) in row.coeffs.iter().enumerate() {
            t[i][j] = coeff * &sign;
        }
        t[i][cols] = &row.rhs * &sign;
        let slack_dir = match (row.relation, negated[i]) {
            (Relation::Eq, _) => None,
            (Relation::Le, false) | (Relation::Ge, true) => Some(Rational::one()),
            (Relation::Ge, false) | (Relation::Le, true) => Some(-Rational::one()),
        };
        if let Some(dir) = slack_dir {
            t[i][slack_at] = dir;
            slack_at += 1;
        }
        t[i][n + num_slacks + i] = Rational::one();
    }

    // Phase-one cost row: artificials cost one, everything else zero, and
    // the artificial basis makes the reduced cost of column j equal to
    // c_j minus the column sum.
    for j in 0..=cols {
        let mut sum = Rational::zero();
        for i in 0..m {
            sum += &t[i][j];
        }
        let cost = if (n + num_slacks..cols).contains(&j) {
            Rational::one()
        } else {
            Rational::zero()
        };
        t[m][j] = cost - sum;
    }

    let mut tab = Tableau {
        t,
        basis: (n + num_slacks..cols).collect(),
        num_structural: n,
        num_slacks,
        rows: m,
        cols,
    };

    // Phase one is bounded below by zero, so it cannot be unbounded.
    while tab.step(cols).expect("phase one cannot be unbounded") {}

    if tab.objective_value().is_positive() {
        let farkas = (0..m)
            .map(|i| {
                let reduced = &tab.t[m][tab.artificial_col(i)];
                let y = Rational::one() - reduced;
                if negated[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return LpOutcome::Infeasible { farkas };
    }

    // Drive leftover artificials out of the basis; rows that cannot be
    // pivoted are redundant and their artificial stays parked at zero.
    let first_artificial = n + num_slacks;
    for r in 0..m {
        if tab.basis[r] >= first_artificial {
            if let Some(j) = (0..first_artificial).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    // Phase-two cost row: express the real objective in the current basis.
    for j in 0..=cols {
        let mut reduced = if j < n {
            lp.objective[j].clone()
        } else {
            Rational::zero()
        };
        for r in 0..m {
            let basic = tab.basis[r];
            if basic < n && !lp.objective[basic].is_zero() {
                let delta = &lp.objective[basic] * &tab.t[r][j];
                reduced = &reduced - &delta;
            }
        }
        tab.t[m][j] = reduced;
    }

    loop {
        match tab.step(first_artificial) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return LpOutcome::Unbounded,
        }
    }

    let mut x = vec![Rational::zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r).clone();
        }
    }
    let value = tab.objective_value();
    LpOutcome::Optimal { x, value }
}
