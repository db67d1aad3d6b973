//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Problems are brought to standard form `min cᵀy, T y = r, y ≥ 0` by
//! shifting/reflecting bounded variables, splitting free ones, turning finite
//! upper bounds into rows, and adding slack, surplus and artificial columns.

use serde::{Deserialize, Serialize};

use super::instance::{LpConstraints, Sense};
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Infeasible => "infeasible",
        })
    }
}

/// Result of a single-objective LP solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: SolveStatus,
    /// Optimal point in the original variables; empty unless optimal.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Phase-two reduced costs of the standard-form columns at termination.
    pub reduced_costs: Vec<f64>,
    pub pivots: usize,
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + y[col]
    Shift { col: usize, offset: f64 },
    /// x = offset − y[col]
    Reflect { col: usize, offset: f64 },
    /// x = y[pos] − y[neg]
    Split { pos: usize, neg: usize },
}

struct Tableau {
    /// m rows of width `cols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, same width; last entry is −(objective value).
    z: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pv = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= pv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        let f = self.z[c];
        if f != 0.0 {
            for (v, p) in self.z.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            self.z[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Load cost vector `cost` (length `cols`) and price out the basis.
    fn set_costs(&mut self, cost: &[f64]) {
        self.z = cost.to_vec();
        self.z.push(0.0);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (v, t) in self.z.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * t;
                }
            }
        }
    }

    /// Bland's rule iterations over columns `< allowed`. Returns false if unbounded.
    fn optimise(&mut self, allowed: usize, pivots: &mut usize, cap: usize) -> Result<bool> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.z[j] < -PIVOT_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            if *pivots >= cap {
                return Err(Error::SolverStalled { pivots: *pivots });
            }
            self.pivot(r, enter);
            *pivots += 1;
        }
    }
}

/// Minimise `costᵀx` over the polyhedron described by `lp`.
pub fn solve_linear(cost: &[f64], lp: &LpConstraints) -> Result<LpOutcome> {
    let n = cost.len();
    if lp.a.iter().any(|row| row.len() != n) {
        return Err(Error::dim("constraint width differs from cost length"));
    }

    // Columns for the original variables and bound rows.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    // (col, upper) rows: y[col] ≤ upper
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let bd = lp.bound(j);
        let map = match (bd.lower(), bd.upper()) {
            (Some(lo), hi) => {
                let col = ncols;
                ncols += 1;
                if let Some(hi) = hi {
                    bound_rows.push((col, hi - lo));
                }
                VarMap::Shift { col, offset: lo }
            }
            (None, Some(hi)) => {
                let col = ncols;
                ncols += 1;
                VarMap::Reflect { col, offset: hi }
            }
            (None, None) => {
                let pos = ncols;
                ncols += 2;
                VarMap::Split { pos, neg: pos + 1 }
            }
        };
        maps.push(map);
    }
    let nstruct = ncols;

    // Structural rows in y-space.
    struct Row {
        coef: Vec<f64>,
        sense: Sense,
        rhs: f64,
    }
    let mut rows: Vec<Row> = Vec::with_capacity(lp.rows() + bound_rows.len());
    for (i, arow) in lp.a.iter().enumerate() {
        let mut coef = vec![0.0; nstruct];
        let mut rhs = lp.b[i];
        for (j, &aij) in arow.iter().enumerate() {
            match maps[j] {
                VarMap::Shift { col, offset } => {
                    coef[col] += aij;
                    rhs -= aij * offset;
                }
                VarMap::Reflect { col, offset } => {
                    coef[col] -= aij;
                    rhs -= aij * offset;
                }
                VarMap::Split { pos, neg } => {
                    coef[pos] += aij;
                    coef[neg] -= aij;
                }
            }
        }
        rows.push(Row {
            coef,
            sense: lp.sense[i],
            rhs,
        });
    }
    for &(col, ub) in &bound_rows {
        let mut coef = vec![0.0; nstruct];
        coef[col] = 1.0;
        rows.push(Row {
            coef,
            sense: Sense::Le,
            rhs: ub,
        });
    }
    for row in rows.iter_mut() {
        if row.rhs < 0.0 {
            row.rhs = -row.rhs;
            row.coef.iter_mut().for_each(|c| *c = -*c);
            row.sense = match row.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    // Slack / surplus columns, then artificials.
    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let nart = rows.iter().filter(|r| r.sense != Sense::Le).count();
    let first_art = nstruct + nslack;
    let cols = first_art + nart;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        z: Vec::new(),
        basis: Vec::with_capacity(m),
        cols,
    };
    let (mut next_slack, mut next_art) = (nstruct, first_art);
    for row in &rows {
        let mut t = vec![0.0; cols + 1];
        t[..nstruct].copy_from_slice(&row.coef);
        t[cols] = row.rhs;
        match row.sense {
            Sense::Le => {
                t[next_slack] = 1.0;
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                t[next_slack] = -1.0;
                next_slack += 1;
                t[next_art] = 1.0;
                tab.basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                t[next_art] = 1.0;
                tab.basis.push(next_art);
                next_art += 1;
            }
        }
        tab.rows.push(t);
    }

    let cap = 10 * (cols + m).pow(2).max(1);
    let mut pivots = 0usize;

    // Phase one: minimise the sum of artificials.
    if nart > 0 {
        let mut c1 = vec![0.0; cols];
        c1[first_art..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_costs(&c1);
        tab.optimise(cols, &mut pivots, cap)?;
        let infeas = -tab.z[cols];
        let scale = 1.0 + rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeas > FEAS_TOL * scale {
            return Ok(LpOutcome {
                status: SolveStatus::Infeasible,
                x: Vec::new(),
                objective: f64::NAN,
                reduced_costs: Vec::new(),
                pivots,
            });
        }
        // Drive zero-level artificials out of the basis or drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL) {
                    Some(j) => {
                        tab.pivot(i, j);
                        pivots += 1;
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase two over structural and slack columns only.
    let mut c2 = vec![0.0; cols];
    let mut const_term = 0.0;
    for (j, map) in maps.iter().enumerate() {
        match *map {
            VarMap::Shift { col, offset } => {
                c2[col] = cost[j];
                const_term += cost[j] * offset;
            }
            VarMap::Reflect { col, offset } => {
                c2[col] = -cost[j];
                const_term += cost[j] * offset;
            }
            VarMap::Split { pos, neg } => {
                c2[pos] = cost[j];
                c2[neg] = -cost[j];
            }
        }
    }
    tab.set_costs(&c2);
    let bounded = tab.optimise(first_art, &mut pivots, cap)?;
    if !bounded {
        return Ok(LpOutcome {
            status: SolveStatus::Unbounded,
            x: Vec::new(),
            objective: f64::NEG_INFINITY,
            reduced_costs: tab.z[..first_art].to_vec(),
            pivots,
        });
    }

    let mut y = vec![0.0; cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rhs(i);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, offset } => offset + y[col],
            VarMap::Reflect { col, offset } => offset - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect();
    let objective = cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
    debug_assert!((objective - (const_term - tab.z[cols])).abs() <= 1e-6 * (1.0 + objective.abs()));

    Ok(LpOutcome {
        status: SolveStatus::Optimal,
        x,
        objective,
        reduced_costs: tab.z[..first_art].to_vec(),
        pivots,
    })
}
