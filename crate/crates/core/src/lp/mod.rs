//! Exact rational linear programming.
//!
//! [`simplex`] is a two-phase revised simplex over sparse columns with a
//! product-form inverse that is rebuilt periodically. Pricing is Dantzig's
//! rule with a fall-back to Bland's rule while the method stalls, so it
//! terminates and is a deterministic function of the row and column order.
//!
//! [`solve_max_min`] is the canonical max-min solver: it maximises the minimum
//! utility, then among optimal solutions minimises `sum x_v`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{validate_instance, Assignment, MaxMinInstance, Role, VertexId};
use crate::rational::Rational;

use number::Num;

mod number;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `sum coeffs[j].1 * x_{coeffs[j].0}  relation  rhs`. Absent columns are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximise `objective . x` subject to `rows`; `nonnegative[j]` adds `x_j >= 0`,
/// otherwise `x_j` is free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
    pub nonnegative: Vec<bool>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            nonnegative: vec![true; num_vars],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.rows.push(Row { coeffs, relation, rhs });
    }

    fn check_shape(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars || self.nonnegative.len() != self.num_vars {
            return Err(LpError::Shape("objective/nonnegativity width differs from variable count".into()));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
                return Err(LpError::Shape(format!("row {r} references column {j}")));
            }
        }
        Ok(())
    }

    /// Exact check of every row and sign restriction.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let signs = x.iter().zip(&self.nonnegative).all(|(v, nn)| !nn || !v.is_negative());
        signs
            && self.rows.iter().all(|row| {
                let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
                match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Ge => lhs >= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Optimal objective value; `None` unless `status` is `Optimal`.
    pub value: Option<Rational>,
    /// Optimal basic solution; empty unless `status` is `Optimal`.
    pub primal: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Shape(String),
    #[error("max-min program is unbounded: some objective can grow without limit")]
    Unbounded,
    #[error("instance has no objectives")]
    NoObjectives,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

type SparseVec = Vec<(usize, Num)>;

/// One factor of the product-form inverse: the transformed entering column
/// `column` pivoted at position `pos`.
struct Eta {
    pos: usize,
    pivot: Num,
    column: SparseVec,
}

/// Revised simplex over columns `cols` with `B^{-1}` kept as a product of
/// [`Eta`] factors, rebuilt every [`REFACTOR_EVERY`] pivots.
struct Engine<'a> {
    cols: &'a [SparseVec],
    /// The same matrix by rows, for computing a row of `B^{-1} A`.
    rows: Vec<SparseVec>,
    b: Vec<Num>,
    basis: Vec<usize>,
    position: Vec<usize>,
    etas: Vec<Eta>,
    x_b: Vec<Num>,
    pivots: usize,
    since_refactor: usize,
    /// Zeroed scratch space for [`Engine::ftran_sparse`].
    work: Vec<Num>,
}

const REFACTOR_EVERY: usize = 32;
/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
const STALL_LIMIT: usize = 16;

enum Outcome {
    Optimal,
    Unbounded,
}

/// Entry `i` of a sorted sparse vector that is known to be nonzero there.
fn entry(v: &SparseVec, i: usize) -> &Num {
    let k = v.binary_search_by_key(&i, |(j, _)| *j).expect("entry is nonzero");
    &v[k].1
}

impl<'a> Engine<'a> {
    /// Starts from the identity basis `basis[i]` (a `+1` unit column per row).
    fn new(cols: &'a [SparseVec], b: Vec<Num>, basis: Vec<usize>) -> Self {
        let mut position = vec![usize::MAX; cols.len()];
        for (p, &c) in basis.iter().enumerate() {
            position[c] = p;
        }
        let m = b.len();
        let mut rows = vec![Vec::new(); m];
        for (j, col) in cols.iter().enumerate() {
            for (i, a) in col {
                rows[*i].push((j, a.clone()));
            }
        }
        Engine {
            cols,
            rows,
            basis,
            position,
            etas: Vec::new(),
            x_b: b.clone(),
            b,
            pivots: 0,
            since_refactor: 0,
            work: vec![Num::zero(); m],
        }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    /// `a <- B^{-1} a`.
    fn ftran(etas: &[Eta], a: &mut [Num]) {
        for eta in etas {
            if a[eta.pos].is_zero() {
                continue;
            }
            let t = &a[eta.pos] / &eta.pivot;
            for (i, d) in &eta.column {
                if *i != eta.pos {
                    a[*i] -= d * &t;
                }
            }
            a[eta.pos] = t;
        }
    }

    /// `y <- y B^{-1}`.
    fn btran(&self, y: &mut [Num]) {
        for eta in self.etas.iter().rev() {
            let mut s = y[eta.pos].clone();
            for (i, d) in &eta.column {
                if *i != eta.pos && !y[*i].is_zero() {
                    s -= &y[*i] * d;
                }
            }
            y[eta.pos] = s / &eta.pivot;
        }
    }

    /// `B^{-1} A_j` as sorted nonzeros.
    fn column(&mut self, j: usize) -> SparseVec {
        Self::ftran_sparse(&self.etas, &self.cols[j], &mut self.work)
    }

    fn dot(y: &[Num], col: &SparseVec) -> Num {
        col.iter().filter(|(i, _)| !y[*i].is_zero()).map(|(i, a)| &y[*i] * a).sum()
    }

    fn value(&self, costs: &[Num]) -> Num {
        self.basis
            .iter()
            .zip(&self.x_b)
            .filter(|(&c, _)| c < costs.len())
            .map(|(&c, x)| &costs[c] * x)
            .sum()
    }

    /// Replaces the basic column at position `r` by column `j`, whose
    /// transformed column is `d`.
    fn pivot(&mut self, r: usize, j: usize, d: SparseVec) {
        let theta = &self.x_b[r] / entry(&d, r);
        if !theta.is_zero() {
            for (i, v) in &d {
                if *i != r {
                    self.x_b[*i] -= v * &theta;
                }
            }
        }
        self.x_b[r] = theta;
        self.exchange(r, j, d);
    }

    /// Basis bookkeeping of a pivot; leaves `x_b` alone.
    fn exchange(&mut self, r: usize, j: usize, d: SparseVec) {
        self.position[self.basis[r]] = usize::MAX;
        self.basis[r] = j;
        self.position[j] = r;
        self.etas.push(Eta {
            pos: r,
            pivot: entry(&d, r).clone(),
            column: d,
        });
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    /// Freezes column `j` at `value`: its contribution moves into the
    /// right-hand side and, if basic, it is swapped for the first nonbasic
    /// column that keeps the basis nonsingular. The basic solution is
    /// unchanged, so feasibility is kept. Column `j` must not be priced again.
    fn fix_column(&mut self, j: usize, value: &Num) {
        for (i, a) in &self.cols[j] {
            self.b[*i] -= a * value;
        }
        let p = self.position[j];
        if p != usize::MAX {
            let m = self.m();
            let mut row = vec![Num::zero(); m];
            row[p] = Num::one();
            self.btran(&mut row);
            let c = (0..self.cols.len())
                .find(|&c| c != j && self.position[c] == usize::MAX && !Self::dot(&row, &self.cols[c]).is_zero())
                .expect("the slack columns span every row");
            let d = self.column(c);
            self.exchange(p, c, d);
        }
        let mut x = self.b.clone();
        Self::ftran(&self.etas, &mut x);
        self.x_b = x;
    }

    /// `B^{-1} a` for sparse `a`, using `work` (all zero on entry and exit)
    /// as scratch space. Returns the nonzeros in row order.
    fn ftran_sparse(etas: &[Eta], a: &SparseVec, work: &mut [Num]) -> SparseVec {
        let mut pattern: Vec<usize> = a.iter().map(|(i, _)| *i).collect();
        for (i, v) in a {
            work[*i] = v.clone();
        }
        for eta in etas {
            if work[eta.pos].is_zero() {
                continue;
            }
            let t = &work[eta.pos] / &eta.pivot;
            for (i, d) in &eta.column {
                if *i != eta.pos {
                    if work[*i].is_zero() {
                        pattern.push(*i);
                    }
                    work[*i] -= d * &t;
                }
            }
            work[eta.pos] = t;
        }
        pattern.sort_unstable();
        pattern.dedup();
        let mut out = Vec::with_capacity(pattern.len());
        for i in pattern {
            let v = std::mem::take(&mut work[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        out
    }

    /// Rebuilds the eta file from the current basis columns, sparsest first.
    fn refactor(&mut self) {
        let m = self.m();
        let mut order = self.basis.clone();
        order.sort_by_key(|&c| (self.cols[c].len(), c));
        let mut etas: Vec<Eta> = Vec::new();
        let mut assigned = vec![false; m];
        let mut basis = vec![usize::MAX; m];
        let mut work = vec![Num::zero(); m];
        for c in order {
            let a = Self::ftran_sparse(&etas, &self.cols[c], &mut work);
            let (k, (p, pivot)) = a
                .iter()
                .enumerate()
                .filter(|(_, (i, _))| !assigned[*i])
                .min_by_key(|(_, (i, _))| (self.cols[c].iter().all(|(k, _)| k != i), *i))
                .expect("basis matrix is nonsingular");
            let (p, pivot) = (*p, pivot.clone());
            assigned[p] = true;
            basis[p] = c;
            if !(a.len() == 1 && pivot.is_one()) {
                debug_assert_eq!(a[k].0, p);
                etas.push(Eta { pos: p, pivot, column: a });
            }
        }
        for (p, &c) in basis.iter().enumerate() {
            self.position[c] = p;
        }
        self.basis = basis;
        self.etas = etas;
        let mut x = self.b.clone();
        Self::ftran(&self.etas, &mut x);
        self.x_b = x;
        self.since_refactor = 0;
    }

    /// Maximises `costs . x` over columns `< allowed`. Pricing picks the
    /// largest reduced cost, switching to Bland's smallest-index rule after
    /// [`STALL_LIMIT`] degenerate pivots in a row until progress resumes.
    /// Reduced costs are updated from the pivot row rather than recomputed.
    fn optimize(&mut self, costs: &[Num], allowed: usize) -> Outcome {
        let m = self.m();
        let mut y: Vec<Num> = self.basis.iter().map(|&c| costs.get(c).cloned().unwrap_or_default()).collect();
        self.btran(&mut y);
        let mut reduced: Vec<Num> = (0..allowed)
            .map(|j| {
                if self.position[j] == usize::MAX {
                    &costs[j] - Self::dot(&y, &self.cols[j])
                } else {
                    Num::zero()
                }
            })
            .collect();
        let mut alpha: Vec<Num> = vec![Num::zero(); allowed];
        let mut touched: Vec<usize> = Vec::new();
        let mut stalled = 0;
        loop {
            let bland = stalled >= STALL_LIMIT;
            let mut entering: Option<usize> = None;
            for (j, rc) in reduced.iter().enumerate() {
                if !rc.is_positive() {
                    continue;
                }
                if bland {
                    entering = Some(j);
                    break;
                }
                if entering.is_none_or(|best| *rc > reduced[best]) {
                    entering = Some(j);
                }
            }
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let d = self.column(j);
            let mut leaving: Option<(usize, Num)> = None;
            for (p, dp) in &d {
                let p = *p;
                if !dp.is_positive() {
                    continue;
                }
                let ratio = &self.x_b[p] / dp;
                let better = match &leaving {
                    None => true,
                    Some((q, best)) => match ratio.cmp(best) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[p] < self.basis[*q],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leaving = Some((p, ratio));
                }
            }
            let Some((r, theta)) = leaving else {
                return Outcome::Unbounded;
            };
            stalled = if theta.is_zero() { stalled + 1 } else { 0 };

            // Row r of B^{-1} A, restricted to the priced columns.
            let mut rho = vec![Num::zero(); m];
            rho[r] = Num::one();
            self.btran(&mut rho);
            for (i, rho_i) in rho.iter().enumerate() {
                if rho_i.is_zero() {
                    continue;
                }
                for (k, a) in &self.rows[i] {
                    if *k < allowed && self.position[*k] == usize::MAX {
                        if alpha[*k].is_zero() {
                            touched.push(*k);
                        }
                        alpha[*k] = &alpha[*k] + &(rho_i * a);
                    }
                }
            }
            let factor = &reduced[j] / entry(&d, r);
            for &k in &touched {
                if !alpha[k].is_zero() {
                    reduced[k] -= &factor * &alpha[k];
                    alpha[k] = Num::zero();
                }
            }
            touched.clear();
            let leaving_col = self.basis[r];
            if leaving_col < allowed {
                reduced[leaving_col] = -&factor;
            }
            reduced[j] = Num::zero();
            self.pivot(r, j, d);
        }
    }

    /// Pivots basic artificial columns (index `>= first_artificial`) out at
    /// zero level where some other column can replace them. Artificials that
    /// remain sit on redundant rows and never change value again.
    fn drive_out_artificials(&mut self, first_artificial: usize) {
        let m = self.m();
        for p in 0..m {
            if self.basis[p] < first_artificial {
                continue;
            }
            let mut row = vec![Num::zero(); m];
            row[p] = Num::one();
            self.btran(&mut row);
            let replacement = (0..first_artificial)
                .find(|&j| self.position[j] == usize::MAX && !Self::dot(&row, &self.cols[j]).is_zero());
            if let Some(j) = replacement {
                let d = self.column(j);
                self.pivot(p, j, d);
            }
        }
    }
}

/// Solves `lp` exactly. Deterministic given the order of rows and columns.
pub fn simplex(lp: &LinearProgram) -> Result<SolveResult, LpError> {
    lp.check_shape()?;

    // Column layout: structural (free variables split as x+ then x-), then one
    // slack/surplus per inequality row, then one artificial per row that needs it.
    let mut split = Vec::with_capacity(lp.num_vars);
    let mut next = 0;
    for &nn in &lp.nonnegative {
        split.push((next, if nn { None } else { Some(next + 1) }));
        next += if nn { 1 } else { 2 };
    }
    let structural = next;

    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(lp.rows.len());
    let mut rhs = Vec::with_capacity(lp.rows.len());
    let mut relations = Vec::with_capacity(lp.rows.len());
    for row in &lp.rows {
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(row.coeffs.len() * 2);
        for (j, a) in &row.coeffs {
            let (pos, neg) = split[*j];
            entries.push((pos, a.clone()));
            if let Some(neg) = neg {
                entries.push((neg, -a.clone()));
            }
        }
        entries.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (j, a) in entries {
            match merged.last_mut() {
                Some((lj, la)) if *lj == j => *la += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        let mut relation = row.relation;
        let mut b = row.rhs.clone();
        if b.is_negative() {
            for (_, a) in merged.iter_mut() {
                *a = -a.clone();
            }
            b = -b;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push(merged);
        rhs.push(b);
        relations.push(relation);
    }

    let mut next_col = structural;
    let mut basis = vec![usize::MAX; rows.len()];
    for (i, rel) in relations.iter().enumerate() {
        match rel {
            Relation::Le => {
                rows[i].push((next_col, Rational::one()));
                basis[i] = next_col;
                next_col += 1;
            }
            Relation::Ge => {
                rows[i].push((next_col, -Rational::one()));
                next_col += 1;
            }
            Relation::Eq => {}
        }
    }
    let first_artificial = next_col;
    for (i, rel) in relations.iter().enumerate() {
        if *rel != Relation::Le {
            rows[i].push((next_col, Rational::one()));
            basis[i] = next_col;
            next_col += 1;
        }
    }
    let total_cols = next_col;
    let mut cols: Vec<SparseVec> = vec![Vec::new(); total_cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, a) in row {
            cols[*j].push((i, Num::from(a)));
        }
    }
    let rhs: Vec<Num> = rhs.iter().map(Num::from).collect();

    let mut engine = Engine::new(&cols, rhs, basis);
    if first_artificial < total_cols {
        let mut costs = vec![Num::zero(); total_cols];
        for c in costs.iter_mut().skip(first_artificial) {
            *c = -&Num::one();
        }
        engine.optimize(&costs, total_cols);
        if engine.value(&costs).is_negative() {
            return Ok(SolveResult {
                status: Status::Infeasible,
                value: None,
                primal: Vec::new(),
                pivots: engine.pivots,
            });
        }
        engine.drive_out_artificials(first_artificial);
    }

    let mut costs = vec![Num::zero(); first_artificial];
    for (j, c) in lp.objective.iter().enumerate() {
        let (pos, neg) = split[j];
        costs[pos] = Num::from(c);
        if let Some(neg) = neg {
            costs[neg] = Num::from(&-c);
        }
    }
    if let Outcome::Unbounded = engine.optimize(&costs, first_artificial) {
        return Ok(SolveResult {
            status: Status::Unbounded,
            value: None,
            primal: Vec::new(),
            pivots: engine.pivots,
        });
    }

    let mut column_values = vec![Rational::zero(); total_cols];
    for (p, &c) in engine.basis.iter().enumerate() {
        column_values[c] = engine.x_b[p].to_rational();
    }
    let primal = split
        .iter()
        .map(|&(pos, neg)| match neg {
            Some(neg) => &column_values[pos] - &column_values[neg],
            None => column_values[pos].clone(),
        })
        .collect();
    Ok(SolveResult {
        status: Status::Optimal,
        value: Some(engine.value(&costs).to_rational()),
        primal,
        pivots: engine.pivots,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMinSolution {
    pub omega: Rational,
    pub x: Assignment,
    pub pivots: usize,
}

/// The max-min LP with an extra utility variable `omega` in the last column.
/// The canonical optimum of a max-min LP: the maximal minimum utility, and
/// among assignments achieving it, the basic solution minimising `sum x_v`
/// that the deterministic simplex reaches. Columns follow `VertexId` order.
pub fn solve_max_min(inst: &MaxMinInstance) -> Result<MaxMinSolution, LpError> {
    let report = validate_instance(inst);
    if !report.ok() {
        return Err(LpError::InvalidInstance(report.to_string()));
    }
    if inst.objectives().next().is_none() {
        return Err(LpError::NoObjectives);
    }
    let agents: Vec<VertexId> = inst.agents().collect();
    let mut column = vec![usize::MAX; inst.num_vertices()];
    for (j, v) in agents.iter().enumerate() {
        column[v.0] = j;
    }
    let n = agents.len();

    // Columns: agents, one slack per row, omega last. Rows: one per objective
    // (`omega - sum c x <= 0`), then one per constraint (`sum a x <= 1`).
    let hubs: Vec<(VertexId, bool)> = inst
        .objectives()
        .map(|k| (k, true))
        .chain(inst.constraints().map(|i| (i, false)))
        .collect();
    let m = hubs.len();
    let omega_col = n + m;
    let mut cols: Vec<SparseVec> = vec![Vec::new(); n + m + 1];
    let mut rhs = Vec::with_capacity(m);
    for (r, &(hub, is_objective)) in hubs.iter().enumerate() {
        for nb in inst.neighbors_with_role(hub, Role::Agent) {
            let coef = Num::from(nb.coef);
            cols[column[nb.vertex.0]].push((r, if is_objective { -&coef } else { coef }));
        }
        cols[n + r].push((r, Num::one()));
        if is_objective {
            cols[omega_col].push((r, Num::one()));
        }
        rhs.push(if is_objective { Num::zero() } else { Num::one() });
    }
    let mut engine = Engine::new(&cols, rhs, (n..n + m).collect());

    let mut costs = vec![Num::zero(); n + m + 1];
    costs[omega_col] = Num::one();
    if let Outcome::Unbounded = engine.optimize(&costs, n + m + 1) {
        return Err(LpError::Unbounded);
    }
    let omega = engine.value(&costs);

    // Keep omega at its optimum and minimise sum x from the same basis.
    engine.fix_column(omega_col, &omega);
    let mut costs = vec![Num::zero(); n + m];
    for c in costs.iter_mut().take(n) {
        *c = -&Num::one();
    }
    let outcome = engine.optimize(&costs, n + m);
    assert!(matches!(outcome, Outcome::Optimal), "sum x is bounded below");

    let mut values = vec![Rational::zero(); n];
    for (p, &c) in engine.basis.iter().enumerate() {
        if c < n {
            values[c] = engine.x_b[p].to_rational();
        }
    }
    let x = Assignment::from_values(agents.iter().copied().zip(values));
    Ok(MaxMinSolution {
        omega: omega.to_rational(),
        x,
        pivots: engine.pivots,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::tests::sensor;
    use crate::model::{check_feasible, min_utility, IdMode, InstanceBuilder};
    use crate::rational::{int, ratio};

    #[test]
    fn maximize_bounded_by_one() {
        let mut lp = LinearProgram::new(1);
        lp.objective[0] = int(1);
        lp.add_row(vec![(0, int(1))], Relation::Le, int(1));
        let res = simplex(&lp).unwrap();
        assert_eq!(res.status, Status::Optimal);
        assert_eq!(res.value, Some(int(1)));
        assert_eq!(res.primal, vec![int(1)]);
    }

    #[test]
    fn unbounded_without_rows() {
        let mut lp = LinearProgram::new(1);
        lp.objective[0] = int(1);
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(0));
        assert_eq!(simplex(&lp).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![(0, int(1))], Relation::Le, int(1));
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(2));
        assert_eq!(simplex(&lp).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn equalities_free_variables_and_negative_rhs() {
        // max x - y  s.t.  x + y = 1, x - y >= -3, x <= 2 with y free
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(-1)];
        lp.nonnegative[1] = false;
        lp.add_row(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add_row(vec![(0, int(1)), (1, int(-1))], Relation::Ge, int(-3));
        lp.add_row(vec![(0, int(1))], Relation::Le, int(2));
        let res = simplex(&lp).unwrap();
        assert_eq!(res.status, Status::Optimal);
        assert_eq!(res.value, Some(int(3)));
        assert_eq!(res.primal, vec![int(2), int(-1)]);
        assert!(lp.is_feasible(&res.primal));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(2)];
        lp.add_row(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add_row(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(2));
        let res = simplex(&lp).unwrap();
        assert_eq!(res.value, Some(int(2)));
        assert!(lp.is_feasible(&res.primal));
    }

    #[test]
    fn shape_errors() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![(3, int(1))], Relation::Le, int(1));
        assert!(matches!(simplex(&lp), Err(LpError::Shape(_))));
    }

    #[test]
    fn sensor_optimum_is_three_fifths() {
        let (inst, _, _) = sensor();
        let sol = solve_max_min(&inst).unwrap();
        assert_eq!(sol.omega, ratio(3, 5));
        assert!(check_feasible(&inst, &sol.x).is_empty());
        assert_eq!(min_utility(&inst, &sol.x).unwrap(), ratio(3, 5));
    }

    pub(crate) fn star(delta: usize) -> MaxMinInstance {
        let mut b = InstanceBuilder::new();
        let i = b.add_vertex(Role::Constraint);
        for _ in 0..delta {
            let v = b.add_vertex(Role::Agent);
            let k = b.add_vertex(Role::Objective);
            b.connect(v, i, int(1));
            b.connect(v, k, int(1));
        }
        b.build(IdMode::PortNumbering)
    }

    #[test]
    fn star_splits_evenly() {
        for delta in 1..=5 {
            let inst = star(delta);
            let sol = solve_max_min(&inst).unwrap();
            assert_eq!(sol.omega, ratio(1, delta as i64));
            for (_, x) in sol.x.iter() {
                assert_eq!(*x, ratio(1, delta as i64));
            }
        }
    }

    #[test]
    fn free_agent_with_positive_weight_is_unbounded() {
        let mut b = InstanceBuilder::new();
        let v = b.add_vertex(Role::Agent);
        let i = b.add_vertex(Role::Constraint);
        let k = b.add_vertex(Role::Objective);
        b.connect(v, i, int(0));
        b.connect(v, k, int(1));
        assert_eq!(solve_max_min(&b.build(IdMode::PortNumbering)), Err(LpError::Unbounded));
    }

    #[test]
    fn phase_two_pins_down_zero_weight_agents() {
        // Agent w has a = 0 and c = 0: phase 1 leaves it arbitrary, phase 2 sets it to 0.
        let mut b = InstanceBuilder::new();
        let i = b.add_vertex(Role::Constraint);
        let k = b.add_vertex(Role::Objective);
        let v = b.add_vertex(Role::Agent);
        let w = b.add_vertex(Role::Agent);
        b.connect(v, i, int(2));
        b.connect(v, k, int(3));
        b.connect(w, i, int(0));
        b.connect(w, k, int(0));
        let sol = solve_max_min(&b.build(IdMode::PortNumbering)).unwrap();
        assert_eq!(sol.omega, ratio(3, 2));
        assert_eq!(sol.x.get(v), Some(&ratio(1, 2)));
        assert_eq!(sol.x.get(w), Some(&int(0)));
    }
}
