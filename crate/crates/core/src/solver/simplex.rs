//! Dense tableau primal simplex with bounded variables.
//!
//! Columns are shifted (or reflected, or split when free) so every internal variable lives in
//! `[0, u]`, `u` possibly infinite. Inequality rows get a slack, rows are equilibrated and
//! sign-normalised so the right-hand side is non-negative, and an artificial is added wherever
//! the slack cannot start basic. Phase one drives the artificials to zero, phase two optimises.
//!
//! Pricing is Dantzig's largest reduced cost; after `bland_after` consecutive degenerate pivots
//! it switches to Bland's lowest-index rule until the objective moves again.

use super::{Result, SolverError, SolverOptions};
use crate::model::{MilpProblem, Relation};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Primal values per problem column; empty unless optimal.
    pub x: Vec<T>,
    /// `cᵀx`; meaningful only when optimal.
    pub objective: T,
    /// Pivots plus bound flips over both phases.
    pub iterations: usize,
}

impl<T: Scalar> LpSolution<T> {
    fn terminal(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            x: Vec::new(),
            objective: T::nan(),
            iterations,
        }
    }
}

/// Solves the continuous relaxation of `problem` (integrality marks are ignored).
pub fn solve_lp<T: Scalar>(
    problem: &MilpProblem<T>,
    options: &SolverOptions<T>,
) -> Result<LpSolution<T>> {
    solve_lp_with_bounds(problem, problem.lower(), problem.upper(), options)
}

/// Solves the relaxation of `problem` with its column bounds replaced by `lower`/`upper`.
pub fn solve_lp_with_bounds<T: Scalar>(
    problem: &MilpProblem<T>,
    lower: &[T],
    upper: &[T],
    options: &SolverOptions<T>,
) -> Result<LpSolution<T>> {
    let Some(standard) = StandardForm::build(problem, lower, upper, options) else {
        return Ok(LpSolution::terminal(LpStatus::Infeasible, 0));
    };
    let mut tab = Tableau::new(&standard, options);

    if standard.num_artificial > 0 {
        tab.set_phase_one_costs(&standard);
        tab.iterate()?;
        tab.recompute_basic_values();
        let infeasibility: T = (0..tab.m)
            .filter(|&i| standard.is_artificial(tab.basis[i]))
            .map(|i| tab.x_b[i].max(T::zero()))
            .sum();
        let rhs_scale = standard.b.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
        if infeasibility > options.feasibility_tol * rhs_scale {
            return Ok(LpSolution::terminal(LpStatus::Infeasible, tab.iterations));
        }
        tab.retire_artificials(&standard);
    }

    tab.set_costs(&standard.cost);
    if tab.iterate()? == Termination::Unbounded {
        return Ok(LpSolution::terminal(LpStatus::Unbounded, tab.iterations));
    }
    tab.recompute_basic_values();

    let x = standard.recover(&tab, lower, upper);
    let residual = relative_residual(problem, &x);
    if residual > options.feasibility_tol * T::lit(1e3) {
        return Err(SolverError::NumericalTrouble(residual.to_f64_lossy()));
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: problem.objective_value(&x),
        x,
        iterations: tab.iterations,
    })
}

fn relative_residual<T: Scalar>(problem: &MilpProblem<T>, x: &[T]) -> T {
    problem
        .rows()
        .iter()
        .map(|row| {
            let scale = row
                .coeffs
                .iter()
                .fold(T::one().max(row.rhs.abs()), |acc, &(j, a)| {
                    acc.max((a * x[j]).abs())
                });
            row.violation(x) / scale
        })
        .fold(T::zero(), T::max)
}

/// `x_orig = offset + Σ sign·y` over the internal columns of one problem column.
struct ColumnMap<T> {
    offset: T,
    parts: Vec<(usize, T)>,
}

struct StandardForm<T> {
    m: usize,
    ncols: usize,
    num_structural: usize,
    num_artificial: usize,
    /// Row-major `m × ncols`, equilibrated and sign-normalised.
    a: Vec<T>,
    b: Vec<T>,
    upper: Vec<T>,
    /// Phase-two costs, normalised to unit max magnitude.
    cost: Vec<T>,
    initial_basis: Vec<usize>,
    columns: Vec<ColumnMap<T>>,
    /// Structural column `k` holds `y_k / col_scale[k]`.
    col_scale: Vec<T>,
}

impl<T: Scalar> StandardForm<T> {
    /// Returns `None` when the bounds or an empty row are already contradictory.
    fn build(
        problem: &MilpProblem<T>,
        lower: &[T],
        upper: &[T],
        options: &SolverOptions<T>,
    ) -> Option<Self> {
        let zero = T::zero();
        let one = T::one();
        let inf = T::infinity();
        let tol = options.feasibility_tol;

        let mut columns = Vec::with_capacity(problem.num_columns());
        let mut struct_upper = Vec::new();
        let mut struct_cost = Vec::new();
        for (j, &c) in problem.objective().iter().enumerate() {
            let (l, mut u) = (lower[j], upper[j]);
            if l > u {
                if l - u > tol * one.max(l.abs()) {
                    return None;
                }
                u = l;
            }
            let mut push = |sign: T, ub: T| {
                struct_upper.push(ub);
                struct_cost.push(c * sign);
                (struct_upper.len() - 1, sign)
            };
            let map = if l.is_finite() {
                ColumnMap {
                    offset: l,
                    parts: vec![push(one, u - l)],
                }
            } else if u.is_finite() {
                ColumnMap {
                    offset: u,
                    parts: vec![push(-one, inf)],
                }
            } else {
                ColumnMap {
                    offset: zero,
                    parts: vec![push(one, inf), push(-one, inf)],
                }
            };
            columns.push(map);
        }
        let ns = struct_upper.len();

        struct Pending<T> {
            coeffs: Vec<T>,
            rhs: T,
            slack: T,
        }
        let mut rows: Vec<Pending<T>> = Vec::new();
        for row in problem.rows() {
            let mut coeffs = vec![zero; ns];
            let mut rhs = row.rhs;
            for &(j, a) in &row.coeffs {
                rhs -= a * columns[j].offset;
                for &(k, sign) in &columns[j].parts {
                    coeffs[k] += a * sign;
                }
            }
            let scale = coeffs.iter().fold(zero, |acc, v| acc.max(v.abs()));
            if scale.is_zero() {
                let ok = match row.relation {
                    Relation::Eq => rhs.abs() <= tol * one.max(row.rhs.abs()),
                    Relation::Le => rhs >= -tol * one.max(row.rhs.abs()),
                    Relation::Ge => rhs <= tol * one.max(row.rhs.abs()),
                };
                if !ok {
                    return None;
                }
                continue;
            }
            let slack = match row.relation {
                Relation::Eq => zero,
                Relation::Le => one,
                Relation::Ge => -one,
            };
            rows.push(Pending { coeffs, rhs, slack });
        }

        // Alternate row and column equilibration with power-of-two factors, which are exact.
        let pow2_recip = |v: T| T::lit(2.0).powi(-v.log2().round().to_i32().unwrap_or(0));
        let mut col_scale = vec![one; ns];
        for pass in 0..=SCALING_PASSES {
            for r in &mut rows {
                let f = pow2_recip(r.coeffs.iter().fold(zero, |acc, v| acc.max(v.abs())));
                r.coeffs.iter_mut().for_each(|v| *v *= f);
                r.rhs *= f;
            }
            if pass == SCALING_PASSES {
                break;
            }
            for (k, scale) in col_scale.iter_mut().enumerate() {
                let mx = rows.iter().fold(zero, |acc, r| acc.max(r.coeffs[k].abs()));
                if mx.is_zero() {
                    continue;
                }
                let f = pow2_recip(mx);
                rows.iter_mut().for_each(|r| r.coeffs[k] *= f);
                *scale *= f;
            }
        }

        let m = rows.len();
        let num_slack = rows.iter().filter(|r| !r.slack.is_zero()).count();
        // Sign-normalise so the rhs is >= 0; a +1 slack can then start basic.
        for r in &mut rows {
            if r.rhs < zero {
                r.coeffs.iter_mut().for_each(|v| *v = -*v);
                r.rhs = -r.rhs;
                r.slack = -r.slack;
            }
        }
        let num_artificial = rows.iter().filter(|r| r.slack != one).count();
        let ncols = ns + num_slack + num_artificial;

        let mut a = vec![zero; m * ncols];
        let mut b = Vec::with_capacity(m);
        let mut initial_basis = Vec::with_capacity(m);
        let mut upper: Vec<T> = struct_upper
            .iter()
            .zip(&col_scale)
            .map(|(&u, &f)| u / f)
            .collect();
        upper.extend(std::iter::repeat_n(inf, num_slack + num_artificial));
        let mut next_slack = ns;
        let mut next_art = ns + num_slack;
        for (i, r) in rows.iter().enumerate() {
            let row = &mut a[i * ncols..(i + 1) * ncols];
            row[..ns].copy_from_slice(&r.coeffs);
            if !r.slack.is_zero() {
                row[next_slack] = r.slack;
                if r.slack == one {
                    initial_basis.push(next_slack);
                }
                next_slack += 1;
            }
            if r.slack != one {
                row[next_art] = one;
                initial_basis.push(next_art);
                next_art += 1;
            }
            b.push(r.rhs);
        }

        let struct_cost: Vec<T> = struct_cost
            .iter()
            .zip(&col_scale)
            .map(|(&c, &f)| c * f)
            .collect();
        let cmax = struct_cost.iter().fold(zero, |acc, v| acc.max(v.abs()));
        let mut cost = vec![zero; ncols];
        for (k, &c) in struct_cost.iter().enumerate() {
            cost[k] = if cmax.is_zero() { c } else { c / cmax };
        }

        Some(Self {
            m,
            ncols,
            num_structural: ns,
            num_artificial,
            a,
            b,
            upper,
            cost,
            initial_basis,
            columns,
            col_scale,
        })
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.ncols - self.num_artificial
    }

    fn recover(&self, tab: &Tableau<'_, T>, lower: &[T], upper: &[T]) -> Vec<T> {
        self.columns
            .iter()
            .enumerate()
            .map(|(j, map)| {
                let v = map.parts.iter().fold(map.offset, |acc, &(k, sign)| {
                    acc + sign * self.col_scale[k] * tab.value(k)
                });
                let v = if lower[j].is_finite() {
                    v.max(lower[j])
                } else {
                    v
                };
                if upper[j].is_finite() {
                    v.min(upper[j].max(lower[j]))
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Termination {
    Optimal,
    Unbounded,
}

const NOT_BASIC: usize = usize::MAX;

const SCALING_PASSES: usize = 4;

/// Pivots between full recomputations of basic values and reduced costs.
const REFRESH_INTERVAL: usize = 64;

struct Tableau<'a, T> {
    m: usize,
    ncols: usize,
    a: Vec<T>,
    orig: &'a [T],
    b: &'a [T],
    x_b: Vec<T>,
    basis: Vec<usize>,
    initial_basis: &'a [usize],
    row_of: Vec<usize>,
    state: Vec<State>,
    upper: Vec<T>,
    cost: Vec<T>,
    d: Vec<T>,
    opts: &'a SolverOptions<T>,
    iterations: usize,
}

impl<'a, T: Scalar> Tableau<'a, T> {
    fn new(sf: &'a StandardForm<T>, opts: &'a SolverOptions<T>) -> Self {
        let mut row_of = vec![NOT_BASIC; sf.ncols];
        let mut state = vec![State::Lower; sf.ncols];
        for (i, &j) in sf.initial_basis.iter().enumerate() {
            row_of[j] = i;
            state[j] = State::Basic;
        }
        Self {
            m: sf.m,
            ncols: sf.ncols,
            a: sf.a.clone(),
            orig: &sf.a,
            b: &sf.b,
            x_b: sf.b.clone(),
            basis: sf.initial_basis.clone(),
            initial_basis: &sf.initial_basis,
            row_of,
            state,
            upper: sf.upper.clone(),
            cost: vec![T::zero(); sf.ncols],
            d: vec![T::zero(); sf.ncols],
            opts,
            iterations: 0,
        }
    }

    fn at(&self, i: usize, j: usize) -> T {
        self.a[i * self.ncols + j]
    }

    fn value(&self, j: usize) -> T {
        match self.state[j] {
            State::Basic => self.x_b[self.row_of[j]],
            State::Lower => T::zero(),
            State::Upper => self.upper[j],
        }
    }

    fn set_phase_one_costs(&mut self, sf: &StandardForm<T>) {
        let costs: Vec<T> = (0..self.ncols)
            .map(|j| {
                if sf.is_artificial(j) {
                    T::one()
                } else {
                    T::zero()
                }
            })
            .collect();
        self.set_costs(&costs);
    }

    fn set_costs(&mut self, costs: &[T]) {
        self.cost.copy_from_slice(costs);
        self.recompute_reduced_costs();
    }

    fn recompute_reduced_costs(&mut self) {
        for j in 0..self.ncols {
            self.d[j] = if self.state[j] == State::Basic {
                T::zero()
            } else {
                let mut v = self.cost[j];
                for i in 0..self.m {
                    let a = self.at(i, j);
                    if !a.is_zero() {
                        v -= self.cost[self.basis[i]] * a;
                    }
                }
                v
            };
        }
    }

    /// `x_B = B⁻¹ (b − Σ_{j at upper} A_j u_j)`; the columns of the initial (identity) basis hold
    /// `B⁻¹` in the current tableau.
    fn recompute_basic_values(&mut self) {
        let mut rhs = self.b.to_vec();
        for j in 0..self.ncols {
            if self.state[j] == State::Upper {
                let u = self.upper[j];
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= self.orig[i * self.ncols + j] * u;
                }
            }
        }
        for k in 0..self.m {
            let mut v = T::zero();
            for (i, &col) in self.initial_basis.iter().enumerate() {
                let binv = self.at(k, col);
                if !binv.is_zero() {
                    v += binv * rhs[i];
                }
            }
            self.x_b[k] = v;
        }
    }

    /// Chooses an entering column and its direction (+1 up from lower, −1 down from upper).
    fn price(&self, bland: bool) -> Option<(usize, T)> {
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, T, T)> = None;
        for j in 0..self.ncols {
            let dir = match self.state[j] {
                State::Basic => continue,
                State::Lower if self.upper[j] > T::zero() && self.d[j] < -tol => T::one(),
                State::Upper if self.d[j] > tol => -T::one(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let score = self.d[j].abs();
            if best.is_none_or(|(_, _, s)| score > s) {
                best = Some((j, dir, score));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn iterate(&mut self) -> Result<Termination> {
        let mut stalled = 0usize;
        let mut bland = false;
        let mut since_refresh = 0usize;
        loop {
            if self.iterations >= self.opts.max_pivots {
                return Err(SolverError::IterationLimit(self.opts.max_pivots));
            }
            if since_refresh >= REFRESH_INTERVAL {
                self.recompute_basic_values();
                self.recompute_reduced_costs();
                since_refresh = 0;
            }
            let Some((j, dir)) = self.price(bland) else {
                return Ok(Termination::Optimal);
            };
            let step = self.ratio_test(j, dir, bland)?;
            let Some((theta, leaving)) = step else {
                return Ok(Termination::Unbounded);
            };

            let zero = T::zero();
            if theta > zero {
                for i in 0..self.m {
                    let alpha = self.at(i, j);
                    if !alpha.is_zero() {
                        self.x_b[i] -= alpha * dir * theta;
                    }
                }
            }
            match leaving {
                None => {
                    self.state[j] = if self.state[j] == State::Lower {
                        State::Upper
                    } else {
                        State::Lower
                    };
                }
                Some((r, to)) => {
                    let start = if self.state[j] == State::Lower {
                        zero
                    } else {
                        self.upper[j]
                    };
                    self.pivot(r, j);
                    let out = self.basis[r];
                    self.state[out] = to;
                    self.row_of[out] = NOT_BASIC;
                    self.basis[r] = j;
                    self.state[j] = State::Basic;
                    self.row_of[j] = r;
                    self.x_b[r] = start + dir * theta;
                }
            }
            self.iterations += 1;
            since_refresh += 1;

            if theta <= self.opts.pivot_tol {
                stalled += 1;
                if stalled > self.opts.bland_after {
                    bland = true;
                }
            } else {
                stalled = 0;
                bland = false;
            }
        }
    }

    /// Returns the step length and the leaving row with the bound it leaves at (`None` for a
    /// bound flip of the entering column), or `None` when the ray is unbounded.
    ///
    /// Dantzig mode uses a two-pass Harris test: bounds relaxed by the feasibility tolerance cap
    /// the step, and among rows blocking within that cap the largest pivot wins. Bland mode
    /// takes the exact minimum ratio with the lowest basic index on ties.
    #[allow(clippy::type_complexity)]
    fn ratio_test(
        &self,
        j: usize,
        dir: T,
        bland: bool,
    ) -> Result<Option<(T, Option<(usize, State)>)>> {
        let zero = T::zero();
        let piv_tol = self.opts.pivot_tol;
        let delta = self.opts.feasibility_tol;
        let mut tiny: Option<(usize, T)> = None;
        // (row, |alpha|, exact ratio, relaxed ratio, bound reached)
        let mut blocking: Vec<(usize, T, T, T, State)> = Vec::new();

        for i in 0..self.m {
            let alpha = self.at(i, j) * dir;
            if alpha.abs() <= piv_tol {
                if alpha.abs() > T::epsilon() {
                    tiny = Some((i, alpha));
                }
                continue;
            }
            let bi = self.basis[i];
            if alpha > zero {
                let x = self.x_b[i];
                blocking.push((
                    i,
                    alpha,
                    x.max(zero) / alpha,
                    (x + delta).max(zero) / alpha,
                    State::Lower,
                ));
            } else {
                let u = self.upper[bi];
                if !u.is_finite() {
                    continue;
                }
                let room = u - self.x_b[i];
                blocking.push((
                    i,
                    -alpha,
                    room.max(zero) / -alpha,
                    (room + delta).max(zero) / -alpha,
                    State::Upper,
                ));
            }
        }

        let flip = self.upper[j];
        if blocking.is_empty() {
            if flip.is_finite() {
                return Ok(Some((flip, None)));
            }
            if let Some((row, value)) = tiny {
                return Err(SolverError::PivotTolerance {
                    row,
                    column: j,
                    value: value.to_f64_lossy(),
                });
            }
            return Ok(None);
        }

        if bland {
            let mut best = flip;
            let mut leaving = None;
            for &(i, _, ratio, _, to) in &blocking {
                let tie_eps = T::lit(1e-12) * T::one().max(ratio);
                let take = if !best.is_finite() || ratio < best - tie_eps {
                    true
                } else if ratio <= best + tie_eps {
                    matches!(leaving, Some((r, _)) if self.basis[i] < self.basis[r])
                } else {
                    false
                };
                if take {
                    best = ratio;
                    leaving = Some((i, to));
                }
            }
            return Ok(Some((best, leaving)));
        }

        let cap = blocking.iter().fold(T::infinity(), |acc, b| acc.min(b.3));
        if flip <= cap {
            return Ok(Some((flip, None)));
        }
        let mut chosen: Option<(usize, T, T, State)> = None;
        for &(i, alpha, ratio, _, to) in &blocking {
            if ratio <= cap && chosen.is_none_or(|(_, a, _, _)| alpha > a) {
                chosen = Some((i, alpha, ratio, to));
            }
        }
        let (i, _, ratio, to) = chosen.expect("the row attaining the cap blocks within it");
        Ok(Some((ratio, Some((i, to)))))
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let nc = self.ncols;
        let piv = self.at(r, j);
        let mut nz = Vec::new();
        for k in 0..nc {
            let v = &mut self.a[r * nc + k];
            if !v.is_zero() {
                *v /= piv;
                nz.push(k);
            }
        }
        self.a[r * nc + j] = T::one();
        let cleanup = T::epsilon() * T::lit(16.0);
        let (before, rest) = self.a.split_at_mut(r * nc);
        let (pivot_row, after) = rest.split_at_mut(nc);
        for row in before.chunks_mut(nc).chain(after.chunks_mut(nc)) {
            let f = row[j];
            if f.is_zero() {
                continue;
            }
            for &k in &nz {
                let v = row[k] - f * pivot_row[k];
                row[k] = if v.abs() < cleanup { T::zero() } else { v };
            }
            row[j] = T::zero();
        }
        let f = self.d[j];
        if !f.is_zero() {
            for &k in &nz {
                self.d[k] -= f * pivot_row[k];
            }
            self.d[j] = T::zero();
        }
    }

    /// Pivots zero-valued artificials out of the basis where possible and fixes every artificial
    /// at zero for phase two.
    fn retire_artificials(&mut self, sf: &StandardForm<T>) {
        let first_art = sf.ncols - sf.num_artificial;
        for r in 0..self.m {
            if !sf.is_artificial(self.basis[r]) {
                continue;
            }
            let candidate = (0..first_art)
                .filter(|&k| self.state[k] != State::Basic)
                .max_by(|&p, &q| {
                    self.at(r, p)
                        .abs()
                        .partial_cmp(&self.at(r, q).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(q.cmp(&p))
                });
            if let Some(k) = candidate.filter(|&k| self.at(r, k).abs() > self.opts.pivot_tol) {
                let value = self.value(k);
                self.pivot(r, k);
                let out = self.basis[r];
                self.state[out] = State::Lower;
                self.row_of[out] = NOT_BASIC;
                self.basis[r] = k;
                self.state[k] = State::Basic;
                self.row_of[k] = r;
                self.x_b[r] = value;
            }
        }
        for j in first_art..sf.ncols {
            self.upper[j] = T::zero();
        }
        self.recompute_basic_values();
        let _ = sf.num_structural;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VarKind;

    fn textbook() -> MilpProblem<f64> {
        let mut p = MilpProblem::new();
        let x = p
            .add_column("x", VarKind::Continuous, 0.0, f64::INFINITY, -3.0)
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, 0.0, f64::INFINITY, -5.0)
            .unwrap();
        p.add_row("a", vec![(x, 1.0)], Relation::Le, 4.0).unwrap();
        p.add_row("b", vec![(y, 2.0)], Relation::Le, 12.0).unwrap();
        p.add_row("c", vec![(x, 3.0), (y, 2.0)], Relation::Le, 18.0)
            .unwrap();
        p
    }

    #[test]
    fn textbook_instance() {
        let s = solve_lp(&textbook(), &SolverOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn textbook_instance_f32() {
        let mut p = MilpProblem::<f32>::new();
        let x = p
            .add_column("x", VarKind::Continuous, 0.0, f32::INFINITY, -3.0)
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, 0.0, f32::INFINITY, -5.0)
            .unwrap();
        p.add_row("a", vec![(x, 1.0)], Relation::Le, 4.0).unwrap();
        p.add_row("b", vec![(y, 2.0)], Relation::Le, 12.0).unwrap();
        p.add_row("c", vec![(x, 3.0), (y, 2.0)], Relation::Le, 18.0)
            .unwrap();
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-3);
    }

    #[test]
    fn nonnegative_costs_stay_at_zero() {
        let mut p = MilpProblem::<f64>::new();
        for (i, c) in [1.0, 0.0, 2.5].into_iter().enumerate() {
            p.add_column(format!("x{i}"), VarKind::Continuous, 0.0, f64::INFINITY, c)
                .unwrap();
        }
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![0.0, 0.0, 0.0]);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn contradictory_rows_infeasible() {
        let mut p = MilpProblem::<f64>::new();
        let x = p
            .add_column(
                "x",
                VarKind::Continuous,
                f64::NEG_INFINITY,
                f64::INFINITY,
                1.0,
            )
            .unwrap();
        p.add_row("lo", vec![(x, 1.0)], Relation::Ge, 1.0).unwrap();
        p.add_row("hi", vec![(x, 1.0)], Relation::Le, 0.0).unwrap();
        assert_eq!(
            solve_lp(&p, &SolverOptions::default()).unwrap().status,
            LpStatus::Infeasible
        );
    }

    #[test]
    fn contradictory_bounds_infeasible() {
        let mut p = MilpProblem::<f64>::new();
        p.add_column("x", VarKind::Continuous, 1.0, 0.0, 1.0)
            .unwrap();
        assert_eq!(
            solve_lp(&p, &SolverOptions::default()).unwrap().status,
            LpStatus::Infeasible
        );
    }

    #[test]
    fn unbounded_ray() {
        let mut p = MilpProblem::<f64>::new();
        let x = p
            .add_column("x", VarKind::Continuous, 0.0, f64::INFINITY, -1.0)
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, 0.0, f64::INFINITY, 0.0)
            .unwrap();
        p.add_row("r", vec![(x, 1.0), (y, -1.0)], Relation::Le, 1.0)
            .unwrap();
        assert_eq!(
            solve_lp(&p, &SolverOptions::default()).unwrap().status,
            LpStatus::Unbounded
        );
    }

    #[test]
    fn free_and_upper_only_columns() {
        // min x + y, x free with x >= -3 via a row, y <= 2 with no lower bound but y >= -1 via row.
        let mut p = MilpProblem::<f64>::new();
        let x = p
            .add_column(
                "x",
                VarKind::Continuous,
                f64::NEG_INFINITY,
                f64::INFINITY,
                1.0,
            )
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, f64::NEG_INFINITY, 2.0, 1.0)
            .unwrap();
        p.add_row("x_lo", vec![(x, 1.0)], Relation::Ge, -3.0)
            .unwrap();
        p.add_row("y_lo", vec![(y, 1.0)], Relation::Ge, -1.0)
            .unwrap();
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert!((s.objective + 4.0).abs() < 1e-9, "{s:?}");
    }

    #[test]
    fn equality_rows_and_bound_flips() {
        // min -x - 2y  s.t. x + y = 3, 0 <= x <= 2, 0 <= y <= 2  -> x = 1, y = 2
        let mut p = MilpProblem::<f64>::new();
        let x = p
            .add_column("x", VarKind::Continuous, 0.0, 2.0, -1.0)
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, 0.0, 2.0, -2.0)
            .unwrap();
        p.add_row("sum", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 3.0)
            .unwrap();
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-9 && (s.x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut p = MilpProblem::<f64>::new();
        let x = p
            .add_column("x", VarKind::Continuous, 0.0, f64::INFINITY, 1.0)
            .unwrap();
        let y = p
            .add_column("y", VarKind::Continuous, 0.0, f64::INFINITY, 2.0)
            .unwrap();
        p.add_row("a", vec![(x, 1.0), (y, 1.0)], Relation::Eq, 2.0)
            .unwrap();
        p.add_row("b", vec![(x, 2.0), (y, 2.0)], Relation::Eq, 4.0)
            .unwrap();
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic() {
        let a = solve_lp(&textbook(), &SolverOptions::default()).unwrap();
        let b = solve_lp(&textbook(), &SolverOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling instance; optimum -1/20 at x1 = 1/25, x3 = 1.
        let mut p = MilpProblem::<f64>::new();
        let c = [-0.75, 150.0, -0.02, 6.0];
        let cols: Vec<usize> = c
            .iter()
            .enumerate()
            .map(|(i, &ci)| {
                p.add_column(format!("x{i}"), VarKind::Continuous, 0.0, f64::INFINITY, ci)
                    .unwrap()
            })
            .collect();
        p.add_row(
            "r1",
            cols.iter()
                .copied()
                .zip([0.25, -60.0, -0.04, 9.0])
                .collect(),
            Relation::Le,
            0.0,
        )
        .unwrap();
        p.add_row(
            "r2",
            cols.iter().copied().zip([0.5, -90.0, -0.02, 3.0]).collect(),
            Relation::Le,
            0.0,
        )
        .unwrap();
        p.add_row("r3", vec![(cols[2], 1.0)], Relation::Le, 1.0)
            .unwrap();
        let opts = SolverOptions {
            bland_after: 0,
            ..SolverOptions::default()
        };
        let s = solve_lp(&p, &opts).unwrap();
        assert!((s.objective + 0.05).abs() < 1e-9, "{s:?}");
        let s = solve_lp(&p, &SolverOptions::default()).unwrap();
        assert!((s.objective + 0.05).abs() < 1e-9, "{s:?}");
    }
}
