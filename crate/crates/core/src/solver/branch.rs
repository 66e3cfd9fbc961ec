//! Best-bound branch-and-bound over the simplex relaxation.

use super::simplex::{solve_lp_with_bounds, LpSolution, LpStatus};
use super::{fixed_bounds, Result, SolverDiagnostics, SolverError, SolverOptions};
use crate::model::{MilpProblem, VarKind};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NodeLimit,
    TimeLimit,
}

/// One evaluated node of the search tree. Infeasible nodes carry an infinite bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord<T> {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution<T> {
    pub status: MilpStatus,
    /// Best integral assignment found, if any.
    pub x: Option<Vec<T>>,
    /// Objective of `x`; NaN without an incumbent.
    pub objective: T,
    /// Proven lower bound on the optimum.
    pub best_bound: T,
    /// `(objective − best_bound) / max(|objective|, 1)`; infinite without an incumbent.
    pub gap: T,
    /// LP relaxations evaluated as tree nodes.
    pub nodes: usize,
    pub lp_iterations: usize,
    pub root_bound: T,
    /// Populated when `record_tree` is set.
    pub tree: Vec<NodeRecord<T>>,
}

impl<T: Scalar> MilpSolution<T> {
    pub fn diagnostics(&self) -> SolverDiagnostics {
        SolverDiagnostics {
            status: self.status,
            nodes: self.nodes,
            lp_iterations: self.lp_iterations,
            gap: self.gap.to_f64_lossy(),
            best_bound: self.best_bound.to_f64_lossy(),
        }
    }
}

struct Node<T> {
    id: usize,
    depth: usize,
    bound: T,
    lower: Vec<T>,
    upper: Vec<T>,
    x: Vec<T>,
}

/// Heap order: smallest bound first, then deepest, then oldest.
impl<T: Scalar> Ord for Node<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

impl<T: Scalar> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Node<T> {}

struct Search<'a, T> {
    problem: &'a MilpProblem<T>,
    options: &'a SolverOptions<T>,
    integral: Vec<usize>,
    incumbent: Option<(Vec<T>, T)>,
    lp_iterations: usize,
    nodes: usize,
    next_id: usize,
    tree: Vec<NodeRecord<T>>,
    /// Smallest bound among nodes discarded only because of the gap tolerance.
    pruned_bound: T,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn lp(&mut self, lower: &[T], upper: &[T]) -> Result<LpSolution<T>> {
        let sol = solve_lp_with_bounds(self.problem, lower, upper, self.options)?;
        self.lp_iterations += sol.iterations;
        Ok(sol)
    }

    fn is_integral(&self, x: &[T]) -> bool {
        self.integral
            .iter()
            .all(|&j| (x[j] - x[j].round()).abs() <= self.options.integrality_tol)
    }

    /// Most fractional integral column, lowest index on ties.
    fn branching_column(&self, x: &[T]) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for &j in &self.integral {
            let frac = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
            if frac > self.options.integrality_tol && best.is_none_or(|(_, f)| frac > f) {
                best = Some((j, frac));
            }
        }
        best.map(|(j, _)| j)
    }

    fn cutoff(&self) -> T {
        match &self.incumbent {
            Some((_, obj)) => *obj - self.options.gap * obj.abs().max(T::one()),
            None => T::infinity(),
        }
    }

    /// Records whether a node with `bound` may be discarded.
    fn prune(&mut self, bound: T) -> bool {
        if bound < self.cutoff() {
            return false;
        }
        if let Some((_, obj)) = &self.incumbent {
            if bound < *obj {
                self.pruned_bound = self.pruned_bound.min(bound);
            }
        }
        true
    }

    /// Re-solves with the integral columns fixed at their rounded values, keeping the better of
    /// the polished and raw assignment.
    fn offer(&mut self, x: Vec<T>) -> Result<()> {
        let rounded: Vec<(usize, T)> = self.integral.iter().map(|&j| (j, x[j].round())).collect();
        let (lo, hi) = fixed_bounds(
            self.problem,
            self.problem.lower(),
            self.problem.upper(),
            rounded.iter().copied(),
        );
        let polished = self.lp(&lo, &hi)?;
        let mut candidate = if polished.status == LpStatus::Optimal {
            polished.x
        } else {
            x
        };
        for &(j, v) in &rounded {
            candidate[j] = v;
        }
        let obj = self.problem.objective_value(&candidate);
        if self.incumbent.as_ref().is_none_or(|(_, best)| obj < *best) {
            self.incumbent = Some((candidate, obj));
        }
        Ok(())
    }

    fn record(&mut self, id: usize, parent: Option<usize>, depth: usize, bound: T) {
        if self.options.record_tree {
            self.tree.push(NodeRecord {
                id,
                parent,
                depth,
                bound,
            });
        }
    }

    /// Solves a node's relaxation; returns the node when it still needs branching.
    fn evaluate(
        &mut self,
        parent: Option<(usize, T)>,
        depth: usize,
        lower: Vec<T>,
        upper: Vec<T>,
    ) -> Result<Option<Node<T>>> {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes += 1;
        let sol = self.lp(&lower, &upper)?;
        let parent_bound = parent.map_or(T::neg_infinity(), |(_, b)| b);
        let parent_id = parent.map(|(p, _)| p);
        if sol.status != LpStatus::Optimal {
            self.record(id, parent_id, depth, T::infinity());
            return Ok(None);
        }
        let bound = sol.objective.max(parent_bound);
        self.record(id, parent_id, depth, bound);
        if self.is_integral(&sol.x) {
            self.offer(sol.x)?;
            return Ok(None);
        }
        if self.prune(bound) {
            return Ok(None);
        }
        Ok(Some(Node {
            id,
            depth,
            bound,
            lower,
            upper,
            x: sol.x,
        }))
    }

    /// Rounds general integer columns up, then (if binaries remain fractional) sets every binary
    /// that is positive in the relaxation to one.
    fn seed(&mut self, root_x: &[T]) -> Result<()> {
        let kinds = self.problem.kinds();
        let (lower, upper) = (self.problem.lower(), self.problem.upper());
        let fixes: Vec<(usize, T)> = self
            .integral
            .iter()
            .filter(|&&j| kinds[j] == VarKind::Integer)
            .map(|&j| {
                (
                    j,
                    root_x[j].ceil().min(upper[j].floor()).max(lower[j].ceil()),
                )
            })
            .collect();
        let (lo, hi) = fixed_bounds(self.problem, lower, upper, fixes.iter().copied());
        let first = self.lp(&lo, &hi)?;
        if first.status != LpStatus::Optimal {
            return Ok(());
        }
        if self.is_integral(&first.x) {
            return self.offer(first.x);
        }
        let binaries = self
            .integral
            .iter()
            .filter(|&&j| kinds[j] == VarKind::Binary)
            .map(|&j| {
                let v = if first.x[j] > self.options.integrality_tol {
                    T::one()
                } else {
                    T::zero()
                };
                (j, v.min(upper[j]).max(lower[j]))
            });
        let (lo, hi) = fixed_bounds(self.problem, &lo, &hi, binaries);
        let second = self.lp(&lo, &hi)?;
        if second.status == LpStatus::Optimal && self.is_integral(&second.x) {
            self.offer(second.x)?;
        }
        Ok(())
    }
}

/// Minimises `problem` with integrality enforced on integer and binary columns.
pub fn solve_milp<T: Scalar>(
    problem: &MilpProblem<T>,
    options: &SolverOptions<T>,
) -> Result<MilpSolution<T>> {
    let start = Instant::now();
    let integral: Vec<usize> = (0..problem.num_columns())
        .filter(|&j| problem.kinds()[j].is_integral())
        .collect();
    for &j in &integral {
        if !problem.lower()[j].is_finite() || !problem.upper()[j].is_finite() {
            return Err(SolverError::UnboundedInteger(problem.names()[j].clone()));
        }
    }
    let mut search = Search {
        problem,
        options,
        integral,
        incumbent: None,
        lp_iterations: 0,
        nodes: 0,
        next_id: 0,
        tree: Vec::new(),
        pruned_bound: T::infinity(),
    };

    let root_lp = search.lp(problem.lower(), problem.upper())?;
    search.nodes = 1;
    search.next_id = 1;
    let finish = |search: Search<'_, T>, status: MilpStatus, open: T, root_bound: T| {
        let best_bound = match &search.incumbent {
            Some((_, obj)) => open.min(search.pruned_bound).min(*obj),
            None => open.min(search.pruned_bound),
        };
        let (x, objective, gap) = match search.incumbent {
            Some((x, obj)) => {
                let gap = ((obj - best_bound) / obj.abs().max(T::one())).max(T::zero());
                (Some(x), obj, gap)
            }
            None => (None, T::nan(), T::infinity()),
        };
        MilpSolution {
            status,
            x,
            objective,
            best_bound,
            gap,
            nodes: search.nodes,
            lp_iterations: search.lp_iterations,
            root_bound,
            tree: search.tree,
        }
    };

    match root_lp.status {
        LpStatus::Infeasible => {
            search.record(0, None, 0, T::infinity());
            return Ok(finish(
                search,
                MilpStatus::Infeasible,
                T::infinity(),
                T::infinity(),
            ));
        }
        LpStatus::Unbounded => {
            search.record(0, None, 0, T::neg_infinity());
            let inf = T::neg_infinity();
            return Ok(finish(search, MilpStatus::Unbounded, inf, inf));
        }
        LpStatus::Optimal => {}
    }
    let root_bound = root_lp.objective;
    search.record(0, None, 0, root_bound);
    if search.is_integral(&root_lp.x) {
        search.offer(root_lp.x)?;
        return Ok(finish(
            search,
            MilpStatus::Optimal,
            T::infinity(),
            root_bound,
        ));
    }
    if options.seed_incumbent {
        search.seed(&root_lp.x)?;
    }

    let mut heap = BinaryHeap::new();
    if !search.prune(root_bound) {
        heap.push(Node {
            id: 0,
            depth: 0,
            bound: root_bound,
            lower: problem.lower().to_vec(),
            upper: problem.upper().to_vec(),
            x: root_lp.x,
        });
    }

    let open_bound = |heap: &BinaryHeap<Node<T>>| heap.peek().map_or(T::infinity(), |n| n.bound);
    while let Some(node) = heap.pop() {
        if search.prune(node.bound) {
            continue;
        }
        let limit = if search.nodes >= options.node_limit {
            Some(MilpStatus::NodeLimit)
        } else if options
            .time_limit
            .is_some_and(|limit| start.elapsed() >= limit)
        {
            Some(MilpStatus::TimeLimit)
        } else {
            None
        };
        if let Some(status) = limit {
            let open = node.bound.min(open_bound(&heap));
            return Ok(finish(search, status, open, root_bound));
        }
        let Some(j) = search.branching_column(&node.x) else {
            search.offer(node.x)?;
            continue;
        };
        let v = node.x[j];
        let mut down_upper = node.upper.clone();
        down_upper[j] = v.floor();
        let mut up_lower = node.lower.clone();
        up_lower[j] = v.ceil();
        let parent = Some((node.id, node.bound));
        let children = [(node.lower.clone(), down_upper), (up_lower, node.upper)];
        for (lo, hi) in children {
            if let Some(child) = search.evaluate(parent, node.depth + 1, lo, hi)? {
                heap.push(child);
            }
        }
    }

    let status = if search.incumbent.is_some() {
        MilpStatus::Optimal
    } else {
        MilpStatus::Infeasible
    };
    Ok(finish(search, status, T::infinity(), root_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Relation;

    fn knapsack() -> MilpProblem<f64> {
        // max 5a + 4b  s.t. 6a + 4b <= 24, a + 2b <= 6, integer; relaxation optimum (3, 1.5)
        let mut p = MilpProblem::new();
        let a = p
            .add_column("a", VarKind::Integer, 0.0, 10.0, -5.0)
            .unwrap();
        let b = p
            .add_column("b", VarKind::Integer, 0.0, 10.0, -4.0)
            .unwrap();
        p.add_row("r1", vec![(a, 6.0), (b, 4.0)], Relation::Le, 24.0)
            .unwrap();
        p.add_row("r2", vec![(a, 1.0), (b, 2.0)], Relation::Le, 6.0)
            .unwrap();
        p
    }

    #[test]
    fn small_integer_program() {
        let s = solve_milp(&knapsack(), &SolverOptions::default()).unwrap();
        assert_eq!(s.status, MilpStatus::Optimal);
        assert!((s.objective + 20.0).abs() < 1e-9, "{s:?}");
        assert!((s.root_bound + 21.0).abs() < 1e-9);
        assert!(s.gap <= 1e-6);
    }

    #[test]
    fn infeasible_parity() {
        // 2x = 1 with x integer
        let mut p = MilpProblem::<f64>::new();
        let x = p.add_column("x", VarKind::Integer, 0.0, 5.0, 1.0).unwrap();
        p.add_row("odd", vec![(x, 2.0)], Relation::Eq, 1.0).unwrap();
        let s = solve_milp(&p, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, MilpStatus::Infeasible);
        assert!(s.x.is_none());
    }

    #[test]
    fn rejects_unbounded_integer() {
        let mut p = MilpProblem::<f64>::new();
        p.add_column("n", VarKind::Integer, 0.0, f64::INFINITY, 1.0)
            .unwrap();
        assert!(matches!(
            solve_milp(&p, &SolverOptions::default()),
            Err(SolverError::UnboundedInteger(name)) if name == "n"
        ));
    }

    #[test]
    fn tree_bounds_never_decrease() {
        let opts = SolverOptions {
            record_tree: true,
            seed_incumbent: false,
            ..SolverOptions::default()
        };
        let s = solve_milp(&knapsack(), &opts).unwrap();
        assert_eq!(s.tree.len(), s.nodes);
        for n in &s.tree {
            if let Some(p) = n.parent {
                let parent = s.tree.iter().find(|m| m.id == p).unwrap();
                assert!(n.bound >= parent.bound);
                assert_eq!(n.depth, parent.depth + 1);
            }
        }
    }

    #[test]
    fn node_limit_reports_partial_result() {
        let opts = SolverOptions {
            node_limit: 1,
            seed_incumbent: false,
            ..SolverOptions::default()
        };
        let s = solve_milp(&knapsack(), &opts).unwrap();
        assert_eq!(s.status, MilpStatus::NodeLimit);
        assert!(s.best_bound <= -20.0 + 1e-9);
    }
}
