use super::{ModelError, Result};
use crate::num::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

/// A linear constraint `Σ coeff·x  relation  rhs` over sparse columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    pub name: String,
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Row<T> {
    /// Constraint family: the name up to the first `[`.
    pub fn family(&self) -> &str {
        self.name.split('[').next().unwrap_or(&self.name)
    }

    pub fn activity(&self, x: &[T]) -> T {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row, zero when satisfied.
    pub fn violation(&self, x: &[T]) -> T {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Eq => (lhs - self.rhs).abs(),
            Relation::Le => (lhs - self.rhs).max(T::zero()),
            Relation::Ge => (self.rhs - lhs).max(T::zero()),
        }
    }
}

/// Minimisation problem `min cᵀx` subject to rows, column bounds and integrality marks.
///
/// Column names are unique; rows only reference existing columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpProblem<T> {
    objective: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
    kinds: Vec<VarKind>,
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    rows: Vec<Row<T>>,
}

impl<T: Scalar> Default for MilpProblem<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> MilpProblem<T> {
    pub fn new() -> Self {
        Self {
            objective: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            kinds: Vec::new(),
            names: Vec::new(),
            index: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    /// Adds a column and returns its index. Binary columns get bounds `[0, 1]` intersected with
    /// the given ones.
    pub fn add_column(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: T,
        upper: T,
        cost: T,
    ) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(ModelError::Problem(format!("duplicate column {name}")));
        }
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(T::zero()), upper.min(T::one())),
            _ => (lower, upper),
        };
        if lower.is_nan() || upper.is_nan() || !cost.is_finite() {
            return Err(ModelError::Problem(format!(
                "non-numeric data on column {name}"
            )));
        }
        let j = self.objective.len();
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.kinds.push(kind);
        self.index.insert(name.clone(), j);
        self.names.push(name);
        Ok(j)
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, T)>,
        relation: Relation,
        rhs: T,
    ) -> Result<usize> {
        let name = name.into();
        if let Some(&(j, _)) = coeffs.iter().find(|(j, _)| *j >= self.objective.len()) {
            return Err(ModelError::Problem(format!(
                "row {name} references missing column {j}"
            )));
        }
        if !rhs.is_finite() || coeffs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(ModelError::Problem(format!(
                "non-finite data in row {name}"
            )));
        }
        self.rows.push(Row {
            name,
            coeffs,
            relation,
            rhs,
        });
        Ok(self.rows.len() - 1)
    }

    pub fn num_columns(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn set_bounds(&mut self, j: usize, lower: T, upper: T) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Number of rows per family name.
    pub fn family_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.family().to_string()).or_insert(0) += 1;
        }
        out
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum()
    }

    /// Largest row or bound violation of `x` (absolute).
    pub fn max_violation(&self, x: &[T]) -> T {
        let rows = self.rows.iter().map(|r| r.violation(x));
        let bounds = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]).max(T::zero()));
        rows.chain(bounds).fold(T::zero(), T::max)
    }
}
