//! Exact rational linear algebra and linear programming.
//!
//! A dense two-phase simplex with Bland's pivoting rule over
//! arbitrary-precision rationals. Every optimum is exact, every witness can
//! be substituted back into the constraints, and every infeasibility verdict
//! carries a Farkas certificate that is re-verified by multiplication before
//! being returned. Problem sizes in this crate stay below a few hundred
//! variables, so no sparsity or factorisation machinery is needed.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

/// Hard ceiling on simplex pivots. Bland's rule terminates on every finite
/// LP; the ceiling turns a hypothetical cycling bug into an error instead of
/// a hang.
pub const PIVOT_CEILING: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    /// The default bound `x >= 0`.
    pub fn nonnegative() -> Self {
        VarBounds { lower: Some(Rational::zero()), upper: None }
    }

    pub fn free() -> Self {
        VarBounds { lower: None, upper: None }
    }

    pub fn range(lower: Rational, upper: Rational) -> Self {
        VarBounds { lower: Some(lower), upper: Some(upper) }
    }
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

impl LpProblem {
    /// Problem with all variables bounded below by zero.
    pub fn new(sense: Sense, objective: Vec<Rational>, constraints: Vec<Constraint>) -> Self {
        let n = objective.len();
        LpProblem { sense, objective, constraints, bounds: vec![VarBounds::nonnegative(); n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch {
                what: format!("{} bounds for {} variables", self.bounds.len(), n),
            });
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    what: format!("constraint {i} has {} coefficients, expected {n}", c.coeffs.len()),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {what}")]
    DimensionMismatch { what: String },
    #[error("pivot ceiling of {PIVOT_CEILING} exceeded")]
    PivotLimitExceeded,
    #[error("empty vertex list")]
    EmptyVertexList,
    #[error("internal simplex invariant broken: {what}")]
    Internal { what: String },
}

/// Farkas-type infeasibility certificate over the canonical rows of a
/// problem (the user constraints, followed by any synthesized upper-bound
/// rows in variable order). [`verify_infeasibility`] checks it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
    /// How many leading multipliers refer to user constraints.
    pub user_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Optimal { optimum: Rational, witness: Vec<Rational> },
    Infeasible { certificate: FarkasCertificate },
    Unbounded,
}

/// Pivot statistics, used by the anti-cycling assertions in tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct LpStats {
    pub pivots: usize,
}

/// Solves an LP exactly; see [`simplex_solve_with_stats`].
pub fn simplex_solve(problem: &LpProblem) -> Result<LpResult, LpError> {
    simplex_solve_with_stats(problem).map(|(r, _)| r)
}

// ---------------------------------------------------------------------------
// Canonical form: `max c·u + k` subject to `A u (<=|=|>=) b`, `u >= 0`.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum VarTransform {
    /// `x = lower + u[col]`
    Shift { col: usize, lower: Rational },
    /// `x = upper - u[col]`
    UpperShift { col: usize, upper: Rational },
    /// `x = u[pos] - u[neg]`
    Split { pos: usize, neg: usize },
}

struct Canonical {
    num_internal: usize,
    transforms: Vec<VarTransform>,
    objective: Vec<Rational>,
    constant: Rational,
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    user_rows: usize,
}

fn canonicalize(problem: &LpProblem) -> Canonical {
    let n = problem.num_vars();
    let mut transforms = Vec::with_capacity(n);
    let mut num_internal = 0usize;
    // Upper-bound rows for doubly-bounded variables, synthesized after the
    // user constraints in variable order.
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for (j, b) in problem.bounds.iter().enumerate() {
        match (&b.lower, &b.upper) {
            (Some(l), None) => {
                transforms.push(VarTransform::Shift { col: num_internal, lower: l.clone() });
                num_internal += 1;
            }
            (Some(l), Some(u)) => {
                transforms.push(VarTransform::Shift { col: num_internal, lower: l.clone() });
                bound_rows.push((num_internal, u - l));
                num_internal += 1;
            }
            (None, Some(u)) => {
                transforms.push(VarTransform::UpperShift { col: num_internal, upper: u.clone() });
                num_internal += 1;
            }
            (None, None) => {
                transforms.push(VarTransform::Split { pos: num_internal, neg: num_internal + 1 });
                num_internal += 2;
            }
        }
        let _ = j;
    }

    let sign = match problem.sense {
        Sense::Maximize => Rational::one(),
        Sense::Minimize => -Rational::one(),
    };

    let mut objective = vec![Rational::zero(); num_internal];
    let mut constant = Rational::zero();
    for (j, t) in transforms.iter().enumerate() {
        let c = &problem.objective[j] * &sign;
        match t {
            VarTransform::Shift { col, lower } => {
                constant += &c * lower;
                objective[*col] = c;
            }
            VarTransform::UpperShift { col, upper } => {
                constant += &c * upper;
                objective[*col] = -c;
            }
            VarTransform::Split { pos, neg } => {
                objective[*pos] = c.clone();
                objective[*neg] = -c;
            }
        }
    }

    let mut rows = Vec::with_capacity(problem.constraints.len() + bound_rows.len());
    for c in &problem.constraints {
        let mut coeffs = vec![Rational::zero(); num_internal];
        let mut rhs = c.rhs.clone();
        for (j, t) in transforms.iter().enumerate() {
            let a = &c.coeffs[j];
            if a.is_zero() {
                continue;
            }
            match t {
                VarTransform::Shift { col, lower } => {
                    rhs -= a * lower;
                    coeffs[*col] = a.clone();
                }
                VarTransform::UpperShift { col, upper } => {
                    rhs -= a * upper;
                    coeffs[*col] = -a.clone();
                }
                VarTransform::Split { pos, neg } => {
                    coeffs[*pos] = a.clone();
                    coeffs[*neg] = -a.clone();
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    let user_rows = rows.len();
    for (col, ub) in bound_rows {
        let mut coeffs = vec![Rational::zero(); num_internal];
        coeffs[col] = Rational::one();
        rows.push((coeffs, Relation::Le, ub));
    }

    Canonical { num_internal, transforms, objective, constant, rows, user_rows }
}

// ---------------------------------------------------------------------------
// Tableau simplex
// ---------------------------------------------------------------------------

struct Tableau {
    /// `rows[i]` has `cols` coefficients followed by the rhs.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row; last cell holds the negated objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
    num_structural: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > PIVOT_CEILING {
            return Err(LpError::PivotLimitExceeded);
        }
        let pivot_val = self.rows[row][col].clone();
        if pivot_val.is_zero() {
            return Err(LpError::Internal { what: "zero pivot element".into() });
        }
        let inv = Rational::one() / pivot_val;
        for cell in self.rows[row].iter_mut() {
            *cell *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (cell, p) in r.iter_mut().zip(&pivot_row) {
                *cell -= &factor * p;
            }
            debug_assert!(r[col].is_zero());
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for (cell, p) in self.cost.iter_mut().zip(&pivot_row) {
                *cell -= &factor * p;
            }
            debug_assert!(self.cost[col].is_zero());
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Runs Bland's-rule simplex until optimality or unboundedness.
    /// `allowed` limits the columns that may enter the basis.
    fn run(&mut self, allowed_end: usize) -> Result<bool, LpError> {
        loop {
            let entering = (0..allowed_end).find(|&j| self.cost[j].is_positive());
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let coeff = &self.rows[i][col];
                if !coeff.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / coeff;
                let replace = match &leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                    }
                };
                if replace {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col)?,
                None => return Ok(false),
            }
        }
    }
}

/// Solves an LP exactly by two-phase simplex with Bland's rule, returning
/// the result together with pivot statistics.
pub fn simplex_solve_with_stats(problem: &LpProblem) -> Result<(LpResult, LpStats), LpError> {
    problem.check_dimensions()?;
    let canon = canonicalize(problem);
    let n = canon.num_internal;
    let m = canon.rows.len();

    // Normalize rhs signs; remember flips to map the Farkas certificate back.
    let mut flipped = vec![false; m];
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
    for (i, (coeffs, rel, rhs)) in canon.rows.iter().enumerate() {
        if rhs.is_negative() {
            flipped[i] = true;
            let rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Eq => Relation::Eq,
                Relation::Ge => Relation::Le,
            };
            rows.push((coeffs.iter().map(|c| -c.clone()).collect(), rel, -rhs.clone()));
        } else {
            rows.push((coeffs.clone(), *rel, rhs.clone()));
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    let mut num_slack = 0usize;
    let mut num_artificial = 0usize;
    for (_, rel, _) in &rows {
        match rel {
            Relation::Le => num_slack += 1,
            Relation::Ge => {
                num_slack += 1;
                num_artificial += 1;
            }
            Relation::Eq => num_artificial += 1,
        }
    }
    let cols = n + num_slack + num_artificial;
    let artificial_start = n + num_slack;

    let mut tab_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    // Identity-origin column of each row, for recovering dual values.
    let mut identity_col = Vec::with_capacity(m);
    let mut slack_cursor = n;
    let mut art_cursor = artificial_start;
    for (coeffs, rel, rhs) in &rows {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[slack_cursor] = Rational::one();
                basis.push(slack_cursor);
                identity_col.push(slack_cursor);
                slack_cursor += 1;
            }
            Relation::Ge => {
                row[slack_cursor] = -Rational::one();
                slack_cursor += 1;
                row[art_cursor] = Rational::one();
                basis.push(art_cursor);
                identity_col.push(art_cursor);
                art_cursor += 1;
            }
            Relation::Eq => {
                row[art_cursor] = Rational::one();
                basis.push(art_cursor);
                identity_col.push(art_cursor);
                art_cursor += 1;
            }
        }
        tab_rows.push(row);
    }

    let mut tab = Tableau {
        rows: tab_rows,
        cost: vec![Rational::zero(); cols + 1],
        basis,
        cols,
        num_structural: n,
        pivots: 0,
    };

    // Phase 1: maximize -(sum of artificials).
    if num_artificial > 0 {
        for j in artificial_start..cols {
            tab.cost[j] = -Rational::one();
        }
        // Eliminate basic artificial costs from the reduced-cost row.
        for i in 0..m {
            if tab.basis[i] >= artificial_start {
                let row = tab.rows[i].clone();
                for (cell, p) in tab.cost.iter_mut().zip(&row) {
                    *cell += p;
                }
            }
        }
        let optimal = tab.run(cols)?;
        if !optimal {
            return Err(LpError::Internal { what: "phase 1 reported unbounded".into() });
        }
        let phase1_value = -tab.cost[cols].clone();
        if phase1_value.is_negative() {
            // Infeasible: recover dual multipliers from the identity-origin
            // columns, map them back over the rhs-sign flips, and verify.
            let mut multipliers = Vec::with_capacity(m);
            for i in 0..m {
                let j = identity_col[i];
                let cost_j = if j >= artificial_start { -Rational::one() } else { Rational::zero() };
                let y = cost_j - &tab.cost[j];
                multipliers.push(if flipped[i] { -y } else { y });
            }
            let certificate = FarkasCertificate { multipliers, user_rows: canon.user_rows };
            if !verify_infeasibility(problem, &certificate) {
                return Err(LpError::Internal {
                    what: "Farkas certificate failed re-verification".into(),
                });
            }
            return Ok((LpResult::Infeasible { certificate }, LpStats { pivots: tab.pivots }));
        }
        // Drive remaining basic artificials out of the basis; drop rows that
        // became identically zero (redundant constraints).
        let mut keep = vec![true; tab.rows.len()];
        for i in 0..tab.rows.len() {
            if tab.basis[i] < artificial_start {
                continue;
            }
            let col = (0..artificial_start).find(|&j| !tab.rows[i][j].is_zero());
            match col {
                Some(j) => tab.pivot(i, j)?,
                None => keep[i] = false,
            }
        }
        if keep.iter().any(|k| !k) {
            let mut rows = Vec::new();
            let mut basis = Vec::new();
            for (i, k) in keep.iter().enumerate() {
                if *k {
                    rows.push(tab.rows[i].clone());
                    basis.push(tab.basis[i]);
                }
            }
            tab.rows = rows;
            tab.basis = basis;
        }
    }

    // Phase 2: the real objective, artificial columns barred from entering.
    tab.cost = vec![Rational::zero(); cols + 1];
    tab.cost[..n].clone_from_slice(&canon.objective);
    for i in 0..tab.rows.len() {
        let b = tab.basis[i];
        if !tab.cost[b].is_zero() {
            let factor = tab.cost[b].clone();
            let row = tab.rows[i].clone();
            for (cell, p) in tab.cost.iter_mut().zip(&row) {
                *cell -= &factor * p;
            }
            debug_assert!(tab.cost[b].is_zero());
        }
    }
    let optimal = tab.run(artificial_start)?;
    let stats = LpStats { pivots: tab.pivots };
    if !optimal {
        return Ok((LpResult::Unbounded, stats));
    }

    // Read off the internal solution and the objective value.
    let mut internal = vec![Rational::zero(); tab.num_structural];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < tab.num_structural {
            internal[b] = tab.rhs(i).clone();
        }
    }
    let value = -tab.cost[tab.cols].clone() + &canon.constant;
    let optimum = match problem.sense {
        Sense::Maximize => value,
        Sense::Minimize => -value,
    };
    let mut witness = Vec::with_capacity(problem.num_vars());
    for t in &canon.transforms {
        witness.push(match t {
            VarTransform::Shift { col, lower } => lower + &internal[*col],
            VarTransform::UpperShift { col, upper } => upper - &internal[*col],
            VarTransform::Split { pos, neg } => &internal[*pos] - &internal[*neg],
        });
    }
    Ok((LpResult::Optimal { optimum, witness }, stats))
}

/// Checks a witness against every constraint and bound of a problem, exactly.
pub fn check_witness(problem: &LpProblem, witness: &[Rational]) -> bool {
    if witness.len() != problem.num_vars() {
        return false;
    }
    for (x, b) in witness.iter().zip(&problem.bounds) {
        if let Some(l) = &b.lower {
            if x < l {
                return false;
            }
        }
        if let Some(u) = &b.upper {
            if x > u {
                return false;
            }
        }
    }
    for c in &problem.constraints {
        let lhs: Rational = c.coeffs.iter().zip(witness).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
            Relation::Ge => lhs >= c.rhs,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Re-multiplies a Farkas certificate against the canonical rows of a
/// problem and checks that it proves infeasibility:
/// sign-compatible multipliers, a nonnegative combined coefficient for every
/// (nonnegative, canonicalized) variable, and a negative combined rhs.
pub fn verify_infeasibility(problem: &LpProblem, cert: &FarkasCertificate) -> bool {
    let canon = canonicalize(problem);
    if cert.multipliers.len() != canon.rows.len() || cert.user_rows != canon.user_rows {
        return false;
    }
    let mut combined = vec![Rational::zero(); canon.num_internal];
    let mut combined_rhs = Rational::zero();
    for (y, (coeffs, rel, rhs)) in cert.multipliers.iter().zip(&canon.rows) {
        match rel {
            Relation::Le => {
                if y.is_negative() {
                    return false;
                }
            }
            Relation::Ge => {
                if y.is_positive() {
                    return false;
                }
            }
            Relation::Eq => {}
        }
        for (slot, a) in combined.iter_mut().zip(coeffs) {
            *slot += y * a;
        }
        combined_rhs += y * rhs;
    }
    combined.iter().all(|c| !c.is_negative()) && combined_rhs.is_negative()
}

// ---------------------------------------------------------------------------
// Convex-hull membership
// ---------------------------------------------------------------------------

/// A functional strictly separating a point from a vertex list:
/// `coeffs · v <= vertex_max` for every vertex while
/// `coeffs · point = point_value > vertex_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingFunctional {
    pub coeffs: Vec<Rational>,
    pub vertex_max: Rational,
    pub point_value: Rational,
}

impl SeparatingFunctional {
    /// The functional's value at the point after the affine normalisation
    /// that places the vertex maximum at 2 (the CHSH-style presentation).
    pub fn normalized_point_value(&self) -> Rational {
        &self.point_value - &self.vertex_max + Rational::from_integer(2.into())
    }
}

#[derive(Debug, Clone)]
pub enum HullMembership {
    /// Convex weights over the vertex list reconstructing the point exactly.
    Member { weights: Vec<Rational> },
    NonMember { separating: SeparatingFunctional },
}

/// Decides whether `point` lies in the convex hull of `vertices` by a
/// feasibility LP over the mixture weights. Membership returns the weights;
/// non-membership returns a strictly separating functional built from the
/// Farkas certificate.
pub fn hull_membership(
    point: &[Rational],
    vertices: &[Vec<Rational>],
) -> Result<HullMembership, LpError> {
    if vertices.is_empty() {
        return Err(LpError::EmptyVertexList);
    }
    let dim = point.len();
    for (i, v) in vertices.iter().enumerate() {
        if v.len() != dim {
            return Err(LpError::DimensionMismatch {
                what: format!("vertex {i} has dimension {}, point has {dim}", v.len()),
            });
        }
    }
    let k = vertices.len();
    let mut constraints = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        let coeffs: Vec<Rational> = vertices.iter().map(|v| v[d].clone()).collect();
        constraints.push(Constraint::new(coeffs, Relation::Eq, point[d].clone()));
    }
    constraints.push(Constraint::new(vec![Rational::one(); k], Relation::Eq, Rational::one()));
    let problem = LpProblem::new(Sense::Maximize, vec![Rational::zero(); k], constraints);

    match simplex_solve(&problem)? {
        LpResult::Optimal { witness, .. } => {
            // Exact reconstruction check.
            for d in 0..dim {
                let total: Rational =
                    witness.iter().zip(vertices).map(|(w, v)| w * &v[d]).sum();
                if total != point[d] {
                    return Err(LpError::Internal {
                        what: "membership weights failed to reconstruct the point".into(),
                    });
                }
            }
            Ok(HullMembership::Member { weights: witness })
        }
        LpResult::Infeasible { certificate } => {
            let coeffs: Vec<Rational> =
                certificate.multipliers[..dim].iter().map(|y| -y.clone()).collect();
            let point_value: Rational = coeffs.iter().zip(point).map(|(c, p)| c * p).sum();
            let mut vertex_max: Option<Rational> = None;
            for v in vertices {
                let val: Rational = coeffs.iter().zip(v).map(|(c, p)| c * p).sum();
                if vertex_max.as_ref().is_none_or(|m| val > *m) {
                    vertex_max = Some(val);
                }
            }
            let vertex_max = vertex_max.expect("nonempty vertex list");
            if point_value <= vertex_max {
                return Err(LpError::Internal {
                    what: "separating functional failed to separate".into(),
                });
            }
            Ok(HullMembership::NonMember {
                separating: SeparatingFunctional { coeffs, vertex_max, point_value },
            })
        }
        LpResult::Unbounded => {
            Err(LpError::Internal { what: "feasibility LP reported unbounded".into() })
        }
    }
}

// ---------------------------------------------------------------------------
// Affine rank and vertex maximisation
// ---------------------------------------------------------------------------

/// Maximum number of affinely independent vectors in the list: the rank of
/// the differences from the first vector, plus one, by exact Gaussian
/// elimination.
pub fn affine_rank(vectors: &[Vec<Rational>]) -> usize {
    assert!(!vectors.is_empty(), "affine_rank requires a nonempty list");
    let base = &vectors[0];
    let mut rows: Vec<Vec<Rational>> = vectors[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linear_rank(&mut rows) + 1
}

fn linear_rank(rows: &mut [Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        let pivot_val = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_val;
            for (cell, p) in row.iter_mut().zip(&pivot_row) {
                *cell -= &factor * p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Exact maximum of a linear functional over a finite vertex list, together
/// with the indices of all maximizers.
pub fn maximize_over_vertices(
    objective: &[Rational],
    vertices: &[Vec<Rational>],
) -> Result<(Rational, Vec<usize>), LpError> {
    if vertices.is_empty() {
        return Err(LpError::EmptyVertexList);
    }
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        if v.len() != objective.len() {
            return Err(LpError::DimensionMismatch {
                what: format!("vertex {i} has dimension {}, objective has {}", v.len(), objective.len()),
            });
        }
        let value: Rational = objective.iter().zip(v).map(|(c, x)| c * x).sum();
        match &best {
            Some(b) if value < *b => {}
            Some(b) if value == *b => argmax.push(i),
            _ => {
                best = Some(value);
                argmax = vec![i];
            }
        }
    }
    Ok((best.expect("nonempty"), argmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn maximize_bounded_variable() {
        // max x subject to 0 <= x <= 1.
        let problem = LpProblem {
            sense: Sense::Maximize,
            objective: vec![rat_int(1)],
            constraints: vec![],
            bounds: vec![VarBounds::range(rat_int(0), rat_int(1))],
        };
        let result = simplex_solve(&problem).unwrap();
        assert_eq!(result, LpResult::Optimal { optimum: rat_int(1), witness: vec![rat_int(1)] });
    }

    #[test]
    fn maximize_on_a_simplex() {
        // max x+y subject to x+y = 1, x,y >= 0.
        let problem = LpProblem::new(
            Sense::Maximize,
            vec![rat_int(1), rat_int(1)],
            vec![Constraint::new(vec![rat_int(1), rat_int(1)], Relation::Eq, rat_int(1))],
        );
        match simplex_solve(&problem).unwrap() {
            LpResult::Optimal { optimum, witness } => {
                assert_eq!(optimum, rat_int(1));
                assert!(check_witness(&problem, &witness));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_verified_certificate() {
        // x >= 1 and x <= 0 cannot both hold.
        let problem = LpProblem::new(
            Sense::Maximize,
            vec![rat_int(1)],
            vec![
                Constraint::new(vec![rat_int(1)], Relation::Ge, rat_int(1)),
                Constraint::new(vec![rat_int(1)], Relation::Le, rat_int(0)),
            ],
        );
        match simplex_solve(&problem).unwrap() {
            LpResult::Infeasible { certificate } => {
                assert!(verify_infeasibility(&problem, &certificate));
                assert_eq!(certificate.multipliers.len(), 2);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_detection() {
        let problem = LpProblem::new(Sense::Maximize, vec![rat_int(1)], vec![]);
        assert_eq!(simplex_solve(&problem).unwrap(), LpResult::Unbounded);
    }

    #[test]
    fn minimization_and_free_variables() {
        // min x subject to x >= -3, modelled with a free variable and a
        // Ge constraint.
        let problem = LpProblem {
            sense: Sense::Minimize,
            objective: vec![rat_int(1)],
            constraints: vec![Constraint::new(vec![rat_int(1)], Relation::Ge, rat_int(-3))],
            bounds: vec![VarBounds::free()],
        };
        match simplex_solve(&problem).unwrap() {
            LpResult::Optimal { optimum, witness } => {
                assert_eq!(optimum, rat_int(-3));
                assert_eq!(witness, vec![rat_int(-3)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_fractional_optimum() {
        // max 2x + 3y s.t. x + y <= 4, x + 3y <= 6: optimal at the
        // constraint intersection (3, 1).
        let problem = LpProblem::new(
            Sense::Maximize,
            vec![rat_int(2), rat_int(3)],
            vec![
                Constraint::new(vec![rat_int(1), rat_int(1)], Relation::Le, rat_int(4)),
                Constraint::new(vec![rat_int(1), rat_int(3)], Relation::Le, rat_int(6)),
            ],
        );
        match simplex_solve(&problem).unwrap() {
            LpResult::Optimal { optimum, witness } => {
                assert_eq!(optimum, rat_int(9));
                assert_eq!(witness, vec![rat_int(3), rat_int(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Multiple redundant equalities around a single feasible point.
        let problem = LpProblem::new(
            Sense::Maximize,
            vec![rat(1, 3), rat(-1, 7)],
            vec![
                Constraint::new(vec![rat_int(1), rat_int(1)], Relation::Eq, rat_int(2)),
                Constraint::new(vec![rat_int(2), rat_int(2)], Relation::Eq, rat_int(4)),
                Constraint::new(vec![rat_int(1), rat_int(-1)], Relation::Eq, rat_int(0)),
            ],
        );
        match simplex_solve(&problem).unwrap() {
            LpResult::Optimal { optimum, witness } => {
                assert_eq!(witness, vec![rat_int(1), rat_int(1)]);
                assert_eq!(optimum, rat(1, 3) - rat(1, 7));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn hull_membership_trivial_cases() {
        let verts = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(2), rat_int(0)],
            vec![rat_int(0), rat_int(2)],
        ];
        // The first vertex itself.
        match hull_membership(&verts[0], &verts).unwrap() {
            HullMembership::Member { weights } => {
                assert_eq!(weights[0], rat_int(1));
                assert!(weights[1].is_zero() && weights[2].is_zero());
            }
            other => panic!("expected member, got {other:?}"),
        }
        // Midpoint of two vertices.
        let mid = vec![rat_int(1), rat_int(0)];
        match hull_membership(&mid, &verts).unwrap() {
            HullMembership::Member { weights } => {
                assert_eq!(weights[0], rat(1, 2));
                assert_eq!(weights[1], rat(1, 2));
                assert!(weights[2].is_zero());
            }
            other => panic!("expected member, got {other:?}"),
        }
        // An exterior point gets a separating functional.
        let outside = vec![rat_int(3), rat_int(3)];
        match hull_membership(&outside, &verts).unwrap() {
            HullMembership::NonMember { separating } => {
                assert!(separating.point_value > separating.vertex_max);
                for v in &verts {
                    let val: Rational =
                        separating.coeffs.iter().zip(v).map(|(c, x)| c * x).sum();
                    assert!(val <= separating.vertex_max);
                }
            }
            other => panic!("expected non-member, got {other:?}"),
        }
    }

    #[test]
    fn affine_rank_basics() {
        let single = vec![vec![rat_int(1), rat_int(2)]];
        assert_eq!(affine_rank(&single), 1);
        let copies = vec![vec![rat_int(1), rat_int(2)]; 5];
        assert_eq!(affine_rank(&copies), 1);
        let triangle = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        assert_eq!(affine_rank(&triangle), 3);
    }

    #[test]
    fn maximize_over_vertices_reports_all_argmax() {
        let verts = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ];
        let (max, argmax) =
            maximize_over_vertices(&[rat_int(1), rat_int(1)], &verts).unwrap();
        assert_eq!(max, rat_int(2));
        assert_eq!(argmax, vec![2]);
        let (zero_max, all) =
            maximize_over_vertices(&[rat_int(0), rat_int(0)], &verts).unwrap();
        assert_eq!(zero_max, rat_int(0));
        assert_eq!(all, vec![0, 1, 2]);
        assert!(matches!(
            maximize_over_vertices(&[rat_int(1)], &[]),
            Err(LpError::EmptyVertexList)
        ));
    }
}
