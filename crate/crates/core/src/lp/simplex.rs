//! Two-phase primal simplex for `max c·x s.t. Ax = b, x ≥ 0`.
//!
//! The basis inverse is kept as a dense m×m matrix and refactorized
//! periodically. Columns are supplied through [`ColumnSource`] so that very
//! wide programs (one column per grid point) never materialize A.

use super::LpError;

/// Maximum number of equality rows.
pub const MAX_ROWS: usize = 64;
/// Pivots between full refactorizations of the basis inverse.
const REFACTOR_EVERY: usize = 32;
/// Smallest direction entry accepted as a pivot.
const PIVOT_TOL: f64 = 1e-11;
/// Minimum objective gain that counts as progress for stall detection.
const PROGRESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables; never cycles.
    Bland,
    /// Largest reduced cost, falling back to Bland after a stall.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    pub pivot_rule: PivotRule,
    /// Feasibility and optimality tolerance.
    pub tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            pivot_rule: PivotRule::Dantzig,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// No progress under either pivot rule, or a singular basis.
    Stalled,
}

/// Quality measures of an optimal solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LpDiagnostics {
    /// ‖Ax − b‖∞.
    pub primal_residual: f64,
    /// |c·x − b·y|.
    pub duality_gap: f64,
    /// max_j (c_j − y·A_j); nonpositive up to tolerance at optimality.
    pub max_reduced_cost: f64,
    /// Most negative basic variable.
    pub min_x: f64,
}

/// Basic solution returned by the column-source solver.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicSolution {
    pub status: LpStatus,
    /// Nonzero structural variables as (column, value), sorted by column.
    pub support: Vec<(usize, f64)>,
    pub value: f64,
    pub duals: Vec<f64>,
    pub iterations: usize,
    pub diagnostics: LpDiagnostics,
}

/// Read access to the columns of an equality-form LP.
pub trait ColumnSource {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn rhs(&self) -> &[f64];
    fn cost(&self, j: usize) -> f64;
    /// Writes column `j` of A into `out` (length `rows()`).
    fn column(&self, j: usize, out: &mut [f64]);

    /// Calls `visit(j, c_j − y·A_j)` for columns in increasing order until
    /// `visit` returns false.
    fn price(&self, y: &[f64], visit: &mut dyn FnMut(usize, f64) -> bool) {
        let mut col = vec![0.0; self.rows()];
        for j in 0..self.cols() {
            self.column(j, &mut col);
            let d = self.cost(j) - y.iter().zip(&col).map(|(a, b)| a * b).sum::<f64>();
            if !visit(j, d) {
                return;
            }
        }
    }
}

/// Explicit LP with a dense column-major constraint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    c: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl LinearProgram {
    /// Builds `max c·x s.t. rows·x = b, x ≥ 0` from row-major constraints.
    pub fn new(c: Vec<f64>, rows: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, LpError> {
        let m = rows.len();
        if m == 0 || m > MAX_ROWS {
            return Err(LpError::RowCount(m));
        }
        if b.len() != m {
            return Err(LpError::Shape(format!("{} right-hand sides for {m} rows", b.len())));
        }
        let nvars = c.len();
        if nvars == 0 {
            return Err(LpError::Shape("no variables".into()));
        }
        let mut a = vec![0.0; m * nvars];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nvars {
                return Err(LpError::Shape(format!(
                    "row {i} has {} entries, expected {nvars}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                a[j * m + i] = x;
            }
        }
        if c.iter().chain(&a).chain(&b).any(|x| !x.is_finite()) {
            return Err(LpError::Shape("non-finite data".into()));
        }
        Ok(Self { c, a, b })
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }
}

impl ColumnSource for LinearProgram {
    fn rows(&self) -> usize {
        self.b.len()
    }
    fn cols(&self) -> usize {
        self.c.len()
    }
    fn rhs(&self) -> &[f64] {
        &self.b
    }
    fn cost(&self, j: usize) -> f64 {
        self.c[j]
    }
    fn column(&self, j: usize, out: &mut [f64]) {
        let m = self.b.len();
        out.copy_from_slice(&self.a[j * m..(j + 1) * m]);
    }
}

/// Solution of an explicit LP with a dense primal vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub value: f64,
    pub duals: Vec<f64>,
    pub iterations: usize,
    pub diagnostics: LpDiagnostics,
}

pub fn solve_lp(p: &LinearProgram, opts: LpOptions) -> LpSolution {
    let sol = solve_columns(p, opts);
    let mut x = vec![0.0; p.num_vars()];
    for &(j, v) in &sol.support {
        x[j] = v;
    }
    LpSolution {
        status: sol.status,
        x,
        value: sol.value,
        duals: sol.duals,
        iterations: sol.iterations,
        diagnostics: sol.diagnostics,
    }
}

/// Runs the two-phase simplex over any column source.
pub fn solve_columns<S: ColumnSource + ?Sized>(src: &S, opts: LpOptions) -> BasicSolution {
    assert!(src.rows() >= 1 && src.rows() <= MAX_ROWS, "row count out of range");
    let mut s = Solver::new(src, opts);
    s.run()
}

struct Solver<'a, S: ColumnSource + ?Sized> {
    src: &'a S,
    opts: LpOptions,
    m: usize,
    nvars: usize,
    /// Row signs making the right-hand side nonnegative.
    sign: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    phase_one: bool,
    iterations: usize,
    since_refactor: usize,
    rule: PivotRule,
    col: Vec<f64>,
}

enum Step {
    Pivoted,
    Optimal,
    Unbounded,
    Singular,
}

impl<'a, S: ColumnSource + ?Sized> Solver<'a, S> {
    fn new(src: &'a S, opts: LpOptions) -> Self {
        let m = src.rows();
        let sign: Vec<f64> = src.rhs().iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect();
        let b: Vec<f64> = src.rhs().iter().map(|x| x.abs()).collect();
        let nvars = src.cols();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        Self {
            src,
            opts,
            m,
            nvars,
            sign,
            xb: b.clone(),
            b,
            basis: (nvars..nvars + m).collect(),
            binv,
            phase_one: true,
            iterations: 0,
            since_refactor: 0,
            rule: opts.pivot_rule,
            col: vec![0.0; m],
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.nvars
    }

    fn cost(&self, j: usize) -> f64 {
        if self.is_artificial(j) {
            if self.phase_one {
                -1.0
            } else {
                0.0
            }
        } else if self.phase_one {
            0.0
        } else {
            self.src.cost(j)
        }
    }

    /// Column j of the sign-adjusted constraint matrix.
    fn load_column(&mut self, j: usize) {
        if self.is_artificial(j) {
            self.col.iter_mut().for_each(|x| *x = 0.0);
            self.col[j - self.nvars] = 1.0;
        } else {
            self.src.column(j, &mut self.col);
            for (x, s) in self.col.iter_mut().zip(&self.sign) {
                *x *= s;
            }
        }
    }

    /// B⁻¹ times the loaded column.
    fn direction(&self) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|i| (0..m).map(|k| self.binv[i * m + k] * self.col[k]).sum())
            .collect()
    }

    /// Simplex multipliers in the original row orientation.
    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|k| {
                let yk: f64 = (0..m).map(|i| self.cost(self.basis[i]) * self.binv[i * m + k]).sum();
                yk * self.sign[k]
            })
            .collect()
    }

    fn objective(&self) -> f64 {
        (0..self.m).map(|i| self.cost(self.basis[i]) * self.xb[i]).sum()
    }

    /// Rebuilds B⁻¹ from the basis columns by Gauss-Jordan elimination.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for i in 0..m {
            self.load_column(self.basis[i]);
            for k in 0..m {
                bmat[k * m + i] = self.col[k];
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&x, &y| bmat[x * m + c].abs().total_cmp(&bmat[y * m + c].abs()))
                .unwrap();
            if bmat[p * m + c].abs() < 1e-14 {
                return false;
            }
            for k in 0..m {
                bmat.swap(c * m + k, p * m + k);
                inv.swap(c * m + k, p * m + k);
            }
            let d = bmat[c * m + c];
            for k in 0..m {
                bmat[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for r in 0..m {
                if r != c {
                    let f = bmat[r * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            bmat[r * m + k] -= f * bmat[c * m + k];
                            inv[r * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = (0..m)
            .map(|i| (0..m).map(|k| self.binv[i * m + k] * self.b[k]).sum())
            .collect();
        for x in &mut self.xb {
            if x.abs() < 1e-13 {
                *x = 0.0;
            }
        }
        self.since_refactor = 0;
        true
    }

    fn pivot(&mut self, r: usize, entering: usize, u: &[f64]) {
        let m = self.m;
        let ur = u[r];
        let theta = self.xb[r] / ur;
        for k in 0..m {
            self.binv[r * m + k] /= ur;
        }
        for i in 0..m {
            if i != r && u[i] != 0.0 {
                let f = u[i];
                for k in 0..m {
                    self.binv[i * m + k] -= f * self.binv[r * m + k];
                }
                self.xb[i] -= theta * f;
                if self.xb[i].abs() < 1e-13 {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        self.basis[r] = entering;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Chooses the entering structural column, if any improves.
    fn price(&self) -> Option<usize> {
        let y = self.duals();
        let enter_tol = 0.1 * self.opts.tol;
        let phase_one = self.phase_one;
        let rule = self.rule;
        let mut best: Option<(usize, f64)> = None;
        self.src.price(&y, &mut |j, d| {
            // Structural costs are zero in phase one.
            let d = if phase_one { d - self.src.cost(j) } else { d };
            if d > enter_tol {
                match rule {
                    PivotRule::Bland => {
                        best = Some((j, d));
                        return false;
                    }
                    PivotRule::Dantzig => {
                        if best.map_or(true, |(_, bd)| d > bd) {
                            best = Some((j, d));
                        }
                    }
                }
            }
            true
        });
        best.map(|(j, _)| j)
    }

    fn step(&mut self) -> Step {
        let Some(entering) = self.price() else {
            return Step::Optimal;
        };
        self.load_column(entering);
        let u = self.direction();
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let art_blocking = !self.phase_one && self.is_artificial(self.basis[i]) && u[i].abs() > PIVOT_TOL;
            let ratio = if art_blocking {
                0.0
            } else if u[i] > PIVOT_TOL {
                self.xb[i].max(0.0) / u[i]
            } else {
                continue;
            };
            let better = match leave {
                None => true,
                Some((r, best)) => {
                    if ratio < best - 1e-12 * (1.0 + best.abs()) {
                        true
                    } else if ratio <= best + 1e-12 * (1.0 + best.abs()) {
                        match self.rule {
                            PivotRule::Bland => self.basis[i] < self.basis[r],
                            PivotRule::Dantzig => u[i].abs() > u[r].abs(),
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Step::Unbounded;
        };
        self.pivot(r, entering, &u);
        if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
            return Step::Singular;
        }
        Step::Pivoted
    }

    /// Iterates until optimal; `None` means the phase ended normally.
    fn iterate(&mut self) -> Option<LpStatus> {
        let stall_limit = 10 * (self.m + self.nvars);
        let mut stalled = 0usize;
        let mut last = self.objective();
        loop {
            match self.step() {
                Step::Optimal => {
                    // Confirm optimality on a fresh factorization.
                    if self.since_refactor == 0 {
                        return None;
                    }
                    if !self.refactor() {
                        return Some(LpStatus::Stalled);
                    }
                    if self.price().is_none() {
                        return None;
                    }
                }
                Step::Unbounded => return Some(LpStatus::Unbounded),
                Step::Singular => return Some(LpStatus::Stalled),
                Step::Pivoted => {
                    let obj = self.objective();
                    if obj > last + PROGRESS_TOL {
                        stalled = 0;
                        last = obj;
                    } else {
                        stalled += 1;
                        if stalled >= stall_limit {
                            if self.rule == PivotRule::Bland {
                                return Some(LpStatus::Stalled);
                            }
                            self.rule = PivotRule::Bland;
                            stalled = 0;
                        }
                    }
                }
            }
        }
    }

    /// Pivots remaining artificial variables out of the basis where possible.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        for r in 0..m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            // Row r of B⁻¹ in original row orientation.
            let rho: Vec<f64> = (0..m).map(|k| self.binv[r * m + k] * self.sign[k]).collect();
            let mut found = None;
            self.src.price(&rho, &mut |j, d| {
                // d = c_j − ρ·A_j, so the pivot entry is c_j − d.
                let entry = self.src.cost(j) - d;
                if entry.abs() > 1e-9 && !self.basis.contains(&j) {
                    found = Some(j);
                    return false;
                }
                true
            });
            if let Some(j) = found {
                self.load_column(j);
                let u = self.direction();
                self.pivot(r, j, &u);
            }
        }
    }

    fn run(&mut self) -> BasicSolution {
        if let Some(status) = self.iterate() {
            return self.finish(status);
        }
        let infeasibility = -self.objective();
        let scale = 1.0 + self.b.iter().cloned().fold(0.0, f64::max);
        if infeasibility > self.opts.tol * scale {
            return self.finish(LpStatus::Infeasible);
        }
        self.drive_out_artificials();
        if !self.refactor() {
            return self.finish(LpStatus::Stalled);
        }
        self.phase_one = false;
        self.rule = self.opts.pivot_rule;
        let status = self.iterate().unwrap_or(LpStatus::Optimal);
        self.finish(status)
    }

    fn finish(&mut self, status: LpStatus) -> BasicSolution {
        if status == LpStatus::Optimal {
            self.refactor();
        }
        let mut support: Vec<(usize, f64)> = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(&j, &x)| !self.is_artificial(j) && x != 0.0)
            .map(|(&j, &x)| (j, x))
            .collect();
        support.sort_by_key(|&(j, _)| j);
        let duals = self.duals();
        let value: f64 = support.iter().map(|&(j, x)| self.src.cost(j) * x).sum();
        let diagnostics = if status == LpStatus::Optimal {
            self.diagnostics(&support, &duals, value)
        } else {
            LpDiagnostics::default()
        };
        BasicSolution {
            status,
            support,
            value,
            duals,
            iterations: self.iterations,
            diagnostics,
        }
    }

    fn diagnostics(&mut self, support: &[(usize, f64)], y: &[f64], value: f64) -> LpDiagnostics {
        let m = self.m;
        let mut ax = vec![0.0; m];
        let mut col = vec![0.0; m];
        for &(j, x) in support {
            self.src.column(j, &mut col);
            for k in 0..m {
                ax[k] += col[k] * x;
            }
        }
        let rhs = self.src.rhs();
        let primal_residual = (0..m).map(|k| (ax[k] - rhs[k]).abs()).fold(0.0, f64::max);
        let dual_value: f64 = (0..m).map(|k| y[k] * rhs[k]).sum();
        let mut max_reduced_cost = f64::NEG_INFINITY;
        self.src.price(y, &mut |_, d| {
            max_reduced_cost = max_reduced_cost.max(d);
            true
        });
        LpDiagnostics {
            primal_residual,
            duality_gap: (value - dual_value).abs(),
            max_reduced_cost,
            min_x: self.xb.iter().cloned().fold(0.0, f64::min),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[f64], rows: &[&[f64]], b: &[f64]) -> LinearProgram {
        LinearProgram::new(c.to_vec(), rows.iter().map(|r| r.to_vec()).collect(), b.to_vec()).unwrap()
    }

    #[test]
    fn trivial_optimum() {
        let p = lp(&[1.0, 0.0], &[&[1.0, 1.0]], &[1.0]);
        let s = solve_lp(&p, LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, 1.0);
        assert_eq!(s.x, vec![1.0, 0.0]);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_program() {
        let p = lp(&[0.0], &[&[1.0]], &[-1.0]);
        assert_eq!(solve_lp(&p, LpOptions::default()).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_program() {
        let p = lp(&[1.0, 0.0], &[&[1.0, -1.0]], &[1.0]);
        assert_eq!(solve_lp(&p, LpOptions::default()).status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let p = lp(&[1.0, 2.0, 0.0], &[&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]], &[1.0, 2.0]);
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let s = solve_lp(&p, LpOptions { pivot_rule: rule, tol: 1e-9 });
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.value - 2.0).abs() < 1e-12);
            assert!(s.diagnostics.duality_gap < 1e-12);
            assert!(s.diagnostics.max_reduced_cost < 1e-9);
        }
    }

    #[test]
    fn mixed_sign_rows_and_duals() {
        // max 3x1 + 2x2 + 4x3 s.t. x1 + x2 + 2x3 = 4, −2x1 + x3 = −1 (so x1 ≥ 1/2).
        let p = lp(&[3.0, 2.0, 4.0], &[&[1.0, 1.0, 2.0], &[-2.0, 0.0, 1.0]], &[4.0, -1.0]);
        let s = solve_lp(&p, LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        // Brute force over bases: {x1,x3}: x1=1.2, x3=1.4 → 9.2; {x1,x2}: x1=0.5,x2=3.5 → 8.5.
        assert!((s.value - 9.2).abs() < 1e-12, "{}", s.value);
        assert!(s.diagnostics.duality_gap < 1e-12);
        assert!(s.diagnostics.primal_residual < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example in equality form with slacks; cycles under naive rules.
        let c = [0.75, -150.0, 0.02, -6.0, 0.0, 0.0, 0.0];
        let rows: [&[f64]; 3] = [
            &[0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
            &[0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let p = lp(&c, &rows, &[0.0, 0.0, 1.0]);
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let s = solve_lp(&p, LpOptions { pivot_rule: rule, tol: 1e-9 });
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.value - 0.05).abs() < 1e-12, "{}", s.value);
        }
    }

    #[test]
    fn shape_errors() {
        assert!(LinearProgram::new(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0]).is_err());
        assert!(LinearProgram::new(vec![1.0], vec![], vec![]).is_err());
        assert!(LinearProgram::new(vec![f64::NAN], vec![vec![1.0]], vec![1.0]).is_err());
    }
}
