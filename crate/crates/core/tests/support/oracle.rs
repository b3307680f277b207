//! Independent reference implementations used only by tests.

#![allow(dead_code)]

/// Brute-force Π(q,F) for an atomic opponent given as (weight, point)
/// pairs: every tie is resolved both ways with probability ½ each.
pub fn brute_force_payoff(q: &[f64], atoms: &[(f64, Vec<f64>)], value: impl Fn(usize) -> f64) -> f64 {
    let n = q.len();
    let mut total = 0.0;
    for (w, p) in atoms {
        let mut wins = 0usize;
        let mut ties = Vec::new();
        for j in 0..n {
            if (q[j] - p[j]).abs() <= 1e-12 {
                ties.push(j);
            } else if q[j] > p[j] {
                wins |= 1 << j;
            }
        }
        let share = w / (1u64 << ties.len()) as f64;
        for pick in 0..1usize << ties.len() {
            let mut mask = wins;
            for (b, &j) in ties.iter().enumerate() {
                if pick >> b & 1 == 1 {
                    mask |= 1 << j;
                }
            }
            total += share * value(mask);
        }
    }
    total
}

/// Probability that the win set equals `mask`, by the same enumeration.
pub fn brute_force_win_set(q: &[f64], atoms: &[(f64, Vec<f64>)], mask: usize) -> f64 {
    brute_force_payoff(q, atoms, |m| if m == mask { 1.0 } else { 0.0 })
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when the matrix is numerically singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            for c in col..m {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// max c·x s.t. A x = b, x ≥ 0 by enumerating every basis of size m = rows.
/// Assumes A has full row rank and the program is bounded.
pub fn support_enumeration(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    let m = a.len();
    let cols = c.len();
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..m).collect();
    if cols < m {
        return None;
    }
    loop {
        let mat: Vec<Vec<f64>> = (0..m).map(|r| idx.iter().map(|&j| a[r][j]).collect()).collect();
        if let Some(x) = solve_square(mat, b.to_vec()) {
            if x.iter().all(|&v| v >= -1e-11) {
                let val: f64 = idx.iter().zip(&x).map(|(&j, &v)| c[j] * v).sum();
                best = Some(best.map_or(val, |b: f64| b.max(val)));
            }
        }
        // Next m-combination in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < cols - m + i {
                break;
            }
        }
        idx[i] += 1;
        for k in i + 1..m {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Plain bisection on a sign change; panics if the bracket has none.
pub fn bisection(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// E[v(Binomial(n,½))] by enumerating all subsets.
pub fn half_tie_average(values: &[f64]) -> f64 {
    let n = values.len() - 1;
    let total: f64 = (0..1usize << n).map(|m| values[m.count_ones() as usize]).sum();
    total / (1u64 << n) as f64
}

/// Mass at 1 for the diagonal-plus-mass policy, found from its defining
/// conditions: β = 0, Π(1) = n·α, Π(p̂·1) = (1−μ)v(n) = n·α·p̂, and
/// Bayes-plausibility (1−μ)p̂/2 + μ = λ.
pub fn sup_mass_by_bisection(lambda: f64, values: &[f64]) -> f64 {
    let n = values.len() - 1;
    let vn = values[n];
    let tie = half_tie_average(values);
    let bayes = |mu: f64| {
        let alpha = (mu * tie + (1.0 - mu) * vn) / n as f64;
        let p_hat = (1.0 - mu) * vn / (n as f64 * alpha);
        (1.0 - mu) * p_hat / 2.0 + mu - lambda
    };
    bisection(bayes, 0.0, 1.0)
}
