//! Scalar root finding and condition-sign scanning.

/// Real roots of a·x² + b·x + c in ascending order, computed without
/// cancellation. A negligible leading coefficient degrades to the linear case.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// Root of a continuous `f` on [lo, hi] with a sign change, to width `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= tol {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Boundary between an infeasible point `bad` and a feasible point `good`,
/// returned on the feasible side.
pub fn refine_boundary(feasible: &impl Fn(f64) -> bool, mut bad: f64, mut good: f64, tol: f64) -> f64 {
    while (good - bad).abs() > tol {
        let mid = 0.5 * (good + bad);
        if feasible(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Closed intervals of (lo, hi] on which `feasible` holds, found by scanning
/// at `step` and bisecting each boundary to `tol`.
pub fn scan_intervals(feasible: impl Fn(f64) -> bool, lo: f64, hi: f64, step: f64, tol: f64) -> Vec<(f64, f64)> {
    assert!(step > 0.0 && hi > lo);
    let count = ((hi - lo) / step).ceil() as usize;
    let at = |i: usize| if i >= count { hi } else { lo + i as f64 * step };
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev_ok = feasible(lo);
    if prev_ok {
        start = Some(lo);
    }
    for i in 1..=count {
        let x = at(i);
        let ok = feasible(x);
        match (prev_ok, ok) {
            (false, true) => start = Some(refine_boundary(&feasible, at(i - 1), x, tol)),
            (true, false) => {
                let end = refine_boundary(&feasible, x, at(i - 1), tol);
                out.push((start.take().unwrap(), end));
            }
            _ => {}
        }
        prev_ok = ok;
    }
    if let Some(s) = start {
        out.push((s, hi));
    }
    out
}

/// Minimizer of `f` on [lo, hi]: dense scan then golden-section refinement
/// around the best sample.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> (f64, f64) {
    let step = (hi - lo) / samples as f64;
    let (mut best_x, mut best_f) = (lo, f(lo));
    for i in 1..=samples {
        let x = lo + i as f64 * step;
        let fx = f(x);
        if fx < best_f {
            best_x = x;
            best_f = fx;
        }
    }
    let (mut a, mut b) = ((best_x - step).max(lo), (best_x + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        if b - a <= 1e-15 {
            break;
        }
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx < best_f {
        (x, fx)
    } else {
        (best_x, best_f)
    }
}

/// Default step of the feasibility scans.
pub const DEFAULT_SCAN_STEP: f64 = 1e-3;

/// Feasible masses μ ∈ (0, ½] where `worst(μ)` ≤ 0, found by scanning at
/// `step` with boundaries bisected to 1e-9. When the scan finds nothing an
/// isolated feasible point is sought by minimizing `worst`.
pub fn scan_feasible_set(worst: impl Fn(f64) -> f64, step: f64) -> Vec<(f64, f64)> {
    let feasible = |mu: f64| mu > 0.0 && worst(mu) <= 0.0;
    let found = scan_intervals(feasible, 0.0, 0.5, step, 1e-9);
    if !found.is_empty() {
        return found;
    }
    let (mu, w) = minimize_scalar(&worst, 1e-9, 0.5, 5000);
    if w <= 1e-12 {
        vec![(mu, mu)]
    } else {
        Vec::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_cases() {
        assert_eq!(quadratic_roots(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert_eq!(quadratic_roots(0.0, 2.0, -1.0), vec![0.5]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        let r = quadratic_roots(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-20);
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0, 1e-9).is_none());
    }

    #[test]
    fn scanning_recovers_intervals() {
        let iv = scan_intervals(|x| (0.2..=0.3).contains(&x) || x >= 0.45, 0.0, 0.5, 1e-3, 1e-10);
        assert_eq!(iv.len(), 2);
        assert!((iv[0].0 - 0.2).abs() < 1e-9 && (iv[0].1 - 0.3).abs() < 1e-9);
        assert!((iv[1].0 - 0.45).abs() < 1e-9 && iv[1].1 == 0.5);
    }

    #[test]
    fn minimizer_finds_kink() {
        let (x, fx) = minimize_scalar(|x| (x - 0.123456789).abs(), 0.0, 1.0, 1000);
        assert!((x - 0.123456789).abs() < 1e-9 && fx < 1e-9);
    }
}
