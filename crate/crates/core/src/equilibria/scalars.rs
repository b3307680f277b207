//! Binomial averages of an anonymous utility that drive the multi-receiver
//! constructions.

use super::EquilibriumError;

/// Probability that Binomial(k, ½) equals j.
pub fn binomial_half(k: usize, j: usize) -> f64 {
    if j > k {
        return 0.0;
    }
    let j = j.min(k - j);
    let mut c = 1.0;
    for i in 0..j {
        c = c * (k - i) as f64 / (i + 1) as f64;
    }
    c * 0.5f64.powi(k as i32)
}

/// Σ_{j=from}^{k} P[Binomial(k,½)=j] · v(base + j).
pub fn binomial_average(v: &[f64], k: usize, base: usize, from: usize) -> f64 {
    (from..=k).map(|j| binomial_half(k, j) * v[base + j]).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiReceiverScalars {
    pub n: usize,
    /// Σ_{j≥1} P[Bin(n,½)=j] v(j).
    pub t_full: f64,
    /// 2 T_full − v(n).
    pub r: f64,
    /// Even n only: Σ_{j≥1} P[Bin(n/2,½)=j] v(j).
    pub t_half: Option<f64>,
    /// Even n only: Σ_{j≥1} P[Bin(n/2,½)=j] v(j + n/2).
    pub t_bar: Option<f64>,
    /// Even n only: T_half + T_bar + v(n/2)(2^{−n/2} − 2).
    pub s: Option<f64>,
}

impl MultiReceiverScalars {
    pub fn s(&self) -> Result<f64, EquilibriumError> {
        self.s.ok_or(EquilibriumError::OddReceivers(self.n))
    }
}

/// Scalars for v(0..=n); the half-size sums are present only for even n.
pub fn multi_scalars(v: &[f64]) -> MultiReceiverScalars {
    let n = v.len() - 1;
    let t_full = binomial_average(v, n, 0, 1);
    let (t_half, t_bar, s) = if n % 2 == 0 {
        let h = n / 2;
        let t_half = binomial_average(v, h, 0, 1);
        let t_bar = binomial_average(v, h, h, 1);
        let s = t_half + t_bar + v[h] * (0.5f64.powi(h as i32) - 2.0);
        (Some(t_half), Some(t_bar), Some(s))
    } else {
        (None, None, None)
    };
    MultiReceiverScalars {
        n,
        t_full,
        r: 2.0 * t_full - v[n],
        t_half,
        t_bar,
        s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_receiver_reduction() {
        let (t, r) = (0.3, 1.0);
        let m = multi_scalars(&[0.0, t, r]);
        assert!((m.r - (t - r / 2.0)).abs() <= 1e-15);
        assert!((m.s.unwrap() - (r / 2.0 - t)).abs() <= 1e-15);
    }

    #[test]
    fn square_utility_n4() {
        let v: Vec<f64> = (0..=4).map(|k| (k * k) as f64).collect();
        let m = multi_scalars(&v);
        assert_eq!(m.t_full, 5.0);
        assert_eq!(m.r, -6.0);
    }

    #[test]
    fn additive_scalars_vanish() {
        for n in [2usize, 4, 6, 8] {
            let v: Vec<f64> = (0..=n).map(|k| k as f64).collect();
            let m = multi_scalars(&v);
            assert!(m.r.abs() < 1e-14 && m.s.unwrap().abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn odd_n_has_no_half_sums() {
        let m = multi_scalars(&[0.0, 1.0, 1.5, 1.8]);
        assert!(m.s().is_err());
        assert!(m.t_half.is_none());
    }
}
