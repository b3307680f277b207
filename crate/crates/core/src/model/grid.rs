use super::ModelError;

/// Largest number of grid points accepted.
const MAX_GRID_POINTS: usize = 50_000_000;

/// Regular grid {0, h, 2h, ..., 1}^n over posterior space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(n: usize, points_per_axis: usize) -> Result<Self, ModelError> {
        if points_per_axis < 2 {
            return Err(ModelError::GridTooSmall(points_per_axis));
        }
        if n == 0 {
            return Err(ModelError::ReceiverCount {
                got: 0,
                max: super::MAX_RECEIVERS,
            });
        }
        let too_large = ModelError::GridTooLarge { n, points_per_axis };
        let mut total: usize = 1;
        for _ in 0..n {
            total = total.checked_mul(points_per_axis).ok_or(too_large.clone())?;
        }
        if total > MAX_GRID_POINTS {
            return Err(too_large);
        }
        Ok(Self { n, points_per_axis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Spacing between neighbouring coordinates.
    pub fn step(&self) -> f64 {
        1.0 / (self.points_per_axis - 1) as f64
    }

    /// The i-th axis coordinate; exact at both ends.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 / (self.points_per_axis - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes the point with linear index `idx` into `out`. The first
    /// coordinate varies fastest.
    pub fn point(&self, mut idx: usize, out: &mut [f64]) {
        for x in out.iter_mut().take(self.n) {
            *x = self.coordinate(idx % self.points_per_axis);
            idx /= self.points_per_axis;
        }
    }

    /// Visits every grid point in index order.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let m = self.points_per_axis;
        let mut digits = vec![0usize; self.n];
        let mut point = vec![0.0; self.n];
        for idx in 0..self.len() {
            f(idx, &point);
            for (d, x) in digits.iter_mut().zip(point.iter_mut()) {
                *d += 1;
                if *d < m {
                    *x = self.coordinate(*d);
                    break;
                }
                *d = 0;
                *x = 0.0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = Grid::new(2, 51).unwrap();
        assert_eq!(g.coordinate(0), 0.0);
        assert_eq!(g.coordinate(50), 1.0);
        assert_eq!(g.len(), 2601);
        assert!((g.step() - 0.02).abs() < 1e-16);
    }

    #[test]
    fn iteration_matches_indexing() {
        let g = Grid::new(3, 4).unwrap();
        let mut buf = vec![0.0; 3];
        let mut count = 0;
        g.for_each_point(|idx, p| {
            g.point(idx, &mut buf);
            assert_eq!(p, &buf[..]);
            count += 1;
        });
        assert_eq!(count, 64);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(Grid::new(2, 1), Err(ModelError::GridTooSmall(1)));
        assert!(matches!(Grid::new(16, 51), Err(ModelError::GridTooLarge { .. })));
    }
}
