//! Natural cubic spline interpolation on strictly increasing knots.

/// Natural cubic spline through `(x_i, y_i)`; evaluation outside the knot
/// range continues the boundary polynomial.
pub(crate) struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(x.len() >= 4, "cubic spline needs at least 4 knots");
        assert!(x.windows(2).all(|w| w[0] < w[1]), "knots must be strictly increasing");

        let n = x.len();
        let mut m = vec![0.0; n];

        // Thomas algorithm on the interior tridiagonal system.
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        for i in 2..n - 1 {
            let lower = x[i] - x[i - 1];
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (1..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }

        Self { x: x.to_vec(), y: y.to_vec(), m }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        // Clamp to the boundary segments so out-of-range points extend the
        // end polynomials.
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interpolates_knots_exactly() {
        let x = [0.0, 1.0, 2.5, 3.0, 4.0];
        let y = [1.0, -2.0, 0.5, 3.0, 3.0];
        let s = CubicSpline::new(&x, &y);
        for (xi, yi) in x.iter().zip(&y) {
            assert_abs_diff_eq!(s.eval(*xi), *yi, epsilon = 1e-12);
        }
    }

    #[test]
    fn reproduces_linear_data() {
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let s = CubicSpline::new(&x, &y);
        for t in [-0.5, 0.2, 3.7, 6.9, 7.5] {
            assert_abs_diff_eq!(s.eval(t), 3.0 * t - 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn natural_boundary_second_derivative_is_zero() {
        let x: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let y = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        let s = CubicSpline::new(&x, &y);
        assert_eq!(s.m[0], 0.0);
        assert_eq!(s.m[5], 0.0);
    }
}
