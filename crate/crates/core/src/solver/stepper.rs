//! Strong-stability-preserving time integrators.
//!
//! Both schemes are convex combinations of forward Euler steps, which is
//! what transfers the Euler-stage admissibility guarantee to the full
//! update. The limiter is applied after every stage / step.

use crate::error::Result;

/// Linear-space operations the integrators need.
pub trait SspVector: Clone {
    fn scale(&mut self, c: f64);
    fn add_scaled(&mut self, c: f64, other: &Self);
}

impl<const DIM: usize> SspVector for super::Coeffs<DIM> {
    fn scale(&mut self, c: f64) {
        for u in &mut self.data {
            u.scale(c);
        }
    }

    fn add_scaled(&mut self, c: f64, other: &Self) {
        for (u, v) in self.data.iter_mut().zip(other.data.iter()) {
            u.axpy(c, v);
        }
    }
}

impl SspVector for super::Solution1d {
    fn scale(&mut self, c: f64) {
        self.primal.scale(c);
        self.dual.scale(c);
    }

    fn add_scaled(&mut self, c: f64, other: &Self) {
        self.primal.add_scaled(c, &other.primal);
        self.dual.add_scaled(c, &other.dual);
    }
}

impl SspVector for super::Solution2d {
    fn scale(&mut self, c: f64) {
        self.primal.scale(c);
        self.dual.scale(c);
    }

    fn add_scaled(&mut self, c: f64, other: &Self) {
        self.primal.add_scaled(c, &other.primal);
        self.dual.add_scaled(c, &other.dual);
    }
}

/// Third-order SSP Runge-Kutta step. `l_u` is the right-hand side already
/// evaluated at `u` (stage one shares it with the caller's history);
/// `limit` is applied after every stage.
pub fn step_ssp_rk3<S: SspVector>(
    u: &S,
    l_u: &S,
    dt: f64,
    rhs: &mut dyn FnMut(&S) -> Result<S>,
    limit: &mut dyn FnMut(&mut S) -> Result<()>,
) -> Result<S> {
    let mut u1 = u.clone();
    u1.add_scaled(dt, l_u);
    limit(&mut u1)?;

    let l1 = rhs(&u1)?;
    let mut u2 = u1;
    u2.add_scaled(dt, &l1);
    u2.scale(0.25);
    u2.add_scaled(0.75, u);
    limit(&mut u2)?;

    let l2 = rhs(&u2)?;
    let mut u3 = u2;
    u3.add_scaled(dt, &l2);
    u3.scale(2.0 / 3.0);
    u3.add_scaled(1.0 / 3.0, u);
    limit(&mut u3)?;
    Ok(u3)
}

/// Third-order SSP multi-step update
/// `U^{n+1} = 16/27 (U^n + 3 dt L(U^n)) + 11/27 (U^{n-3} + 12/11 dt L(U^{n-3}))`.
pub fn step_ssp_ms3<S: SspVector>(
    u_n: &S,
    l_n: &S,
    u_nm3: &S,
    l_nm3: &S,
    dt: f64,
    limit: &mut dyn FnMut(&mut S) -> Result<()>,
) -> Result<S> {
    let mut r = u_n.clone();
    r.add_scaled(3.0 * dt, l_n);
    r.scale(16.0 / 27.0);
    let mut tail = u_nm3.clone();
    tail.add_scaled(12.0 / 11.0 * dt, l_nm3);
    r.add_scaled(11.0 / 27.0, &tail);
    limit(&mut r)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[derive(Clone, Copy, Debug)]
    struct Scalar(f64);

    impl SspVector for Scalar {
        fn scale(&mut self, c: f64) {
            self.0 *= c;
        }
        fn add_scaled(&mut self, c: f64, other: &Self) {
            self.0 += c * other.0;
        }
    }

    #[test]
    fn rk3_matches_classical_stability_polynomial() {
        // u' = lambda u: one step must give u (1 + z + z^2/2 + z^3/6).
        let lambda = -0.7;
        let dt = 0.31;
        let mut rhs = |u: &Scalar| Ok(Scalar(lambda * u.0));
        let mut limit = |_: &mut Scalar| Ok(());
        let u0 = Scalar(1.3);
        let u1 = step_ssp_rk3(&u0, &Scalar(lambda * u0.0), dt, &mut rhs, &mut limit).unwrap();
        let z = lambda * dt;
        let expect = u0.0 * (1.0 + z + z * z / 2.0 + z * z * z / 6.0);
        assert_relative_eq!(u1.0, expect, max_relative = 1e-14);
    }

    #[test]
    fn ms3_coefficients_form_convex_combination() {
        assert_relative_eq!(16.0 / 27.0 + 11.0 / 27.0, 1.0, epsilon = 1e-16);
        // A constant state is a fixed point of the update.
        let mut limit = |_: &mut Scalar| Ok(());
        let u = Scalar(2.5);
        let zero = Scalar(0.0);
        let next = step_ssp_ms3(&u, &zero, &u, &zero, 0.1, &mut limit).unwrap();
        assert_relative_eq!(next.0, 2.5, epsilon = 1e-15);
    }

    #[test]
    fn ms3_third_order_on_linear_test() {
        // u' = lambda u with exact history: the update must be third-order
        // accurate (error O(dt^4) per step).
        let lambda = 1.0;
        let err_at = |dt: f64| -> f64 {
            let u = |t: f64| (lambda * t).exp();
            let mut limit = |_: &mut Scalar| Ok(());
            let un = Scalar(u(3.0 * dt));
            let unm3 = Scalar(u(0.0));
            let next = step_ssp_ms3(
                &un,
                &Scalar(lambda * un.0),
                &unm3,
                &Scalar(lambda * unm3.0),
                dt,
                &mut limit,
            )
            .unwrap();
            (next.0 - u(4.0 * dt)).abs()
        };
        let e1 = err_at(0.02);
        let e2 = err_at(0.01);
        let order = (e1 / e2).log2();
        assert!(order > 3.7 && order < 4.3, "per-step order {order}");
    }
}
