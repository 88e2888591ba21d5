//! Conservative-to-primitive recovery: solve the pressure equation.
//!
//! For a given admissible `U = (D, m, E)` the pressure satisfies
//! `E + p = D h(p, rho(p)) W(p)` with `v(p) = |m|/(E + p)` and
//! `rho(p) = D sqrt(1 - v^2)`. We find the root of the equivalent residual
//!
//! `g(p) = D h(p, rho(p)) - (E + p) sqrt(1 - v(p)^2)`
//!
//! (the textbook pressure function divided by `sqrt(1 - v^2)`, which keeps
//! both terms on the `D h` scale for ultra-relativistic states). For
//! admissible input the root exists and is unique, so a bracketed Newton
//! iteration with bisection fallback cannot fail; an iteration-budget
//! overrun signals an implementation bug and is reported as an error.
//!
//! `1 - v^2` is evaluated as `(E - |m| + p)(E + p + |m|) / (E + p)^2` with
//! `E - |m|` formed once, which is the only subtraction of nearly equal
//! large numbers the whole recovery performs.

use super::{AdmissibilityEps, Conserved};
use crate::eos::EosModel;
use crate::error::{Error, Result};

/// Recovered primitive data plus the derived relativistic factors.
#[derive(Debug, Clone, Copy)]
pub struct Recovered<const DIM: usize> {
    pub p: f64,
    pub v: [f64; DIM],
    pub rho: f64,
    /// Lorentz factor.
    pub w: f64,
    /// `sqrt(1 - v^2) = 1/W`.
    pub inv_w: f64,
    pub iters: usize,
    /// `|Psi(p)| / (E + p)` at the accepted root.
    pub scaled_residual: f64,
}

struct Eval {
    g: f64,
    dg: f64,
    inv_w: f64,
}

#[inline]
fn eval<const DIM: usize>(eos: &EosModel, u: &Conserved<DIM>, mnorm: f64, delta: f64, p: f64) -> Eval {
    let s = u.e + p;
    let one_m_v2 = ((delta + p) * (s + mnorm)) / (s * s);
    let inv_w = one_m_v2.sqrt();
    let t = p / (u.d * inv_w);
    let (h, hp_t) = eos.h_of_t(t);
    let v2 = 1.0 - one_m_v2;
    let g = u.d * h - s * inv_w;
    // d/dp of g: D h_p + D h_rho rho'(p) - W, with rho' = D v^2 / (s W^{-1}).
    let dg = (hp_t - 1.0) / inv_w - t * hp_t * u.d * v2 / (s * one_m_v2);
    Eval { g, dg, inv_w }
}

/// Solve the pressure equation for an admissible conserved state.
pub fn recover<const DIM: usize>(
    eos: &EosModel,
    u: &Conserved<DIM>,
    eps: AdmissibilityEps,
) -> Result<Recovered<DIM>> {
    if !u.is_admissible(eps) {
        return Err(Error::Inadmissible {
            context: "recovery input".into(),
            d: u.d,
            q: u.q(),
        });
    }
    let mnorm = u.mnorm();
    let delta = u.e - mnorm;

    let finish = |p: f64, iters: usize| -> Recovered<DIM> {
        let s = u.e + p;
        let one_m_v2 = ((delta + p) * (s + mnorm)) / (s * s);
        let inv_w = one_m_v2.sqrt();
        let rho = u.d * inv_w;
        let mut v = [0.0; DIM];
        for k in 0..DIM {
            v[k] = u.m[k] / s;
        }
        let (h, _) = eos.h_of_t(p / rho);
        let psi = (u.d * h - s * inv_w) * inv_w;
        Recovered {
            p,
            v,
            rho,
            w: 1.0 / inv_w,
            inv_w,
            iters,
            scaled_residual: psi.abs() / s,
        }
    };

    // g(0) = D - sqrt((E - |m|)(E + |m|)) < 0 for admissible input. If
    // rounding erases the margin the root is indistinguishable from zero
    // pressure at working precision.
    let g0 = u.d - (delta * (u.e + mnorm)).sqrt();
    if g0 >= 0.0 {
        return Ok(finish(f64::MIN_POSITIVE, 0));
    }

    // Warm start: two sweeps of the ideal-gas (gamma = 5/3) fixed point
    // p = (E - D W)/(gamma' W^2 - 1), seeded at p = 0.
    const GP: f64 = 2.5;
    let mut p_ws = 0.0;
    for _ in 0..2 {
        let s = u.e + p_ws;
        let one_m_v2 = ((delta + p_ws) * (s + mnorm)) / (s * s);
        let w2 = 1.0 / one_m_v2;
        let w = w2.sqrt();
        p_ws = ((u.e - u.d * w) / (GP * w2 - 1.0)).max(0.0);
    }
    let mut p = p_ws.max(1e-307);

    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut ev = eval(eos, u, mnorm, delta, p);
    let mut iters = 1usize;
    if ev.g > 0.0 {
        hi = p;
    } else {
        lo = p;
        // Double until the residual changes sign; existence of the root
        // guarantees termination.
        while iters < 1200 {
            let cand = if lo > 1e-290 { lo * 4.0 } else { 1e-280 };
            let e2 = eval(eos, u, mnorm, delta, cand);
            iters += 1;
            if e2.g > 0.0 {
                hi = cand;
                p = cand;
                ev = e2;
                break;
            }
            lo = cand;
            p = cand;
            ev = e2;
        }
        if hi.is_infinite() {
            return Err(Error::RecoveryFailed {
                context: "bracketing".into(),
                iters,
                residual: ev.g.abs(),
            });
        }
    }

    // Bracketed Newton with automatic bisection fallback.
    let max_iter = 200usize;
    for _ in 0..max_iter {
        let step = -ev.g / ev.dg;
        let mut p_new = p + step;
        if !(p_new > lo && p_new < hi) || !p_new.is_finite() || ev.dg <= 0.0 {
            p_new = 0.5 * (lo + hi);
        }
        let dp = (p_new - p).abs();
        p = p_new;
        ev = eval(eos, u, mnorm, delta, p);
        iters += 1;
        if ev.g > 0.0 {
            hi = p;
        } else {
            lo = p;
        }
        let scaled = (ev.g * ev.inv_w).abs() / (u.e + p);
        if dp <= 1e-12 * p.abs() || scaled <= 1e-12 || (hi - lo) <= 2.0 * f64::EPSILON * hi {
            return Ok(finish(p, iters));
        }
    }

    let scaled = (ev.g * ev.inv_w).abs() / (u.e + p);
    if scaled <= 1e-10 {
        // Converged to the representable root even though the step-size
        // test never triggered.
        return Ok(finish(p, iters));
    }
    Err(Error::RecoveryFailed {
        context: "newton".into(),
        iters,
        residual: scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Primitive;
    use approx::assert_relative_eq;

    fn ideal53() -> EosModel {
        EosModel::ideal(5.0 / 3.0).unwrap()
    }

    #[test]
    fn rest_state_round_trip() {
        let eps = AdmissibilityEps::default();
        let u = Conserved { d: 1.0, m: [0.0], e: 2.5 };
        let rec = recover(&ideal53(), &u, eps).unwrap();
        assert_relative_eq!(rec.p, 1.0, max_relative = 1e-12);
        assert_relative_eq!(rec.rho, 1.0, max_relative = 1e-12);
        assert_eq!(rec.v[0], 0.0);
    }

    #[test]
    fn ryu_low_pressure_round_trip() {
        let eps = AdmissibilityEps::default();
        let w = Primitive::new(1.0, [0.9], 1e-6).unwrap();
        let u = w.to_conserved(&EosModel::Ryu).unwrap();
        let rec = recover(&EosModel::Ryu, &u, eps).unwrap();
        assert_relative_eq!(rec.p, 1e-6, max_relative = 1e-10);
        assert!(rec.scaled_residual < 1e-10);
    }

    #[test]
    fn sokolov_extreme_round_trip() {
        let eps = AdmissibilityEps::default();
        let w = Primitive::new(1e-3, [-0.999], 1e3).unwrap();
        let u = w.to_conserved(&EosModel::Sokolov).unwrap();
        let rec = recover(&EosModel::Sokolov, &u, eps).unwrap();
        assert_relative_eq!(rec.p, 1e3, max_relative = 1e-10);
        assert_relative_eq!(rec.v[0], -0.999, max_relative = 1e-12);
    }

    #[test]
    fn momentum_free_states_keep_v_zero() {
        let eps = AdmissibilityEps::default();
        for eos in EosModel::all_standard() {
            let u = Primitive::new(2.0, [0.0], 0.7)
                .unwrap()
                .to_conserved(&eos)
                .unwrap();
            let rec = recover(&eos, &u, eps).unwrap();
            assert_eq!(rec.v[0], 0.0);
            assert_relative_eq!(rec.rho, 2.0, max_relative = 1e-12);
            assert_relative_eq!(rec.p, 0.7, max_relative = 1e-11);
        }
    }

    #[test]
    fn mathews_2d_round_trip() {
        let eps = AdmissibilityEps::default();
        let w = Primitive::new(0.1, [0.7, -0.7], 5.0).unwrap();
        let u = w.to_conserved(&EosModel::Mathews).unwrap();
        let w2 = u.to_primitive(&EosModel::Mathews, eps).unwrap();
        assert_relative_eq!(w2.rho, 0.1, max_relative = 1e-10);
        assert_relative_eq!(w2.v[0], 0.7, max_relative = 1e-10);
        assert_relative_eq!(w2.v[1], -0.7, max_relative = 1e-10);
        assert_relative_eq!(w2.p, 5.0, max_relative = 1e-10);
    }

    #[test]
    fn inadmissible_input_is_rejected() {
        let eps = AdmissibilityEps::default();
        let u = Conserved { d: 1.0, m: [0.0], e: 0.5 };
        match recover(&ideal53(), &u, eps) {
            Err(Error::Inadmissible { .. }) => {}
            other => panic!("expected inadmissible error, got {other:?}"),
        }
    }
}
