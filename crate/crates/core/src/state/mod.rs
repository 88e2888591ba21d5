//! Conserved and primitive state vectors, the admissible-set predicates,
//! flux evaluation, and conservative-to-primitive recovery.
//!
//! The admissible set is characterized by two explicit constraints on the
//! conserved vector: `D > 0` and `q(U) = E - sqrt(D^2 + |m|^2) > 0`. Both
//! predicates and the Lax-Friedrichs splitting property proved from them
//! are what the positivity limiter and the CFL contracts rest on.

mod recovery;

pub use recovery::{recover, Recovered};

use crate::eos::EosModel;
use crate::error::{Error, Result};

/// Threshold defining the numerically safe interior of the admissible set:
/// states with `D >= eps` and `q(U) >= eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityEps(f64);

impl AdmissibilityEps {
    pub const DEFAULT: AdmissibilityEps = AdmissibilityEps(1e-13);

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        Ok(AdmissibilityEps(eps))
    }

    #[inline]
    pub fn get(&self) -> f64 {
        self.0
    }
}

impl Default for AdmissibilityEps {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Physical state `(rho, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive<const DIM: usize> {
    pub rho: f64,
    pub v: [f64; DIM],
    pub p: f64,
}

impl<const DIM: usize> Primitive<DIM> {
    pub fn new(rho: f64, v: [f64; DIM], p: f64) -> Result<Self> {
        let w = Primitive { rho, v, p };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.p > 0.0) || self.vnorm2() >= 1.0 {
            return Err(Error::Domain(format!(
                "primitive state needs rho > 0, p > 0, |v| < 1: rho = {:.6e}, |v| = {:.6e}, p = {:.6e}",
                self.rho,
                self.vnorm2().sqrt(),
                self.p
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn vnorm2(&self) -> f64 {
        self.v.iter().map(|vi| vi * vi).sum()
    }

    /// Lorentz factor `W = 1/sqrt(1 - v^2)`.
    #[inline]
    pub fn lorentz(&self) -> f64 {
        1.0 / (1.0 - self.vnorm2()).sqrt()
    }

    /// Map to the conserved vector `(D, m, E) = (rho W, D h W v, D h W - p)`.
    pub fn to_conserved(&self, eos: &EosModel) -> Result<Conserved<DIM>> {
        self.validate()?;
        let w = self.lorentz();
        let h = eos.enthalpy(self.p, self.rho)?;
        let d = self.rho * w;
        let dhw = d * h * w;
        let mut m = [0.0; DIM];
        for (mi, vi) in m.iter_mut().zip(self.v.iter()) {
            *mi = dhw * vi;
        }
        Ok(Conserved {
            d,
            m,
            e: dhw - self.p,
        })
    }
}

/// Conserved vector `U = (D, m, E)`. Carries no intrinsic invariant:
/// admissibility is a predicate, not a constructor guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved<const DIM: usize> {
    pub d: f64,
    pub m: [f64; DIM],
    pub e: f64,
}

impl<const DIM: usize> Conserved<DIM> {
    pub const ZERO: Conserved<DIM> = Conserved {
        d: 0.0,
        m: [0.0; DIM],
        e: 0.0,
    };

    #[inline]
    pub fn mnorm(&self) -> f64 {
        self.m.iter().map(|mi| mi * mi).sum::<f64>().sqrt()
    }

    /// `q(U) = E - sqrt(D^2 + |m|^2)`, grouped as
    /// `(E - |m|) - D^2 / (sqrt(D^2 + |m|^2) + |m|)` so the only subtraction
    /// of large nearly-equal quantities is the unavoidable `E - |m|`.
    #[inline]
    pub fn q(&self) -> f64 {
        let mn = self.mnorm();
        let hyp = (self.d * self.d + mn * mn).sqrt();
        if hyp + mn == 0.0 {
            return self.e;
        }
        (self.e - mn) - self.d * self.d / (hyp + mn)
    }

    /// Membership in the eps-interior of the admissible set:
    /// `D >= eps` and `q(U) >= eps`.
    #[inline]
    pub fn is_admissible(&self, eps: AdmissibilityEps) -> bool {
        self.d >= eps.get() && self.q() >= eps.get()
    }

    /// Recover the full primitive state (solves the pressure equation).
    pub fn to_primitive(&self, eos: &EosModel, eps: AdmissibilityEps) -> Result<Primitive<DIM>> {
        let rec = recover(eos, self, eps)?;
        Ok(Primitive {
            rho: rec.rho,
            v: rec.v,
            p: rec.p,
        })
    }

    /// Flux along `axis`: `F_i = (D v_i, v_i m + p e_i, m_i)`.
    pub fn flux(&self, eos: &EosModel, axis: usize, eps: AdmissibilityEps) -> Result<Conserved<DIM>> {
        let rec = recover(eos, self, eps)?;
        Ok(self.flux_from(&rec, axis))
    }

    /// Flux along `axis` reusing an already-recovered state.
    #[inline]
    pub fn flux_from(&self, rec: &Recovered<DIM>, axis: usize) -> Conserved<DIM> {
        let vi = rec.v[axis];
        let mut m = [0.0; DIM];
        for k in 0..DIM {
            m[k] = vi * self.m[k];
        }
        m[axis] += rec.p;
        Conserved {
            d: self.d * vi,
            m,
            e: self.m[axis],
        }
    }

    /// Lax-Friedrichs splitting pair `U -/+ alpha^{-1} F_i(U)`; both members
    /// stay admissible (strictly for `alpha > 1`).
    pub fn lax_friedrichs_split(
        &self,
        eos: &EosModel,
        axis: usize,
        alpha: f64,
        eps: AdmissibilityEps,
    ) -> Result<(Conserved<DIM>, Conserved<DIM>)> {
        if !(alpha >= 1.0) {
            return Err(Error::Domain(format!(
                "Lax-Friedrichs splitting needs alpha >= c = 1, got {alpha}"
            )));
        }
        let f = self.flux(eos, axis, eps)?;
        let mut minus = *self;
        let mut plus = *self;
        minus.axpy(-1.0 / alpha, &f);
        plus.axpy(1.0 / alpha, &f);
        Ok((minus, plus))
    }

    /// `self += c * other`.
    #[inline]
    pub fn axpy(&mut self, c: f64, other: &Conserved<DIM>) {
        self.d += c * other.d;
        for k in 0..DIM {
            self.m[k] += c * other.m[k];
        }
        self.e += c * other.e;
    }

    #[inline]
    pub fn scale(&mut self, c: f64) {
        self.d *= c;
        for k in 0..DIM {
            self.m[k] *= c;
        }
        self.e *= c;
    }

    /// Component access in the order `(D, m_1, .., m_DIM, E)`.
    #[inline]
    pub fn comp(&self, i: usize) -> f64 {
        match i {
            0 => self.d,
            i if i <= DIM => self.m[i - 1],
            _ => self.e,
        }
    }

    #[inline]
    pub fn comp_mut(&mut self, i: usize) -> &mut f64 {
        match i {
            0 => &mut self.d,
            i if i <= DIM => &mut self.m[i - 1],
            _ => &mut self.e,
        }
    }

    pub const N_COMP: usize = DIM + 2;
}

impl<const DIM: usize> std::ops::Add for Conserved<DIM> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.axpy(1.0, &rhs);
        self
    }
}

impl<const DIM: usize> std::ops::Sub for Conserved<DIM> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.axpy(-1.0, &rhs);
        self
    }
}

impl<const DIM: usize> std::ops::Mul<f64> for Conserved<DIM> {
    type Output = Self;
    fn mul(mut self, c: f64) -> Self {
        self.scale(c);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ideal53() -> EosModel {
        EosModel::ideal(5.0 / 3.0).unwrap()
    }

    #[test]
    fn conserved_from_rest_state() {
        let u = Primitive::new(1.0, [0.0], 1.0)
            .unwrap()
            .to_conserved(&ideal53())
            .unwrap();
        assert_relative_eq!(u.d, 1.0, epsilon = 1e-15);
        assert_relative_eq!(u.m[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(u.e, 2.5, epsilon = 1e-14);

        let u = Primitive::new(1.0, [0.0], 1.0)
            .unwrap()
            .to_conserved(&EosModel::Ryu)
            .unwrap();
        assert_relative_eq!(u.e, 3.4, epsilon = 1e-14);
    }

    #[test]
    fn conserved_from_fast_low_pressure_state() {
        // Direct formula evaluation, independent of to_conserved internals.
        let (rho, v, p): (f64, f64, f64) = (1.0, 0.99, 1e-2);
        let w = 1.0 / (1.0 - v * v).sqrt();
        let h = 1.0 + 2.5 * p / rho;
        let expect_d = rho * w;
        let expect_m = rho * h * w * w * v;
        let expect_e = rho * h * w * w - p;

        let u = Primitive::new(rho, [v], p)
            .unwrap()
            .to_conserved(&ideal53())
            .unwrap();
        assert_relative_eq!(u.d, expect_d, max_relative = 1e-14);
        assert_relative_eq!(u.m[0], expect_m, max_relative = 1e-14);
        assert_relative_eq!(u.e, expect_e, max_relative = 1e-14);
        assert!(u.d > 0.0 && u.q() > 0.0);
    }

    #[test]
    fn superluminal_primitive_rejected() {
        assert!(Primitive::new(1.0, [1.0], 1.0).is_err());
        assert!(Primitive::new(1.0, [0.8, 0.8], 1.0).is_err());
    }

    #[test]
    fn q_value_examples() {
        let u = Conserved { d: 1.0, m: [0.0], e: 2.5 };
        assert_relative_eq!(u.q(), 1.5, epsilon = 1e-15);

        let u = Conserved { d: 1.0, m: [3.0, 4.0], e: 6.0 };
        assert_relative_eq!(u.q(), 6.0 - 26.0f64.sqrt(), epsilon = 1e-14);

        let u = Conserved { d: 1.0, m: [0.0], e: 0.5 };
        assert_relative_eq!(u.q(), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn admissibility_thresholds() {
        let eps = AdmissibilityEps::default();
        assert!(Conserved { d: 1.0, m: [0.0], e: 2.5 }.is_admissible(eps));
        assert!(!Conserved { d: 1e-14, m: [0.0], e: 2.5 }.is_admissible(eps));

        let u = Primitive::new(1.0, [0.99], 1e-2)
            .unwrap()
            .to_conserved(&ideal53())
            .unwrap();
        assert!(u.is_admissible(eps));
    }

    #[test]
    fn flux_of_rest_state_is_pressure_only() {
        let eps = AdmissibilityEps::default();
        let u = Conserved { d: 1.0, m: [0.0], e: 2.5 };
        let f = u.flux(&ideal53(), 0, eps).unwrap();
        assert_relative_eq!(f.d, 0.0, epsilon = 1e-12);
        assert_relative_eq!(f.m[0], 1.0, max_relative = 1e-10);
        assert_relative_eq!(f.e, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn flux_matches_hand_evaluation() {
        // (rho, v, p) = (1, 0.5, 1), ideal gamma = 5/3.
        let eps = AdmissibilityEps::default();
        let w = Primitive::new(1.0, [0.5], 1.0).unwrap();
        let u = w.to_conserved(&ideal53()).unwrap();
        let f = u.flux(&ideal53(), 0, eps).unwrap();
        let lorentz: f64 = 1.0 / (1.0 - 0.25f64).sqrt();
        let h = 3.5;
        assert_relative_eq!(f.d, 1.0 * lorentz * 0.5, max_relative = 1e-10);
        assert_relative_eq!(
            f.m[0],
            h * lorentz * lorentz * 0.25 + 1.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(f.e, h * lorentz * lorentz * 0.5, max_relative = 1e-10);
    }

    #[test]
    fn transverse_flux_of_axis_aligned_flow() {
        let eps = AdmissibilityEps::default();
        let w = Primitive::new(1.0, [0.6, 0.0], 2.0).unwrap();
        let u = w.to_conserved(&ideal53()).unwrap();
        let f2 = u.flux(&ideal53(), 1, eps).unwrap();
        assert_relative_eq!(f2.d, 0.0, epsilon = 1e-12);
        assert_relative_eq!(f2.m[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(f2.m[1], 2.0, max_relative = 1e-10);
        assert_relative_eq!(f2.e, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lax_friedrichs_split_examples() {
        let eps = AdmissibilityEps::default();
        let u = Conserved { d: 1.0, m: [0.0], e: 2.5 };
        let (minus, plus) = u.lax_friedrichs_split(&ideal53(), 0, 1.5, eps).unwrap();
        assert_relative_eq!(minus.m[0], -2.0 / 3.0, max_relative = 1e-10);
        assert_relative_eq!(plus.m[0], 2.0 / 3.0, max_relative = 1e-10);
        assert!(minus.q() > 0.0 && plus.q() > 0.0);

        // The pair always sums back to 2U.
        let sum = minus + plus;
        assert_relative_eq!(sum.d, 2.0 * u.d, max_relative = 1e-14);
        assert_relative_eq!(sum.e, 2.0 * u.e, max_relative = 1e-14);

        // alpha = c = 1 may touch the boundary but not cross it.
        let w = Primitive::new(1.0, [0.99], 1e-2).unwrap();
        let u = w.to_conserved(&ideal53()).unwrap();
        let (minus, plus) = u.lax_friedrichs_split(&ideal53(), 0, 1.0, eps).unwrap();
        assert!(minus.q() >= -1e-13 * u.e && plus.q() >= -1e-13 * u.e);
        assert!(u.lax_friedrichs_split(&ideal53(), 0, 0.5, eps).is_err());
    }
}
