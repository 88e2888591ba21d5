//! Equation-of-state models.
//!
//! All four models close the RHD system through the specific enthalpy
//! `h = h(p, rho) = 1 + e(p, rho) + p/rho` (units with c = 1). Every model
//! implemented here depends on pressure and density only through the ratio
//! `t = p/rho`, which keeps the closed-form derivatives short:
//! `dh/dp = H'(t)/rho` and `dh/drho = -t H'(t)/rho` for `h = H(t)`.

use crate::error::{Error, Result};

/// Adiabatic-index range for which the two-constraint characterization of
/// the admissible set is proved for the ideal EOS.
pub const IDEAL_GAMMA_RANGE: (f64, f64) = (1.0, 2.0);

/// An equation of state `h = h(p, rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EosModel {
    /// `h = 1 + Gamma p / ((Gamma - 1) rho)`.
    Ideal { gamma: f64 },
    /// `h = 5p/(2 rho) + sqrt(9p^2/(4 rho^2) + 1)`.
    Mathews,
    /// `h = 2p/rho + sqrt(4p^2/rho^2 + 1)`.
    Sokolov,
    /// `h = 2(6p^2 + 4 p rho + rho^2) / (rho (3p + 2 rho))`.
    Ryu,
}

impl EosModel {
    /// Ideal-gas EOS, restricted to the proven adiabatic-index range (1, 2].
    pub fn ideal(gamma: f64) -> Result<Self> {
        if !(gamma > IDEAL_GAMMA_RANGE.0 && gamma <= IDEAL_GAMMA_RANGE.1) {
            return Err(Error::Domain(format!(
                "ideal EOS requires gamma in (1, 2], got {gamma}"
            )));
        }
        Ok(EosModel::Ideal { gamma })
    }

    /// Ideal-gas EOS allowing any gamma > 1. Intended for validity scans
    /// (`validate_eos` must be able to exhibit the failures of an
    /// out-of-range gamma); solver entry points reject gamma > 2.
    pub fn ideal_relaxed(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Domain(format!(
                "ideal EOS requires gamma > 1, got {gamma}"
            )));
        }
        Ok(EosModel::Ideal { gamma })
    }

    /// Parse an EOS selector: `ideal:<gamma>`, `mathews`, `sokolov`, `ryu`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(g) = name.strip_prefix("ideal:") {
            let gamma: f64 = g
                .parse()
                .map_err(|_| Error::Config(format!("bad gamma in EOS selector `{name}`")))?;
            return Self::ideal_relaxed(gamma);
        }
        match name {
            "mathews" => Ok(EosModel::Mathews),
            "sokolov" => Ok(EosModel::Sokolov),
            "ryu" => Ok(EosModel::Ryu),
            _ => Err(Error::Config(format!(
                "unknown EOS `{name}` (expected ideal:<gamma>, mathews, sokolov, ryu)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            EosModel::Ideal { gamma } => format!("ideal:{gamma}"),
            EosModel::Mathews => "mathews".into(),
            EosModel::Sokolov => "sokolov".into(),
            EosModel::Ryu => "ryu".into(),
        }
    }

    /// The four standard models with a mildly relativistic ideal gas.
    pub fn all_standard() -> Vec<EosModel> {
        vec![
            EosModel::Ideal { gamma: 5.0 / 3.0 },
            EosModel::Mathews,
            EosModel::Sokolov,
            EosModel::Ryu,
        ]
    }

    /// `H(t)` and `H'(t)` for `h = H(p/rho)`. Valid for `t >= 0`; the
    /// recovery root finder evaluates the zero-pressure endpoint.
    #[inline]
    pub(crate) fn h_of_t(&self, t: f64) -> (f64, f64) {
        match *self {
            EosModel::Ideal { gamma } => {
                let gp = gamma / (gamma - 1.0);
                (1.0 + gp * t, gp)
            }
            EosModel::Mathews => {
                let r = (2.25 * t * t + 1.0).sqrt();
                (2.5 * t + r, 2.5 + 2.25 * t / r)
            }
            EosModel::Sokolov => {
                let r = (4.0 * t * t + 1.0).sqrt();
                (2.0 * t + r, 2.0 + 4.0 * t / r)
            }
            EosModel::Ryu => {
                let den = 3.0 * t + 2.0;
                (
                    2.0 * (6.0 * t * t + 4.0 * t + 1.0) / den,
                    2.0 * (18.0 * t * t + 24.0 * t + 5.0) / (den * den),
                )
            }
        }
    }

    /// Specific internal energy as a function of `t = p/rho`, written so
    /// small `t` does not cancel.
    #[inline]
    pub(crate) fn e_of_t(&self, t: f64) -> f64 {
        match *self {
            EosModel::Ideal { gamma } => t / (gamma - 1.0),
            EosModel::Mathews => {
                let y = 2.25 * t * t;
                1.5 * t + y / ((y + 1.0).sqrt() + 1.0)
            }
            EosModel::Sokolov => {
                let y = 4.0 * t * t;
                t + y / ((y + 1.0).sqrt() + 1.0)
            }
            EosModel::Ryu => 3.0 * t * (3.0 * t + 1.0) / (3.0 * t + 2.0),
        }
    }

    fn check_domain(&self, p: f64, rho: f64) -> Result<()> {
        if !(p > 0.0) || !(rho > 0.0) || !p.is_finite() || !rho.is_finite() {
            return Err(Error::Domain(format!(
                "EOS evaluation needs p > 0 and rho > 0, got p = {p:.6e}, rho = {rho:.6e}"
            )));
        }
        Ok(())
    }

    /// Specific enthalpy `h(p, rho)`.
    pub fn enthalpy(&self, p: f64, rho: f64) -> Result<f64> {
        self.check_domain(p, rho)?;
        Ok(self.h_of_t(p / rho).0)
    }

    /// Specific internal energy `e = h - 1 - p/rho`.
    pub fn internal_energy(&self, p: f64, rho: f64) -> Result<f64> {
        self.check_domain(p, rho)?;
        Ok(self.e_of_t(p / rho))
    }

    /// Analytic partial derivatives `(dh/dp, dh/drho)`.
    pub fn enthalpy_partials(&self, p: f64, rho: f64) -> Result<(f64, f64)> {
        self.check_domain(p, rho)?;
        let t = p / rho;
        let (_, hp) = self.h_of_t(t);
        Ok((hp / rho, -t * hp / rho))
    }

    /// Squared sound speed `c_s^2 = (dh/drho) / (h (1/rho - dh/dp))`.
    pub fn sound_speed_sq(&self, p: f64, rho: f64) -> Result<f64> {
        self.check_domain(p, rho)?;
        let t = p / rho;
        let (h, hp) = self.h_of_t(t);
        let cs2 = (-t * hp / rho) / (h * (1.0 - hp) / rho);
        if !(cs2 > 0.0 && cs2 < 1.0) {
            return Err(Error::Domain(format!(
                "computed c_s^2 = {cs2:.6e} outside (0, 1) for {} at p = {p:.3e}, rho = {rho:.3e}",
                self.name()
            )));
        }
        Ok(cs2)
    }

    /// Invert `e(p, rho) = e0` for the pressure at fixed density.
    ///
    /// `e` is strictly increasing in `p` with `e -> 0` and `e -> inf` at the
    /// endpoints, so bisection after a doubling bracket always lands.
    pub fn pressure_from_internal_energy(&self, e0: f64, rho: f64) -> Result<f64> {
        if !(e0 > 0.0) || !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "pressure_from_internal_energy needs e0 > 0, rho > 0 (got {e0:.3e}, {rho:.3e})"
            )));
        }
        let mut lo = 0.0f64;
        let mut hi = e0 * rho.max(1e-300);
        let mut iters = 0;
        while self.e_of_t(hi / rho) < e0 {
            hi *= 2.0;
            iters += 1;
            if iters > 2000 {
                return Err(Error::Domain("failed to bracket internal energy".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.e_of_t(mid / rho) < e0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Invert `c_s^2(p, rho) = cs2` for the pressure at fixed density.
    /// Used to build pressure-matched jet inflow states from a Mach number.
    pub fn pressure_from_sound_speed_sq(&self, cs2: f64, rho: f64) -> Result<f64> {
        if !(cs2 > 0.0 && cs2 < 1.0) || !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "pressure_from_sound_speed_sq needs cs2 in (0,1), rho > 0 (got {cs2:.6e}, {rho:.3e})"
            )));
        }
        let cs2_of_t = |t: f64| {
            let (h, hp) = self.h_of_t(t);
            t * hp / (h * (hp - 1.0))
        };
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        let mut iters = 0;
        while cs2_of_t(hi) < cs2 {
            hi *= 2.0;
            iters += 1;
            if iters > 4000 {
                return Err(Error::Domain(format!(
                    "sound speed {:.6e} not reachable for {}",
                    cs2.sqrt(),
                    self.name()
                )));
            }
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if cs2_of_t(mid) < cs2 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi) * rho)
    }
}

/// Outcome of checking one EOS validity condition over a sample grid.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub name: &'static str,
    pub pass: bool,
    /// Worst signed margin seen (negative = violated).
    pub worst_margin: f64,
    /// `(p, rho)` where the worst margin occurred.
    pub worst_at: (f64, f64),
}

/// Report from [`validate_eos`]: one entry per condition.
#[derive(Debug, Clone)]
pub struct EosValidationReport {
    pub eos: String,
    pub conditions: Vec<ConditionReport>,
}

impl EosValidationReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

/// Default logarithmic sample grid: `points` per axis over `[1e-8, 1e4]`.
pub fn default_sample_grid(points: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = (1e-8f64.ln(), 1e4f64.ln());
    let mut grid = Vec::with_capacity(points * points);
    for i in 0..points {
        for j in 0..points {
            let fi = i as f64 / (points - 1) as f64;
            let fj = j as f64 / (points - 1) as f64;
            grid.push(((lo + fi * (hi - lo)).exp(), (lo + fj * (hi - lo)).exp()));
        }
    }
    grid
}

/// Check the enthalpy lower bound, the derivative inequalities, causality,
/// and the zero/infinite-pressure limits of `e` over a sample grid.
/// Failures are reported, not raised.
pub fn validate_eos(eos: &EosModel, sample_grid: &[(f64, f64)]) -> EosValidationReport {
    let mut bound = ConditionReport {
        name: "enthalpy lower bound h >= sqrt(1 + p^2/rho^2) + p/rho",
        pass: true,
        worst_margin: f64::INFINITY,
        worst_at: (0.0, 0.0),
    };
    let mut dh_neg = ConditionReport {
        name: "dh/drho < 0",
        pass: true,
        worst_margin: f64::INFINITY,
        worst_at: (0.0, 0.0),
    };
    let mut dh_rel = ConditionReport {
        name: "h (1/rho - dh/dp) < dh/drho",
        pass: true,
        worst_margin: f64::INFINITY,
        worst_at: (0.0, 0.0),
    };
    let mut causal = ConditionReport {
        name: "0 < c_s^2 < 1",
        pass: true,
        worst_margin: f64::INFINITY,
        worst_at: (0.0, 0.0),
    };

    for &(p, rho) in sample_grid {
        let t = p / rho;
        let (h, hp_t) = eos.h_of_t(t);

        // Margins are normalized by the enthalpy scale so the scan is
        // meaningful across 24 decades of t.
        let m_bound = (h - t - (1.0 + t * t).sqrt()) / h;
        let slack = 64.0 * f64::EPSILON;
        if m_bound < bound.worst_margin {
            bound.worst_margin = m_bound;
            bound.worst_at = (p, rho);
        }
        if m_bound < -slack {
            bound.pass = false;
        }

        // rho * dh/drho = -t H'(t); require it negative.
        let m_neg = t * hp_t / h;
        if m_neg < dh_neg.worst_margin {
            dh_neg.worst_margin = m_neg;
            dh_neg.worst_at = (p, rho);
        }
        if m_neg <= 0.0 {
            dh_neg.pass = false;
        }

        // rho * [dh/drho - h (1/rho - dh/dp)] = (H - t) H' - H ... > 0
        let m_rel = ((h - t) * hp_t - h) / h;
        if m_rel < dh_rel.worst_margin {
            dh_rel.worst_margin = m_rel;
            dh_rel.worst_at = (p, rho);
        }
        if m_rel <= 0.0 {
            dh_rel.pass = false;
        }

        let cs2 = t * hp_t / (h * (hp_t - 1.0));
        let m_causal = cs2.min(1.0 - cs2);
        if !cs2.is_finite() || m_causal < causal.worst_margin {
            causal.worst_margin = if cs2.is_finite() {
                m_causal
            } else {
                f64::NEG_INFINITY
            };
            causal.worst_at = (p, rho);
        }
        if !(cs2 > 0.0 && cs2 < 1.0) {
            causal.pass = false;
        }
    }

    // Monotone limits of e(p, rho) on geometric pressure sequences.
    let mut limits = ConditionReport {
        name: "e -> 0 as p -> 0+ and e -> inf as p -> inf",
        pass: true,
        worst_margin: f64::INFINITY,
        worst_at: (0.0, 0.0),
    };
    for &rho in &[1e-6, 1.0, 1e3] {
        let mut prev = f64::INFINITY;
        let mut p = 1.0;
        for _ in 0..40 {
            let e = eos.e_of_t(p / rho);
            if e >= prev {
                limits.pass = false;
                limits.worst_at = (p, rho);
            }
            prev = e;
            p *= 0.1;
        }
        let e_last = prev;
        limits.worst_margin = limits.worst_margin.min(1e-20 - e_last);
        if e_last > 1e-20 {
            limits.pass = false;
            limits.worst_at = (p, rho);
        }
        let e_big = eos.e_of_t(1e12 / rho * 1.0_f64.max(rho));
        if e_big < 1e6 {
            limits.pass = false;
            limits.worst_at = (1e12, rho);
        }
    }

    EosValidationReport {
        eos: eos.name(),
        conditions: vec![bound, dh_neg, dh_rel, causal, limits],
    }
}
