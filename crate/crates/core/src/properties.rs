//! Randomized property checks of the admissible-set algebra and of the
//! conservative/primitive round trip. Shared by the CLI `validate`
//! subcommand and the acceptance suite; all randomness is seeded.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::eos::EosModel;
use crate::error::{Error, Result};
use crate::state::{recover, AdmissibilityEps, Conserved, Primitive};

/// Outcome of one randomized property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    /// Worst signed margin seen, normalized by the relevant scale;
    /// negative beyond the rounding slack counts as a violation.
    pub worst_margin: f64,
}

impl PropertyReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Random admissible primitive with `rho, p` log-uniform in `[1e-8, 1e4]`
/// and `|v|` uniform in `[0, 1 - 1e-8)`.
pub fn random_primitive_2d(rng: &mut StdRng) -> Primitive<2> {
    let rho = log_uniform(rng, 1e-8, 1e4);
    let p = log_uniform(rng, 1e-8, 1e4);
    let speed = rng.gen_range(0.0..1.0 - 1e-8);
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    Primitive {
        rho,
        v: [speed * angle.cos(), speed * angle.sin()],
        p,
    }
}

pub fn random_primitive_1d(rng: &mut StdRng) -> Primitive<1> {
    let rho = log_uniform(rng, 1e-8, 1e4);
    let p = log_uniform(rng, 1e-8, 1e4);
    let speed = rng.gen_range(0.0..1.0 - 1e-8);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Primitive {
        rho,
        v: [sign * speed],
        p,
    }
}

const SLACK: f64 = 1e-12;

/// Lemma-style checks of the admissible set (necessity, concavity of q,
/// convexity, scaling identity, orthogonal invariance, Lax-Friedrichs
/// splitting), `trials` random draws each.
pub fn admissible_set_suite(eos: &EosModel, trials: usize, seed: u64) -> Vec<PropertyReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let eps = AdmissibilityEps::default();
    let mut reports = Vec::new();

    // Necessity: any state built from an admissible primitive has
    // D > 0 and q > 0.
    {
        let mut rep = PropertyReport {
            name: "necessity: D > 0 and q > 0 for states from admissible primitives",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let w = random_primitive_2d(&mut rng);
            let u = w.to_conserved(eos).unwrap();
            let margin = (u.d / u.e).min(u.q() / u.e);
            rep.worst_margin = rep.worst_margin.min(margin);
            if !(u.d > 0.0 && u.q() > 0.0) {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    // Concavity of q along random admissible segments.
    {
        let mut rep = PropertyReport {
            name: "concavity: q(l u1 + (1-l) u0) >= l q(u1) + (1-l) q(u0)",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let u0 = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let u1 = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let l = rng.gen_range(0.0..1.0);
            let mut mid = u0;
            mid.scale(1.0 - l);
            mid.axpy(l, &u1);
            let scale = u0.e.abs() + u1.e.abs();
            let margin = (mid.q() - l * u1.q() - (1.0 - l) * u0.q()) / scale;
            rep.worst_margin = rep.worst_margin.min(margin);
            if margin < -SLACK {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    // Convexity of the admissible set itself.
    {
        let mut rep = PropertyReport {
            name: "convexity: segments between admissible states stay admissible",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let u0 = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let u1 = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let l = rng.gen_range(0.0..1.0);
            let mut mid = u0;
            mid.scale(1.0 - l);
            mid.axpy(l, &u1);
            let scale = mid.e.abs();
            let margin = (mid.d / scale).min(mid.q() / scale);
            rep.worst_margin = rep.worst_margin.min(margin);
            if margin < -SLACK {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    // Scaling: q(l U) = l q(U) for l > 0.
    {
        let mut rep = PropertyReport {
            name: "scaling: q(l u) = l q(u)",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let u = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let l = log_uniform(&mut rng, 1e-6, 1e6);
            let mut lu = u;
            lu.scale(l);
            let margin = SLACK - ((lu.q() - l * u.q()).abs() / (l * u.e.abs()));
            rep.worst_margin = rep.worst_margin.min(margin);
            if margin < 0.0 {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    // Orthogonal invariance: rotating the momentum leaves q unchanged.
    {
        let mut rep = PropertyReport {
            name: "orthogonal invariance: q(T u) = q(u) for rotations of m",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let u = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = a.sin_cos();
            let rotated = Conserved {
                d: u.d,
                m: [c * u.m[0] - s * u.m[1], s * u.m[0] + c * u.m[1]],
                e: u.e,
            };
            let scale = u.e.abs() + u.mnorm();
            let margin = SLACK - (rotated.q() - u.q()).abs() / scale;
            rep.worst_margin = rep.worst_margin.min(margin);
            if margin < 0.0 {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    // Lax-Friedrichs splitting: U +- alpha^{-1} F_i(U) admissible for
    // alpha > 1.
    {
        let mut rep = PropertyReport {
            name: "Lax-Friedrichs splitting: q(u -/+ F_i(u)/alpha) > 0 for alpha > 1",
            trials,
            violations: 0,
            worst_margin: f64::INFINITY,
        };
        for _ in 0..trials {
            let u = random_primitive_2d(&mut rng).to_conserved(eos).unwrap();
            let axis = rng.gen_range(0..2usize);
            let alpha = rng.gen_range(1.000001..2.0);
            let (minus, plus) = match u.lax_friedrichs_split(eos, axis, alpha, eps) {
                Ok(pair) => pair,
                Err(_) => {
                    rep.violations += 1;
                    continue;
                }
            };
            let scale = u.e.abs();
            let margin = (minus.d / scale)
                .min(plus.d / scale)
                .min(minus.q() / scale)
                .min(plus.q() / scale);
            rep.worst_margin = rep.worst_margin.min(margin);
            if margin < -SLACK {
                rep.violations += 1;
            }
        }
        reports.push(rep);
    }

    reports
}

/// Round-trip report for one EOS.
#[derive(Debug, Clone)]
pub struct RoundTripReport {
    pub eos: String,
    pub trials: usize,
    pub violations: usize,
    pub max_rho_rel: f64,
    pub max_v_abs: f64,
    /// Componentwise pressure error where `p >= 1e-4 (E + p)` (outside
    /// that regime the f64 rounding of `U` itself moves the root of the
    /// pressure equation by more than 1e-10 relative, so the error is
    /// measured against the energy scale instead).
    pub max_p_rel_benign: f64,
    pub max_p_scaled: f64,
    pub max_residual: f64,
    /// Conserved-side round trip `U -> w -> U`, componentwise.
    pub max_u_rel: f64,
}

const ROUNDTRIP_TOL: f64 = 1e-10;
/// Pressure fraction of the energy scale above which the componentwise
/// 1e-10 check is numerically meaningful in f64.
const P_BENIGN_FRACTION: f64 = 1e-4;

/// Primitive -> conserved -> primitive (and back to conserved) round trip
/// over random admissible states.
pub fn round_trip_suite(eos: &EosModel, trials: usize, seed: u64) -> Result<RoundTripReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let eps = AdmissibilityEps::default();
    let mut rep = RoundTripReport {
        eos: eos.name(),
        trials,
        violations: 0,
        max_rho_rel: 0.0,
        max_v_abs: 0.0,
        max_p_rel_benign: 0.0,
        max_p_scaled: 0.0,
        max_residual: 0.0,
        max_u_rel: 0.0,
    };
    for _ in 0..trials {
        let w = random_primitive_2d(&mut rng);
        let u = w.to_conserved(eos)?;
        let rec = recover(eos, &u, eps).map_err(|e| {
            Error::PropertyViolation(format!(
                "recovery failed for {:?} under {}: {e}",
                w,
                eos.name()
            ))
        })?;
        let mut bad = false;

        let rho_rel = (rec.rho - w.rho).abs() / w.rho;
        rep.max_rho_rel = rep.max_rho_rel.max(rho_rel);
        bad |= rho_rel > ROUNDTRIP_TOL;

        let v_abs = (rec.v[0] - w.v[0]).abs().max((rec.v[1] - w.v[1]).abs());
        rep.max_v_abs = rep.max_v_abs.max(v_abs);
        bad |= v_abs > ROUNDTRIP_TOL;

        let scale = u.e + rec.p;
        let p_scaled = (rec.p - w.p).abs() / scale;
        rep.max_p_scaled = rep.max_p_scaled.max(p_scaled);
        bad |= p_scaled > ROUNDTRIP_TOL;
        if w.p >= P_BENIGN_FRACTION * scale {
            let p_rel = (rec.p - w.p).abs() / w.p;
            rep.max_p_rel_benign = rep.max_p_rel_benign.max(p_rel);
            bad |= p_rel > ROUNDTRIP_TOL;
        }

        rep.max_residual = rep.max_residual.max(rec.scaled_residual);
        bad |= rec.scaled_residual > ROUNDTRIP_TOL;

        // Conserved-side round trip.
        let w2 = Primitive {
            rho: rec.rho,
            v: rec.v,
            p: rec.p,
        };
        let u2 = w2.to_conserved(eos)?;
        let m_scale = u.e.max(u.mnorm());
        let u_rel = ((u2.d - u.d).abs() / u.d)
            .max((u2.e - u.e).abs() / u.e)
            .max((u2.m[0] - u.m[0]).abs() / m_scale)
            .max((u2.m[1] - u.m[1]).abs() / m_scale);
        rep.max_u_rel = rep.max_u_rel.max(u_rel);
        bad |= u_rel > ROUNDTRIP_TOL;

        if bad {
            rep.violations += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_set_properties_hold_for_all_eos() {
        for eos in EosModel::all_standard() {
            for rep in admissible_set_suite(&eos, 10_000, 2024) {
                assert!(
                    rep.pass(),
                    "{}: {} violated {} times (worst {:.3e})",
                    eos.name(),
                    rep.name,
                    rep.violations,
                    rep.worst_margin
                );
            }
        }
    }

    #[test]
    fn round_trip_accuracy_for_all_eos() {
        for eos in EosModel::all_standard() {
            let rep = round_trip_suite(&eos, 10_000, 7).unwrap();
            assert_eq!(
                rep.violations,
                0,
                "{}: rho {:.2e}, v {:.2e}, p(benign) {:.2e}, p(scaled) {:.2e}, res {:.2e}, U {:.2e}",
                rep.eos,
                rep.max_rho_rel,
                rep.max_v_abs,
                rep.max_p_rel_benign,
                rep.max_p_scaled,
                rep.max_residual,
                rep.max_u_rel
            );
        }
    }
}
