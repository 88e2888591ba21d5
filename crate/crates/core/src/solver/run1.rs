//! 1D run driver: projection, limiting, SSP time stepping with exact
//! final-time (and snapshot-time) hits, and run diagnostics.

use std::collections::VecDeque;

use super::bc::Bc1d;
use super::norms::conserved_l1_norm_1d;
use super::residual1::residual_1d;
use super::stepper::{step_ssp_ms3, step_ssp_rk3};
use super::tables::{build_tables, Tables};
use super::{compute_dt_1d, project_initial_1d, Integrator, Solution1d, TimeControl};
use crate::basis::{build_quadrature, Basis};
use crate::eos::EosModel;
use crate::error::Result;
use crate::grid::Mesh1d;
use crate::limiters::{
    control_points_1d, pcp_limit_solution_1d, scan_solution_1d, tvb_limit_solution_1d,
    ControlPoints, LimiterStats,
};
use crate::state::{AdmissibilityEps, Conserved, Primitive};

/// Limiter switches shared by the 1D and 2D drivers.
#[derive(Debug, Clone, Copy)]
pub struct LimiterConfig {
    /// Admissibility scaling limiter on/off.
    pub pcp: bool,
    /// TVB constant for the minmod moment limiter; `None` disables it.
    pub tvb_m: Option<f64>,
    pub eps: AdmissibilityEps,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        LimiterConfig {
            pcp: true,
            tvb_m: None,
            eps: AdmissibilityEps::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunParams1d {
    pub eos: EosModel,
    pub mesh: Mesh1d,
    pub k: usize,
    pub bc: Bc1d,
    pub tc: TimeControl,
    pub limiter: LimiterConfig,
    pub t_final: f64,
    /// Extra output times (the final state is always returned).
    pub snapshot_times: Vec<f64>,
    /// Evaluate the L1 stability bound after every step.
    pub track_stability: bool,
}

/// Diagnostics accumulated over a run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: usize,
    /// Minimum density / q over all control points after each stage.
    pub min_d: f64,
    pub min_q: f64,
    pub cells_limited: usize,
    /// Max relative drift of the combined cell-average sums of (D, m, E).
    pub conservation_drift: Vec<f64>,
    /// L1 stability bound `||U(t)|| < 2 ||U(0)||` held at every step
    /// (only evaluated when tracking is on).
    pub stability_ok: Option<bool>,
    pub max_l1_ratio: f64,
}

pub struct RunOutput1d {
    pub snapshots: Vec<(f64, Solution1d)>,
    pub final_state: Solution1d,
    pub summary: RunSummary,
}

fn avg_sums_1d(sol: &Solution1d) -> [f64; 3] {
    let mut s = [0.0; 3];
    for coeffs in [&sol.primal, &sol.dual] {
        for c in 0..coeffs.cells {
            let u = coeffs.avg(c);
            s[0] += u.d;
            s[1] += u.m[0];
            s[2] += u.e;
        }
    }
    s
}

struct LimiterDriver<'a> {
    cfg: LimiterConfig,
    mesh: &'a Mesh1d,
    bc: &'a Bc1d,
    cp: &'a ControlPoints,
    stats: LimiterStats,
    cells_limited: usize,
}

impl LimiterDriver<'_> {
    fn apply(&mut self, sol: &mut Solution1d) -> Result<()> {
        if let Some(m) = self.cfg.tvb_m {
            self.cells_limited += tvb_limit_solution_1d(sol, self.mesh, self.bc, m);
        }
        if self.cfg.pcp {
            let st = pcp_limit_solution_1d(sol, self.cp, self.cfg.eps)?;
            self.cells_limited += st.cells_limited;
            self.stats.min_d = self.stats.min_d.min(st.min_d);
            self.stats.min_q = self.stats.min_q.min(st.min_q);
        } else {
            let (d, q) = scan_solution_1d(sol, self.cp);
            self.stats.min_d = self.stats.min_d.min(d);
            self.stats.min_q = self.stats.min_q.min(q);
        }
        Ok(())
    }
}

pub fn run_1d(params: &RunParams1d, init: &dyn Fn(f64) -> Primitive<1>) -> Result<RunOutput1d> {
    params.tc.validate()?;
    let basis = Basis::new(params.k)?;
    let quad = build_quadrature(params.k)?;
    let tab: Tables = build_tables(&basis, &quad)?;
    let cp = control_points_1d(params.k, &quad)?;
    let eps = params.limiter.eps;
    let periodic = params.bc.is_periodic();

    let mut u = project_initial_1d(&basis, &params.mesh, &quad, &params.eos, eps, periodic, init)?;
    let mut lim = LimiterDriver {
        cfg: params.limiter,
        mesh: &params.mesh,
        bc: &params.bc,
        cp: &cp,
        stats: LimiterStats::empty(),
        cells_limited: 0,
    };
    lim.apply(&mut u)?;

    let tau = params.tc.tau_max_1d(&params.mesh, &quad);
    let dt_nominal = compute_dt_1d(&params.mesh, &params.tc, &quad);

    let mut events: Vec<f64> = params
        .snapshot_times
        .iter()
        .copied()
        .filter(|&s| s > 1e-14 && s < params.t_final * (1.0 - 1e-12))
        .collect();
    events.push(params.t_final);
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let sums0 = avg_sums_1d(&u);
    let mut max_drift = [0.0f64; 3];
    let norm0 = if params.track_stability {
        conserved_l1_norm_1d(&u, &params.mesh, &tab)
    } else {
        0.0
    };
    let mut stability_ok = true;
    let mut max_l1_ratio = 0.0f64;

    let mut snapshots = Vec::new();
    let mut history: VecDeque<(Solution1d, Solution1d)> = VecDeque::new();
    let mut t = 0.0f64;
    let mut step = 0usize;
    let mut event_idx = 0usize;

    while event_idx < events.len() {
        let target = events[event_idx];
        if t >= target - 1e-13 * target.max(1.0) {
            if (target - params.t_final).abs() > 1e-13 {
                snapshots.push((target, u.clone()));
            }
            event_idx += 1;
            continue;
        }

        let l = residual_1d(&u, &params.eos, &params.mesh, &tab, tau, &params.bc, eps)
            .map_err(|e| e.at_step(step, t))?;
        if history.len() == 4 {
            history.pop_front();
        }
        history.push_back((u.clone(), l.clone()));

        let remaining = target - t;
        let (dt, clipped) = if remaining <= dt_nominal * (1.0 + 1e-9) {
            (remaining, remaining < dt_nominal * (1.0 - 1e-9))
        } else {
            (dt_nominal, false)
        };

        let use_ms = params.tc.integrator == Integrator::SspMs3 && !clipped && history.len() == 4;
        let mut rhs = |s: &Solution1d| {
            residual_1d(s, &params.eos, &params.mesh, &tab, tau, &params.bc, eps)
                .map_err(|e| e.at_step(step, t))
        };
        let mut limit = |s: &mut Solution1d| lim.apply(s).map_err(|e| e.at_step(step, t));
        u = if use_ms {
            let (u3, l3) = history.front().unwrap();
            step_ssp_ms3(&u, &l, u3, l3, dt, &mut limit)?
        } else {
            let r = step_ssp_rk3(&u, &l, dt, &mut rhs, &mut limit)?;
            if clipped {
                history.clear();
            }
            r
        };

        t = if remaining <= dt_nominal * (1.0 + 1e-9) {
            target
        } else {
            t + dt
        };
        step += 1;

        let sums = avg_sums_1d(&u);
        for c in 0..3 {
            let scale = sums0[c].abs().max(1e-30);
            max_drift[c] = max_drift[c].max((sums[c] - sums0[c]).abs() / scale);
        }
        if params.track_stability {
            let ratio = conserved_l1_norm_1d(&u, &params.mesh, &tab) / (2.0 * norm0);
            max_l1_ratio = max_l1_ratio.max(ratio);
            if ratio >= 1.0 {
                stability_ok = false;
            }
        }
    }

    let summary = RunSummary {
        steps: step,
        min_d: lim.stats.min_d,
        min_q: lim.stats.min_q,
        cells_limited: lim.cells_limited,
        conservation_drift: max_drift.to_vec(),
        stability_ok: params.track_stability.then_some(stability_ok),
        max_l1_ratio,
    };
    Ok(RunOutput1d {
        snapshots,
        final_state: u,
        summary,
    })
}

/// One sampled output row: position, recovered primitives, conserved state.
pub struct SampleRow1d {
    pub x: f64,
    pub w: Primitive<1>,
    pub u: Conserved<1>,
}

/// Sample the primal solution at cell centers (default) or at all
/// half-cell Lobatto points (`quad_points`).
pub fn sample_solution_1d(
    sol: &Solution1d,
    mesh: &Mesh1d,
    eos: &EosModel,
    eps: AdmissibilityEps,
    quad_points: bool,
) -> Result<Vec<SampleRow1d>> {
    let basis = Basis::new(if sol.primal.modes == 1 {
        0
    } else if sol.primal.modes == 2 {
        1
    } else {
        2
    })?;
    let quad = build_quadrature(basis.k)?;
    let mut rows = Vec::new();
    let mut phi = vec![0.0; sol.primal.modes];
    let mut push = |xi: f64, cell: usize, phi: &mut Vec<f64>| -> Result<()> {
        basis.eval_1d(xi, phi);
        let u = sol.primal.value(cell, phi);
        let w = u.to_primitive(eos, eps)?;
        rows.push(SampleRow1d {
            x: mesh.center(cell) + xi * mesh.dx,
            w,
            u,
        });
        Ok(())
    };
    for cell in 0..sol.primal.cells {
        if quad_points {
            for half in 0..2 {
                let off = if half == 0 { -0.25 } else { 0.25 };
                for &(g, _) in &quad.lobatto {
                    push(off + 0.5 * g, cell, &mut phi)?;
                }
            }
        } else {
            push(0.0, cell, &mut phi)?;
        }
    }
    Ok(rows)
}
