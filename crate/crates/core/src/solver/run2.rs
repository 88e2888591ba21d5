//! 2D run driver; same stepping logic as the 1D one.

use std::collections::VecDeque;

use super::bc::Bc2d;
use super::residual2::residual_2d;
use super::stepper::{step_ssp_ms3, step_ssp_rk3};
use super::tables::{build_tables, Tables};
use super::{compute_dt_2d, project_initial_2d, Integrator, Solution2d, TimeControl};
use crate::basis::{build_quadrature, Basis};
use crate::eos::EosModel;
use crate::error::Result;
use crate::grid::Mesh2d;
use crate::limiters::{
    control_points_2d, pcp_limit_solution_2d, tvb_limit_solution_2d, LimiterStats,
};
use crate::solver::run1::LimiterConfig;
use crate::state::{AdmissibilityEps, Conserved, Primitive};

#[derive(Debug, Clone)]
pub struct RunParams2d {
    pub eos: EosModel,
    pub mesh: Mesh2d,
    pub k: usize,
    pub bc: Bc2d,
    pub tc: TimeControl,
    pub limiter: LimiterConfig,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunSummary2d {
    pub steps: usize,
    pub min_d: f64,
    pub min_q: f64,
    pub cells_limited: usize,
    pub conservation_drift: Vec<f64>,
}

pub struct RunOutput2d {
    pub snapshots: Vec<(f64, Solution2d)>,
    pub final_state: Solution2d,
    pub summary: RunSummary2d,
}

fn avg_sums_2d(sol: &Solution2d) -> [f64; 4] {
    let mut s = [0.0; 4];
    for coeffs in [&sol.primal, &sol.dual] {
        for c in 0..coeffs.cells {
            let u = coeffs.avg(c);
            for (k, sk) in s.iter_mut().enumerate() {
                *sk += u.comp(k);
            }
        }
    }
    s
}

pub fn run_2d(params: &RunParams2d, init: &dyn Fn(f64, f64) -> Primitive<2>) -> Result<RunOutput2d> {
    params.tc.validate()?;
    let basis = Basis::new(params.k)?;
    let quad = build_quadrature(params.k)?;
    let tab: Tables = build_tables(&basis, &quad)?;
    let cp = control_points_2d(params.k, &quad)?;
    let eps = params.limiter.eps;
    let (px, py) = (params.bc.periodic_x(), params.bc.periodic_y());

    let mut u = project_initial_2d(&basis, &params.mesh, &quad, &params.eos, eps, px, py, init)?;

    let mut stats = LimiterStats::empty();
    let mut cells_limited = 0usize;
    let apply_limiters = |s: &mut Solution2d,
                              stats: &mut LimiterStats,
                              cells_limited: &mut usize|
     -> Result<()> {
        if let Some(m) = params.limiter.tvb_m {
            *cells_limited += tvb_limit_solution_2d(s, &params.mesh, &params.bc, m);
        }
        if params.limiter.pcp {
            let st = pcp_limit_solution_2d(s, &cp, eps)?;
            *cells_limited += st.cells_limited;
            stats.min_d = stats.min_d.min(st.min_d);
            stats.min_q = stats.min_q.min(st.min_q);
        }
        Ok(())
    };
    apply_limiters(&mut u, &mut stats, &mut cells_limited)?;

    let tau = params.tc.tau_max_2d(&params.mesh);
    let dt_nominal = compute_dt_2d(&params.mesh, &params.tc);

    let mut events: Vec<f64> = params
        .snapshot_times
        .iter()
        .copied()
        .filter(|&s| s > 1e-14 && s < params.t_final * (1.0 - 1e-12))
        .collect();
    events.push(params.t_final);
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let sums0 = avg_sums_2d(&u);
    let mut max_drift = [0.0f64; 4];

    let mut snapshots = Vec::new();
    let mut history: VecDeque<(Solution2d, Solution2d)> = VecDeque::new();
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

        let l = residual_2d(&u, &params.eos, &params.mesh, &tab, tau, &params.bc, eps)
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
        let mut rhs = |s: &Solution2d| {
            residual_2d(s, &params.eos, &params.mesh, &tab, tau, &params.bc, eps)
                .map_err(|e| e.at_step(step, t))
        };
        let mut limit = |s: &mut Solution2d| {
            apply_limiters(s, &mut stats, &mut cells_limited).map_err(|e| e.at_step(step, t))
        };
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

        let sums = avg_sums_2d(&u);
        for c in 0..4 {
            let scale = sums0[c].abs().max(1e-30);
            max_drift[c] = max_drift[c].max((sums[c] - sums0[c]).abs() / scale);
        }
    }

    let summary = RunSummary2d {
        steps: step,
        min_d: stats.min_d,
        min_q: stats.min_q,
        cells_limited,
        conservation_drift: max_drift.to_vec(),
    };
    Ok(RunOutput2d {
        snapshots,
        final_state: u,
        summary,
    })
}

pub struct SampleRow2d {
    pub x: f64,
    pub y: f64,
    pub w: Primitive<2>,
    pub u: Conserved<2>,
}

/// Sample the primal solution at cell centers.
pub fn sample_solution_2d(
    sol: &Solution2d,
    mesh: &Mesh2d,
    eos: &EosModel,
    eps: AdmissibilityEps,
) -> Result<Vec<SampleRow2d>> {
    let mut rows = Vec::with_capacity(sol.nx * sol.ny);
    let modes = sol.primal.modes;
    let phi_center: Vec<f64> = {
        let basis = Basis::new(if modes == 1 {
            0
        } else if modes == 3 {
            1
        } else {
            2
        })?;
        let mut p = vec![0.0; modes];
        basis.eval_2d(0.0, 0.0, &mut p);
        p
    };
    for iy in 0..sol.ny {
        for ix in 0..sol.nx {
            let u = sol.primal.value(iy * sol.nx + ix, &phi_center);
            let w = u.to_primitive(eos, eps)?;
            rows.push(SampleRow2d {
                x: mesh.x.center(ix),
                y: mesh.y.center(iy),
                w,
                u,
            });
        }
    }
    Ok(rows)
}
