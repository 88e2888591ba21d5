//! Convergence-study harness: run a problem over a resolution ladder and
//! tabulate l1/l2 errors with observed orders `log2(e_N / e_2N)`.

use crate::error::{Error, Result};
use crate::grid::{Mesh1d, Mesh2d};
use crate::problems::{Problem1d, Problem2d};
use crate::solver::norms::{error_norms_1d, error_norms_2d, Field};
use crate::solver::run1::{run_1d, LimiterConfig, RunParams1d};
use crate::solver::run2::{run_2d, RunParams2d};
use crate::solver::tables::build_tables;
use crate::solver::{Integrator, TimeControl};
use crate::state::AdmissibilityEps;

#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub n: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub l2: f64,
    pub l2_order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub field: Field,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    fn from_errors(field: Field, errs: Vec<(usize, f64, f64)>) -> Self {
        let mut rows: Vec<ErrorRow> = Vec::with_capacity(errs.len());
        for (i, &(n, l1, l2)) in errs.iter().enumerate() {
            let (l1_order, l2_order) = if i == 0 {
                (None, None)
            } else {
                let prev = &errs[i - 1];
                let ratio = (n as f64 / prev.0 as f64).log2();
                (
                    Some((prev.1 / l1).log2() / ratio),
                    Some((prev.2 / l2).log2() / ratio),
                )
            };
            rows.push(ErrorRow {
                n,
                l1,
                l1_order,
                l2,
                l2_order,
            });
        }
        ErrorReport { field, rows }
    }

    /// Aligned text table.
    pub fn render(&self) -> String {
        let mut s = String::from(
            "     N        l1 error   l1 order        l2 error   l2 order\n",
        );
        for r in &self.rows {
            let fmt_order = |o: Option<f64>| match o {
                Some(v) => format!("{v:>10.2}"),
                None => format!("{:>10}", "--"),
            };
            s.push_str(&format!(
                "{:>6}  {:>14.3e} {}  {:>14.3e} {}\n",
                r.n,
                r.l1,
                fmt_order(r.l1_order),
                r.l2,
                fmt_order(r.l2_order),
            ));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,l1,l1_order,l2,l2_order\n");
        for r in &self.rows {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{:.16e},{},{:.16e},{}\n",
                r.n,
                r.l1,
                o(r.l1_order),
                r.l2,
                o(r.l2_order)
            ));
        }
        s
    }
}

/// Observed order from a pair of errors on meshes N and 2N.
pub fn order_between(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

pub struct ConvergeConfig {
    pub integrator: Integrator,
    pub pcp: bool,
    pub field: Field,
    pub k: usize,
    pub eps: AdmissibilityEps,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig {
            integrator: Integrator::SspMs3,
            pcp: true,
            field: Field::Rho,
            k: 2,
            eps: AdmissibilityEps::default(),
        }
    }
}

/// Run the convergence ladder for a 1D problem with an exact solution.
pub fn converge_1d(problem: &Problem1d, cfg: &ConvergeConfig, n_list: &[usize]) -> Result<ErrorReport> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| Error::NoExactSolution(problem.name.clone()))?;
    let quad = crate::basis::build_quadrature(cfg.k)?;
    let basis = crate::basis::Basis::new(cfg.k)?;
    let tab = build_tables(&basis, &quad)?;
    let mut errs = Vec::new();
    for &n in n_list {
        let mesh = Mesh1d::new(problem.domain.0, problem.domain.1, n);
        let params = RunParams1d {
            eos: problem.eos,
            mesh: mesh.clone(),
            k: cfg.k,
            bc: problem.bc,
            tc: TimeControl::new(cfg.integrator),
            limiter: LimiterConfig {
                pcp: cfg.pcp,
                tvb_m: problem.tvb_m,
                eps: cfg.eps,
            },
            t_final: problem.t_final,
            snapshot_times: vec![],
            track_stability: false,
        };
        let out = run_1d(&params, &*problem.init)?;
        let t_f = problem.t_final;
        let (l1, l2) = error_norms_1d(
            &out.final_state,
            &mesh,
            &tab,
            &problem.eos,
            cfg.eps,
            cfg.field,
            &|x| exact(t_f, x),
        )?;
        errs.push((n, l1, l2));
    }
    Ok(ErrorReport::from_errors(cfg.field, errs))
}

/// 2D convergence ladder on `n x n` meshes.
pub fn converge_2d(problem: &Problem2d, cfg: &ConvergeConfig, n_list: &[usize]) -> Result<ErrorReport> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| Error::NoExactSolution(problem.name.clone()))?;
    let quad = crate::basis::build_quadrature(cfg.k)?;
    let basis = crate::basis::Basis::new(cfg.k)?;
    let tab = build_tables(&basis, &quad)?;
    let mut errs = Vec::new();
    for &n in n_list {
        let mesh = Mesh2d::new(
            problem.domain.0,
            problem.domain.1,
            n,
            problem.domain.2,
            problem.domain.3,
            n,
        );
        let mut tc = TimeControl::new(cfg.integrator);
        tc.varpi = problem.varpi;
        let params = RunParams2d {
            eos: problem.eos,
            mesh: Mesh2d::new(
                problem.domain.0,
                problem.domain.1,
                n,
                problem.domain.2,
                problem.domain.3,
                n,
            ),
            k: cfg.k,
            bc: problem.bc,
            tc,
            limiter: LimiterConfig {
                pcp: cfg.pcp,
                tvb_m: problem.tvb_m,
                eps: cfg.eps,
            },
            t_final: problem.t_final,
            snapshot_times: vec![],
        };
        let out = run_2d(&params, &*problem.init)?;
        let t_f = problem.t_final;
        let (l1, l2) = error_norms_2d(
            &out.final_state,
            &mesh,
            &tab,
            &problem.eos,
            cfg.eps,
            cfg.field,
            &|x, y| exact(t_f, x, y),
        )?;
        errs.push((n, l1, l2));
    }
    Ok(ErrorReport::from_errors(cfg.field, errs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_computation_on_synthetic_errors() {
        // errors 8 -> 1 across a mesh doubling: order exactly 3.
        assert_eq!(order_between(8.0, 1.0), 3.0);
        let report = ErrorReport::from_errors(
            Field::Rho,
            vec![(10, 8.0, 4.0), (20, 1.0, 1.0)],
        );
        assert_eq!(report.rows[1].l1_order, Some(3.0));
        assert_eq!(report.rows[1].l2_order, Some(2.0));
        assert!(report.rows[0].l1_order.is_none());
        let txt = report.render();
        assert!(txt.contains("--"));
    }
}
