//! Semi-discrete central DG residuals on the overlapping meshes, SSP time
//! integrators, boundary conditions, and the run drivers.

pub mod bc;
pub mod norms;
pub mod residual1;
pub mod residual2;
pub mod run1;
pub mod run2;
pub mod stepper;
pub mod tables;

pub use bc::{Bc1, Bc1d, Bc2, Bc2d};
pub use norms::Field;
pub use run1::{run_1d, RunOutput1d, RunParams1d};
pub use run2::{run_2d, RunOutput2d, RunParams2d};
pub use stepper::SspVector;

use crate::basis::{Basis, QuadratureSet};
use crate::error::{Error, Result};
use crate::grid::{Mesh1d, Mesh2d};
use crate::state::{AdmissibilityEps, Conserved, Primitive};

/// Modal coefficients for one mesh: `data[cell * modes + mode]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs<const DIM: usize> {
    pub cells: usize,
    pub modes: usize,
    pub data: Vec<Conserved<DIM>>,
}

impl<const DIM: usize> Coeffs<DIM> {
    pub fn zeros(cells: usize, modes: usize) -> Self {
        Coeffs {
            cells,
            modes,
            data: vec![Conserved::ZERO; cells * modes],
        }
    }

    #[inline]
    pub fn cell(&self, c: usize) -> &[Conserved<DIM>] {
        &self.data[c * self.modes..(c + 1) * self.modes]
    }

    #[inline]
    pub fn cell_mut(&mut self, c: usize) -> &mut [Conserved<DIM>] {
        &mut self.data[c * self.modes..(c + 1) * self.modes]
    }

    #[inline]
    pub fn avg(&self, c: usize) -> Conserved<DIM> {
        self.data[c * self.modes]
    }

    /// Evaluate the cell polynomial at a reference point given basis values.
    #[inline]
    pub fn value(&self, c: usize, phi: &[f64]) -> Conserved<DIM> {
        let mut u = Conserved::ZERO;
        for (coeff, p) in self.cell(c).iter().zip(phi.iter()) {
            u.axpy(*p, coeff);
        }
        u
    }
}

/// DG solution on the overlapping 1D meshes.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution1d {
    pub primal: Coeffs<1>,
    pub dual: Coeffs<1>,
    pub periodic: bool,
}

/// DG solution on the overlapping 2D meshes. Cells are stored row-major:
/// `cell = iy * nx + ix` for the primal mesh and `cell = dy * dnx + dx`
/// for the dual mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution2d {
    pub primal: Coeffs<2>,
    pub dual: Coeffs<2>,
    pub nx: usize,
    pub ny: usize,
    pub dnx: usize,
    pub dny: usize,
    pub periodic_x: bool,
    pub periodic_y: bool,
}

/// Time integrator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    SspRk3,
    SspMs3,
}

impl Integrator {
    /// Dissipation ratios used in the reported experiments.
    pub fn default_theta(&self) -> f64 {
        match self {
            Integrator::SspRk3 => 1.0,
            Integrator::SspMs3 => 1.0 / 3.0,
        }
    }

    /// Proven range of `theta = dt / tau_max` for the scheme to keep cell
    /// averages admissible.
    pub fn theta_bound(&self) -> f64 {
        match self {
            Integrator::SspRk3 => 1.0,
            Integrator::SspMs3 => 1.0 / 3.0,
        }
    }
}

/// Time-step and dissipation control: `theta = dt / tau_max`, where
/// `tau_max` is the largest step the CFL condition allows.
#[derive(Debug, Clone, Copy)]
pub struct TimeControl {
    pub integrator: Integrator,
    pub theta: f64,
    /// 2D CFL/dissipation scale; `1/6` matches the proven bound, `1` is the
    /// larger step used for the shock runs with the oscillation limiter on.
    pub varpi: f64,
    /// Extra safety factor on `dt` (1 = run at the bound).
    pub safety: f64,
}

impl TimeControl {
    pub fn new(integrator: Integrator) -> Self {
        TimeControl {
            integrator,
            theta: integrator.default_theta(),
            varpi: 1.0 / 6.0,
            safety: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bound = self.integrator.theta_bound();
        if !(self.theta > 0.0 && self.theta <= bound) {
            return Err(Error::Config(format!(
                "theta = {} outside the proven range (0, {bound}] for {:?}",
                self.theta, self.integrator
            )));
        }
        if !(self.varpi > 0.0 && self.varpi <= 1.0) || !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Config(
                "varpi and safety must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }

    /// Largest 1D step allowed by the CFL condition (c = 1).
    pub fn tau_max_1d(&self, mesh: &Mesh1d, quad: &QuadratureSet) -> f64 {
        0.5 * quad.lobatto_w1() * mesh.dx
    }

    /// Largest 2D step: `varpi theta / (2 (1/dx + 1/dy))` at `theta = 1`.
    pub fn tau_max_2d(&self, mesh: &Mesh2d) -> f64 {
        self.varpi / (2.0 * (1.0 / mesh.dx() + 1.0 / mesh.dy()))
    }
}

/// Nominal 1D step `0.5 w1 theta dx` (times the safety factor).
pub fn compute_dt_1d(mesh: &Mesh1d, tc: &TimeControl, quad: &QuadratureSet) -> f64 {
    tc.theta * tc.safety * tc.tau_max_1d(mesh, quad)
}

/// Nominal 2D step `varpi theta / (2 (1/dx + 1/dy))` (times safety).
pub fn compute_dt_2d(mesh: &Mesh2d, tc: &TimeControl) -> f64 {
    tc.theta * tc.safety * tc.tau_max_2d(mesh)
}

fn check_sample<const DIM: usize>(
    eos: &crate::eos::EosModel,
    w: &Primitive<DIM>,
    eps: AdmissibilityEps,
    where_: impl Fn() -> String,
) -> Result<Conserved<DIM>> {
    let u = w
        .to_conserved(eos)
        .map_err(|_| Error::Domain(format!("initial data invalid at {}", where_())))?;
    if !u.is_admissible(eps) {
        return Err(Error::Inadmissible {
            context: format!("initial sample at {}", where_()),
            d: u.d,
            q: u.q(),
        });
    }
    Ok(u)
}

/// L2-project pointwise initial data onto both 1D meshes via the half-cell
/// Gauss rule. Every sampled state must be admissible.
pub fn project_initial_1d(
    basis: &Basis,
    mesh: &Mesh1d,
    quad: &QuadratureSet,
    eos: &crate::eos::EosModel,
    eps: AdmissibilityEps,
    periodic: bool,
    field: &dyn Fn(f64) -> Primitive<1>,
) -> Result<Solution1d> {
    let modes = basis.dim_1d();
    let mass = basis.mass_1d();
    let project = |center: f64, out: &mut [Conserved<1>]| -> Result<()> {
        for o in out.iter_mut() {
            *o = Conserved::ZERO;
        }
        for half in 0..2 {
            let c = if half == 0 { -0.25 } else { 0.25 };
            for &(g, wgt) in &quad.gauss {
                let xi = c + 0.5 * g;
                let x = center + xi * mesh.dx;
                let u = check_sample(eos, &field(x), eps, || format!("x = {x:.6e}"))?;
                for (mu, o) in out.iter_mut().enumerate() {
                    o.axpy(0.5 * wgt * crate::basis::shape(xi, mu), &u);
                }
            }
        }
        for (mu, o) in out.iter_mut().enumerate() {
            o.scale(1.0 / mass[mu]);
        }
        Ok(())
    };

    let mut primal = Coeffs::zeros(mesh.n, modes);
    for j in 0..mesh.n {
        project(mesh.center(j), primal.cell_mut(j))?;
    }
    let dn = mesh.dual_n(periodic);
    let mut dual = Coeffs::zeros(dn, modes);
    for d in 0..dn {
        project(mesh.dual_center(d), dual.cell_mut(d))?;
    }
    Ok(Solution1d {
        primal,
        dual,
        periodic,
    })
}

/// 2D projection onto both meshes via the tensor half-cell Gauss rule.
pub fn project_initial_2d(
    basis: &Basis,
    mesh: &Mesh2d,
    quad: &QuadratureSet,
    eos: &crate::eos::EosModel,
    eps: AdmissibilityEps,
    periodic_x: bool,
    periodic_y: bool,
    field: &dyn Fn(f64, f64) -> Primitive<2>,
) -> Result<Solution2d> {
    let modes = basis.dim_2d();
    let mass = basis.mass_2d();
    let mode_degs = basis.modes_2d();
    let project = |cx: f64, cy: f64, out: &mut [Conserved<2>]| -> Result<()> {
        for o in out.iter_mut() {
            *o = Conserved::ZERO;
        }
        for hx in 0..2 {
            for hy in 0..2 {
                let ox = if hx == 0 { -0.25 } else { 0.25 };
                let oy = if hy == 0 { -0.25 } else { 0.25 };
                for &(gx, wx) in &quad.gauss {
                    for &(gy, wy) in &quad.gauss {
                        let xi = ox + 0.5 * gx;
                        let eta = oy + 0.5 * gy;
                        let x = cx + xi * mesh.dx();
                        let y = cy + eta * mesh.dy();
                        let u = check_sample(eos, &field(x, y), eps, || {
                            format!("(x, y) = ({x:.6e}, {y:.6e})")
                        })?;
                        for (mu, o) in out.iter_mut().enumerate() {
                            let (dx_deg, dy_deg) = mode_degs[mu];
                            let phi =
                                crate::basis::shape(xi, dx_deg) * crate::basis::shape(eta, dy_deg);
                            o.axpy(0.25 * wx * wy * phi, &u);
                        }
                    }
                }
            }
        }
        for (mu, o) in out.iter_mut().enumerate() {
            o.scale(1.0 / mass[mu]);
        }
        Ok(())
    };

    let (nx, ny) = (mesh.x.n, mesh.y.n);
    let mut primal = Coeffs::zeros(nx * ny, modes);
    for iy in 0..ny {
        for ix in 0..nx {
            project(
                mesh.x.center(ix),
                mesh.y.center(iy),
                primal.cell_mut(iy * nx + ix),
            )?;
        }
    }
    let dnx = mesh.x.dual_n(periodic_x);
    let dny = mesh.y.dual_n(periodic_y);
    let mut dual = Coeffs::zeros(dnx * dny, modes);
    for dy in 0..dny {
        for dx in 0..dnx {
            project(
                mesh.x.dual_center(dx),
                mesh.y.dual_center(dy),
                dual.cell_mut(dy * dnx + dx),
            )?;
        }
    }
    Ok(Solution2d {
        primal,
        dual,
        nx,
        ny,
        dnx,
        dny,
        periodic_x,
        periodic_y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_quadrature;
    use crate::eos::EosModel;
    use approx::assert_relative_eq;

    #[test]
    fn dt_formulas_match_reported_settings() {
        let quad = build_quadrature(2).unwrap();
        let mesh = Mesh1d::new(0.0, 1.0, 100); // dx = 0.01
        let mut tc = TimeControl::new(Integrator::SspMs3);
        assert_relative_eq!(tc.theta, 1.0 / 3.0);
        let dt = compute_dt_1d(&mesh, &tc, &quad);
        assert_relative_eq!(dt, 0.5 * (1.0 / 6.0) * (1.0 / 3.0) * 0.01, epsilon = 1e-15);

        let mesh2 = Mesh2d::new(0.0, 1.0, 100, 0.0, 1.0, 100);
        tc.integrator = Integrator::SspRk3;
        tc.theta = 1.0;
        let dt2 = compute_dt_2d(&mesh2, &tc);
        assert_relative_eq!(dt2, (1.0 / 6.0) / 400.0, epsilon = 1e-15);

        assert_relative_eq!(TimeControl::new(Integrator::SspRk3).theta, 1.0);
    }

    #[test]
    fn theta_ranges_enforced() {
        let mut tc = TimeControl::new(Integrator::SspMs3);
        assert!(tc.validate().is_ok());
        tc.theta = 0.5;
        assert!(tc.validate().is_err());
        tc.integrator = Integrator::SspRk3;
        assert!(tc.validate().is_ok());
    }

    #[test]
    fn projection_of_constant_and_linear_fields() {
        let basis = Basis::new(2).unwrap();
        let quad = build_quadrature(2).unwrap();
        let mesh = Mesh1d::new(0.0, 1.0, 8);
        let eos = EosModel::ideal(5.0 / 3.0).unwrap();
        let eps = AdmissibilityEps::default();

        let sol = project_initial_1d(&basis, &mesh, &quad, &eos, eps, true, &|_| {
            Primitive::new(1.0, [0.0], 1.0).unwrap()
        })
        .unwrap();
        for j in 0..mesh.n {
            let cell = sol.primal.cell(j);
            assert_relative_eq!(cell[0].d, 1.0, epsilon = 1e-14);
            assert_relative_eq!(cell[0].e, 2.5, epsilon = 1e-14);
            for mu in 1..3 {
                assert!(cell[mu].d.abs() < 1e-14 && cell[mu].e.abs() < 1e-14);
            }
        }

        // Density linear in x: the quadratic mode must vanish.
        let sol = project_initial_1d(&basis, &mesh, &quad, &eos, eps, true, &|x| {
            Primitive::new(1.0 + 0.5 * x, [0.0], 1.0).unwrap()
        })
        .unwrap();
        for j in 0..mesh.n {
            assert!(sol.primal.cell(j)[2].d.abs() < 1e-14);
            assert_relative_eq!(sol.primal.cell(j)[0].d, 1.0 + 0.5 * mesh.center(j), epsilon = 1e-13);
        }
    }

    #[test]
    fn projection_rejects_inadmissible_samples() {
        let basis = Basis::new(2).unwrap();
        let quad = build_quadrature(2).unwrap();
        let mesh = Mesh1d::new(0.0, 1.0, 4);
        let eos = EosModel::ideal(5.0 / 3.0).unwrap();
        // rho <= 0 halfway through the domain.
        let r = project_initial_1d(&basis, &mesh, &quad, &eos, AdmissibilityEps::default(), true, &|x| {
            Primitive {
                rho: 1.0 - 2.0 * x,
                v: [0.0],
                p: 1.0,
            }
        });
        assert!(r.is_err());
    }

    /// Self-convergence of the projection: l2 coefficient error of a smooth
    /// field drops by ~2^3 per refinement for K = 2.
    #[test]
    fn projection_self_convergence_third_order() {
        let basis = Basis::new(2).unwrap();
        let quad = build_quadrature(2).unwrap();
        let eos = EosModel::ideal(5.0 / 3.0).unwrap();
        let eps = AdmissibilityEps::default();
        let field = |x: f64| {
            Primitive::new(
                1.0 + 0.99999 * (2.0 * std::f64::consts::PI * x).sin(),
                [0.99],
                1e-2,
            )
            .unwrap()
        };
        // Pointwise density error of the projected polynomial at cell
        // midpoints of a fine sampling grid.
        let l2err = |n: usize| -> f64 {
            let mesh = Mesh1d::new(0.0, 1.0, n);
            let sol =
                project_initial_1d(&basis, &mesh, &quad, &eos, eps, true, &field).unwrap();
            let mut sum = 0.0;
            let samples = 7;
            for j in 0..n {
                for s in 0..samples {
                    let xi = -0.5 + (s as f64 + 0.5) / samples as f64;
                    let x = mesh.center(j) + xi * mesh.dx;
                    let mut phi = [0.0; 3];
                    basis.eval_1d(xi, &mut phi);
                    let d = sol.primal.value(j, &phi).d;
                    let exact = field(x).rho * field(x).lorentz();
                    sum += (d - exact).powi(2) * mesh.dx / samples as f64;
                }
            }
            sum.sqrt()
        };
        let e10 = l2err(10);
        let e20 = l2err(20);
        let e40 = l2err(40);
        let order1 = (e10 / e20).log2();
        let order2 = (e20 / e40).log2();
        assert!(order1 > 2.5 && order2 > 2.6, "orders {order1} {order2}");
    }
}
