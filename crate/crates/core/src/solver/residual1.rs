//! Semi-discrete 1D central DG residual on the overlapping meshes.
//!
//! Each mesh's update uses the *other* mesh's solution for every flux and
//! for the dissipation term `(1/tau_max) int (U_other - U_self) phi`:
//! volume integrals are evaluated by the Gauss rule applied independently
//! on each half cell (where the dual solution is smooth), and interface
//! fluxes are taken at the dual solution's cell centers, where it is
//! continuous — no Riemann solver appears anywhere.
//!
//! Both meshes share the same half-cell geometry, so point values are
//! computed once per half-cell Gauss node and reused by the primal and the
//! dual assembly; the dissipation contributions then cancel between the
//! meshes exactly in floating point, which is what keeps the combined
//! cell-average sums conserved to rounding.

use super::bc::{fetch_cell_1d, Bc1d, MeshRole};
use super::tables::Tables;
use super::Solution1d;
use crate::eos::EosModel;
use crate::error::{Error, Result};
use crate::grid::Mesh1d;
use crate::state::{recover, AdmissibilityEps, Conserved};

#[derive(Clone, Copy)]
struct PointVal {
    u: Conserved<1>,
    f: Conserved<1>,
}

const ZERO_PV: PointVal = PointVal {
    u: Conserved::ZERO,
    f: Conserved::ZERO,
};

#[inline]
fn eval_cell(coeffs: &[Conserved<1>], phi: &[f64]) -> Conserved<1> {
    let mut u = Conserved::ZERO;
    for (c, p) in coeffs.iter().zip(phi.iter()) {
        u.axpy(*p, c);
    }
    u
}

fn point_with_flux(
    eos: &EosModel,
    u: Conserved<1>,
    eps: AdmissibilityEps,
    mesh_name: &'static str,
    cell: isize,
    x: f64,
) -> Result<PointVal> {
    let rec = recover(eos, &u, eps).map_err(|e| match e {
        Error::Inadmissible { d, q, .. } => Error::Inadmissible {
            context: format!("mesh {mesh_name}, cell {cell}, x = {x:.8e}"),
            d,
            q,
        },
        Error::RecoveryFailed {
            iters, residual, ..
        } => Error::RecoveryFailed {
            context: format!("mesh {mesh_name}, cell {cell}, x = {x:.8e}"),
            iters,
            residual,
        },
        other => other,
    })?;
    Ok(PointVal {
        u,
        f: u.flux_from(&rec, 0),
    })
}

/// Time derivative of the modal coefficients on both meshes.
pub fn residual_1d(
    sol: &Solution1d,
    eos: &EosModel,
    mesh: &Mesh1d,
    tab: &Tables,
    tau_max: f64,
    bc: &Bc1d,
    eps: AdmissibilityEps,
) -> Result<Solution1d> {
    let n = mesh.n;
    let dn = sol.dual.cells;
    let modes = sol.primal.modes;
    let q = tab.q;
    let periodic = sol.periodic;
    let dx = mesh.dx;
    let nh2 = 2 * n as isize;

    // Slot index for half-interval k; one slot per physical half.
    let hidx = |k: isize| -> usize {
        if periodic {
            (k.rem_euclid(nh2) + 1) as usize
        } else {
            (k + 1) as usize
        }
    };
    // Dual-center index (dual centers coincide with primal interfaces).
    let didx = |d: isize| -> usize {
        if periodic {
            d.rem_euclid(n as isize) as usize
        } else {
            d as usize
        }
    };

    let nslots = 2 * n + 2;
    let mut pv_i = vec![ZERO_PV; nslots * q];
    let mut pv_j = vec![ZERO_PV; nslots * q];
    let mut buf = vec![Conserved::ZERO; modes];

    let k_range: Vec<isize> = if periodic {
        (0..nh2).collect()
    } else {
        (-1..=nh2).collect()
    };
    for &k in &k_range {
        let slot = hidx(k);
        // Primal owner of this half.
        let pj = k.div_euclid(2);
        let ph = k.rem_euclid(2) as usize;
        fetch_cell_1d(
            &sol.primal.data,
            n,
            modes,
            MeshRole::Primal,
            pj,
            bc,
            &mut buf,
        );
        for a in 0..q {
            let x = mesh.a + 0.5 * dx * (k as f64 + 0.5 + tab.gauss_x[a]);
            let u = eval_cell(&buf, &tab.phi1[ph][a]);
            pv_i[slot * q + a] = point_with_flux(eos, u, eps, "I", pj, x)?;
        }
        // Dual owner.
        let dj = (k + 1).div_euclid(2);
        let dh = (k + 1).rem_euclid(2) as usize;
        fetch_cell_1d(&sol.dual.data, dn, modes, MeshRole::Dual, dj, bc, &mut buf);
        for a in 0..q {
            let x = mesh.a + 0.5 * dx * (k as f64 + 0.5 + tab.gauss_x[a]);
            let u = eval_cell(&buf, &tab.phi1[dh][a]);
            pv_j[slot * q + a] = point_with_flux(eos, u, eps, "J", dj, x)?;
        }
    }

    // Interface fluxes: F(U^J) at dual cell centers, F(U^I) at primal cell
    // centers (one ghost on each side for the dual update).
    let mut fc_j = vec![Conserved::<1>::ZERO; n + 1];
    for d in 0..=n as isize {
        let dd = didx(d);
        if periodic && d == n as isize {
            fc_j[n] = fc_j[0];
            continue;
        }
        fetch_cell_1d(&sol.dual.data, dn, modes, MeshRole::Dual, dd as isize, bc, &mut buf);
        let u = eval_cell(&buf, &tab.phi1_center);
        fc_j[d as usize] = point_with_flux(eos, u, eps, "J", dd as isize, mesh.dual_center(dd))?.f;
    }
    let mut fc_i = vec![Conserved::<1>::ZERO; n + 2];
    for i in -1..=n as isize {
        fetch_cell_1d(&sol.primal.data, n, modes, MeshRole::Primal, i, bc, &mut buf);
        let u = eval_cell(&buf, &tab.phi1_center);
        let x = mesh.a + (i as f64 + 0.5) * dx;
        fc_i[(i + 1) as usize] = point_with_flux(eos, u, eps, "I", i, x)?.f;
    }

    let mut out = Solution1d {
        primal: super::Coeffs::zeros(n, modes),
        dual: super::Coeffs::zeros(dn, modes),
        periodic,
    };

    let w = &tab.gauss_w;
    // Primal assembly.
    for j in 0..n {
        let s0 = hidx(2 * j as isize);
        let s1 = hidx(2 * j as isize + 1);
        let cell = out.primal.cell_mut(j);
        for (nu, c) in cell.iter_mut().enumerate() {
            let mut acc = Conserved::ZERO;
            for a in 0..q {
                for (half, slot) in [(0usize, s0), (1usize, s1)] {
                    let pvj = &pv_j[slot * q + a];
                    let pvi = &pv_i[slot * q + a];
                    // Dissipation (1/tau) (U^J - U^I) phi, half-cell Gauss.
                    let wphi = 0.5 * dx * w[a] * tab.phi1[half][a][nu] / tau_max;
                    acc.axpy(wphi, &pvj.u);
                    acc.axpy(-wphi, &pvi.u);
                    // Volume flux against d(phi)/dx.
                    acc.axpy(0.5 * w[a] * tab.dphi1[half][a][nu], &pvj.f);
                }
            }
            acc.axpy(tab.phi1_iface[0][nu], &fc_j[j]);
            acc.axpy(-tab.phi1_iface[1][nu], &fc_j[j + 1]);
            acc.scale(1.0 / (dx * tab.mass1[nu]));
            *c = acc;
        }
    }

    // Dual assembly (same structure with roles swapped; dual cell d spans
    // halves 2d-1 and 2d, its interfaces are the primal centers d-1, d).
    for d in 0..dn {
        let s0 = hidx(2 * d as isize - 1);
        let s1 = hidx(2 * d as isize);
        let (il, ir) = if periodic {
            (
                ((d as isize - 1).rem_euclid(n as isize) + 1) as usize,
                (d as isize + 1) as usize,
            )
        } else {
            (d, d + 1)
        };
        let cell = out.dual.cell_mut(d);
        for (nu, c) in cell.iter_mut().enumerate() {
            let mut acc = Conserved::ZERO;
            for a in 0..q {
                for (half, slot) in [(0usize, s0), (1usize, s1)] {
                    let pvj = &pv_j[slot * q + a];
                    let pvi = &pv_i[slot * q + a];
                    let wphi = 0.5 * dx * w[a] * tab.phi1[half][a][nu] / tau_max;
                    acc.axpy(wphi, &pvi.u);
                    acc.axpy(-wphi, &pvj.u);
                    acc.axpy(0.5 * w[a] * tab.dphi1[half][a][nu], &pvi.f);
                }
            }
            acc.axpy(tab.phi1_iface[0][nu], &fc_i[il]);
            acc.axpy(-tab.phi1_iface[1][nu], &fc_i[ir]);
            acc.scale(1.0 / (dx * tab.mass1[nu]));
            *c = acc;
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_quadrature, Basis};
    use crate::solver::tables::build_tables;
    use crate::solver::{project_initial_1d, Solution1d};
    use crate::state::Primitive;

    fn setup(n: usize, k: usize) -> (Mesh1d, Tables, EosModel, AdmissibilityEps) {
        let mesh = Mesh1d::new(0.0, 1.0, n);
        let basis = Basis::new(k).unwrap();
        let quad = build_quadrature(k).unwrap();
        let tab = build_tables(&basis, &quad).unwrap();
        (
            mesh,
            tab,
            EosModel::ideal(5.0 / 3.0).unwrap(),
            AdmissibilityEps::default(),
        )
    }

    fn constant_solution(mesh: &Mesh1d, k: usize, eos: &EosModel, periodic: bool) -> Solution1d {
        let basis = Basis::new(k).unwrap();
        let quad = build_quadrature(k).unwrap();
        project_initial_1d(
            &basis,
            mesh,
            &quad,
            eos,
            AdmissibilityEps::default(),
            periodic,
            &|_| Primitive::new(1.3, [0.4], 0.7).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_state_has_zero_residual() {
        for k in [0usize, 1, 2] {
            let (mesh, tab, eos, eps) = setup(16, k);
            let sol = constant_solution(&mesh, k, &eos, true);
            let tau = 0.5 * build_quadrature(k).unwrap().lobatto_w1() * mesh.dx;
            let r = residual_1d(&sol, &eos, &mesh, &tab, tau, &Bc1d::periodic(), eps).unwrap();
            for c in r.primal.data.iter().chain(r.dual.data.iter()) {
                assert!(c.d.abs() < 1e-13, "K={k}: residual d = {}", c.d);
                assert!(c.m[0].abs() < 1e-13);
                assert!(c.e.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_state_outflow_also_zero() {
        let (mesh, tab, eos, eps) = setup(12, 2);
        let sol = constant_solution(&mesh, 2, &eos, false);
        let tau = 0.5 * (1.0 / 6.0) * mesh.dx;
        let r = residual_1d(&sol, &eos, &mesh, &tab, tau, &Bc1d::outflow(), eps).unwrap();
        for c in r.primal.data.iter().chain(r.dual.data.iter()) {
            assert!(c.d.abs() < 1e-13 && c.m[0].abs() < 1e-13 && c.e.abs() < 1e-13);
        }
    }

    /// For K = 0 a forward Euler step of the cell-average operator must
    /// reproduce the three-term convex combination
    /// `(1-theta) U_j + (theta/2) U_{j+1/2}^{J,-} + (theta/2) U_{j-1/2}^{J,+}`.
    #[test]
    fn k0_step_equals_convex_combination() {
        let (mesh, tab, eos, eps) = setup(10, 0);
        let basis = Basis::new(0).unwrap();
        let quad = build_quadrature(0).unwrap();
        let sol = project_initial_1d(&basis, &mesh, &quad, &eos, eps, true, &|x| {
            Primitive::new(
                1.0 + 0.5 * (2.0 * std::f64::consts::PI * x).sin(),
                [0.3],
                1.0 + 0.2 * (2.0 * std::f64::consts::PI * x).cos(),
            )
            .unwrap()
        })
        .unwrap();

        let theta = 0.8;
        let tau = 0.5 * mesh.dx; // K = 0 bound: dt < theta dx / 2
        let dt = theta * tau;
        let r = residual_1d(&sol, &eos, &mesh, &tab, tau, &Bc1d::periodic(), eps).unwrap();

        let alpha = theta * mesh.dx / (2.0 * dt); // = tau/dt * ... = 1/?  (alpha = theta dx / (2 dt))
        assert!(alpha >= 1.0);
        for j in 0..mesh.n {
            let uj = sol.primal.avg(j);
            let jl = j; // dual cell centered on left interface of cell j
            let jr = (j + 1) % mesh.n;
            let ul = sol.dual.avg(jl);
            let ur = sol.dual.avg(jr);
            let fl = ul.flux(&eos, 0, eps).unwrap();
            let fr = ur.flux(&eos, 0, eps).unwrap();
            // U^{J,+} at left interface, U^{J,-} at right interface.
            let mut up = ul;
            up.axpy(1.0 / alpha, &fl);
            let mut um = ur;
            um.axpy(-1.0 / alpha, &fr);
            let mut expect = uj;
            expect.scale(1.0 - theta);
            expect.axpy(0.5 * theta, &um);
            expect.axpy(0.5 * theta, &up);

            let mut got = sol.primal.avg(j);
            got.axpy(dt, &r.primal.avg(j));
            assert!(
                (got.d - expect.d).abs() < 1e-14
                    && (got.m[0] - expect.m[0]).abs() < 1e-14
                    && (got.e - expect.e).abs() < 1e-14,
                "cell {j}: got {:?} expect {:?}",
                got,
                expect
            );
        }
    }

    /// With periodic boundaries the combined cell-average sum over both
    /// meshes is conserved to rounding by one Euler step.
    #[test]
    fn combined_mass_conserved_by_euler_step() {
        let (mesh, tab, eos, eps) = setup(20, 2);
        let basis = Basis::new(2).unwrap();
        let quad = build_quadrature(2).unwrap();
        let sol = project_initial_1d(&basis, &mesh, &quad, &eos, eps, true, &|x| {
            Primitive::new(
                1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin(),
                [0.5],
                1.0,
            )
            .unwrap()
        })
        .unwrap();
        let tau = 0.5 * quad.lobatto_w1() * mesh.dx;
        let r = residual_1d(&sol, &eos, &mesh, &tab, tau, &Bc1d::periodic(), eps).unwrap();
        let sum = |s: &Solution1d, which: usize| -> f64 {
            (0..s.primal.cells)
                .map(|j| s.primal.avg(j).comp(which))
                .sum::<f64>()
                + (0..s.dual.cells)
                    .map(|d| s.dual.avg(d).comp(which))
                    .sum::<f64>()
        };
        for comp in 0..3 {
            let before = sum(&sol, comp);
            let mut stepped = sol.clone();
            for (c, rc) in stepped
                .primal
                .data
                .iter_mut()
                .zip(r.primal.data.iter())
            {
                c.axpy(tau, rc);
            }
            for (c, rc) in stepped.dual.data.iter_mut().zip(r.dual.data.iter()) {
                c.axpy(tau, rc);
            }
            let after = sum(&stepped, comp);
            assert!(
                (after - before).abs() <= 1e-12 * before.abs().max(1.0),
                "component {comp}: {before} -> {after}"
            );
        }
    }
}
