//! Semi-discrete 2D central DG residual on the overlapping meshes.
//!
//! Same structure as the 1D operator: each mesh update evaluates the other
//! mesh's solution, with tensor-product Gauss quadrature on the four
//! quarter cells for volume terms and Gauss lines on the edges, which for
//! each mesh pass through the interior of the other mesh's cells. The four
//! quarter cells of a primal cell are also quarter cells of dual cells, so
//! point values are computed once per quarter-cell node and shared.

use super::bc::{fetch_cell_2d, Bc2d, GhostCtx, MeshRole};
use super::tables::Tables;
use super::{Coeffs, Solution2d};
use crate::eos::EosModel;
use crate::error::{Error, Result};
use crate::grid::Mesh2d;
use crate::state::{recover, AdmissibilityEps, Conserved, Recovered};

#[inline]
fn eval_cell_2d(
    coeffs: &[Conserved<2>],
    modes2d: &[(usize, usize)],
    sx: &[f64],
    sy: &[f64],
) -> Conserved<2> {
    let mut u = Conserved::ZERO;
    for (c, &(dx, dy)) in coeffs.iter().zip(modes2d.iter()) {
        u.axpy(sx[dx] * sy[dy], c);
    }
    u
}

fn recover_at(
    eos: &EosModel,
    u: &Conserved<2>,
    eps: AdmissibilityEps,
    mesh_name: &'static str,
    cell: (isize, isize),
    x: f64,
    y: f64,
) -> Result<Recovered<2>> {
    recover(eos, u, eps).map_err(|e| match e {
        Error::Inadmissible { d, q, .. } => Error::Inadmissible {
            context: format!(
                "mesh {mesh_name}, cell ({}, {}), (x, y) = ({x:.6e}, {y:.6e})",
                cell.0, cell.1
            ),
            d,
            q,
        },
        Error::RecoveryFailed {
            iters, residual, ..
        } => Error::RecoveryFailed {
            context: format!(
                "mesh {mesh_name}, cell ({}, {}), (x, y) = ({x:.6e}, {y:.6e})",
                cell.0, cell.1
            ),
            iters,
            residual,
        },
        other => other,
    })
}

/// Time derivative of the modal coefficients on both 2D meshes.
pub fn residual_2d(
    sol: &Solution2d,
    eos: &EosModel,
    mesh: &Mesh2d,
    tab: &Tables,
    tau_max: f64,
    bc: &Bc2d,
    eps: AdmissibilityEps,
) -> Result<Solution2d> {
    let (nx, ny) = (sol.nx, sol.ny);
    let (dnx, dny) = (sol.dnx, sol.dny);
    let modes = tab.modes2;
    let modes2d = &tab.modes2d;
    let q = tab.q;
    let (dx, dy) = (mesh.dx(), mesh.dy());
    let (px, py) = (sol.periodic_x, sol.periodic_y);

    let ctx_p = GhostCtx {
        nx,
        ny,
        modes,
        x0: mesh.x.center(0),
        y0: mesh.y.center(0),
        dx,
        dy,
        role: MeshRole::Primal,
    };
    let ctx_d = GhostCtx {
        nx: dnx,
        ny: dny,
        modes,
        x0: mesh.x.dual_center(0),
        y0: mesh.y.dual_center(0),
        dx,
        dy,
        role: MeshRole::Dual,
    };

    let mut out = Solution2d {
        primal: Coeffs::zeros(nx * ny, modes),
        dual: Coeffs::zeros(dnx * dny, modes),
        nx,
        ny,
        dnx,
        dny,
        periodic_x: px,
        periodic_y: py,
    };

    let w = &tab.gauss_w;
    let qq = q * q;
    let mut buf_p = vec![Conserved::<2>::ZERO; modes];
    let mut buf_d = vec![Conserved::<2>::ZERO; modes];
    let mut u_i = vec![Conserved::<2>::ZERO; qq];
    let mut f1_i = vec![Conserved::<2>::ZERO; qq];
    let mut f2_i = vec![Conserved::<2>::ZERO; qq];
    let mut u_j = vec![Conserved::<2>::ZERO; qq];
    let mut f1_j = vec![Conserved::<2>::ZERO; qq];
    let mut f2_j = vec![Conserved::<2>::ZERO; qq];

    let kx_range: Vec<isize> = if px {
        (0..2 * nx as isize).collect()
    } else {
        (-1..=2 * nx as isize).collect()
    };
    let ky_range: Vec<isize> = if py {
        (0..2 * ny as isize).collect()
    } else {
        (-1..=2 * ny as isize).collect()
    };

    // Volume and dissipation contributions, one quarter-cell tile at a time.
    for &ky in &ky_range {
        let pjy = ky.div_euclid(2);
        let phy = ky.rem_euclid(2) as usize;
        let djy = (ky + 1).div_euclid(2);
        let dhy = (ky + 1).rem_euclid(2) as usize;
        let pjy_wrapped = pjy.rem_euclid(ny as isize) as usize;
        let djy_wrapped = djy.rem_euclid(dny as isize) as usize;
        let primal_row_ok = ky >= 0 && ky < 2 * ny as isize;
        for &kx in &kx_range {
            let pjx = kx.div_euclid(2);
            let phx = kx.rem_euclid(2) as usize;
            let djx = (kx + 1).div_euclid(2);
            let dhx = (kx + 1).rem_euclid(2) as usize;
            let pjx_wrapped = pjx.rem_euclid(nx as isize) as usize;
            let djx_wrapped = djx.rem_euclid(dnx as isize) as usize;
            let primal_ok = primal_row_ok && kx >= 0 && kx < 2 * nx as isize;

            fetch_cell_2d(&sol.primal.data, &ctx_p, modes2d, pjx, pjy, bc, &mut buf_p);
            fetch_cell_2d(&sol.dual.data, &ctx_d, modes2d, djx, djy, bc, &mut buf_d);

            for b in 0..q {
                for a in 0..q {
                    let x = mesh.x.a + 0.5 * dx * (kx as f64 + 0.5 + tab.gauss_x[a]);
                    let y = mesh.y.a + 0.5 * dy * (ky as f64 + 0.5 + tab.gauss_x[b]);
                    let ui = eval_cell_2d(&buf_p, modes2d, &tab.ax[phx][a], &tab.ax[phy][b]);
                    let ri = recover_at(eos, &ui, eps, "I", (pjx, pjy), x, y)?;
                    let uj = eval_cell_2d(&buf_d, modes2d, &tab.ax[dhx][a], &tab.ax[dhy][b]);
                    let rj = recover_at(eos, &uj, eps, "J", (djx, djy), x, y)?;
                    let idx = b * q + a;
                    u_i[idx] = ui;
                    f1_i[idx] = ui.flux_from(&ri, 0);
                    f2_i[idx] = ui.flux_from(&ri, 1);
                    u_j[idx] = uj;
                    f1_j[idx] = uj.flux_from(&rj, 0);
                    f2_j[idx] = uj.flux_from(&rj, 1);
                }
            }

            let cd = 0.25 * dx * dy / tau_max;
            let c1 = 0.25 * dy;
            let c2 = 0.25 * dx;
            if primal_ok {
                let cell = out.primal.cell_mut(pjy_wrapped * nx + pjx_wrapped);
                for (nu, cmut) in cell.iter_mut().enumerate() {
                    let (da, db) = modes2d[nu];
                    let mut acc = Conserved::ZERO;
                    for b in 0..q {
                        for a in 0..q {
                            let idx = b * q + a;
                            let ww = w[a] * w[b];
                            let sx = tab.ax[phx][a][da];
                            let sy = tab.ax[phy][b][db];
                            let dsx = tab.dax[phx][a][da];
                            let dsy = tab.dax[phy][b][db];
                            let wd = cd * ww * sx * sy;
                            acc.axpy(wd, &u_j[idx]);
                            acc.axpy(-wd, &u_i[idx]);
                            acc.axpy(c1 * ww * dsx * sy, &f1_j[idx]);
                            acc.axpy(c2 * ww * sx * dsy, &f2_j[idx]);
                        }
                    }
                    cmut.axpy(1.0, &acc);
                }
            }
            {
                let cell = out.dual.cell_mut(djy_wrapped * dnx + djx_wrapped);
                for (nu, cmut) in cell.iter_mut().enumerate() {
                    let (da, db) = modes2d[nu];
                    let mut acc = Conserved::ZERO;
                    for b in 0..q {
                        for a in 0..q {
                            let idx = b * q + a;
                            let ww = w[a] * w[b];
                            let sx = tab.ax[dhx][a][da];
                            let sy = tab.ax[dhy][b][db];
                            let dsx = tab.dax[dhx][a][da];
                            let dsy = tab.dax[dhy][b][db];
                            let wd = cd * ww * sx * sy;
                            acc.axpy(wd, &u_i[idx]);
                            acc.axpy(-wd, &u_j[idx]);
                            acc.axpy(c1 * ww * dsx * sy, &f1_i[idx]);
                            acc.axpy(c2 * ww * sx * dsy, &f2_i[idx]);
                        }
                    }
                    cmut.axpy(1.0, &acc);
                }
            }
        }
    }

    // --- Edge-line flux tables ------------------------------------------
    // F1 of the dual solution on primal x-interfaces (dual x-centers).
    let xlines_j = if px { nx } else { nx + 1 };
    let xline_j = |i: usize| -> usize { if px { i % nx } else { i } };
    let mut fx_j = vec![Conserved::<2>::ZERO; xlines_j * 2 * ny * q];
    for i in 0..xlines_j {
        for ky in 0..2 * ny as isize {
            let djy = (ky + 1).div_euclid(2);
            let dhy = (ky + 1).rem_euclid(2) as usize;
            fetch_cell_2d(&sol.dual.data, &ctx_d, modes2d, i as isize, djy, bc, &mut buf_d);
            for b in 0..q {
                let u = eval_cell_2d(&buf_d, modes2d, &tab.ax_center, &tab.ax[dhy][b]);
                let x = mesh.x.iface(i);
                let y = mesh.y.a + 0.5 * dy * (ky as f64 + 0.5 + tab.gauss_x[b]);
                let r = recover_at(eos, &u, eps, "J", (i as isize, djy), x, y)?;
                fx_j[(i * 2 * ny + ky as usize) * q + b] = u.flux_from(&r, 0);
            }
        }
    }
    // F2 of the dual solution on primal y-interfaces.
    let ylines_j = if py { ny } else { ny + 1 };
    let yline_j = |j: usize| -> usize { if py { j % ny } else { j } };
    let mut fy_j = vec![Conserved::<2>::ZERO; ylines_j * 2 * nx * q];
    for j in 0..ylines_j {
        for kx in 0..2 * nx as isize {
            let djx = (kx + 1).div_euclid(2);
            let dhx = (kx + 1).rem_euclid(2) as usize;
            fetch_cell_2d(&sol.dual.data, &ctx_d, modes2d, djx, j as isize, bc, &mut buf_d);
            for a in 0..q {
                let u = eval_cell_2d(&buf_d, modes2d, &tab.ax[dhx][a], &tab.ax_center);
                let x = mesh.x.a + 0.5 * dx * (kx as f64 + 0.5 + tab.gauss_x[a]);
                let y = mesh.y.iface(j);
                let r = recover_at(eos, &u, eps, "J", (djx, j as isize), x, y)?;
                fy_j[(j * 2 * nx + kx as usize) * q + a] = u.flux_from(&r, 1);
            }
        }
    }
    // F1 of the primal solution on dual x-interfaces (primal x-centers),
    // with one ghost column/row on each side for the dual update.
    let (xi_lo, xi_hi) = if px { (0isize, nx as isize - 1) } else { (-1, nx as isize) };
    let xlines_i = (xi_hi - xi_lo + 1) as usize;
    let xline_i = |i: isize| -> usize {
        if px {
            i.rem_euclid(nx as isize) as usize
        } else {
            (i + 1) as usize
        }
    };
    let (kyi_lo, kyi_hi) = if py { (0isize, 2 * ny as isize - 1) } else { (-1, 2 * ny as isize) };
    let kyi_slots = (kyi_hi - kyi_lo + 1) as usize;
    let kyi_slot = |ky: isize| -> usize {
        if py {
            ky.rem_euclid(2 * ny as isize) as usize
        } else {
            (ky + 1) as usize
        }
    };
    let mut fx_i = vec![Conserved::<2>::ZERO; xlines_i * kyi_slots * q];
    for i in xi_lo..=xi_hi {
        for ky in kyi_lo..=kyi_hi {
            let pjy = ky.div_euclid(2);
            let phy = ky.rem_euclid(2) as usize;
            fetch_cell_2d(&sol.primal.data, &ctx_p, modes2d, i, pjy, bc, &mut buf_p);
            for b in 0..q {
                let u = eval_cell_2d(&buf_p, modes2d, &tab.ax_center, &tab.ax[phy][b]);
                let x = mesh.x.a + (i as f64 + 0.5) * dx;
                let y = mesh.y.a + 0.5 * dy * (ky as f64 + 0.5 + tab.gauss_x[b]);
                let r = recover_at(eos, &u, eps, "I", (i, pjy), x, y)?;
                fx_i[(xline_i(i) * kyi_slots + kyi_slot(ky)) * q + b] = u.flux_from(&r, 0);
            }
        }
    }
    // F2 of the primal solution on dual y-interfaces (primal y-centers).
    let (yi_lo, yi_hi) = if py { (0isize, ny as isize - 1) } else { (-1, ny as isize) };
    let ylines_i = (yi_hi - yi_lo + 1) as usize;
    let yline_i = |j: isize| -> usize {
        if py {
            j.rem_euclid(ny as isize) as usize
        } else {
            (j + 1) as usize
        }
    };
    let (kxi_lo, kxi_hi) = if px { (0isize, 2 * nx as isize - 1) } else { (-1, 2 * nx as isize) };
    let kxi_slots = (kxi_hi - kxi_lo + 1) as usize;
    let kxi_slot = |kx: isize| -> usize {
        if px {
            kx.rem_euclid(2 * nx as isize) as usize
        } else {
            (kx + 1) as usize
        }
    };
    let mut fy_i = vec![Conserved::<2>::ZERO; ylines_i * kxi_slots * q];
    for j in yi_lo..=yi_hi {
        for kx in kxi_lo..=kxi_hi {
            let pjx = kx.div_euclid(2);
            let phx = kx.rem_euclid(2) as usize;
            fetch_cell_2d(&sol.primal.data, &ctx_p, modes2d, pjx, j, bc, &mut buf_p);
            for a in 0..q {
                let u = eval_cell_2d(&buf_p, modes2d, &tab.ax[phx][a], &tab.ax_center);
                let x = mesh.x.a + 0.5 * dx * (kx as f64 + 0.5 + tab.gauss_x[a]);
                let y = mesh.y.a + (j as f64 + 0.5) * dy;
                let r = recover_at(eos, &u, eps, "I", (pjx, j), x, y)?;
                fy_i[(yline_i(j) * kxi_slots + kxi_slot(kx)) * q + a] = u.flux_from(&r, 1);
            }
        }
    }

    // --- Edge assembly ---------------------------------------------------
    for iy in 0..ny {
        for ix in 0..nx {
            let cell = out.primal.cell_mut(iy * nx + ix);
            for (nu, cmut) in cell.iter_mut().enumerate() {
                let (da, db) = modes2d[nu];
                let mut acc = Conserved::ZERO;
                for m in 0..2usize {
                    let ky = 2 * iy + m;
                    for b in 0..q {
                        let sy = tab.ax[m][b][db];
                        let cwt = 0.5 * dy * w[b] * sy;
                        let fl = &fx_j[(xline_j(ix) * 2 * ny + ky) * q + b];
                        let fr = &fx_j[(xline_j(ix + 1) * 2 * ny + ky) * q + b];
                        acc.axpy(cwt * tab.ax_iface[0][da], fl);
                        acc.axpy(-cwt * tab.ax_iface[1][da], fr);
                    }
                    let kx = 2 * ix + m;
                    for a in 0..q {
                        let sx = tab.ax[m][a][da];
                        let cwt = 0.5 * dx * w[a] * sx;
                        let fb = &fy_j[(yline_j(iy) * 2 * nx + kx) * q + a];
                        let ft = &fy_j[(yline_j(iy + 1) * 2 * nx + kx) * q + a];
                        acc.axpy(cwt * tab.ax_iface[0][db], fb);
                        acc.axpy(-cwt * tab.ax_iface[1][db], ft);
                    }
                }
                cmut.axpy(1.0, &acc);
            }
        }
    }
    for dyc in 0..dny {
        for dxc in 0..dnx {
            let cell = out.dual.cell_mut(dyc * dnx + dxc);
            for (nu, cmut) in cell.iter_mut().enumerate() {
                let (da, db) = modes2d[nu];
                let mut acc = Conserved::ZERO;
                for m in 0..2usize {
                    // Dual y-halves: ky = 2 dyc - 1 + m; x-interfaces at
                    // primal centers dxc - 1 and dxc.
                    let ky = 2 * dyc as isize - 1 + m as isize;
                    for b in 0..q {
                        let sy = tab.ax[m][b][db];
                        let cwt = 0.5 * dy * w[b] * sy;
                        let fl = &fx_i[(xline_i(dxc as isize - 1) * kyi_slots + kyi_slot(ky)) * q + b];
                        let fr = &fx_i[(xline_i(dxc as isize) * kyi_slots + kyi_slot(ky)) * q + b];
                        acc.axpy(cwt * tab.ax_iface[0][da], fl);
                        acc.axpy(-cwt * tab.ax_iface[1][da], fr);
                    }
                    let kx = 2 * dxc as isize - 1 + m as isize;
                    for a in 0..q {
                        let sx = tab.ax[m][a][da];
                        let cwt = 0.5 * dx * w[a] * sx;
                        let fb = &fy_i[(yline_i(dyc as isize - 1) * kxi_slots + kxi_slot(kx)) * q + a];
                        let ft = &fy_i[(yline_i(dyc as isize) * kxi_slots + kxi_slot(kx)) * q + a];
                        acc.axpy(cwt * tab.ax_iface[0][db], fb);
                        acc.axpy(-cwt * tab.ax_iface[1][db], ft);
                    }
                }
                cmut.axpy(1.0, &acc);
            }
        }
    }

    // Mass-matrix scaling.
    let scale_block = |coeffs: &mut Coeffs<2>| {
        for cell in 0..coeffs.cells {
            let chunk = coeffs.cell_mut(cell);
            for (nu, c) in chunk.iter_mut().enumerate() {
                c.scale(1.0 / (dx * dy * tab.mass2[nu]));
            }
        }
    };
    scale_block(&mut out.primal);
    scale_block(&mut out.dual);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_quadrature, Basis};
    use crate::solver::tables::build_tables;
    use crate::solver::{project_initial_2d, TimeControl};
    use crate::state::Primitive;

    fn setup(
        nx: usize,
        ny: usize,
    ) -> (Mesh2d, Tables, EosModel, AdmissibilityEps, Basis, crate::basis::QuadratureSet) {
        let mesh = Mesh2d::new(0.0, 1.0, nx, 0.0, 1.0, ny);
        let basis = Basis::new(2).unwrap();
        let quad = build_quadrature(2).unwrap();
        let tab = build_tables(&basis, &quad).unwrap();
        (
            mesh,
            tab,
            EosModel::ideal(5.0 / 3.0).unwrap(),
            AdmissibilityEps::default(),
            basis,
            quad,
        )
    }

    #[test]
    fn constant_state_zero_residual_periodic() {
        let (mesh, tab, eos, eps, basis, quad) = setup(6, 5);
        let sol = project_initial_2d(&basis, &mesh, &quad, &eos, eps, true, true, &|_, _| {
            Primitive::new(1.0, [0.3, -0.2], 0.8).unwrap()
        })
        .unwrap();
        let tc = TimeControl::new(crate::solver::Integrator::SspRk3);
        let tau = tc.tau_max_2d(&mesh);
        let r = residual_2d(&sol, &eos, &mesh, &tab, tau, &Bc2d::periodic(), eps).unwrap();
        for c in r.primal.data.iter().chain(r.dual.data.iter()) {
            assert!(
                c.d.abs() < 1e-12 && c.m[0].abs() < 1e-12 && c.m[1].abs() < 1e-12 && c.e.abs() < 1e-12,
                "{c:?}"
            );
        }
    }

    #[test]
    fn constant_state_zero_residual_outflow() {
        let (mesh, tab, eos, eps, basis, quad) = setup(4, 4);
        let sol = project_initial_2d(&basis, &mesh, &quad, &eos, eps, false, false, &|_, _| {
            Primitive::new(1.0, [0.3, -0.2], 0.8).unwrap()
        })
        .unwrap();
        let tc = TimeControl::new(crate::solver::Integrator::SspRk3);
        let tau = tc.tau_max_2d(&mesh);
        let r = residual_2d(&sol, &eos, &mesh, &tab, tau, &Bc2d::outflow(), eps).unwrap();
        for c in r.primal.data.iter().chain(r.dual.data.iter()) {
            assert!(
                c.d.abs() < 1e-12 && c.m[0].abs() < 1e-12 && c.m[1].abs() < 1e-12 && c.e.abs() < 1e-12
            );
        }
    }

    /// y-invariant data must evolve exactly like the 1D operator, row by
    /// row, with the 2D dissipation scale mapped to the 1D one.
    #[test]
    fn x_aligned_data_matches_1d_residual() {
        use crate::grid::Mesh1d;
        use crate::solver::residual1::residual_1d;
        use crate::solver::{project_initial_1d, Bc1d};

        let n = 12;
        let (mesh, tab, eos, eps, basis, quad) = setup(n, 5);
        let profile = |x: f64| {
            Primitive::new(
                1.0 + 0.4 * (2.0 * std::f64::consts::PI * x).sin(),
                [0.5],
                1.0 + 0.1 * (2.0 * std::f64::consts::PI * x).cos(),
            )
            .unwrap()
        };
        let sol2 = project_initial_2d(&basis, &mesh, &quad, &eos, eps, true, true, &|x, _| {
            let p = profile(x);
            Primitive::new(p.rho, [p.v[0], 0.0], p.p).unwrap()
        })
        .unwrap();

        let mesh1 = Mesh1d::new(0.0, 1.0, n);
        let basis1 = Basis::new(2).unwrap();
        let sol1 = project_initial_1d(&basis1, &mesh1, &quad, &eos, eps, true, &profile).unwrap();

        let tau = 0.123; // arbitrary common dissipation scale
        let r2 = residual_2d(&sol2, &eos, &mesh, &tab, tau, &Bc2d::periodic(), eps).unwrap();
        let r1 = residual_1d(&sol1, &eos, &mesh1, &tab, tau, &Bc1d::periodic(), eps).unwrap();

        // Compare primal cells: 2D mode (a, 0) should match 1D mode a.
        for iy in 0..5 {
            for ix in 0..n {
                let c2 = r2.primal.cell(iy * n + ix);
                let c1 = r1.primal.cell(ix);
                for (mu1, mu2) in [(0usize, 0usize), (1, 1), (2, 3)] {
                    let a = c2[mu2];
                    let b = c1[mu1];
                    assert!(
                        (a.d - b.d).abs() < 1e-12
                            && (a.m[0] - b.m[0]).abs() < 1e-12
                            && (a.e - b.e).abs() < 1e-12,
                        "cell ({ix},{iy}) mode {mu2}: {a:?} vs {b:?}"
                    );
                    assert!(a.m[1].abs() < 1e-12);
                }
                // Modes with y-dependence vanish.
                for mu in [2usize, 4, 5] {
                    let a = c2[mu];
                    assert!(a.d.abs() < 1e-12 && a.e.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn combined_mass_conserved_2d() {
        let (mesh, tab, eos, eps, basis, quad) = setup(8, 8);
        let sol = project_initial_2d(&basis, &mesh, &quad, &eos, eps, true, true, &|x, y| {
            Primitive::new(
                1.0 + 0.3 * (2.0 * std::f64::consts::PI * (x + y)).sin(),
                [0.4, 0.2],
                1.0,
            )
            .unwrap()
        })
        .unwrap();
        let tau = 1.0 / 32.0;
        let r = residual_2d(&sol, &eos, &mesh, &tab, tau, &Bc2d::periodic(), eps).unwrap();
        for comp in 0..4 {
            let s0: f64 = sol
                .primal
                .data
                .iter()
                .step_by(sol.primal.modes)
                .map(|u| u.comp(comp))
                .sum::<f64>()
                + sol
                    .dual
                    .data
                    .iter()
                    .step_by(sol.dual.modes)
                    .map(|u| u.comp(comp))
                    .sum::<f64>();
            let dr: f64 = r
                .primal
                .data
                .iter()
                .step_by(r.primal.modes)
                .map(|u| u.comp(comp))
                .sum::<f64>()
                + r.dual
                    .data
                    .iter()
                    .step_by(r.dual.modes)
                    .map(|u| u.comp(comp))
                    .sum::<f64>();
            assert!(
                dr.abs() <= 1e-11 * s0.abs().max(1.0),
                "component {comp}: d/dt sum = {dr}"
            );
        }
    }
}
