//! Quadrature norms: the Gauss-Lobatto l1/l2 error norms used for the
//! convergence tables and the conserved-vector L1 norm from the stability
//! estimate. All norms quadrature each half cell with the Lobatto rule;
//! error norms average over both meshes so single-mesh results remain
//! comparable.

use super::tables::Tables;
use super::{Coeffs, Solution1d, Solution2d};
use crate::eos::EosModel;
use crate::error::Result;
use crate::grid::{Mesh1d, Mesh2d};
use crate::state::{recover, AdmissibilityEps, Primitive};

/// Primitive field selected for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Rho,
    VelocityX,
    VelocityY,
    Pressure,
}

impl Field {
    pub fn parse(s: &str) -> Option<Field> {
        match s {
            "rho" => Some(Field::Rho),
            "vx" | "v" => Some(Field::VelocityX),
            "vy" => Some(Field::VelocityY),
            "p" => Some(Field::Pressure),
            _ => None,
        }
    }

    fn of1(&self, w: &Primitive<1>) -> f64 {
        match self {
            Field::Rho => w.rho,
            Field::VelocityX | Field::VelocityY => w.v[0],
            Field::Pressure => w.p,
        }
    }

    fn of2(&self, w: &Primitive<2>) -> f64 {
        match self {
            Field::Rho => w.rho,
            Field::VelocityX => w.v[0],
            Field::VelocityY => w.v[1],
            Field::Pressure => w.p,
        }
    }
}

fn accumulate(l1: &mut f64, l2: &mut f64, diff: f64, w: f64) {
    *l1 += w * diff.abs();
    *l2 += w * diff * diff;
}

/// `(l1, l2)` error of `field` against the exact primitive solution,
/// sampled at the Lobatto nodes of both half cells of both meshes.
pub fn error_norms_1d(
    sol: &Solution1d,
    mesh: &Mesh1d,
    tab: &Tables,
    eos: &EosModel,
    eps: AdmissibilityEps,
    field: Field,
    exact: &dyn Fn(f64) -> Primitive<1>,
) -> Result<(f64, f64)> {
    let mut phi = vec![0.0; tab.modes1];
    let basis = crate::basis::Basis::new(tab.k)?;
    let mut per_mesh = |coeffs: &Coeffs<1>, center: &dyn Fn(usize) -> f64| -> Result<(f64, f64)> {
        let (mut l1, mut l2) = (0.0, 0.0);
        for c in 0..coeffs.cells {
            let xc = center(c);
            for half in 0..2 {
                let off = if half == 0 { -0.25 } else { 0.25 };
                for &(g, w) in &tab.lobatto {
                    let xi = off + 0.5 * g;
                    basis.eval_1d(xi, &mut phi);
                    let u = coeffs.value(c, &phi);
                    let rec = recover(eos, &u, eps)?;
                    let wprim = Primitive {
                        rho: rec.rho,
                        v: rec.v,
                        p: rec.p,
                    };
                    let x = xc + xi * mesh.dx;
                    let diff = field.of1(&wprim) - field.of1(&exact(x));
                    accumulate(&mut l1, &mut l2, diff, 0.5 * mesh.dx * w);
                }
            }
        }
        Ok((l1, l2))
    };
    let (l1i, l2i) = per_mesh(&sol.primal, &|j| mesh.center(j))?;
    let (l1j, l2j) = per_mesh(&sol.dual, &|d| mesh.dual_center(d))?;
    Ok((0.5 * (l1i + l1j), (0.5 * (l2i + l2j)).sqrt()))
}

/// 2D analogue with the tensor Lobatto rule on quarter cells.
pub fn error_norms_2d(
    sol: &Solution2d,
    mesh: &Mesh2d,
    tab: &Tables,
    eos: &EosModel,
    eps: AdmissibilityEps,
    field: Field,
    exact: &dyn Fn(f64, f64) -> Primitive<2>,
) -> Result<(f64, f64)> {
    let basis = crate::basis::Basis::new(tab.k)?;
    let mut phi = vec![0.0; tab.modes2];
    let mut per_mesh = |coeffs: &Coeffs<2>,
                        ncols: usize,
                        cx: &dyn Fn(usize) -> f64,
                        cy: &dyn Fn(usize) -> f64|
     -> Result<(f64, f64)> {
        let (mut l1, mut l2) = (0.0, 0.0);
        for c in 0..coeffs.cells {
            let (ix, iy) = (c % ncols, c / ncols);
            let (xc, yc) = (cx(ix), cy(iy));
            for hx in 0..2 {
                for hy in 0..2 {
                    let ox = if hx == 0 { -0.25 } else { 0.25 };
                    let oy = if hy == 0 { -0.25 } else { 0.25 };
                    for &(gx, wx) in &tab.lobatto {
                        for &(gy, wy) in &tab.lobatto {
                            let xi = ox + 0.5 * gx;
                            let eta = oy + 0.5 * gy;
                            basis.eval_2d(xi, eta, &mut phi);
                            let u = coeffs.value(c, &phi);
                            let rec = recover(eos, &u, eps)?;
                            let wprim = Primitive {
                                rho: rec.rho,
                                v: rec.v,
                                p: rec.p,
                            };
                            let x = xc + xi * mesh.dx();
                            let y = yc + eta * mesh.dy();
                            let diff = field.of2(&wprim) - field.of2(&exact(x, y));
                            accumulate(
                                &mut l1,
                                &mut l2,
                                diff,
                                0.25 * mesh.dx() * mesh.dy() * wx * wy,
                            );
                        }
                    }
                }
            }
        }
        Ok((l1, l2))
    };
    let (l1i, l2i) = per_mesh(&sol.primal, sol.nx, &|i| mesh.x.center(i), &|j| {
        mesh.y.center(j)
    })?;
    let (l1j, l2j) = per_mesh(&sol.dual, sol.dnx, &|i| mesh.x.dual_center(i), &|j| {
        mesh.y.dual_center(j)
    })?;
    Ok((0.5 * (l1i + l1j), (0.5 * (l2i + l2j)).sqrt()))
}

/// Conserved-vector L1 quadrature norm `||U^I|| + ||U^J||` (component-wise
/// l1 at the Lobatto nodes), the quantity bounded by the stability
/// estimate.
pub fn conserved_l1_norm_1d(sol: &Solution1d, mesh: &Mesh1d, tab: &Tables) -> f64 {
    let basis = crate::basis::Basis::new(tab.k).unwrap();
    let mut phi = vec![0.0; tab.modes1];
    let mut total = 0.0;
    for coeffs in [&sol.primal, &sol.dual] {
        for c in 0..coeffs.cells {
            for half in 0..2 {
                let off = if half == 0 { -0.25 } else { 0.25 };
                for &(g, w) in &tab.lobatto {
                    basis.eval_1d(off + 0.5 * g, &mut phi);
                    let u = coeffs.value(c, &phi);
                    total += 0.5 * mesh.dx * w * (u.d.abs() + u.m[0].abs() + u.e.abs());
                }
            }
        }
    }
    total
}
