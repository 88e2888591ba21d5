//! Precomputed basis-value tables at the fixed reference points the
//! residuals touch: Gauss points of both half cells, the cell interfaces,
//! and the cell center. Both meshes share the same half-cell geometry, so
//! one table set serves primal and dual assembly.

use crate::basis::{shape, shape_deriv, Basis, QuadratureSet};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct Tables {
    pub k: usize,
    pub q: usize,
    pub modes1: usize,
    pub modes2: usize,
    pub gauss_x: Vec<f64>,
    pub gauss_w: Vec<f64>,
    pub lobatto: Vec<(f64, f64)>,
    /// `phi1[half][alpha][mode]`: 1D basis values at half-cell Gauss nodes.
    pub phi1: [Vec<Vec<f64>>; 2],
    /// `dphi1[half][alpha][mode]`: reference derivatives at the same nodes.
    pub dphi1: [Vec<Vec<f64>>; 2],
    /// 1D basis at the interfaces `xi = -1/2` (index 0) and `+1/2` (1).
    pub phi1_iface: [Vec<f64>; 2],
    pub phi1_center: Vec<f64>,
    pub mass1: Vec<f64>,
    /// Per-axis shape values `ax[half][alpha][deg]` for separable 2D modes.
    pub ax: [Vec<Vec<f64>>; 2],
    pub dax: [Vec<Vec<f64>>; 2],
    /// Per-axis shapes at interfaces / center: `ax_iface[side][deg]`.
    pub ax_iface: [[f64; 3]; 2],
    pub ax_center: [f64; 3],
    /// 2D mode -> per-axis degrees.
    pub modes2d: Vec<(usize, usize)>,
    pub mass2: Vec<f64>,
}

pub fn build_tables(basis: &Basis, quad: &QuadratureSet) -> Result<Tables> {
    let k = basis.k;
    let q = quad.gauss.len();
    let modes1 = basis.dim_1d();
    let modes2 = basis.dim_2d();
    let ndeg = k + 1;

    let mut phi1 = [Vec::new(), Vec::new()];
    let mut dphi1 = [Vec::new(), Vec::new()];
    let mut ax = [Vec::new(), Vec::new()];
    let mut dax = [Vec::new(), Vec::new()];
    for half in 0..2 {
        let c = if half == 0 { -0.25 } else { 0.25 };
        for &(g, _) in &quad.gauss {
            let xi = c + 0.5 * g;
            let mut row = vec![0.0; modes1];
            let mut drow = vec![0.0; modes1];
            basis.eval_1d(xi, &mut row);
            basis.eval_deriv_1d(xi, &mut drow);
            phi1[half].push(row);
            dphi1[half].push(drow);
            ax[half].push((0..ndeg).map(|d| shape(xi, d)).collect());
            dax[half].push((0..ndeg).map(|d| shape_deriv(xi, d)).collect());
        }
    }

    let mut phi1_iface = [vec![0.0; modes1], vec![0.0; modes1]];
    basis.eval_1d(-0.5, &mut phi1_iface[0]);
    basis.eval_1d(0.5, &mut phi1_iface[1]);
    let mut phi1_center = vec![0.0; modes1];
    basis.eval_1d(0.0, &mut phi1_center);

    let mut ax_iface = [[0.0; 3]; 2];
    let mut ax_center = [0.0; 3];
    for d in 0..3 {
        ax_iface[0][d] = shape(-0.5, d);
        ax_iface[1][d] = shape(0.5, d);
        ax_center[d] = shape(0.0, d);
    }

    Ok(Tables {
        k,
        q,
        modes1,
        modes2,
        gauss_x: quad.gauss.iter().map(|&(x, _)| x).collect(),
        gauss_w: quad.gauss.iter().map(|&(_, w)| w).collect(),
        lobatto: quad.lobatto.clone(),
        phi1,
        dphi1,
        phi1_iface,
        phi1_center,
        mass1: basis.mass_1d(),
        ax,
        dax,
        ax_iface,
        ax_center,
        modes2d: basis.modes_2d().to_vec(),
        mass2: basis.mass_2d(),
    })
}
