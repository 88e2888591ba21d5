//! Scaled Legendre modal bases and the Gauss / Gauss-Lobatto rules the
//! scheme is built on.
//!
//! All reference quantities live on the unit cell `[-1/2, 1/2]`; quadrature
//! weights are normalized to sum to one so a physical integral over an
//! interval of length `L` is `L * sum(w_i f_i)`.

use crate::error::{Error, Result};

/// Gauss and Gauss-Lobatto nodes/weights for degree-`K` spaces, plus the
/// rule sizes `Q >= K + 1` and `L > (K + 3)/2` the scheme requires.
#[derive(Debug, Clone)]
pub struct QuadratureSet {
    pub k: usize,
    /// Gauss nodes on `[-1/2, 1/2]` with weights summing to 1.
    pub gauss: Vec<(f64, f64)>,
    /// Gauss-Lobatto nodes on `[-1/2, 1/2]` with weights summing to 1.
    /// For K = 0 both rules degenerate to the midpoint rule.
    pub lobatto: Vec<(f64, f64)>,
}

impl QuadratureSet {
    /// First Gauss-Lobatto weight; enters every CFL bound.
    pub fn lobatto_w1(&self) -> f64 {
        self.lobatto[0].1
    }
}

/// Build the quadrature pair for degree `k` (supported: 0, 1, 2).
pub fn build_quadrature(k: usize) -> Result<QuadratureSet> {
    let gauss = match k {
        0 => vec![(0.0, 1.0)],
        1 => {
            let x = 0.5 / 3.0f64.sqrt();
            vec![(-x, 0.5), (x, 0.5)]
        }
        2 => {
            let x = 0.5 * (3.0f64 / 5.0).sqrt();
            vec![(-x, 5.0 / 18.0), (0.0, 4.0 / 9.0), (x, 5.0 / 18.0)]
        }
        _ => return Err(Error::UnsupportedDegree(k)),
    };
    let lobatto = match k {
        0 => vec![(0.0, 1.0)],
        1 => vec![(-0.5, 0.5), (0.5, 0.5)],
        2 => vec![(-0.5, 1.0 / 6.0), (0.0, 2.0 / 3.0), (0.5, 1.0 / 6.0)],
        _ => return Err(Error::UnsupportedDegree(k)),
    };
    Ok(QuadratureSet { k, gauss, lobatto })
}

/// Modal basis of degree `K`. 1D modes are `1, xi, 12 xi^2 - 1` with
/// `xi = (x - x_c)/dx`; the 2D space of total degree `<= K` is the
/// orthogonal family built from the same shifted monomials
/// (`1, xi, eta, 12 xi^2 - 1, xi eta, 12 eta^2 - 1` for K = 2).
#[derive(Debug, Clone)]
pub struct Basis {
    pub k: usize,
}

/// Values of the three 1D mode shapes at `xi`.
#[inline]
pub fn shape(xi: f64, deg: usize) -> f64 {
    match deg {
        0 => 1.0,
        1 => xi,
        _ => 12.0 * xi * xi - 1.0,
    }
}

/// `d/dxi` of the 1D mode shapes.
#[inline]
pub fn shape_deriv(xi: f64, deg: usize) -> f64 {
    match deg {
        0 => 0.0,
        1 => 1.0,
        _ => 24.0 * xi,
    }
}

impl Basis {
    pub fn new(k: usize) -> Result<Self> {
        if k > 2 {
            return Err(Error::UnsupportedDegree(k));
        }
        Ok(Basis { k })
    }

    pub fn dim_1d(&self) -> usize {
        self.k + 1
    }

    pub fn dim_2d(&self) -> usize {
        (self.k + 1) * (self.k + 2) / 2
    }

    /// 2D mode -> per-axis degrees, ordered `(0,0), (1,0), (0,1), (2,0),
    /// (1,1), (0,2)`.
    pub fn modes_2d(&self) -> &'static [(usize, usize)] {
        &[(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)][..self.dim_2d()]
    }

    pub fn eval_1d(&self, xi: f64, out: &mut [f64]) {
        for (deg, o) in out.iter_mut().enumerate().take(self.dim_1d()) {
            *o = shape(xi, deg);
        }
    }

    pub fn eval_deriv_1d(&self, xi: f64, out: &mut [f64]) {
        for (deg, o) in out.iter_mut().enumerate().take(self.dim_1d()) {
            *o = shape_deriv(xi, deg);
        }
    }

    pub fn eval_2d(&self, xi: f64, eta: f64, out: &mut [f64]) {
        for (mu, &(dx, dy)) in self.modes_2d().iter().enumerate() {
            out[mu] = shape(xi, dx) * shape(eta, dy);
        }
    }

    /// Diagonal of the 1D mass matrix on the reference cell:
    /// `int Phi_mu^2 dxi = 1, 1/12, 4/5`.
    pub fn mass_1d(&self) -> Vec<f64> {
        [1.0, 1.0 / 12.0, 4.0 / 5.0][..self.dim_1d()].to_vec()
    }

    pub fn mass_2d(&self) -> Vec<f64> {
        let m = [1.0, 1.0 / 12.0, 4.0 / 5.0];
        self.modes_2d()
            .iter()
            .map(|&(dx, dy)| m[dx] * m[dy])
            .collect()
    }
}
