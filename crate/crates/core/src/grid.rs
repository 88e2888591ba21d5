//! Overlapping primal/dual meshes.
//!
//! The primal mesh partitions `[a, b]` into `n` uniform cells; the dual
//! mesh is offset by half a cell so every primal interface is the center of
//! a dual cell. On periodic domains the dual mesh wraps and has `n` cells;
//! otherwise it has `n + 1` cells whose end members stick out of the domain
//! by half a cell and are fed by the boundary conditions.

/// Uniform 1D mesh.
#[derive(Debug, Clone)]
pub struct Mesh1d {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub dx: f64,
}

impl Mesh1d {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        assert!(b > a && n > 0);
        Mesh1d {
            a,
            b,
            n,
            dx: (b - a) / n as f64,
        }
    }

    /// Center of primal cell `j`.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        self.a + (j as f64 + 0.5) * self.dx
    }

    /// Interface `x_{j - 1/2}` (so `iface(0) = a`, `iface(n) = b`).
    #[inline]
    pub fn iface(&self, j: usize) -> f64 {
        self.a + j as f64 * self.dx
    }

    /// Center of dual cell `d`; coincides with primal interface `d`.
    #[inline]
    pub fn dual_center(&self, d: usize) -> f64 {
        self.iface(d)
    }

    /// Number of dual cells.
    #[inline]
    pub fn dual_n(&self, periodic: bool) -> usize {
        if periodic {
            self.n
        } else {
            self.n + 1
        }
    }
}

/// Uniform 2D mesh on a rectangle.
#[derive(Debug, Clone)]
pub struct Mesh2d {
    pub x: Mesh1d,
    pub y: Mesh1d,
}

impl Mesh2d {
    pub fn new(ax: f64, bx: f64, nx: usize, ay: f64, by: f64, ny: usize) -> Self {
        Mesh2d {
            x: Mesh1d::new(ax, bx, nx),
            y: Mesh1d::new(ay, by, ny),
        }
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.x.dx
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.y.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dual_centers_sit_on_primal_interfaces() {
        let mesh = Mesh1d::new(0.0, 1.0, 7);
        for d in 0..=mesh.n {
            // Exact arithmetic identity on a uniform mesh.
            assert_eq!(mesh.dual_center(d), mesh.iface(d));
        }
        assert_relative_eq!(mesh.center(3) - mesh.center(2), mesh.dx, epsilon = 1e-15);
        assert_eq!(mesh.dual_n(true), 7);
        assert_eq!(mesh.dual_n(false), 8);
    }
}
