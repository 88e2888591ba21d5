//! Boundary conditions and ghost-cell synthesis for both meshes.
//!
//! One ghost layer per side. Ghost coefficients are derived from the
//! physical cells: outflow copies the nearest cell average (zero-order
//! extrapolation), reflection mirrors coefficients with per-mode parity and
//! negates the normal momentum, and inflow pins the cell average at a fixed
//! state. The dual mesh uses the same rules at its staggered positions; on
//! a reflecting wall the mirror image of a dual cell is again a dual cell
//! because the wall is itself a dual cell center.

use crate::state::Conserved;

/// One-sided boundary rule, 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bc1 {
    Periodic,
    Outflow,
    Reflecting,
    /// Fixed conserved state held in the ghost cell average.
    Inflow(Conserved<1>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bc1d {
    pub left: Bc1,
    pub right: Bc1,
}

impl Bc1d {
    pub fn periodic() -> Self {
        Bc1d {
            left: Bc1::Periodic,
            right: Bc1::Periodic,
        }
    }

    pub fn outflow() -> Self {
        Bc1d {
            left: Bc1::Outflow,
            right: Bc1::Outflow,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.left == Bc1::Periodic || self.right == Bc1::Periodic
    }
}

/// Which mesh a (possibly ghost) cell index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshRole {
    Primal,
    Dual,
}

/// Mode parity under a 1D mirror: the degree-`mu` scaled Legendre mode is
/// even/odd as `mu` is.
#[inline]
fn parity1(mu: usize) -> f64 {
    if mu % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Fetch the modal coefficients of cell `idx` (may be -1 or `cells`) of the
/// given mesh into `out`, applying the boundary rule for ghosts.
pub fn fetch_cell_1d(
    data: &[Conserved<1>],
    cells: usize,
    modes: usize,
    role: MeshRole,
    idx: isize,
    bc: &Bc1d,
    out: &mut [Conserved<1>],
) {
    let n = cells as isize;
    if idx >= 0 && idx < n {
        out.copy_from_slice(&data[idx as usize * modes..(idx as usize + 1) * modes]);
        return;
    }
    let (rule, left) = if idx < 0 {
        (bc.left, true)
    } else {
        (bc.right, false)
    };
    match rule {
        Bc1::Periodic => {
            let w = idx.rem_euclid(n) as usize;
            out.copy_from_slice(&data[w * modes..(w + 1) * modes]);
        }
        Bc1::Outflow => {
            let near = if left { 0usize } else { cells - 1 };
            for o in out.iter_mut() {
                *o = Conserved::ZERO;
            }
            out[0] = data[near * modes];
        }
        Bc1::Reflecting => {
            // Mirror cell index across the wall. The wall is the domain
            // edge: a primal interface and a dual cell center.
            let mir = match (role, left) {
                (MeshRole::Primal, true) => (-1 - idx) as usize,
                (MeshRole::Primal, false) => (2 * n - 1 - idx) as usize,
                (MeshRole::Dual, true) => (-idx) as usize,
                (MeshRole::Dual, false) => (2 * (n - 1) - idx) as usize,
            };
            let src = &data[mir * modes..(mir + 1) * modes];
            for (mu, o) in out.iter_mut().enumerate() {
                *o = src[mu];
                o.scale(parity1(mu));
                o.m[0] = -o.m[0];
            }
        }
        Bc1::Inflow(u) => {
            for o in out.iter_mut() {
                *o = Conserved::ZERO;
            }
            out[0] = u;
        }
    }
}

/// One-sided boundary rule, 2D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bc2 {
    Periodic,
    Outflow,
    Reflecting,
    Inflow(Conserved<2>),
    /// Jet nozzle: inflow inside `|coord| <= radius` along the boundary,
    /// outflow outside. `coord` is the in-boundary coordinate of the ghost
    /// cell center.
    JetInlet { beam: Conserved<2>, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bc2d {
    pub xlo: Bc2,
    pub xhi: Bc2,
    pub ylo: Bc2,
    pub yhi: Bc2,
}

impl Bc2d {
    pub fn periodic() -> Self {
        Bc2d {
            xlo: Bc2::Periodic,
            xhi: Bc2::Periodic,
            ylo: Bc2::Periodic,
            yhi: Bc2::Periodic,
        }
    }

    pub fn outflow() -> Self {
        Bc2d {
            xlo: Bc2::Outflow,
            xhi: Bc2::Outflow,
            ylo: Bc2::Outflow,
            yhi: Bc2::Outflow,
        }
    }

    pub fn periodic_x(&self) -> bool {
        self.xlo == Bc2::Periodic
    }

    pub fn periodic_y(&self) -> bool {
        self.ylo == Bc2::Periodic
    }
}

/// Geometry context needed to resolve 2D ghosts (jet inlets need the ghost
/// cell's in-boundary coordinate).
#[derive(Debug, Clone, Copy)]
pub struct GhostCtx {
    /// Cell count along x / y for the mesh in question.
    pub nx: usize,
    pub ny: usize,
    pub modes: usize,
    /// Center coordinate of cell index 0 along each axis and the spacing;
    /// for the dual mesh the origin sits half a cell earlier.
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub role: MeshRole,
}

impl GhostCtx {
    #[inline]
    fn x_center(&self, ix: isize) -> f64 {
        self.x0 + ix as f64 * self.dx
    }

    #[inline]
    fn y_center(&self, iy: isize) -> f64 {
        self.y0 + iy as f64 * self.dy
    }
}

#[inline]
fn mirror_index(role: MeshRole, n: isize, idx: isize, low: bool) -> usize {
    match (role, low) {
        (MeshRole::Primal, true) => (-1 - idx) as usize,
        (MeshRole::Primal, false) => (2 * n - 1 - idx) as usize,
        (MeshRole::Dual, true) => (-idx) as usize,
        (MeshRole::Dual, false) => (2 * (n - 1) - idx) as usize,
    }
}

/// Fetch (possibly ghost) cell `(ix, iy)` of a 2D coefficient block.
/// Out-of-range x is resolved first, then y, so corner ghosts compose the
/// two one-sided rules.
#[allow(clippy::too_many_arguments)]
pub fn fetch_cell_2d(
    data: &[Conserved<2>],
    ctx: &GhostCtx,
    modes2d: &[(usize, usize)],
    ix: isize,
    iy: isize,
    bc: &Bc2d,
    out: &mut [Conserved<2>],
) {
    let nx = ctx.nx as isize;
    let ny = ctx.ny as isize;
    let modes = ctx.modes;

    // Resolve x into an in-range column plus a transform on the fetched
    // coefficients.
    enum Tx {
        None,
        ZeroXModes,
        MirrorX,
        Fixed(Conserved<2>),
    }
    let (jx, tx) = if ix >= 0 && ix < nx {
        (ix as usize, Tx::None)
    } else {
        let low = ix < 0;
        let rule = if low { bc.xlo } else { bc.xhi };
        match rule {
            Bc2::Periodic => (ix.rem_euclid(nx) as usize, Tx::None),
            Bc2::Outflow => (
                if low { 0 } else { ctx.nx - 1 },
                Tx::ZeroXModes,
            ),
            Bc2::Reflecting => (mirror_index(ctx.role, nx, ix, low), Tx::MirrorX),
            Bc2::Inflow(u) => (0, Tx::Fixed(u)),
            Bc2::JetInlet { beam, radius } => {
                let y = ctx.y_center(iy.clamp(0, ny - 1));
                if y.abs() <= radius {
                    (0, Tx::Fixed(beam))
                } else {
                    (if low { 0 } else { ctx.nx - 1 }, Tx::ZeroXModes)
                }
            }
        }
    };

    enum Ty {
        None,
        ZeroYModes,
        MirrorY,
        Fixed(Conserved<2>),
    }
    let (jy, ty) = if iy >= 0 && iy < ny {
        (iy as usize, Ty::None)
    } else {
        let low = iy < 0;
        let rule = if low { bc.ylo } else { bc.yhi };
        match rule {
            Bc2::Periodic => (iy.rem_euclid(ny) as usize, Ty::None),
            Bc2::Outflow => (if low { 0 } else { ctx.ny - 1 }, Ty::ZeroYModes),
            Bc2::Reflecting => (mirror_index(ctx.role, ny, iy, low), Ty::MirrorY),
            Bc2::Inflow(u) => (0, Ty::Fixed(u)),
            Bc2::JetInlet { beam, radius } => {
                let x = ctx.x_center(ix.clamp(0, nx - 1));
                if x.abs() <= radius {
                    (0, Ty::Fixed(beam))
                } else {
                    (if low { 0 } else { ctx.ny - 1 }, Ty::ZeroYModes)
                }
            }
        }
    };

    // Fixed states short-circuit: the ghost holds the state in mode 0.
    if let Tx::Fixed(u) = tx {
        for o in out.iter_mut() {
            *o = Conserved::ZERO;
        }
        out[0] = u;
        return;
    }
    if let Ty::Fixed(u) = ty {
        for o in out.iter_mut() {
            *o = Conserved::ZERO;
        }
        out[0] = u;
        return;
    }

    let cell = jy * ctx.nx + jx;
    out.copy_from_slice(&data[cell * modes..(cell + 1) * modes]);

    match tx {
        Tx::None => {}
        Tx::ZeroXModes => {
            for (mu, o) in out.iter_mut().enumerate() {
                if modes2d[mu].0 > 0 {
                    *o = Conserved::ZERO;
                }
            }
        }
        Tx::MirrorX => {
            for (mu, o) in out.iter_mut().enumerate() {
                o.scale(parity1(modes2d[mu].0));
                o.m[0] = -o.m[0];
            }
        }
        Tx::Fixed(_) => unreachable!(),
    }
    match ty {
        Ty::None => {}
        Ty::ZeroYModes => {
            for (mu, o) in out.iter_mut().enumerate() {
                if modes2d[mu].1 > 0 {
                    *o = Conserved::ZERO;
                }
            }
        }
        Ty::MirrorY => {
            for (mu, o) in out.iter_mut().enumerate() {
                o.scale(parity1(modes2d[mu].1));
                o.m[1] = -o.m[1];
            }
        }
        Ty::Fixed(_) => unreachable!(),
    }
}
