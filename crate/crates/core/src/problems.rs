//! Benchmark problem library: smooth accuracy tests, an ultra-relativistic
//! Riemann problem, the shock heating problem, interacting blast waves, 2D
//! Riemann problems, and pressure-matched jet flows, plus a first-order
//! Lax-Friedrichs reference solver for cases without closed-form solutions.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::basis::build_quadrature;
use crate::eos::EosModel;
use crate::error::{Error, Result};
use crate::grid::Mesh1d;
use crate::solver::bc::{Bc1, Bc1d, Bc2, Bc2d};
use crate::state::{AdmissibilityEps, Conserved, Primitive};

type Init1d = Arc<dyn Fn(f64) -> Primitive<1> + Send + Sync>;
type Exact1d = Arc<dyn Fn(f64, f64) -> Primitive<1> + Send + Sync>;
type Init2d = Arc<dyn Fn(f64, f64) -> Primitive<2> + Send + Sync>;
type Exact2d = Arc<dyn Fn(f64, f64, f64) -> Primitive<2> + Send + Sync>;

pub struct Problem1d {
    pub name: String,
    pub domain: (f64, f64),
    pub bc: Bc1d,
    pub eos: EosModel,
    pub t_final: f64,
    pub default_n: usize,
    pub tvb_m: Option<f64>,
    pub init: Init1d,
    /// Exact solution `(t, x) -> primitive`, where available.
    pub exact: Option<Exact1d>,
}

pub struct Problem2d {
    pub name: String,
    pub domain: (f64, f64, f64, f64),
    pub bc: Bc2d,
    pub eos: EosModel,
    pub t_final: f64,
    pub default_n: (usize, usize),
    pub tvb_m: Option<f64>,
    /// CFL/dissipation scale for the 2D step-size formula.
    pub varpi: f64,
    pub init: Init2d,
    pub exact: Option<Exact2d>,
}

pub enum Problem {
    OneD(Problem1d),
    TwoD(Problem2d),
}

impl Problem {
    pub fn name(&self) -> &str {
        match self {
            Problem::OneD(p) => &p.name,
            Problem::TwoD(p) => &p.name,
        }
    }

    pub fn eos(&self) -> EosModel {
        match self {
            Problem::OneD(p) => p.eos,
            Problem::TwoD(p) => p.eos,
        }
    }
}

/// Catalog entry metadata for listings.
pub struct ProblemInfo {
    pub name: &'static str,
    pub dim: usize,
    pub default_eos: &'static str,
    pub default_n: &'static str,
    pub t_final: f64,
    pub description: &'static str,
}

pub fn catalog() -> Vec<ProblemInfo> {
    vec![
        ProblemInfo {
            name: "sine1d",
            dim: 1,
            default_eos: "ideal:5/3",
            default_n: "320",
            t_final: 0.2,
            description: "smooth density wave advected at v = 0.99 with low density troughs and low pressure",
        },
        ProblemInfo {
            name: "riemann1d",
            dim: 1,
            default_eos: "ideal:5/3",
            default_n: "640",
            t_final: 0.45,
            description: "pressure jump 1e4 -> 1e-8 producing a near-light-speed contact and shock",
        },
        ProblemInfo {
            name: "shockheating",
            dim: 1,
            default_eos: "ideal:4/3",
            default_n: "200",
            t_final: 2.0,
            description: "cold gas at W ~ 7071 reflecting off a wall; compression ratio ~ 4W + 3",
        },
        ProblemInfo {
            name: "blastwaves",
            dim: 1,
            default_eos: "ideal:1.4",
            default_n: "4000",
            t_final: 0.43,
            description: "two blast waves colliding in a narrow region",
        },
        ProblemInfo {
            name: "sine2d",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "40x40",
            t_final: 0.2,
            description: "smooth wave advected diagonally at |v| = 0.99",
        },
        ProblemInfo {
            name: "riemann2d-a",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "400x400",
            t_final: 0.8,
            description: "four-quadrant Riemann problem with contacts on the left/lower interfaces",
        },
        ProblemInfo {
            name: "riemann2d-b",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "400x400",
            t_final: 0.8,
            description: "four-quadrant Riemann problem with shocks moving at -0.665",
        },
        ProblemInfo {
            name: "jet-hot-a",
            dim: 2,
            default_eos: "ryu",
            default_n: "240x600",
            t_final: 30.0,
            description: "pressure-matched hot jet, v_b = 0.99, M_b = 1.72 (long-running)",
        },
        ProblemInfo {
            name: "jet-hot-b",
            dim: 2,
            default_eos: "ryu",
            default_n: "240x600",
            t_final: 30.0,
            description: "pressure-matched hot jet, v_b = 0.999, M_b = 1.74 (long-running)",
        },
        ProblemInfo {
            name: "jet-hot-c",
            dim: 2,
            default_eos: "ryu",
            default_n: "240x600",
            t_final: 30.0,
            description: "pressure-matched hot jet, v_b = 0.9999, M_b = 1.74 (long-running)",
        },
        ProblemInfo {
            name: "jet-cold-a",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "240x500",
            t_final: 30.0,
            description: "highly supersonic cold jet, v_b = 0.99, M_b = 50 (long-running)",
        },
        ProblemInfo {
            name: "jet-cold-b",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "240x500",
            t_final: 25.0,
            description: "highly supersonic cold jet, v_b = 0.999, M_b = 50 (long-running)",
        },
        ProblemInfo {
            name: "jet-cold-c",
            dim: 2,
            default_eos: "ideal:5/3",
            default_n: "240x500",
            t_final: 23.0,
            description: "highly supersonic cold jet, v_b = 0.9999, M_b = 500 (long-running)",
        },
    ]
}

const SINE_AMP: f64 = 0.99999;

fn sine1d(eos: EosModel) -> Problem1d {
    let two_pi = 2.0 * std::f64::consts::PI;
    Problem1d {
        name: "sine1d".into(),
        domain: (0.0, 1.0),
        bc: Bc1d::periodic(),
        eos,
        t_final: 0.2,
        default_n: 320,
        tvb_m: None,
        init: Arc::new(move |x| Primitive {
            rho: 1.0 + SINE_AMP * (two_pi * x).sin(),
            v: [0.99],
            p: 1e-2,
        }),
        exact: Some(Arc::new(move |t, x| Primitive {
            rho: 1.0 + SINE_AMP * (two_pi * (x - 0.99 * t)).sin(),
            v: [0.99],
            p: 1e-2,
        })),
    }
}

fn riemann1d(eos: EosModel) -> Problem1d {
    Problem1d {
        name: "riemann1d".into(),
        domain: (0.0, 1.0),
        bc: Bc1d::outflow(),
        eos,
        t_final: 0.45,
        default_n: 640,
        tvb_m: Some(0.0),
        init: Arc::new(|x| Primitive {
            rho: 1.0,
            v: [0.0],
            p: if x < 0.5 { 1e4 } else { 1e-8 },
        }),
        exact: None,
    }
}

/// Shock-heating setup: cold inflow at `v0 = 1 - 1e-8` against a reflecting
/// wall at x = 1.
pub struct ShockHeating {
    pub v0: f64,
    pub w0: f64,
    pub p0: f64,
    /// Compression ratio across the reflected shock (ideal EOS, cold limit).
    pub sigma: Option<f64>,
    /// Post-shock pressure and (leftward) shock speed, ideal EOS.
    pub p2: Option<f64>,
    pub shock_speed: Option<f64>,
}

pub fn shock_heating_values(eos: &EosModel) -> Result<ShockHeating> {
    let v0: f64 = 1.0 - 1e-8;
    let e0 = 1e-4;
    let w0 = 1.0 / ((1.0 - v0) * (1.0 + v0)).sqrt();
    let p0 = eos.pressure_from_internal_energy(e0, 1.0)?;
    if let EosModel::Ideal { gamma } = *eos {
        // Cold strong-shock limit: e2 = W0 - 1 from energy conservation,
        // sigma = (gamma + 1)/(gamma - 1) + gamma (W0 - 1)/(gamma - 1).
        let sigma = (gamma + 1.0) / (gamma - 1.0) + gamma * (w0 - 1.0) / (gamma - 1.0);
        let p2 = (gamma - 1.0) * sigma * (w0 - 1.0);
        let shock_speed = w0 * v0 / (w0 - sigma); // negative: leftward
        Ok(ShockHeating {
            v0,
            w0,
            p0,
            sigma: Some(sigma),
            p2: Some(p2),
            shock_speed: Some(shock_speed),
        })
    } else {
        Ok(ShockHeating {
            v0,
            w0,
            p0,
            sigma: None,
            p2: None,
            shock_speed: None,
        })
    }
}

fn shockheating(eos: EosModel) -> Result<Problem1d> {
    let vals = shock_heating_values(&eos)?;
    let left_state = Primitive {
        rho: 1.0,
        v: [vals.v0],
        p: vals.p0,
    };
    let inflow = left_state.to_conserved(&eos)?;
    let exact: Option<Exact1d> = match (vals.sigma, vals.p2, vals.shock_speed) {
        (Some(sigma), Some(p2), Some(vs)) => Some(Arc::new(move |t: f64, x: f64| {
            let shock_x = 1.0 + vs * t;
            if x < shock_x {
                left_state
            } else {
                Primitive {
                    rho: sigma,
                    v: [0.0],
                    p: p2,
                }
            }
        })),
        _ => None,
    };
    Ok(Problem1d {
        name: "shockheating".into(),
        domain: (0.0, 1.0),
        bc: Bc1d {
            left: Bc1::Inflow(inflow),
            right: Bc1::Reflecting,
        },
        eos,
        t_final: 2.0,
        default_n: 200,
        tvb_m: Some(0.0),
        init: Arc::new(move |_| left_state),
        exact,
    })
}

fn blastwaves(eos: EosModel) -> Problem1d {
    Problem1d {
        name: "blastwaves".into(),
        domain: (0.0, 1.0),
        bc: Bc1d::outflow(),
        eos,
        t_final: 0.43,
        default_n: 4000,
        tvb_m: Some(0.0),
        init: Arc::new(|x| Primitive {
            rho: 1.0,
            v: [0.0],
            p: if x < 0.1 {
                1000.0
            } else if x < 0.9 {
                0.01
            } else {
                100.0
            },
        }),
        exact: None,
    }
}

fn sine2d(eos: EosModel) -> Problem2d {
    let two_pi = 2.0 * std::f64::consts::PI;
    let vc = 0.99 / 2.0f64.sqrt();
    Problem2d {
        name: "sine2d".into(),
        domain: (0.0, 1.0, 0.0, 1.0),
        bc: Bc2d::periodic(),
        eos,
        t_final: 0.2,
        default_n: (40, 40),
        tvb_m: None,
        varpi: 1.0 / 6.0,
        init: Arc::new(move |x, y| Primitive {
            rho: 1.0 + SINE_AMP * (two_pi * (x + y)).sin(),
            v: [vc, vc],
            p: 1e-2,
        }),
        exact: Some(Arc::new(move |t, x, y| Primitive {
            rho: 1.0 + SINE_AMP * (two_pi * (x + y - 0.99 * 2.0f64.sqrt() * t)).sin(),
            v: [vc, vc],
            p: 1e-2,
        })),
    }
}

fn riemann2d(eos: EosModel, variant: char) -> Problem2d {
    let (name, split, states) = match variant {
        'a' => (
            "riemann2d-a",
            0.0,
            [
                // (upper-right, upper-left, lower-left, lower-right)
                Primitive { rho: 0.1, v: [0.0, 0.0], p: 0.01 },
                Primitive { rho: 0.1, v: [0.99, 0.0], p: 1.0 },
                Primitive { rho: 0.5, v: [0.0, 0.0], p: 1.0 },
                Primitive { rho: 0.1, v: [0.0, 0.99], p: 1.0 },
            ],
        ),
        _ => (
            "riemann2d-b",
            0.5,
            [
                Primitive { rho: 0.1, v: [0.0, 0.0], p: 20.0 },
                Primitive {
                    rho: 0.00414329639576,
                    v: [0.9946418833556542, 0.0],
                    p: 0.05,
                },
                Primitive { rho: 0.01, v: [0.0, 0.0], p: 0.05 },
                Primitive {
                    rho: 0.00414329639576,
                    v: [0.0, 0.9946418833556542],
                    p: 0.05,
                },
            ],
        ),
    };
    Problem2d {
        name: name.into(),
        domain: (-1.0, 1.0, -1.0, 1.0),
        bc: Bc2d::outflow(),
        eos,
        t_final: 0.8,
        default_n: (400, 400),
        tvb_m: Some(0.0),
        varpi: 1.0,
        init: Arc::new(move |x, y| match (x > split, y > split) {
            (true, true) => states[0],
            (false, true) => states[1],
            (false, false) => states[2],
            (true, false) => states[3],
        }),
        exact: None,
    }
}

/// Jet parameters: beam density, speed and classical Mach number; the beam
/// pressure (equal to the ambient pressure) follows from the Mach number
/// through the sound speed at the beam state.
fn jet(eos: EosModel, hot: bool, cfg: char) -> Result<Problem2d> {
    let (rho_b, v_b, m_b, t_final, ny, y_top) = if hot {
        match cfg {
            'a' => (0.01, 0.99, 1.72, 30.0, 600, 30.0),
            'b' => (0.01, 0.999, 1.74, 30.0, 600, 30.0),
            _ => (0.01, 0.9999, 1.74, 30.0, 600, 30.0),
        }
    } else {
        match cfg {
            'a' => (0.1, 0.99, 50.0, 30.0, 500, 25.0),
            'b' => (0.1, 0.999, 50.0, 25.0, 500, 25.0),
            _ => (0.1, 0.9999, 500.0, 23.0, 500, 25.0),
        }
    };
    let cs2: f64 = (v_b / m_b) * (v_b / m_b);
    let p_b = eos.pressure_from_sound_speed_sq(cs2, rho_b)?;
    let beam = Primitive {
        rho: rho_b,
        v: [0.0, v_b],
        p: p_b,
    };
    let ambient = Primitive {
        rho: 1.0,
        v: [0.0, 0.0],
        p: p_b,
    };
    let name = format!("jet-{}-{}", if hot { "hot" } else { "cold" }, cfg);
    Ok(Problem2d {
        name,
        domain: (0.0, 12.0, 0.0, y_top),
        bc: Bc2d {
            xlo: Bc2::Reflecting,
            xhi: Bc2::Outflow,
            ylo: Bc2::JetInlet {
                beam: beam.to_conserved(&eos)?,
                radius: 0.5,
            },
            yhi: Bc2::Outflow,
        },
        eos,
        t_final,
        default_n: (240, ny),
        tvb_m: Some(0.0),
        varpi: 1.0,
        init: Arc::new(move |_, _| ambient),
        exact: None,
    })
}

/// Build a cataloged problem; `eos` overrides the problem's default EOS.
pub fn build(name: &str, eos: Option<EosModel>) -> Result<Problem> {
    let pick = |default: EosModel| eos.unwrap_or(default);
    let ideal = |g: f64| EosModel::ideal(g).expect("catalog gamma");
    match name {
        "sine1d" => Ok(Problem::OneD(sine1d(pick(ideal(5.0 / 3.0))))),
        "riemann1d" => Ok(Problem::OneD(riemann1d(pick(ideal(5.0 / 3.0))))),
        "shockheating" => Ok(Problem::OneD(shockheating(pick(ideal(4.0 / 3.0)))?)),
        "blastwaves" => Ok(Problem::OneD(blastwaves(pick(ideal(1.4))))),
        "sine2d" => Ok(Problem::TwoD(sine2d(pick(ideal(5.0 / 3.0))))),
        "riemann2d-a" => Ok(Problem::TwoD(riemann2d(pick(ideal(5.0 / 3.0)), 'a'))),
        "riemann2d-b" => Ok(Problem::TwoD(riemann2d(pick(ideal(5.0 / 3.0)), 'b'))),
        "jet-hot-a" => Ok(Problem::TwoD(jet(pick(EosModel::Ryu), true, 'a')?)),
        "jet-hot-b" => Ok(Problem::TwoD(jet(pick(EosModel::Ryu), true, 'b')?)),
        "jet-hot-c" => Ok(Problem::TwoD(jet(pick(EosModel::Ryu), true, 'c')?)),
        "jet-cold-a" => Ok(Problem::TwoD(jet(pick(ideal(5.0 / 3.0)), false, 'a')?)),
        "jet-cold-b" => Ok(Problem::TwoD(jet(pick(ideal(5.0 / 3.0)), false, 'b')?)),
        "jet-cold-c" => Ok(Problem::TwoD(jet(pick(ideal(5.0 / 3.0)), false, 'c')?)),
        _ => Err(Error::UnknownProblem(name.into())),
    }
}

/// One sampled point of a reference solution.
#[derive(Debug, Clone, Copy)]
pub struct RefPoint {
    pub x: f64,
    pub w: Primitive<1>,
}

/// First-order Lax-Friedrichs finite-volume reference solution on `n`
/// cells, using the same EOS/recovery stack. The scheme is a convex
/// combination of Lax-Friedrichs splittings, so it stays admissible for
/// `dt < dx`.
pub fn reference_lxf(problem: &Problem1d, n: usize) -> Result<Vec<RefPoint>> {
    let mesh = Mesh1d::new(problem.domain.0, problem.domain.1, n);
    let eos = problem.eos;
    let eps = AdmissibilityEps::default();
    let quad = build_quadrature(2)?;

    // Cell averages of the initial data by the 3-point Gauss rule.
    let mut u: Vec<Conserved<1>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut avg = Conserved::ZERO;
        for &(g, w) in &quad.gauss {
            let x = mesh.center(j) + g * mesh.dx;
            avg.axpy(w, &(problem.init)(x).to_conserved(&eos)?);
        }
        u.push(avg);
    }

    let ghost = |u: &Vec<Conserved<1>>, idx: isize, rule: Bc1| -> Conserved<1> {
        match rule {
            Bc1::Periodic => u[idx.rem_euclid(n as isize) as usize],
            Bc1::Outflow => u[idx.clamp(0, n as isize - 1) as usize],
            Bc1::Reflecting => {
                let mir = if idx < 0 {
                    (-1 - idx) as usize
                } else {
                    (2 * n as isize - 1 - idx) as usize
                };
                let mut g = u[mir];
                g.m[0] = -g.m[0];
                g
            }
            Bc1::Inflow(state) => state,
        }
    };

    let mut t = 0.0;
    let dt_nominal = 0.45 * mesh.dx;
    while t < problem.t_final - 1e-14 {
        let dt = dt_nominal.min(problem.t_final - t);
        let lam = dt / mesh.dx;
        let mut flux = Vec::with_capacity(n + 2);
        let mut states = Vec::with_capacity(n + 2);
        for idx in -1..=n as isize {
            let s = if idx < 0 {
                ghost(&u, idx, problem.bc.left)
            } else if idx >= n as isize {
                ghost(&u, idx, problem.bc.right)
            } else {
                u[idx as usize]
            };
            states.push(s);
            flux.push(s.flux(&eos, 0, eps).map_err(|e| {
                Error::Domain(format!("reference solver at t = {t:.4e}, cell {idx}: {e}"))
            })?);
        }
        let mut next = Vec::with_capacity(n);
        for j in 0..n {
            // States/fluxes are stored with offset 1.
            let mut v = states[j];
            v.axpy(1.0, &states[j + 2]);
            v.scale(0.5);
            v.axpy(0.5 * lam, &flux[j]);
            v.axpy(-0.5 * lam, &flux[j + 2]);
            next.push(v);
        }
        u = next;
        t += dt;
    }

    let mut out = Vec::with_capacity(n);
    for (j, uj) in u.iter().enumerate() {
        let w = uj.to_primitive(&eos, eps)?;
        out.push(RefPoint {
            x: mesh.center(j),
            w,
        });
    }
    Ok(out)
}

/// Write a reference solution to a columnar CSV cache file with a header
/// line recording problem, EOS, resolution, and time.
pub fn write_reference(
    path: &std::path::Path,
    problem: &Problem1d,
    n: usize,
    points: &[RefPoint],
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        f,
        "# problem={} eos={} n={} t={:.17e}",
        problem.name,
        problem.eos.name(),
        n,
        problem.t_final
    )?;
    writeln!(f, "x,rho,vx,p")?;
    for p in points {
        writeln!(
            f,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            p.x, p.w.rho, p.w.v[0], p.w.p
        )?;
    }
    Ok(())
}

/// Read back a cached reference solution.
pub fn read_reference(path: &std::path::Path) -> Result<Vec<RefPoint>> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in f.lines() {
        let line = line?;
        if line.starts_with('#') || line.starts_with('x') || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("bad reference file {path:?}: {e}")))?;
        if cols.len() != 4 {
            return Err(Error::Config(format!("bad reference row in {path:?}")));
        }
        out.push(RefPoint {
            x: cols[0],
            w: Primitive {
                rho: cols[1],
                v: [cols[2]],
                p: cols[3],
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn catalog_builds_and_samples_admissibly() {
        let eps = AdmissibilityEps::default();
        let mut rng = StdRng::seed_from_u64(1);
        for info in catalog() {
            let problem = build(info.name, None).unwrap();
            match &problem {
                Problem::OneD(p) => {
                    for _ in 0..1000 {
                        let x = rng.gen_range(p.domain.0..p.domain.1);
                        let u = (p.init)(x).to_conserved(&p.eos).unwrap();
                        assert!(u.is_admissible(eps), "{}: x = {x}", info.name);
                    }
                }
                Problem::TwoD(p) => {
                    for _ in 0..1000 {
                        let x = rng.gen_range(p.domain.0..p.domain.1);
                        let y = rng.gen_range(p.domain.2..p.domain.3);
                        let u = (p.init)(x, y).to_conserved(&p.eos).unwrap();
                        assert!(u.is_admissible(eps), "{}: ({x}, {y})", info.name);
                    }
                }
            }
        }
    }

    #[test]
    fn sine_exact_solutions_translate_initial_data() {
        for name in ["sine1d"] {
            let Problem::OneD(p) = build(name, None).unwrap() else {
                unreachable!()
            };
            let exact = p.exact.as_ref().unwrap();
            for &x in &[0.0, 0.3, 0.7] {
                let t = 0.13;
                let a = exact(t, x + 0.99 * t);
                let b = (p.init)(x);
                assert_relative_eq!(a.rho, b.rho, max_relative = 1e-12);
            }
        }
        let Problem::TwoD(p) = build("sine2d", None).unwrap() else {
            unreachable!()
        };
        let exact = p.exact.as_ref().unwrap();
        let (t, x, y) = (0.07, 0.2, 0.55);
        let v = 0.99 / 2.0f64.sqrt();
        let a = exact(t, x + v * t, y + v * t);
        assert_relative_eq!(a.rho, (p.init)(x, y).rho, max_relative = 1e-12);
    }

    #[test]
    fn shock_heating_constants_match_reported_values() {
        let vals = shock_heating_values(&EosModel::ideal(4.0 / 3.0).unwrap()).unwrap();
        assert!((vals.w0 - 7071.07).abs() < 0.01, "W0 = {}", vals.w0);
        assert!(
            (vals.sigma.unwrap() - 28287.27).abs() < 0.01,
            "sigma = {}",
            vals.sigma.unwrap()
        );
        // e0 = 1e-4 through the EOS: p0 = (gamma - 1) rho e0 for ideal.
        assert_relative_eq!(vals.p0, 1e-4 / 3.0, max_relative = 1e-9);
        // Shock moves left at about a third of light speed.
        let vs = vals.shock_speed.unwrap();
        assert!(vs < -0.33 && vs > -0.3334, "vs = {vs}");
    }

    #[test]
    fn jet_pressure_matches_mach_number() {
        let Problem::TwoD(p) = build("jet-hot-a", None).unwrap() else {
            unreachable!()
        };
        // Recover the beam pressure from the inlet BC and check the Mach
        // number relation c_s = v_b / M_b.
        let Bc2::JetInlet { beam, .. } = p.bc.ylo else {
            panic!("expected jet inlet")
        };
        let w = beam
            .to_primitive(&p.eos, AdmissibilityEps::default())
            .unwrap();
        let cs2 = p.eos.sound_speed_sq(w.p, w.rho).unwrap();
        assert_relative_eq!(cs2.sqrt(), 0.99 / 1.72, max_relative = 1e-6);
        // Relativistic Mach number M_b W / W_s ~ 9.97.
        let wb = 1.0 / (1.0f64 - 0.99 * 0.99).sqrt();
        let ws = 1.0 / (1.0 - cs2).sqrt();
        let mr = 1.72 * wb / ws;
        assert!((mr - 9.97).abs() < 0.05, "M_r = {mr}");
    }

    #[test]
    fn reference_lxf_keeps_constant_states() {
        let mut p = riemann1d(EosModel::ideal(5.0 / 3.0).unwrap());
        p.init = Arc::new(|_| Primitive {
            rho: 1.0,
            v: [0.2],
            p: 0.5,
        });
        p.t_final = 0.1;
        let pts = reference_lxf(&p, 50).unwrap();
        for pt in pts {
            assert_relative_eq!(pt.w.rho, 1.0, max_relative = 1e-10);
            assert_relative_eq!(pt.w.v[0], 0.2, max_relative = 1e-10);
            assert_relative_eq!(pt.w.p, 0.5, max_relative = 1e-10);
        }
    }

    #[test]
    fn reference_lxf_self_converges_first_order() {
        let mut p = riemann1d(EosModel::ideal(5.0 / 3.0).unwrap());
        // Smooth low-contrast variant for a clean order measurement.
        p.init = Arc::new(|x| Primitive {
            rho: 1.0 + 0.2 * (2.0 * std::f64::consts::PI * x).sin(),
            v: [0.2],
            p: 1.0,
        });
        p.bc = Bc1d::periodic();
        p.t_final = 0.1;
        let exact_at = |x: f64| 1.0 + 0.2 * (2.0 * std::f64::consts::PI * x).sin();
        let err = |n: usize| -> f64 {
            let pts = reference_lxf(&p, n).unwrap();
            // First order: compare against the advected profile loosely via
            // self-convergence between resolutions instead of the exact
            // solution (the wave speed is not 0.2 for RHD, so use pairwise
            // differences on the same grid points).
            let fine = reference_lxf(&p, 2 * n).unwrap();
            pts.iter()
                .enumerate()
                .map(|(j, pt)| {
                    let f = 0.5 * (fine[2 * j].w.rho + fine[2 * j + 1].w.rho);
                    (pt.w.rho - f).abs() / n as f64
                })
                .sum()
        };
        let _ = exact_at;
        let e1 = err(100);
        let e2 = err(200);
        let ratio = e1 / e2;
        assert!(ratio > 1.5 && ratio < 3.0, "LxF self-convergence ratio {ratio}");
    }

    #[test]
    fn reference_cache_round_trip() {
        let p = riemann1d(EosModel::ideal(5.0 / 3.0).unwrap());
        let pts = vec![
            RefPoint {
                x: 0.1,
                w: Primitive { rho: 1.0, v: [0.5], p: 2.0 },
            },
            RefPoint {
                x: 0.2,
                w: Primitive { rho: 3.0, v: [-0.25], p: 1e-7 },
            },
        ];
        let dir = std::env::temp_dir().join("cdgrhd_ref_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("riemann1d_test.csv");
        write_reference(&path, &p, 2, &pts).unwrap();
        let back = read_reference(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].w.rho, 3.0);
        assert_eq!(back[1].w.v[0], -0.25);
        assert_eq!(back[1].w.p, 1e-7);
    }
}
