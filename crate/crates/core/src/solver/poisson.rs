//! Cell-centered pressure Poisson solver.
//!
//! Geometric multigrid V-cycles with red-black Gauss-Seidel smoothing,
//! bilinear prolongation and four-cell restriction. Every sweep visits cells
//! in a fixed order, so results are bitwise reproducible.

use crate::error::{Error, Result};

use super::field::Field;

/// Boundary treatment of one side of the Poisson domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Zero normal gradient (velocity fixed on that face).
    Neumann,
    /// Zero value on the face.
    Dirichlet,
    /// Wraps to the opposite side, which must also be periodic.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoissonBoundaries {
    pub west: Side,
    pub east: Side,
    pub south: Side,
    pub north: Side,
}

impl PoissonBoundaries {
    pub const PERIODIC: PoissonBoundaries = PoissonBoundaries {
        west: Side::Periodic,
        east: Side::Periodic,
        south: Side::Periodic,
        north: Side::Periodic,
    };

    /// Inflow on the west, fixed-pressure outflow on the east, walls elsewhere.
    pub const CHANNEL: PoissonBoundaries = PoissonBoundaries {
        west: Side::Neumann,
        east: Side::Dirichlet,
        south: Side::Neumann,
        north: Side::Neumann,
    };

    fn singular(&self) -> bool {
        ![self.west, self.east, self.south, self.north].contains(&Side::Dirichlet)
    }
}

const PRE_SWEEPS: usize = 2;
const POST_SWEEPS: usize = 2;
const COARSEST_SWEEPS: usize = 64;

struct Level {
    phi: Field,
    rhs: Field,
    res: Field,
    ax: f64,
    ay: f64,
}

impl Level {
    fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Self {
        Level {
            phi: Field::new(nx, ny),
            rhs: Field::new(nx, ny),
            res: Field::new(nx, ny),
            ax: 1.0 / (dx * dx),
            ay: 1.0 / (dy * dy),
        }
    }

    fn nx(&self) -> usize {
        self.phi.ni()
    }

    fn ny(&self) -> usize {
        self.phi.nj()
    }
}

fn fill_ghosts(f: &mut Field, bc: &PoissonBoundaries) {
    let (nx, ny) = (f.ni() as isize, f.nj() as isize);
    let rule = |side: Side, inner: f64, wrapped: f64| match side {
        Side::Neumann => inner,
        Side::Dirichlet => -inner,
        Side::Periodic => wrapped,
    };
    for i in 0..nx {
        let v = rule(bc.south, f.get(i, 0), f.get(i, ny - 1));
        f.set(i, -1, v);
        let v = rule(bc.north, f.get(i, ny - 1), f.get(i, 0));
        f.set(i, ny, v);
    }
    // Side columns last, so corner ghosts are consistent with both rules.
    for j in -1..=ny {
        let v = rule(bc.west, f.get(0, j), f.get(nx - 1, j));
        f.set(-1, j, v);
        let v = rule(bc.east, f.get(nx - 1, j), f.get(0, j));
        f.set(nx, j, v);
    }
}

fn smooth(level: &mut Level, bc: &PoissonBoundaries, sweeps: usize) {
    let (nx, ny) = (level.nx(), level.ny());
    let (ax, ay) = (level.ax, level.ay);
    let inv_diag = 1.0 / (2.0 * ax + 2.0 * ay);
    let stride = level.phi.stride();
    for _ in 0..sweeps {
        for color in 0..2 {
            fill_ghosts(&mut level.phi, bc);
            let phi = level.phi.raw_mut();
            let rhs = level.rhs.raw();
            for j in 0..ny {
                let row = (j + 1) * stride + 1;
                let start = (j + color) % 2;
                let mut i = start;
                while i < nx {
                    let k = row + i;
                    let neighbors =
                        ax * (phi[k - 1] + phi[k + 1]) + ay * (phi[k - stride] + phi[k + stride]);
                    phi[k] = (neighbors - rhs[k]) * inv_diag;
                    i += 2;
                }
            }
        }
    }
}

/// Writes `rhs − Aφ` into `level.res` and returns its max norm.
fn residual(level: &mut Level, bc: &PoissonBoundaries) -> f64 {
    fill_ghosts(&mut level.phi, bc);
    let (nx, ny) = (level.nx(), level.ny());
    let (ax, ay) = (level.ax, level.ay);
    let stride = level.phi.stride();
    let phi = level.phi.raw();
    let rhs = level.rhs.raw();
    let res = level.res.raw_mut();
    let mut max = 0.0f64;
    for j in 0..ny {
        let row = (j + 1) * stride + 1;
        for k in row..row + nx {
            let c = phi[k];
            let lap = ax * (phi[k - 1] + phi[k + 1] - 2.0 * c)
                + ay * (phi[k - stride] + phi[k + stride] - 2.0 * c);
            let r = rhs[k] - lap;
            res[k] = r;
            max = max.max(r.abs());
        }
    }
    max
}

fn remove_mean(f: &mut Field) {
    let n = (f.ni() * f.nj()) as f64;
    let mean = f.interior().sum::<f64>() / n;
    for j in 0..f.nj() {
        for i in 0..f.ni() {
            *f.at_mut(i, j) -= mean;
        }
    }
}

pub struct Multigrid {
    levels: Vec<Level>,
    bc: PoissonBoundaries,
}

/// Outcome of one converged solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// V-cycles performed.
    pub iterations: usize,
    /// Max-norm residual before the first cycle and after each cycle.
    pub residual_history: Vec<f64>,
}

impl Multigrid {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, bc: PoissonBoundaries) -> Self {
        let mut levels = vec![Level::new(nx, ny, dx, dy)];
        let (mut n, mut m, mut hx, mut hy) = (nx, ny, dx, dy);
        while n % 2 == 0 && m % 2 == 0 && n >= 4 && m >= 4 {
            n /= 2;
            m /= 2;
            hx *= 2.0;
            hy *= 2.0;
            levels.push(Level::new(n, m, hx, hy));
        }
        Multigrid { levels, bc }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Solves `∇²φ = rhs` in place, starting from the current contents of
    /// `phi`, until the max-norm residual drops to `abs_tol`.
    pub fn solve(
        &mut self,
        phi: &mut Field,
        rhs: &Field,
        abs_tol: f64,
        max_cycles: usize,
    ) -> Result<SolveReport> {
        let bc = self.bc;
        let singular = bc.singular();
        {
            let fine = &mut self.levels[0];
            fine.phi.copy_from(phi);
            fine.rhs.copy_from(rhs);
            if singular {
                remove_mean(&mut fine.rhs);
            }
        }
        let mut history = vec![residual(&mut self.levels[0], &bc)];
        let mut cycles = 0;
        while history[cycles] > abs_tol {
            if cycles == max_cycles {
                return Err(Error::PoissonDivergence {
                    iterations: cycles,
                    residual: history[cycles],
                });
            }
            self.v_cycle(0);
            if singular {
                remove_mean(&mut self.levels[0].phi);
            }
            cycles += 1;
            history.push(residual(&mut self.levels[0], &bc));
        }
        phi.copy_from(&self.levels[0].phi);
        fill_ghosts(phi, &bc);
        Ok(SolveReport {
            iterations: cycles,
            residual_history: history,
        })
    }

    fn v_cycle(&mut self, l: usize) {
        let bc = self.bc;
        if l + 1 == self.levels.len() {
            let level = &mut self.levels[l];
            if bc.singular() {
                remove_mean(&mut level.rhs);
            }
            smooth(level, &bc, COARSEST_SWEEPS);
            return;
        }
        smooth(&mut self.levels[l], &bc, PRE_SWEEPS);
        residual(&mut self.levels[l], &bc);

        let (fine_part, coarse_part) = self.levels.split_at_mut(l + 1);
        let fine = &mut fine_part[l];
        let coarse = &mut coarse_part[0];
        for jc in 0..coarse.ny() {
            for ic in 0..coarse.nx() {
                let (i, j) = (2 * ic, 2 * jc);
                let sum = fine.res.at(i, j)
                    + fine.res.at(i + 1, j)
                    + fine.res.at(i, j + 1)
                    + fine.res.at(i + 1, j + 1);
                *coarse.rhs.at_mut(ic, jc) = 0.25 * sum;
            }
        }
        coarse.phi.fill(0.0);

        self.v_cycle(l + 1);

        let (fine_part, coarse_part) = self.levels.split_at_mut(l + 1);
        let fine = &mut fine_part[l];
        let coarse = &mut coarse_part[0];
        fill_ghosts(&mut coarse.phi, &bc);
        for j in 0..fine.ny() {
            let jc = (j / 2) as isize;
            let dj = if j % 2 == 0 { -1 } else { 1 };
            for i in 0..fine.nx() {
                let ic = (i / 2) as isize;
                let di = if i % 2 == 0 { -1 } else { 1 };
                let e = 0.5625 * coarse.phi.get(ic, jc)
                    + 0.1875 * (coarse.phi.get(ic + di, jc) + coarse.phi.get(ic, jc + dj))
                    + 0.0625 * coarse.phi.get(ic + di, jc + dj);
                *fine.phi.at_mut(i, j) += e;
            }
        }
        smooth(fine, &bc, POST_SWEEPS);
    }
}

/// Applies the discrete Laplacian with the ghost rules of `bc`.
pub fn laplacian(phi: &mut Field, dx: f64, dy: f64, bc: &PoissonBoundaries) -> Field {
    fill_ghosts(phi, bc);
    let (nx, ny) = (phi.ni(), phi.nj());
    let mut out = Field::new(nx, ny);
    let (ax, ay) = (1.0 / (dx * dx), 1.0 / (dy * dy));
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let c = phi.get(i, j);
            let lap = ax * (phi.get(i - 1, j) + phi.get(i + 1, j) - 2.0 * c)
                + ay * (phi.get(i, j - 1) + phi.get(i, j + 1) - 2.0 * c);
            out.set(i, j, lap);
        }
    }
    out
}

pub(crate) fn fill_pressure_ghosts(p: &mut Field, bc: &PoissonBoundaries) {
    fill_ghosts(p, bc);
}
