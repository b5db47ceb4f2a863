//! The two floating-point worked examples: the static-friction linear
//! program and recovering a qubit overlap from convex functionals.

use num_complex::Complex64;

use crate::error::CliError;

/// Optimal profile of the discretized friction problem.
#[derive(Clone, Debug, PartialEq)]
pub struct FrictionSolution {
    /// Maximal total force `Σ fᵢ Δ`.
    pub force: f64,
    /// Position where the profile switches from `+1` to `-1`.
    pub switch_point: f64,
    /// Cellwise values in `[-1, 1]`.
    pub profile: Vec<f64>,
}

impl FrictionSolution {
    pub fn cells(&self) -> usize {
        self.profile.len()
    }

    /// Discrete torque `Σ xᵢ fᵢ Δ` about the left end.
    pub fn torque(&self) -> f64 {
        discrete_torque(&self.profile)
    }
}

/// Cell midpoints `(i + 1/2) / N`.
pub fn midpoints(cells: usize) -> Vec<f64> {
    (0..cells).map(|i| (i as f64 + 0.5) / cells as f64).collect()
}

pub fn discrete_force(profile: &[f64]) -> f64 {
    profile.iter().sum::<f64>() / profile.len() as f64
}

pub fn discrete_torque(profile: &[f64]) -> f64 {
    let n = profile.len();
    midpoints(n).iter().zip(profile).map(|(x, f)| x * f).sum::<f64>() / n as f64
}

/// Smallest accepted grid.
pub const MIN_CELLS: usize = 10;

/// Maximizes `∫f` subject to `∫x f(x) dx = 0` and `|f| ≤ 1` on `N` cells.
///
/// The optimum is `+1` up to a switch cell and `-1` after it. The switch
/// cell carries the fractional value that makes the discrete torque vanish.
pub fn friction_solve(cells: usize) -> Result<FrictionSolution, CliError> {
    if cells < MIN_CELLS {
        return Err(CliError::Invalid(format!("friction needs at least {MIN_CELLS} cells, got {cells}")));
    }
    let x = midpoints(cells);
    let total: f64 = x.iter().sum();
    let mut below = 0.0;
    for k in 0..cells {
        let above = total - below - x[k];
        let t = (above - below) / x[k];
        if (-1.0..=1.0).contains(&t) {
            let profile: Vec<f64> = (0..cells)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0,
                    std::cmp::Ordering::Equal => t,
                    std::cmp::Ordering::Greater => -1.0,
                })
                .collect();
            let n = cells as f64;
            return Ok(FrictionSolution {
                force: (k as f64 - (cells - 1 - k) as f64 + t) / n,
                switch_point: (k as f64 + (1.0 - t) / 2.0) / n,
                profile,
            });
        }
        below += x[k];
    }
    // The torque of the cut is monotone in k and changes sign, so some
    // cell always admits a fractional value in [-1, 1].
    unreachable!("no switch cell for {cells} cells")
}

/// A feasible profile built from arbitrary values: remove the torque
/// component along `x`, then shrink into `[-1, 1]`.
pub fn project_feasible(raw: &[f64]) -> Vec<f64> {
    let x = midpoints(raw.len());
    let xx: f64 = x.iter().map(|v| v * v).sum();
    let xf: f64 = x.iter().zip(raw).map(|(a, b)| a * b).sum();
    let c = xf / xx;
    let f: Vec<f64> = raw.iter().zip(&x).map(|(v, xi)| v - c * xi).collect();
    let peak = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 1.0 {
        f.into_iter().map(|v| v / peak).collect()
    } else {
        f
    }
}

/// Tolerance for the unit-norm check on qubit states.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Two pure qubit states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPair {
    pub psi1: [Complex64; 2],
    pub psi2: [Complex64; 2],
}

fn check_unit(name: &str, psi: &[Complex64; 2]) -> Result<(), CliError> {
    let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(CliError::Invalid(format!("{name} has norm {norm}, expected 1")));
    }
    Ok(())
}

impl QubitPair {
    pub fn new(psi1: [Complex64; 2], psi2: [Complex64; 2]) -> Result<Self, CliError> {
        check_unit("psi1", &psi1)?;
        check_unit("psi2", &psi2)?;
        Ok(QubitPair { psi1, psi2 })
    }

    /// `⟨ψ₁|ψ₂⟩`.
    pub fn overlap(&self) -> Complex64 {
        self.psi1[0].conj() * self.psi2[0] + self.psi1[1].conj() * self.psi2[1]
    }

    pub fn swapped(&self) -> QubitPair {
        QubitPair { psi1: self.psi2, psi2: self.psi1 }
    }
}

/// `√(1 - |⟨ψ₁|ψ₂⟩|²)` computed directly.
pub fn fidelity_defect(q: &QubitPair) -> f64 {
    (1.0 - q.overlap().norm_sqr()).max(0.0).sqrt()
}

/// Bloch vector `(2 Re(ᾱβ), 2 Im(ᾱβ), |α|² - |β|²)` of `α|0⟩ + β|1⟩`.
pub fn bloch_vector(psi: &[Complex64; 2]) -> [f64; 3] {
    let ab = psi[0].conj() * psi[1];
    [2.0 * ab.re, 2.0 * ab.im, psi[0].norm_sqr() - psi[1].norm_sqr()]
}

/// `n` nearly uniform unit vectors on the sphere (Fibonacci lattice).
pub fn sphere_directions(n: usize) -> impl Iterator<Item = [f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        [r * phi.cos(), r * phi.sin(), z]
    })
}

/// Smallest accepted direction grid.
pub const MIN_DIRECTIONS: usize = 100;

/// Below this `|det(ψ₁, ψ₂)|` the states are treated as linearly dependent.
pub const DEPENDENCE_TOLERANCE: f64 = 1e-12;

/// Maximizes `|f(ρ₁) - f(ρ₂)|` over affine functionals
/// `f(ρ) = 1/2 + v·b(ρ)` with `|v| = 1/2`, searching `v` over a spherical
/// grid of `directions` points. Linearly dependent states give exactly `0`.
pub fn fidelity_defect_search(q: &QubitPair, directions: usize) -> Result<f64, CliError> {
    if directions < MIN_DIRECTIONS {
        return Err(CliError::Invalid(format!(
            "direction grid needs at least {MIN_DIRECTIONS} points, got {directions}"
        )));
    }
    let det = q.psi1[0] * q.psi2[1] - q.psi1[1] * q.psi2[0];
    if det.norm() < DEPENDENCE_TOLERANCE {
        return Ok(0.0);
    }
    let b1 = bloch_vector(&q.psi1);
    let b2 = bloch_vector(&q.psi2);
    let d = [b1[0] - b2[0], b1[1] - b2[1], b1[2] - b2[2]];
    Ok(sphere_directions(directions)
        .map(|u| 0.5 * (u[0] * d[0] + u[1] * d[1] + u[2] * d[2]).abs())
        .fold(0.0, f64::max))
}
