//! Generating-function checks for the stationary solutions.
//!
//! Packaging each half-line of a stationary state into a two-component
//! power series turns the eigenvalue equation into a 2x2 linear system
//! `A(z) F(z) = a` with one right-hand side per half-line. The system
//! matrix, its determinant quadratic, and truncated-series residuals give
//! an independent route to the closed forms: the spatial ratio must be a
//! root of the determinant quadratic, and plugging truncated series into
//! the system must leave only a truncation-sized residual.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::analytic::{StationarySolution, omega, stationary_amplitude};
use crate::error::{Error, Result};

/// Series ratios must stay below `1 - CONVERGENCE_SLACK` or evaluation
/// refuses to run.
pub const CONVERGENCE_SLACK: f64 = 1e-6;

/// Which half-line a generating function sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Sites `x >= 1`, series in `z^x`.
    Plus,
    /// Sites `x <= -1`, series in `z^x` (negative powers).
    Minus,
}

/// Which amplitude component a series tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
}

/// The 2x2 system `A(z) F(z) = a` satisfied by the half-line generating
/// functions of a stationary state, with the right-hand sides for both
/// half-lines.
#[derive(Debug, Clone, PartialEq)]
pub struct GenFunSystem {
    pub z: Complex64,
    pub lambda: Complex64,
    pub a_matrix: [[Complex64; 2]; 2],
    pub rhs_plus: [Complex64; 2],
    pub rhs_minus: [Complex64; 2],
}

impl GenFunSystem {
    /// Determinant of the system matrix.
    pub fn det_a(&self) -> Complex64 {
        self.a_matrix[0][0] * self.a_matrix[1][1] - self.a_matrix[0][1] * self.a_matrix[1][0]
    }

    /// Matrix-vector product `A f`.
    pub fn apply(&self, f: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.a_matrix[0][0] * f[0] + self.a_matrix[0][1] * f[1],
            self.a_matrix[1][0] * f[0] + self.a_matrix[1][1] * f[1],
        ]
    }
}

/// Build the system at evaluation point `z != 0` for a state with origin
/// components `(alpha, beta)` and eigenvalue `lambda`.
pub fn build_system(
    z: Complex64,
    lambda: Complex64,
    omega: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<GenFunSystem> {
    assert!(lambda.norm() > 0.0, "lambda must be nonzero");
    if z.norm() == 0.0 {
        return Err(Error::Domain(
            "generating functions are undefined at z = 0".into(),
        ));
    }
    let inv = 1.0 / (SQRT_2 * z);
    let a_matrix = [[lambda - inv, -inv], [-z / SQRT_2, lambda + z / SQRT_2]];
    let rhs_plus = [-lambda * alpha, omega * z * (alpha - beta) / SQRT_2];
    let rhs_minus = [omega * (alpha + beta) / (SQRT_2 * z), -lambda * beta];
    Ok(GenFunSystem {
        z,
        lambda,
        a_matrix,
        rhs_plus,
        rhs_minus,
    })
}

/// Roots of the determinant quadratic `z^2 - sqrt2 (1/lambda - lambda) z - 1`
/// for unit-modulus `lambda`, ordered by modulus and then by principal
/// argument. Their product is -1, so exactly one root lies inside the unit
/// circle whenever the moduli differ; the smaller root is the spatial ratio
/// of the decaying branch and the larger one its companion.
pub fn det_a_roots(lambda: Complex64) -> Result<(Complex64, Complex64)> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "lambda must have unit modulus, got |lambda| = {}",
            lambda.norm()
        )));
    }
    let b = SQRT_2 * (1.0 / lambda - lambda);
    let disc = (b * b + 4.0).sqrt();
    let r1 = (b + disc) * 0.5;
    let r2 = (b - disc) * 0.5;
    let (m1, m2) = (r1.norm(), r2.norm());
    let tied = (m1 - m2).abs() <= 1e-12 * (1.0 + m1);
    let swap = if tied { r1.arg() > r2.arg() } else { m1 > m2 };
    Ok(if swap { (r2, r1) } else { (r1, r2) })
}

fn convergence_ratio(sol: &StationarySolution, side: Side, z: Complex64) -> f64 {
    match side {
        Side::Plus => (sol.theta_s * z).norm(),
        Side::Minus => (sol.theta_s / z).norm(),
    }
}

/// Both component series of one half-line generating function, truncated
/// after the site `|x| = terms`.
fn partial_sums(
    sol: &StationarySolution,
    side: Side,
    z: Complex64,
    terms: u32,
) -> Result<[Complex64; 2]> {
    if z.norm() == 0.0 {
        return Err(Error::Domain(
            "generating functions are undefined at z = 0".into(),
        ));
    }
    let ratio = convergence_ratio(sol, side, z);
    let bound = 1.0 - CONVERGENCE_SLACK;
    if ratio >= bound {
        return Err(Error::DivergentSeries { ratio, bound });
    }
    let zp = match side {
        Side::Plus => z,
        Side::Minus => 1.0 / z,
    };
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = [Complex64::new(0.0, 0.0); 2];
    for k in 1..=terms {
        power *= zp;
        let x = match side {
            Side::Plus => k as i64,
            Side::Minus => -(k as i64),
        };
        let amp = stationary_amplitude(sol, x);
        sum[0] += amp.left * power;
        sum[1] += amp.right * power;
    }
    Ok(sum)
}

/// Truncated half-line generating function: the sum of
/// `psi_component(x) z^x` over `1 <= |x| <= terms` on the chosen side.
/// Requires `terms >= 1` and an evaluation point strictly inside the
/// side's convergence region.
pub fn truncated_series(
    sol: &StationarySolution,
    side: Side,
    chirality: Chirality,
    z: Complex64,
    terms: u32,
) -> Result<Complex64> {
    assert!(terms >= 1, "terms must be at least 1");
    let sums = partial_sums(sol, side, z, terms)?;
    Ok(match chirality {
        Chirality::Left => sums[0],
        Chirality::Right => sums[1],
    })
}

/// Max-norm residuals `(plus, minus)` of the half-line system evaluated on
/// `terms`-term truncated series. With `terms = 0` the sums are empty and
/// the residuals are the right-hand-side norms themselves, which makes the
/// zero-term call a baseline for how much the system demands; for converging
/// series the residual shrinks geometrically in `terms`.
pub fn system_residual(sol: &StationarySolution, z: Complex64, terms: u32) -> Result<(f64, f64)> {
    let sys = build_system(z, sol.lambda, omega(sol.phase), sol.alpha, sol.beta)?;
    let f_plus = partial_sums(sol, Side::Plus, z, terms)?;
    let f_minus = partial_sums(sol, Side::Minus, z, terms)?;
    let res = |lhs: [Complex64; 2], rhs: [Complex64; 2]| {
        (lhs[0] - rhs[0]).norm().max((lhs[1] - rhs[1]).norm())
    };
    Ok((
        res(sys.apply(f_plus), sys.rhs_plus),
        res(sys.apply(f_minus), sys.rhs_minus),
    ))
}

/// Evaluation points `e^{i k pi / 4}` for `k = 0..8`, skipping any point
/// within `1e-3` of a zero of `1 + theta_s z` (where the exact generating
/// function has a pole on the plus side and the residual comparison is
/// ill-conditioned).
pub fn unit_circle_points(sol: &StationarySolution) -> Vec<Complex64> {
    (0..8)
        .map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::PI / 4.0))
        .filter(|z| (1.0 + sol.theta_s * *z).norm() >= 1e-3)
        .collect()
}
