//! Closed forms for the stationary states of the single-defect walk.
//!
//! For each defect phase `phi` in (0, 1) the walk has two stationary
//! solution branches, labelled by whether the lower origin component is
//! `+i alpha` or `-i alpha`. Each branch fixes an eigenvalue `lambda` on
//! the unit circle and a spatial ratio `theta_s` with `|theta_s| != 1`
//! away from the two marginal phases, so the branch either decays or grows
//! geometrically in `|x|`. Everything here is a finite formula; the
//! simulation and matrix modules verify these formulas numerically.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::Amplitude;

/// Absolute tolerance used to classify `|theta_s|^2` as exactly marginal.
pub const MARGINAL_TOL: f64 = 1e-12;

/// Which sign the lower origin component carries relative to `i alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    PlusI,
    MinusI,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::PlusI, Branch::MinusI];

    /// The sign `s` in `beta = s * i * alpha`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::PlusI => 1.0,
            Branch::MinusI => -1.0,
        }
    }

    /// Lower origin component for a given upper component.
    pub fn beta(self, alpha: Complex64) -> Complex64 {
        Complex64::new(0.0, self.sign()) * alpha
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::PlusI => "plus-i",
            Branch::MinusI => "minus-i",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Asymptotic behaviour of the stationary measure in `|x|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayClass {
    Decaying,
    Marginal,
    Growing,
}

impl DecayClass {
    pub fn label(self) -> &'static str {
        match self {
            DecayClass::Decaying => "DECAYING",
            DecayClass::Marginal => "MARGINAL",
            DecayClass::Growing => "GROWING",
        }
    }
}

impl std::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Defect phase factor `e^{2 pi i phi}`.
pub fn omega(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * phi)
}

fn check_phi(phi: f64) -> Result<()> {
    if phi > 0.0 && phi < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "phi = {phi} outside the open interval (0, 1)"
        )))
    }
}

/// Square of the branch eigenvalue:
/// `lambda^2 = omega ((1 - 2 omega + omega^2) -+ i (1 - omega + omega^2)) / (1 - 2 omega + 2 omega^2)`
/// with `-i` on the plus branch and `+i` on the minus branch. Unit modulus
/// for every `phi` in (0, 1); the denominator never vanishes there.
pub fn lambda_squared(phi: f64, branch: Branch) -> Result<Complex64> {
    check_phi(phi)?;
    let w = omega(phi);
    let den = 1.0 - 2.0 * w + 2.0 * w * w;
    if den.norm() <= 1e-14 {
        return Err(Error::SingularParameter {
            phi,
            expression: "1 - 2 omega + 2 omega^2",
        });
    }
    let real_part = w * (1.0 - 2.0 * w + w * w);
    let imag_part = Complex64::i() * w * (1.0 - w + w * w);
    let num = match branch {
        Branch::PlusI => real_part - imag_part,
        Branch::MinusI => real_part + imag_part,
    };
    Ok(num / den)
}

/// Principal square root of a unit-modulus `lambda^2`, i.e. the root whose
/// argument lies in `(-pi/2, pi/2]`. The discarded partner `-lambda` is the
/// eigenvalue of the sign-flipped eigenvector `(-1)^x psi(x)`, so no
/// solutions are lost by fixing this convention.
pub fn select_lambda(lambda_sq: Complex64) -> Result<Complex64> {
    if (lambda_sq.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "lambda^2 must have unit modulus, got |lambda^2| = {}",
            lambda_sq.norm()
        )));
    }
    // A negative-zero imaginary part would flip arg(-1) from pi to -pi and
    // push the root out of the principal half-plane; normalize it away.
    let clean = Complex64::new(
        lambda_sq.re,
        if lambda_sq.im == 0.0 {
            0.0
        } else {
            lambda_sq.im
        },
    );
    Ok(clean.sqrt())
}

/// Spatial ratio `theta_s` read off the first site equation of the
/// eigen-system on the positive half-line:
/// `sqrt2 / (lambda alpha) ((-lambda^2 + omega/2) alpha - (omega/2) beta)`.
pub fn theta_s_form1(
    lambda: Complex64,
    omega: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<Complex64> {
    assert!(lambda.norm() > 0.0, "lambda must be nonzero");
    if alpha.norm() == 0.0 {
        return Err(Error::DegenerateState(
            "theta_s form 1 needs alpha != 0".into(),
        ));
    }
    let half = omega * 0.5;
    Ok(SQRT_2 / (lambda * alpha) * ((half - lambda * lambda) * alpha - half * beta))
}

/// The four algebraically equivalent expressions for `theta_s`, read off
/// the four distinct site equations of the eigen-system. On a valid branch
/// they agree to rounding; off-branch they visibly disagree, which makes
/// their spread a cheap self-test.
pub fn theta_s_all_forms(
    lambda: Complex64,
    omega: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Result<[Complex64; 4]> {
    assert!(lambda.norm() > 0.0, "lambda must be nonzero");
    if alpha.norm() == 0.0 || beta.norm() == 0.0 {
        return Err(Error::DegenerateState(
            "the four theta_s forms need both origin components nonzero".into(),
        ));
    }
    let den2 = (omega - 1.0) * alpha - omega * beta;
    if den2.norm() <= 1e-14 {
        return Err(Error::BranchDegenerate {
            form: 2,
            denominator: "(omega - 1) alpha - omega beta",
        });
    }
    let den3 = omega * alpha + (omega - 1.0) * beta;
    if den3.norm() <= 1e-14 {
        return Err(Error::BranchDegenerate {
            form: 3,
            denominator: "omega alpha + (omega - 1) beta",
        });
    }
    let half = omega * 0.5;
    let f1 = theta_s_form1(lambda, omega, alpha, beta)?;
    let f2 = omega * (alpha - beta) / (SQRT_2 * lambda * den2);
    let f3 = omega * (alpha + beta) / (SQRT_2 * lambda * den3);
    let f4 = SQRT_2 / (lambda * beta) * (half * alpha + (half - lambda * lambda) * beta);
    Ok([f1, f2, f3, f4])
}

/// `theta_s^2` in two closed forms: the complex rational
/// `omega / (omega^2 - 3 omega + 1 -+ i (omega^2 - 1))` and the real
/// `1 / (3 - 2 cos(2 pi phi) -+ 2 sin(2 pi phi))`, taking the upper sign on
/// the plus branch in both. Both denominators are nonzero for every `phi`
/// in (0, 1) and the two values agree: `theta_s^2` is real and negative,
/// so the real form equals `-theta_s^2 = |theta_s|^2`.
pub fn theta_s_squared(phi: f64, branch: Branch) -> Result<(Complex64, f64)> {
    check_phi(phi)?;
    let w = omega(phi);
    let base = w * w - 3.0 * w + 1.0;
    let skew = Complex64::i() * (w * w - 1.0);
    let den = match branch {
        Branch::PlusI => base - skew,
        Branch::MinusI => base + skew,
    };
    if den.norm() <= 1e-14 {
        return Err(Error::SingularParameter {
            phi,
            expression: "omega^2 - 3 omega + 1 -+ i (omega^2 - 1)",
        });
    }
    let (s, c) = (2.0 * PI * phi).sin_cos();
    let real_den = match branch {
        Branch::PlusI => 3.0 - 2.0 * c - 2.0 * s,
        Branch::MinusI => 3.0 - 2.0 * c + 2.0 * s,
    };
    if real_den.abs() <= 1e-14 {
        return Err(Error::SingularParameter {
            phi,
            expression: "3 - 2 cos(2 pi phi) -+ 2 sin(2 pi phi)",
        });
    }
    Ok((w / den, 1.0 / real_den))
}

/// Branch factor `2 - cos(2 pi phi) -+ sin(2 pi phi)` (sign `-` on the plus
/// branch) relating the origin weight to the off-origin weights of the
/// stationary measure. Always positive.
pub fn gamma_factor(phi: f64, branch: Branch) -> f64 {
    let (s, c) = (2.0 * PI * phi).sin_cos();
    match branch {
        Branch::PlusI => 2.0 - c - s,
        Branch::MinusI => 2.0 - c + s,
    }
}

/// `(Re lambda^2, Im lambda^2)` as rational functions of
/// `c = cos(2 pi phi)` and `s = sin(2 pi phi)`, sharing the denominator
/// `5 - 12 c + 8 c^2` (which stays above 1/2 for all real `phi`). This is
/// the fully real route to the eigenvalue; it must match
/// [`lambda_squared`] component by component.
pub fn lambda_sq_components(phi: f64, branch: Branch) -> Result<(f64, f64)> {
    check_phi(phi)?;
    let (s, c) = (2.0 * PI * phi).sin_cos();
    let den = 5.0 - 12.0 * c + 8.0 * c * c;
    if den.abs() <= 1e-14 {
        return Err(Error::SingularParameter {
            phi,
            expression: "5 - 12 cos + 8 cos^2",
        });
    }
    let (c2, c3, s3) = (c * c, c * c * c, s * s * s);
    let (re, im) = match branch {
        Branch::PlusI => (
            -2.0 + 6.0 * c + 6.0 * s - 6.0 * c * s - 8.0 * c2 + 4.0 * c3 - 4.0 * s3,
            1.0 - 4.0 * c + 8.0 * s - 8.0 * c * s + 6.0 * c2 - 4.0 * c3 - 4.0 * s3,
        ),
        Branch::MinusI => (
            -2.0 + 6.0 * c - 6.0 * s + 6.0 * c * s - 8.0 * c2 + 4.0 * c3 + 4.0 * s3,
            -1.0 + 4.0 * c + 8.0 * s - 8.0 * c * s - 6.0 * c2 + 4.0 * c3 - 4.0 * s3,
        ),
    };
    Ok((re / den, im / den))
}

/// Everything the rest of the workspace needs to know about one stationary
/// solution: origin components, eigenvalue, spatial ratios, measure factor,
/// and decay classification.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySolution {
    pub phase: f64,
    pub branch: Branch,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub lambda_sq: Complex64,
    pub lambda: Complex64,
    /// Ratio of successive site amplitudes away from the origin.
    pub theta_s: Complex64,
    /// The reciprocal ratio `-1/theta_s` of the companion root.
    pub theta_l: Complex64,
    /// Off-origin measure factor.
    pub gamma: f64,
    /// `|theta_s|^2` from the real closed form.
    pub theta_s_abs_sq: f64,
    pub decay_class: DecayClass,
}

/// Assemble the full branch solution at phase `phi` with upper origin
/// component `alpha`. `alpha = 0` yields the zero solution: the spatial
/// ratios are still well defined (they do not depend on the overall scale)
/// but every amplitude and measure value is zero.
pub fn build_solution(phi: f64, branch: Branch, alpha: Complex64) -> Result<StationarySolution> {
    let lambda_sq = lambda_squared(phi, branch)?;
    let lambda = select_lambda(lambda_sq)?;
    let w = omega(phi);
    let beta = branch.beta(alpha);
    // theta_s is scale invariant, so the zero solution borrows alpha = 1.
    let ref_alpha = if alpha.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        alpha
    };
    let theta_s = theta_s_form1(lambda, w, ref_alpha, branch.beta(ref_alpha))?;
    let theta_l = -1.0 / theta_s;
    let (theta_sq, theta_abs_sq) = theta_s_squared(phi, branch)?;
    debug_assert!((theta_s * theta_s - theta_sq).norm() < 1e-9);
    let gamma = gamma_factor(phi, branch);
    let decay_class = if (theta_abs_sq - 1.0).abs() <= MARGINAL_TOL {
        DecayClass::Marginal
    } else if theta_abs_sq < 1.0 {
        DecayClass::Decaying
    } else {
        DecayClass::Growing
    };
    Ok(StationarySolution {
        phase: phi,
        branch,
        alpha,
        beta,
        lambda_sq,
        lambda,
        theta_s,
        theta_l,
        gamma,
        theta_s_abs_sq: theta_abs_sq,
        decay_class,
    })
}

/// Site amplitude of the stationary solution:
/// `(alpha, beta)` at the origin,
/// `(-theta_s)^x (alpha, (1 - omega) alpha + omega beta)` for `x >= 1`, and
/// `theta_s^{|x|} ((omega - 1) beta + omega alpha, beta)` for `x <= -1`.
pub fn stationary_amplitude(sol: &StationarySolution, x: i64) -> Amplitude {
    let w = omega(sol.phase);
    if x == 0 {
        Amplitude::new(sol.alpha, sol.beta)
    } else if x > 0 {
        let scale = (-sol.theta_s).powu(x as u32);
        Amplitude::new(sol.alpha, (1.0 - w) * sol.alpha + w * sol.beta).scaled(scale)
    } else {
        let scale = sol.theta_s.powu(x.unsigned_abs() as u32);
        Amplitude::new((w - 1.0) * sol.beta + w * sol.alpha, sol.beta).scaled(scale)
    }
}

/// Site weight of the stationary solution in closed form:
/// `2 |alpha|^2` at the origin and
/// `2 |alpha|^2 gamma |theta_s|^{2|x|}` elsewhere. Symmetric in `x` and
/// strictly positive for `alpha != 0`.
pub fn stationary_measure(sol: &StationarySolution, x: i64) -> f64 {
    let a2 = 2.0 * sol.alpha.norm_sqr();
    if x == 0 {
        a2
    } else {
        a2 * sol.gamma
            * sol
                .theta_s_abs_sq
                .powi(x.unsigned_abs().min(i32::MAX as u64) as i32)
    }
}

/// Uniform verification grid `phi_k = (k + 2) / (n + 3)` for `k = 0..n`.
///
/// For `n = 97` this is `{0.02, 0.03, ..., 0.98}`: it contains both marginal
/// phases 1/4 and 3/4 exactly, keeps every non-marginal point at least one
/// full step away from them, and stays two steps clear of the interval
/// ends, where one branch's decay rate approaches 1 and unit-circle series
/// checks would need impractically many terms.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k + 2) as f64 / (n + 3) as f64).collect()
}
