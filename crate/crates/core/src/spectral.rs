//! The truncated one-step operator as an explicit matrix, eigen-relation
//! residuals for candidate stationary states, and geometric decay fitting.
//!
//! Flattening a state on `[-L, L]` site-major (site `-L` first) and
//! chirality-minor (`left` before `right`) turns one walk step into a
//! banded `2(2L+1) x 2(2L+1)` matrix. Applying it to a closed-form
//! candidate and comparing against `lambda * psi` checks stationarity
//! without trusting any of the machinery that produced the candidate.

use num_complex::Complex64;

use crate::analytic::{StationarySolution, stationary_amplitude};
use crate::error::{Error, Result};
use crate::walk::{CoinField, CoinSplit, Measure, split_coin};

/// Smallest denominator allowed in the per-site relative residual; sites
/// whose candidate amplitude underflows to this level are effectively
/// compared absolutely.
const RESIDUAL_FLOOR: f64 = 1e-300;

/// One-step operator of a coin field restricted to `[-L, L]`, stored as the
/// per-site coin splits rather than a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    half_width: i64,
    splits: Vec<CoinSplit>,
}

impl TruncatedOperator {
    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    /// Matrix dimension `2 (2L + 1)`.
    pub fn dim(&self) -> usize {
        2 * self.splits.len()
    }

    /// Apply the operator to a flattened state vector of length [`dim`].
    ///
    /// Arithmetic is ordered exactly like the simulator's step, so a
    /// flattened walk state and the matrix product agree bit for bit.
    ///
    /// [`dim`]: TruncatedOperator::dim
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            v.len(),
            self.dim(),
            "vector length must match operator dimension"
        );
        let n = self.splits.len();
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in 0..n {
            if i + 1 < n {
                let p = &self.splits[i + 1].p;
                out[2 * i] = p.a * v[2 * (i + 1)] + p.b * v[2 * (i + 1) + 1];
            }
            if i > 0 {
                let q = &self.splits[i - 1].q;
                out[2 * i + 1] = q.c * v[2 * (i - 1)] + q.d * v[2 * (i - 1) + 1];
            }
        }
        out
    }

    /// Single matrix entry, for inspection and cross-checks.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        assert!(
            row < self.dim() && col < self.dim(),
            "index outside the operator"
        );
        let (site_r, comp_r) = (row / 2, row % 2);
        let (site_c, comp_c) = (col / 2, col % 2);
        let zero = Complex64::new(0.0, 0.0);
        if comp_r == 0 && site_c == site_r + 1 {
            let p = &self.splits[site_c].p;
            if comp_c == 0 { p.a } else { p.b }
        } else if comp_r == 1 && site_c + 1 == site_r {
            let q = &self.splits[site_c].q;
            if comp_c == 0 { q.c } else { q.d }
        } else {
            zero
        }
    }

    /// Fully materialized matrix, row major.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let d = self.dim();
        (0..d)
            .map(|r| (0..d).map(|c| self.entry(r, c)).collect())
            .collect()
    }
}

/// Build the truncated operator of `field` on `[-L, L]`, `L >= 1`.
pub fn build_truncated_operator(field: &CoinField, half_width: i64) -> TruncatedOperator {
    assert!(half_width >= 1, "half_width must be at least 1");
    let splits = (-half_width..=half_width)
        .map(|x| split_coin(field.coin_at(x)))
        .collect();
    TruncatedOperator { half_width, splits }
}

/// Largest half-width whose extreme site amplitude `|theta_s|^L` still fits
/// comfortably in double precision.
fn overflow_cap(theta_s_abs_sq: f64) -> i64 {
    let lg = theta_s_abs_sq.log10().abs();
    if lg < 1e-9 {
        i64::MAX
    } else {
        (600.0 / lg).floor() as i64
    }
}

/// Worst per-site relative residual of `U psi = lambda psi` for the
/// closed-form candidate, over all sites with `|x| <= L_eff - margin`.
///
/// The margin excludes the sites whose images are corrupted by lattice
/// truncation (the operator has no inflow from outside the window).
/// `L_eff` is `half_width` capped so the candidate's extreme amplitudes
/// stay inside double range; if the cap leaves nothing but margin the
/// residual is meaningless and an [`Error::OverflowCap`] is returned.
pub fn stationarity_residual(
    sol: &StationarySolution,
    field: &CoinField,
    half_width: i64,
    margin: i64,
) -> Result<f64> {
    assert!(margin >= 1, "margin must be at least 1");
    assert!(half_width > margin + 1, "half_width must exceed margin + 1");
    assert_eq!(
        field.phase(),
        Some(sol.phase),
        "field must be the single-defect field at the solution's phase"
    );
    let cap = overflow_cap(sol.theta_s_abs_sq);
    let l = half_width.min(cap);
    if l <= margin + 1 {
        return Err(Error::OverflowCap {
            cap,
            theta_s_abs_sq: sol.theta_s_abs_sq,
            margin,
        });
    }
    let op = build_truncated_operator(field, l);
    let mut psi = Vec::with_capacity(op.dim());
    for x in -l..=l {
        let amp = stationary_amplitude(sol, x);
        psi.push(amp.left);
        psi.push(amp.right);
    }
    let image = op.apply(&psi);
    let mut worst = 0.0_f64;
    for x in -(l - margin)..=(l - margin) {
        let i = (x + l) as usize;
        for comp in 0..2 {
            let got = image[2 * i + comp];
            let want = sol.lambda * psi[2 * i + comp];
            let den = psi[2 * i]
                .norm()
                .max(psi[2 * i + 1].norm())
                .max(RESIDUAL_FLOOR);
            worst = worst.max((got - want).norm() / den);
        }
    }
    Ok(worst)
}

/// Least-squares fit of `log mu(x)` against `x` over the contiguous run of
/// strictly positive values starting at `x = 1`, returned as the
/// exponentiated slope (the per-site decay factor). Needs at least four
/// usable points; for an exactly geometric tail the result is
/// `|theta_s|^2` up to rounding.
pub fn decay_fit(measure: &Measure) -> Result<f64> {
    let mut points = Vec::new();
    for x in 1..=measure.half_width() {
        let v = measure.at(x);
        if v > 0.0 {
            points.push((x as f64, v.ln()));
        } else {
            break;
        }
    }
    if points.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            found: points.len(),
        });
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (x, y) in &points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(slope.exp())
}
