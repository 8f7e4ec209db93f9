//! Simulation of discrete-time quantum walks on the integer line.
//!
//! A state assigns a two-component complex amplitude to every site of a
//! truncated lattice `[-L, L]`. One step multiplies each site's amplitude by
//! the coin at that site, then routes the upper component one site to the
//! left and the lower component one site to the right. Coins may vary per
//! site; the single-defect field used throughout places a phase-scaled
//! Hadamard coin at the origin and plain Hadamard coins everywhere else.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative weight on the outermost two sites of each lattice edge above
/// which the truncated window no longer stands in for the infinite line.
pub const LEAK_THRESHOLD: f64 = 1e-14;

/// Tolerance for the unitarity check applied to every coin in a field.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Two-component complex amplitude at one site. `left` is the component
/// that moves toward smaller x, `right` the one that moves toward larger x.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitude {
    pub left: Complex64,
    pub right: Complex64,
}

impl Amplitude {
    pub fn new(left: Complex64, right: Complex64) -> Self {
        Self { left, right }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Site weight `|left|^2 + |right|^2`.
    pub fn weight(&self) -> f64 {
        self.left.norm_sqr() + self.right.norm_sqr()
    }

    /// Larger of the two component moduli.
    pub fn max_norm(&self) -> f64 {
        self.left.norm().max(self.right.norm())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.left * factor, self.right * factor)
    }
}

impl std::ops::Add for Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: Amplitude) -> Amplitude {
        Amplitude::new(self.left + rhs.left, self.right + rhs.right)
    }
}

impl std::ops::Sub for Amplitude {
    type Output = Amplitude;
    fn sub(self, rhs: Amplitude) -> Amplitude {
        Amplitude::new(self.left - rhs.left, self.right - rhs.right)
    }
}

/// 2x2 coin matrix `[[a, b], [c, d]]` acting on `(left, right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Coin {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    /// `(1/sqrt2) [[1, 1], [1, -1]]`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(h, h, h, -h)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one)
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(
            self.a * factor,
            self.b * factor,
            self.c * factor,
            self.d * factor,
        )
    }

    pub fn apply(&self, v: &Amplitude) -> Amplitude {
        Amplitude::new(
            self.a * v.left + self.b * v.right,
            self.c * v.left + self.d * v.right,
        )
    }

    /// Entrywise check of `U^H U = I` against `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let e00 = self.a.conj() * self.a + self.c.conj() * self.c;
        let e01 = self.a.conj() * self.b + self.c.conj() * self.d;
        let e10 = self.b.conj() * self.a + self.d.conj() * self.c;
        let e11 = self.b.conj() * self.b + self.d.conj() * self.d;
        (e00 - 1.0).norm() <= tol
            && e01.norm() <= tol
            && e10.norm() <= tol
            && (e11 - 1.0).norm() <= tol
    }
}

/// Decomposition of a coin into its left-routing part `p` (top row) and
/// right-routing part `q` (bottom row), with `p + q` recovering the coin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSplit {
    pub p: Coin,
    pub q: Coin,
}

impl CoinSplit {
    /// Entrywise sum `p + q`.
    pub fn recombine(&self) -> Coin {
        Coin::new(
            self.p.a + self.q.a,
            self.p.b + self.q.b,
            self.p.c + self.q.c,
            self.p.d + self.q.d,
        )
    }
}

/// Split `u` into `[[a, b], [0, 0]]` and `[[0, 0], [c, d]]`.
pub fn split_coin(u: &Coin) -> CoinSplit {
    let zero = Complex64::new(0.0, 0.0);
    CoinSplit {
        p: Coin::new(u.a, u.b, zero, zero),
        q: Coin::new(zero, zero, u.c, u.d),
    }
}

/// Coin assignment over the whole line: a bulk coin plus finitely many
/// per-site overrides. The single-defect model overrides only the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinField {
    bulk: Coin,
    overrides: BTreeMap<i64, Coin>,
    phase: Option<f64>,
}

impl CoinField {
    /// The same coin at every site.
    pub fn uniform(bulk: Coin) -> Result<Self> {
        Self::with_overrides(bulk, &[])
    }

    /// A bulk coin with arbitrary per-site overrides. Every coin must be
    /// unitary. This is the extension point for multi-defect experiments;
    /// the closed forms elsewhere in this crate cover only the single
    /// origin defect built by [`build_wojcik_coin_field`].
    pub fn with_overrides(bulk: Coin, overrides: &[(i64, Coin)]) -> Result<Self> {
        if !bulk.is_unitary(UNITARITY_TOL) {
            return Err(Error::Domain("bulk coin is not unitary".into()));
        }
        let mut map = BTreeMap::new();
        for (x, coin) in overrides {
            if !coin.is_unitary(UNITARITY_TOL) {
                return Err(Error::Domain(format!(
                    "override coin at x = {x} is not unitary"
                )));
            }
            map.insert(*x, *coin);
        }
        Ok(Self {
            bulk,
            overrides: map,
            phase: None,
        })
    }

    /// The coin applied at site `x`.
    pub fn coin_at(&self, x: i64) -> &Coin {
        self.overrides.get(&x).unwrap_or(&self.bulk)
    }

    pub fn bulk(&self) -> &Coin {
        &self.bulk
    }

    /// The origin coin (equal to the bulk coin when nothing overrides it).
    pub fn defect_coin(&self) -> &Coin {
        self.coin_at(0)
    }

    /// The defect phase parameter, when the field was built from one.
    pub fn phase(&self) -> Option<f64> {
        self.phase
    }
}

/// Hadamard coins everywhere except the origin, whose coin is the Hadamard
/// coin times `e^{2 pi i phi}`. Requires `0 < phi < 1`.
pub fn build_wojcik_coin_field(phi: f64) -> Result<CoinField> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::Domain(format!(
            "phi = {phi} outside the open interval (0, 1)"
        )));
    }
    let h = Coin::hadamard();
    let omega = Complex64::from_polar(1.0, 2.0 * PI * phi);
    let mut overrides = BTreeMap::new();
    overrides.insert(0, h.scaled(omega));
    Ok(CoinField {
        bulk: h,
        overrides,
        phase: Some(phi),
    })
}

/// Walk state on the truncated lattice `[-L, L]`, stored densely from
/// `x = -L` upward, together with the step counter and a sticky flag that
/// records whether weight ever reached the truncation boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    half_width: i64,
    sites: Vec<Amplitude>,
    time: u64,
    boundary_leak: bool,
}

impl WalkState {
    /// The zero state on `[-L, L]`.
    pub fn zero(half_width: i64) -> Self {
        assert!(half_width >= 1, "half_width must be at least 1");
        let len = (2 * half_width + 1) as usize;
        Self {
            half_width,
            sites: vec![Amplitude::zero(); len],
            time: 0,
            boundary_leak: false,
        }
    }

    /// A state carrying `origin` at x = 0 and zero elsewhere.
    pub fn localized(half_width: i64, origin: Amplitude) -> Self {
        let mut state = Self::zero(half_width);
        state.set_amp(0, origin);
        state
    }

    /// A state from explicit site values, ordered from `x = -L` to `x = L`.
    pub fn from_sites(half_width: i64, sites: Vec<Amplitude>) -> Self {
        assert!(half_width >= 1, "half_width must be at least 1");
        assert_eq!(
            sites.len(),
            (2 * half_width + 1) as usize,
            "site vector length must be 2 * half_width + 1"
        );
        Self {
            half_width,
            sites,
            time: 0,
            boundary_leak: false,
        }
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// True once any step has left more than [`LEAK_THRESHOLD`] of the total
    /// weight on the outer two sites of either edge.
    pub fn boundary_leak(&self) -> bool {
        self.boundary_leak
    }

    pub fn sites(&self) -> &[Amplitude] {
        &self.sites
    }

    fn index(&self, x: i64) -> usize {
        (x + self.half_width) as usize
    }

    /// Amplitude at site `x`; zero outside the window.
    pub fn amp(&self, x: i64) -> Amplitude {
        if x.abs() > self.half_width {
            Amplitude::zero()
        } else {
            self.sites[self.index(x)]
        }
    }

    pub fn set_amp(&mut self, x: i64, value: Amplitude) {
        assert!(
            x.abs() <= self.half_width,
            "site {x} outside the lattice window"
        );
        let i = self.index(x);
        self.sites[i] = value;
    }

    /// Fraction of the total weight on `|x| in {L-1, L}`; zero for the zero
    /// state.
    pub fn edge_fraction(&self) -> f64 {
        let total: f64 = self.sites.iter().map(Amplitude::weight).sum();
        if total == 0.0 {
            return 0.0;
        }
        let l = self.half_width;
        let edge = self.amp(-l).weight()
            + self.amp(-l + 1).weight()
            + self.amp(l - 1).weight()
            + self.amp(l).weight();
        edge / total
    }
}

/// One step of the walk: coin at the departure site, then shift. Site order
/// is fixed (left to right), so repeated runs are bit-identical. The output
/// keeps the input's leak flag and additionally sets it when the new state
/// has more than [`LEAK_THRESHOLD`] of its weight on the edge sites.
pub fn step(state: &WalkState, field: &CoinField) -> WalkState {
    let l = state.half_width;
    let mut next = WalkState::zero(l);
    for x in -l..=l {
        let from_right = if x < l {
            let v = field.coin_at(x + 1).apply(&state.amp(x + 1));
            v.left
        } else {
            Complex64::new(0.0, 0.0)
        };
        let from_left = if x > -l {
            let v = field.coin_at(x - 1).apply(&state.amp(x - 1));
            v.right
        } else {
            Complex64::new(0.0, 0.0)
        };
        next.set_amp(x, Amplitude::new(from_right, from_left));
    }
    next.time = state.time + 1;
    next.boundary_leak = state.boundary_leak || next.edge_fraction() > LEAK_THRESHOLD;
    next
}

/// `n` steps of [`step`].
pub fn evolve(state: &WalkState, field: &CoinField, n: u64) -> WalkState {
    let mut current = state.clone();
    for _ in 0..n {
        current = step(&current, field);
    }
    current
}

/// Site weights of a state, indexed like the state itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    half_width: i64,
    values: Vec<f64>,
}

impl Measure {
    pub fn from_values(half_width: i64, values: Vec<f64>) -> Self {
        assert_eq!(
            values.len(),
            (2 * half_width + 1) as usize,
            "value vector length must be 2 * half_width + 1"
        );
        assert!(
            values.iter().all(|v| *v >= 0.0),
            "measure entries must be non-negative"
        );
        Self { half_width, values }
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at site `x`, which must lie inside the window.
    pub fn at(&self, x: i64) -> f64 {
        assert!(
            x.abs() <= self.half_width,
            "site {x} outside the lattice window"
        );
        self.values[(x + self.half_width) as usize]
    }

    /// Sites and values from `x = -L` to `x = L`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let l = self.half_width;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (i as i64 - l, *v))
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Weight of each site of `state`.
pub fn measure(state: &WalkState) -> Measure {
    Measure::from_values(
        state.half_width,
        state.sites.iter().map(Amplitude::weight).collect(),
    )
}

/// Total weight of the state (1 for a normalized state under unitary coins,
/// up to rounding).
pub fn total_norm(state: &WalkState) -> f64 {
    state.sites.iter().map(Amplitude::weight).sum()
}

/// Average of the site measures of the first `horizon` states
/// `state, step(state), ..., step^{horizon-1}(state)`.
///
/// A large time average at the origin is the empirical signature of a
/// localized component in the initial state. Fails with
/// [`Error::BoundaryLeak`] if any accumulated state has reached the lattice
/// boundary, since the average would then depend on the truncation.
pub fn time_averaged_measure(
    state: &WalkState,
    field: &CoinField,
    horizon: u64,
) -> Result<Measure> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let mut current = state.clone();
    let mut acc = vec![0.0_f64; current.sites.len()];
    for n in 0..horizon {
        if current.boundary_leak() {
            return Err(Error::BoundaryLeak {
                fraction: current.edge_fraction(),
            });
        }
        for (slot, site) in acc.iter_mut().zip(current.sites.iter()) {
            *slot += site.weight();
        }
        if n + 1 < horizon {
            current = step(&current, field);
        }
    }
    let inv = 1.0 / horizon as f64;
    Ok(Measure::from_values(
        state.half_width,
        acc.into_iter().map(|v| v * inv).collect(),
    ))
}
