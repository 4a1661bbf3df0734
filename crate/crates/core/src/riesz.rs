//! Biorthogonal Riesz pairs `(φ̂₀, ψ̂₀)` built from smooth bumps.
//!
//! Both profiles are supported in `[−3π/2, 3π/2]^d` and equal to a positive
//! constant on `[−π/2, π/2]^d`. Their integer translates are biorthogonal:
//! `Σ_k conj(φ̂₀(ξ − 2πk))·ψ̂₀(ξ − 2πk) = (2π)^{−d}` for every `ξ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::fft;
use crate::lattice::{ContinuumProxy, Domain, LatticeField};
use crate::symbols::MAX_DIM;

const TWO_PI: f64 = 2.0 * PI;

/// Transition profile of the one-dimensional bump.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ramp {
    /// `S(x) = f(x)/(f(x) + f(1−x))` with `f(x) = exp(−1/x)`.
    #[default]
    ExpStep,
}

impl Ramp {
    /// Smooth step on `[0, 1]`: 0 at 0, 1 at 1.
    #[inline]
    pub fn step(&self, x: f64) -> f64 {
        match self {
            Ramp::ExpStep => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    let a = (-1.0 / x).exp();
                    let b = (-1.0 / (1.0 - x)).exp();
                    a / (a + b)
                }
            }
        }
    }
}

/// Tensor-product bump, 1 on `[−π, π]^d` and 0 outside `[−3π/2, 3π/2]^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpProfile {
    dim: usize,
    ramp: Ramp,
}

impl BumpProfile {
    pub fn new(dim: usize, ramp: Ramp) -> Result<BumpProfile> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Parameter(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        Ok(BumpProfile { dim, ramp })
    }

    pub fn standard(dim: usize) -> Result<BumpProfile> {
        BumpProfile::new(dim, Ramp::ExpStep)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One axis factor.
    #[inline]
    pub fn axis(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= PI {
            1.0
        } else if a >= 1.5 * PI {
            0.0
        } else {
            self.ramp.step((1.5 * PI - a) / (0.5 * PI))
        }
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        xi.iter().map(|&t| self.axis(t)).product()
    }
}

type ProfileFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A Fourier-side profile `R^d → C`.
#[derive(Clone)]
pub struct Profile {
    dim: usize,
    eval: ProfileFn,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile(d={})", self.dim)
    }
}

impl Profile {
    pub fn new(dim: usize, eval: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Profile {
        Profile { dim, eval: Arc::new(eval) }
    }

    pub fn zero(dim: usize) -> Profile {
        Profile::new(dim, |_| Complex64::new(0.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn value(&self, xi: &[f64]) -> Complex64 {
        (self.eval)(xi)
    }

    pub fn scaled(&self, factor: Complex64) -> Profile {
        let inner = self.eval.clone();
        Profile::new(self.dim, move |xi| factor * inner(xi))
    }

    /// `ξ ↦ p(ξ − offset)`.
    pub fn shifted(&self, offset: &[f64]) -> Profile {
        let inner = self.eval.clone();
        let offset = offset.to_vec();
        Profile::new(self.dim, move |xi| {
            let mut buf = [0.0; MAX_DIM];
            for (k, (&x, &o)) in xi.iter().zip(&offset).enumerate() {
                buf[k] = x - o;
            }
            inner(&buf[..xi.len()])
        })
    }
}

/// Per-axis factors of a separable profile.
#[derive(Clone, Copy, Debug, PartialEq)]
struct AxisFactor {
    bump: BumpProfile,
    other: BumpProfile,
    power: f64,
    scale: f64,
}

impl AxisFactor {
    /// `scale · u(t) / v(t)^power` with `v(t) = Σ_k u(t−2πk)·w(t−2πk)`.
    fn value(&self, t: f64) -> f64 {
        let u = self.bump.axis(t);
        if u == 0.0 {
            return 0.0;
        }
        let base = t - TWO_PI * (t / TWO_PI).round();
        let v: f64 = (-1..=1)
            .map(|k| {
                let s = base - TWO_PI * k as f64;
                self.bump.axis(s) * self.other.axis(s)
            })
            .sum();
        self.scale * u / v.powf(self.power)
    }
}

/// A biorthogonal pair of Fourier profiles with its certificates.
#[derive(Clone, Debug)]
pub struct RieszPair {
    dim: usize,
    delta: f64,
    phi: Profile,
    psi: Profile,
    lower_bound: f64,
    tau: f64,
    psi_axis: Option<(Profile, usize)>,
}

impl RieszPair {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phi(&self) -> &Profile {
        &self.phi
    }

    pub fn psi(&self) -> &Profile {
        &self.psi
    }

    /// `c₀` with `|φ̂₀|, |ψ̂₀| ≥ c₀` on `[−π/2, π/2]^d`.
    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    /// Declared decay exponent of `ψ₀`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn with_tau(mut self, tau: f64) -> Result<RieszPair> {
        if !(tau > self.dim as f64) {
            return Err(Error::Parameter(format!("decay exponent τ = {tau} must exceed d = {}", self.dim)));
        }
        self.tau = tau;
        Ok(self)
    }

    /// A pair from arbitrary profiles, without any certificate. Used to probe
    /// the checks with deliberately broken data.
    pub fn from_profiles(phi: Profile, psi: Profile, delta: f64) -> Result<RieszPair> {
        if phi.dim() != psi.dim() {
            return Err(Error::Shape("profiles of different dimension".into()));
        }
        let dim = phi.dim();
        Ok(RieszPair { dim, delta, phi, psi, lower_bound: 0.0, tau: f64::INFINITY, psi_axis: None })
    }

    /// The standard pair: equal bumps, `δ = 1/2`, so `φ̂₀ = ψ̂₀`.
    pub fn standard(dim: usize) -> Result<RieszPair> {
        let u = BumpProfile::standard(dim)?;
        build_pair(u, u, 0.5)
    }

    /// `ψ̂₀` restricted to one axis when the pair is a tensor product of
    /// identical factors; `ψ̂₀(ξ) = Π ψ_axis(ξᵢ)`.
    pub fn psi_axis(&self) -> Option<&Profile> {
        self.psi_axis.as_ref().map(|(p, _)| p)
    }
}

/// Pair configuration as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub ramp: Ramp,
}

fn default_delta() -> f64 {
    0.5
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec { delta: 0.5, ramp: Ramp::ExpStep }
    }
}

impl PairSpec {
    pub fn build(&self, dim: usize) -> Result<RieszPair> {
        let u = BumpProfile::new(dim, self.ramp)?;
        build_pair(u, u, self.delta)
    }
}

/// `φ̂₀ = (2π)^{−dδ}u₁/v^δ`, `ψ̂₀ = (2π)^{−d(1−δ)}u₂/v^{1−δ}` with the
/// periodization `v(ξ) = Σ_k u₁(ξ−2πk)u₂(ξ−2πk)`.
pub fn build_pair(u1: BumpProfile, u2: BumpProfile, delta: f64) -> Result<RieszPair> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Parameter(format!("split exponent must lie in [0, 1], got {delta}")));
    }
    if u1.dim != u2.dim {
        return Err(Error::Shape("bumps of different dimension".into()));
    }
    let dim = u1.dim;
    let phi_axis = AxisFactor { bump: u1, other: u2, power: delta, scale: TWO_PI.powf(-delta) };
    let psi_axis = AxisFactor { bump: u2, other: u1, power: 1.0 - delta, scale: TWO_PI.powf(-(1.0 - delta)) };
    // v is a product of per-axis periodizations because the bumps are tensor products.
    let phi = Profile::new(dim, move |xi| Complex64::new(xi.iter().map(|&t| phi_axis.value(t)).product(), 0.0));
    let psi = Profile::new(dim, move |xi| Complex64::new(xi.iter().map(|&t| psi_axis.value(t)).product(), 0.0));
    let axis = Profile::new(1, move |t| Complex64::new(psi_axis.value(t[0]), 0.0));
    let d = dim as f64;
    // On [−π/2, π/2] only the k = 0 shift contributes, so v = 1 there.
    let lower_bound = TWO_PI.powf(-d * delta).min(TWO_PI.powf(-d * (1.0 - delta)));
    Ok(RieszPair { dim, delta, phi, psi, lower_bound, tau: f64::INFINITY, psi_axis: Some((axis, dim)) })
}

/// Visits every shift `k ∈ {−1, 0, 1}^d`.
fn for_each_shift(dim: usize, mut f: impl FnMut(&[f64])) {
    let count = 3usize.pow(dim as u32);
    let mut k = [0.0; MAX_DIM];
    for code in 0..count {
        let mut c = code;
        for slot in k.iter_mut().take(dim) {
            *slot = (c % 3) as f64 - 1.0;
            c /= 3;
        }
        f(&k[..dim]);
    }
}

fn shifted_point(xi: &[f64], k: &[f64], buf: &mut [f64; MAX_DIM]) -> usize {
    for (i, (&x, &kk)) in xi.iter().zip(k).enumerate() {
        buf[i] = x - TWO_PI * kk;
    }
    xi.len()
}

/// `max |Σ_{|kᵢ|≤1} conj(φ̂₀(ξ−2πk))ψ̂₀(ξ−2πk) − (2π)^{−d}|` over the samples.
pub fn biorthogonality_defect(pair: &RieszPair, samples: &[Vec<f64>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("no sample points".into()));
    }
    let target = TWO_PI.powi(-(pair.dim as i32));
    let mut worst = 0.0f64;
    let mut buf = [0.0; MAX_DIM];
    for xi in samples {
        if xi.len() != pair.dim {
            return Err(Error::Shape("sample point has wrong dimension".into()));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for_each_shift(pair.dim, |k| {
            let n = shifted_point(xi, k, &mut buf);
            sum += pair.phi.value(&buf[..n]).conj() * pair.psi.value(&buf[..n]);
        });
        worst = worst.max((sum - target).norm());
    }
    Ok(worst)
}

/// Lower and upper translate-Riesz bounds of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    pub lower: f64,
    pub upper: f64,
    /// Set when the lower bound is numerically zero.
    pub degenerate: bool,
}

/// `(min, max)` over the samples of `(2π)^d Σ_{|kᵢ|≤1} |p(ξ−2πk)|²`.
pub fn riesz_bounds(profile: &Profile, samples: &[Vec<f64>]) -> Result<RieszBounds> {
    if samples.is_empty() {
        return Err(Error::Domain("no sample points".into()));
    }
    let scale = TWO_PI.powi(profile.dim as i32);
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    let mut buf = [0.0; MAX_DIM];
    for xi in samples {
        let mut sum = 0.0;
        for_each_shift(profile.dim, |k| {
            let n = shifted_point(xi, k, &mut buf);
            sum += profile.value(&buf[..n]).norm_sqr();
        });
        lower = lower.min(scale * sum);
        upper = upper.max(scale * sum);
    }
    let degenerate = lower <= 1e-14;
    if degenerate {
        log::warn!("profile is degenerate: lower Riesz bound {lower:e}");
    }
    Ok(RieszBounds { lower, upper, degenerate })
}

/// Uniform tensor samples of `[−π, π]^d`, `per_axis` points per axis.
pub fn cell_samples(dim: usize, per_axis: usize) -> Vec<Vec<f64>> {
    let count = per_axis.pow(dim as u32);
    let step = TWO_PI / (per_axis.max(2) - 1) as f64;
    (0..count)
        .map(|code| {
            let mut c = code;
            (0..dim)
                .map(|_| {
                    let i = c % per_axis;
                    c /= per_axis;
                    -PI + step * i as f64
                })
                .collect()
        })
        .collect()
}

/// Result of the real-space decay check of `ψ₀`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub tau: f64,
    pub radius: f64,
    /// Smallest `C` with `|ψ₀(x)| ≤ C(1+|x|)^{−τ}` on the sampled ball.
    pub constant: f64,
    /// Least-squares slope of the log tail envelope against `log |x|` on `[10, R]`.
    pub empirical_slope: f64,
    pub passed: bool,
}

/// Number of points of the periodic grid used to synthesize `ψ₀`.
pub const DECAY_GRID_POINTS: usize = 1 << 16;

/// Samples `ψ₀` on a periodic grid of `DECAY_GRID_POINTS` points with the given
/// mesh and checks `|ψ₀(x)| ≤ C(1+|x|)^{−τ}` for `|x| ≤ radius`.
///
/// Higher-dimensional separable pairs are checked through their axis factor.
pub fn decay_check(pair: &RieszPair, tau: f64, radius: f64, fine_mesh: f64) -> Result<DecayReport> {
    if !(tau > pair.dim as f64) {
        return Err(Error::Parameter(format!("decay exponent τ = {tau} must exceed d = {}", pair.dim)));
    }
    let period = fine_mesh * DECAY_GRID_POINTS as f64;
    if !(radius > 10.0) || period < 4.0 * radius {
        return Err(Error::Configuration(format!(
            "sampling period {period} must be at least 4R = {} with R > 10",
            4.0 * radius
        )));
    }
    let profile = if pair.dim == 1 {
        pair.psi.clone()
    } else {
        pair.psi_axis()
            .cloned()
            .ok_or_else(|| Error::Configuration("decay check in d > 1 needs a separable pair".into()))?
    };
    let n = DECAY_GRID_POINTS;
    let dxi = TWO_PI / period;
    let mut spec: Vec<Complex64> = (0..n)
        .map(|i| {
            let m = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
            profile.value(&[m * dxi])
        })
        .collect();
    fft::transform_1d(&mut spec, true);
    let scale = dxi / TWO_PI.sqrt();
    // Folded onto |x|: psi0 at x = m·mesh for m ≥ 0, and its mirror.
    let mut radial: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let m = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        let x = (m * fine_mesh).abs();
        if x <= radius {
            radial.push((x, (spec[i] * scale).norm()));
        }
    }
    radial.sort_by(|a, b| a.0.total_cmp(&b.0));

    let constant = radial.iter().map(|&(x, v)| v * (1.0 + x).powf(tau)).fold(0.0, f64::max);
    let peak = radial.iter().map(|p| p.1).fold(0.0, f64::max);
    let floor = 1e-12 * peak;

    // Tail-sup envelope at log-spaced radii.
    let mut tail = vec![0.0; radial.len()];
    let mut running = 0.0f64;
    for i in (0..radial.len()).rev() {
        running = running.max(radial[i].1);
        tail[i] = running;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let bins = 40;
    for b in 0..bins {
        let r = 10.0 * (radius / 10.0).powf(b as f64 / (bins - 1) as f64);
        let idx = radial.partition_point(|p| p.0 < r);
        if idx < radial.len() && tail[idx] > floor {
            xs.push(r.ln());
            ys.push(tail[idx].ln());
        }
    }
    let empirical_slope = if xs.len() >= 2 {
        let k = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
    } else {
        f64::NEG_INFINITY
    };
    Ok(DecayReport { tau, radius, constant, empirical_slope, passed: constant.is_finite() })
}

/// Decay exponent supported by the data: the magnitude of the empirical
/// tail slope of `ψ₀` over `[10, 32]`, sampled with mesh `2⁻⁸`.
pub fn verified_tau(pair: &RieszPair) -> Result<f64> {
    let report = decay_check(pair, pair.dim as f64 + 1.0, 32.0, 2f64.powi(-8))?;
    let tau = -report.empirical_slope;
    if !(tau > pair.dim as f64) {
        return Err(Error::Construction(format!("ψ₀ decays too slowly: empirical slope {}", report.empirical_slope)));
    }
    Ok(tau)
}

/// A field `f` on the proxy with `K_h f = 0`, returned in frequency form.
///
/// With `ζ = hη` and `n` the index of the `2π`-cell holding `ζ₁`:
/// `f̂(η) = conj ψ̂₀(ζ + 2πe₁)` for even `n`, `−conj ψ̂₀(ζ − 2πe₁)` for odd `n`.
/// The folded sum then cancels pairwise between cells `2k` and `2k+1`.
pub fn kernel_witness(pair: &RieszPair, proxy: &ContinuumProxy) -> Result<LatticeField> {
    let fine = proxy.fine();
    if fine.dim() != pair.dim {
        return Err(Error::Shape("pair and grid dimensions differ".into()));
    }
    let coarse_n = proxy.coarse().n() as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); fine.len()];
    let mut zeta = [0.0; MAX_DIM];
    for (flat, slot) in values.iter_mut().enumerate() {
        let idx = fine.multi_index(flat);
        for k in 0..pair.dim {
            zeta[k] = TWO_PI * fine.signed(idx[k]) as f64 / coarse_n;
        }
        let cell = ((zeta[0] + PI) / TWO_PI).floor() as i64;
        let (shift, sign) = if cell.rem_euclid(2) == 0 { (TWO_PI, 1.0) } else { (-TWO_PI, -1.0) };
        zeta[0] += shift;
        *slot = sign * pair.psi.value(&zeta[..pair.dim]).conj();
    }
    let field = LatticeField::from_values(fine.clone(), Domain::Frequency, values)?;
    if field.norm() == 0.0 {
        return Err(Error::Construction("ψ̂₀ vanishes on every shifted cell".into()));
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(n: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![lo + (hi - lo) * i as f64 / (n - 1) as f64]).collect()
    }

    #[test]
    fn bump_shape() {
        let u = BumpProfile::standard(1).unwrap();
        assert_eq!(u.value(&[0.0]), 1.0);
        assert_eq!(u.value(&[PI]), 1.0);
        assert_eq!(u.value(&[1.5 * PI]), 0.0);
        assert_eq!(u.value(&[-2.0 * PI]), 0.0);
        let mid = u.value(&[1.25 * PI]);
        assert!((mid - 0.5).abs() < 1e-15);
        for p in line(10_001, -5.0, 5.0) {
            let v = u.value(&p);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn symmetric_pair_is_self_dual() {
        let pair = RieszPair::standard(1).unwrap();
        for p in line(2001, -5.0, 5.0) {
            assert_eq!(pair.phi().value(&p), pair.psi().value(&p));
        }
    }

    #[test]
    fn delta_zero_gives_raw_bump() {
        let u = BumpProfile::standard(2).unwrap();
        let pair = build_pair(u, u, 0.0).unwrap();
        for p in cell_samples(2, 41) {
            let q: Vec<f64> = p.iter().map(|x| 1.4 * x).collect();
            assert!((pair.phi().value(&q).re - u.value(&q)).abs() < 1e-15);
        }
        assert!(build_pair(u, u, 1.5).is_err());
        assert!(build_pair(u, u, -0.1).is_err());
    }

    #[test]
    fn defect_examples() {
        let pair = RieszPair::standard(1).unwrap();
        let samples = line(10_001, -PI, PI);
        assert!(biorthogonality_defect(&pair, &samples).unwrap() < 1e-10);

        let halved = RieszPair::from_profiles(pair.phi().clone(), pair.psi().scaled(0.5.into()), 0.5).unwrap();
        let d = biorthogonality_defect(&halved, &samples).unwrap();
        assert!((d - 0.0795775).abs() < 1e-7, "{d}");

        let disjoint = RieszPair::from_profiles(pair.phi().clone(), pair.psi().shifted(&[3.0 * PI]), 0.5).unwrap();
        let d = biorthogonality_defect(&disjoint, &samples).unwrap();
        assert!((d - 1.0 / TWO_PI).abs() < 1e-15);
    }

    #[test]
    fn bounds_examples() {
        let pair = RieszPair::standard(1).unwrap();
        let samples = line(4001, -PI, PI);
        let b = riesz_bounds(pair.phi(), &samples).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);

        // Raw bump: (2π)Σ|u|² over translates is 2π·v; compare against a dense v oracle.
        let u = BumpProfile::standard(1).unwrap();
        let raw = Profile::new(1, move |x| Complex64::new(u.value(x), 0.0));
        let b = riesz_bounds(&raw, &samples).unwrap();
        let v: Vec<f64> = samples
            .iter()
            .map(|p| (-1..=1).map(|k| u.value(&[p[0] - TWO_PI * k as f64]).powi(2)).sum())
            .collect();
        let vmax = v.iter().cloned().fold(0.0, f64::max);
        let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(b.upper >= b.lower && b.lower > 0.0);
        assert!((b.upper / b.lower - vmax / vmin).abs() < 1e-12);

        let b = riesz_bounds(&Profile::zero(1), &samples).unwrap();
        assert!(b.degenerate);
    }

    #[test]
    fn certificates_hold_on_dense_samples() {
        let pair = RieszPair::standard(1).unwrap();
        let c0 = pair.lower_bound();
        for p in line(100_000, -0.5 * PI, 0.5 * PI) {
            assert!(pair.phi().value(&p).norm() >= c0 - 1e-15);
            assert!(pair.psi().value(&p).norm() >= c0 - 1e-15);
        }
        for p in line(10_000, 1.5 * PI, 10.0) {
            assert_eq!(pair.phi().value(&p).norm(), 0.0);
            assert_eq!(pair.phi().value(&[-p[0]]).norm(), 0.0);
        }
    }

    #[test]
    fn defect_vanishes_for_every_split() {
        for delta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for d in 1..=2 {
                let u = BumpProfile::standard(d).unwrap();
                let pair = build_pair(u, u, delta).unwrap();
                let samples = cell_samples(d, if d == 1 { 2001 } else { 61 });
                assert!(biorthogonality_defect(&pair, &samples).unwrap() < 1e-10);
                assert!(riesz_bounds(pair.phi(), &samples).unwrap().lower > 0.0);
                assert!(riesz_bounds(pair.psi(), &samples).unwrap().lower > 0.0);
            }
        }
    }

    #[test]
    fn decay_of_smooth_pair() {
        let pair = RieszPair::standard(1).unwrap();
        let rep = decay_check(&pair, 2.0, 32.0, 2f64.powi(-8)).unwrap();
        assert!(rep.passed && rep.constant.is_finite());
        assert!(rep.empirical_slope <= -3.0, "slope {}", rep.empirical_slope);
        assert!(matches!(decay_check(&pair, 1.0, 32.0, 2f64.powi(-8)), Err(Error::Parameter(_))));
        assert!(matches!(decay_check(&pair, 2.0, 32.0, 2f64.powi(-12)), Err(Error::Configuration(_))));
    }

    proptest! {
        #[test]
        fn defect_small_at_random_points(delta in 0.0f64..=1.0, x in -PI..PI, y in -PI..PI) {
            let u = BumpProfile::standard(2).unwrap();
            let pair = build_pair(u, u, delta).unwrap();
            prop_assert!(biorthogonality_defect(&pair, &[vec![x, y]]).unwrap() < 1e-12);
        }
    }
}
