//! Fourier multiplier symbols `G₀`, their lattice discretizations `G₀,h`, and
//! the convergence rate predicted for each multiplier class.
//!
//! A symbol is evaluated at frequencies `ξ ∈ R^d`. Its lattice counterpart
//! replaces every coordinate `ξᵢ` by `(2/h)·sin(h·ξᵢ/2)`, which turns the
//! multiplier into a `(2π/h)Z^d`-periodic function on the Brillouin zone
//! `[−π/h, π/h]^d`. For `G₀(ξ) = |ξ|²` this is exactly the symbol of the
//! standard second-order difference Laplacian.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 3;

/// Multiplier class together with its exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SymbolClass {
    /// `C¹` symbols with growth exponent `alpha` and gradient exponent `beta`.
    ClassI { alpha: f64, beta: f64 },
    /// `|ξ|^alpha` plus a `C¹` remainder whose gradient grows like `|ξ|^beta_tilde`.
    ClassII { alpha: f64, beta_tilde: f64 },
    /// Pure fractional power `|ξ|^alpha`, `0 < alpha ≤ 1`.
    ClassIII { alpha: f64 },
}

impl SymbolClass {
    pub fn alpha(&self) -> f64 {
        match *self {
            SymbolClass::ClassI { alpha, .. }
            | SymbolClass::ClassII { alpha, .. }
            | SymbolClass::ClassIII { alpha } => alpha,
        }
    }

    /// Checks the admissible parameter ranges of the class.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SymbolClass::ClassI { alpha, beta } => {
                alpha > 0.5
                    && beta > -0.5
                    && alpha <= 1.0 + beta
                    && 1.0 + beta < 2.0 * alpha
                    && 2.0 * alpha <= 3.0 + beta
            }
            SymbolClass::ClassII { alpha, beta_tilde } => {
                alpha > 0.5 && alpha <= 1.0 && beta_tilde >= 0.0 && 1.0 + beta_tilde < 2.0 * alpha
            }
            SymbolClass::ClassIII { alpha } => alpha > 0.0 && alpha <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("inadmissible class parameters {self:?}")))
        }
    }

    /// Rate of the free resolvent difference, before any potential is attached.
    pub fn free_rate(&self) -> f64 {
        match *self {
            SymbolClass::ClassI { alpha, beta } => (2.0 * alpha - 1.0).min(2.0 * alpha - beta - 1.0),
            SymbolClass::ClassII { alpha, beta_tilde } => 2.0 * alpha - beta_tilde - 1.0,
            SymbolClass::ClassIII { alpha } => alpha,
        }
    }
}

/// Identifies how a symbol was built.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolTag {
    FracLap(f64),
    Laplacian,
    BiLaplacian,
    PseudoRel(f64),
    Custom(String),
}

impl fmt::Display for SymbolTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolTag::FracLap(s) => write!(f, "fraclap(s={s})"),
            SymbolTag::Laplacian => write!(f, "laplacian"),
            SymbolTag::BiLaplacian => write!(f, "bilaplacian"),
            SymbolTag::PseudoRel(m) => write!(f, "pseudorel(m={m})"),
            SymbolTag::Custom(name) => write!(f, "{name}"),
        }
    }
}

/// Constants of the growth and gradient conditions.
///
/// `c` and `c0` enter the lower bound `G₀(ξ) ≥ c|ξ|^α` for `|ξ| ≥ c0`; `c_grad`
/// enters `|∇G₀(ξ)| ≤ c_grad·|ξ|^β`. A single constant cannot serve both
/// conditions for `|ξ|^s`, so they are kept apart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants {
    pub c: f64,
    pub c0: f64,
    pub c_grad: f64,
}

pub type SymbolFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Power(f64),
    PseudoRel(f64),
    Custom(SymbolFn),
}

/// A multiplier `G₀: R^d → [0, ∞)` with its declared class.
#[derive(Clone)]
pub struct Symbol {
    dim: usize,
    class: SymbolClass,
    tag: SymbolTag,
    growth: GrowthConstants,
    kind: Kind,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("dim", &self.dim)
            .field("tag", &self.tag)
            .field("class", &self.class)
            .field("growth", &self.growth)
            .finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Parameter(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
    }
    Ok(())
}

impl Symbol {
    /// `|ξ|^s`. Declared as class (iii) for `s ≤ 1`, as class (i) with
    /// `(α, β) = (s, s−1)` for `1 < s < 2` and `((s+2)/2, s−1)` for `s ≥ 2`.
    pub fn frac_lap(dim: usize, s: f64) -> Result<Symbol> {
        check_dim(dim)?;
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Parameter(format!("fractional order must be positive, got {s}")));
        }
        let class = if s <= 1.0 {
            SymbolClass::ClassIII { alpha: s }
        } else if s < 2.0 {
            SymbolClass::ClassI { alpha: s, beta: s - 1.0 }
        } else {
            SymbolClass::ClassI { alpha: (s + 2.0) / 2.0, beta: s - 1.0 }
        };
        let tag = if s == 2.0 {
            SymbolTag::Laplacian
        } else if s == 4.0 {
            SymbolTag::BiLaplacian
        } else {
            SymbolTag::FracLap(s)
        };
        Ok(Symbol {
            dim,
            class,
            tag,
            growth: GrowthConstants { c: 1.0, c0: 1.0, c_grad: s },
            kind: Kind::Power(s),
        })
    }

    pub fn laplacian(dim: usize) -> Result<Symbol> {
        Symbol::frac_lap(dim, 2.0)
    }

    pub fn bilaplacian(dim: usize) -> Result<Symbol> {
        Symbol::frac_lap(dim, 4.0)
    }

    /// `√(|ξ|² + m²) − m`, class (i) with `(α, β) = (1, 0)` for `m > 0`.
    /// For `m = 0` this is `|ξ|`, a class (iii) symbol.
    pub fn pseudo_rel(dim: usize, m: f64) -> Result<Symbol> {
        check_dim(dim)?;
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::Parameter(format!("mass must be non-negative, got {m}")));
        }
        if m == 0.0 {
            let mut sym = Symbol::frac_lap(dim, 1.0)?;
            sym.tag = SymbolTag::PseudoRel(0.0);
            return Ok(sym);
        }
        Ok(Symbol {
            dim,
            class: SymbolClass::ClassI { alpha: 1.0, beta: 0.0 },
            tag: SymbolTag::PseudoRel(m),
            // √(r²+m²) − m ≥ r/2 exactly when r ≥ 4m/3.
            growth: GrowthConstants { c: 0.5, c0: 2.0 * m, c_grad: 1.0 },
            kind: Kind::PseudoRel(m),
        })
    }

    /// A user-supplied symbol. Class and constants are declared, not inferred;
    /// [`validate_class`] can only falsify them.
    pub fn custom(
        dim: usize,
        name: &str,
        class: SymbolClass,
        growth: GrowthConstants,
        eval: SymbolFn,
    ) -> Result<Symbol> {
        check_dim(dim)?;
        Ok(Symbol {
            dim,
            class,
            tag: SymbolTag::Custom(name.to_string()),
            growth,
            kind: Kind::Custom(eval),
        })
    }

    /// Same symbol with a different declared class.
    pub fn with_class(mut self, class: SymbolClass) -> Symbol {
        self.class = class;
        self
    }

    pub fn with_growth(mut self, growth: GrowthConstants) -> Symbol {
        self.growth = growth;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class(&self) -> SymbolClass {
        self.class
    }

    pub fn tag(&self) -> &SymbolTag {
        &self.tag
    }

    pub fn growth(&self) -> GrowthConstants {
        self.growth
    }

    /// Checked evaluation of `G₀(ξ)`.
    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.dim {
            return Err(Error::Shape(format!(
                "expected a point in R^{}, got {} coordinates",
                self.dim,
                xi.len()
            )));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite frequency {xi:?}")));
        }
        Ok(self.value(xi))
    }

    /// Unchecked evaluation for inner loops; `xi.len()` must equal the dimension.
    #[inline]
    pub fn value(&self, xi: &[f64]) -> f64 {
        match &self.kind {
            Kind::Power(s) => {
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                if r2 == 0.0 {
                    0.0
                } else if *s == 2.0 {
                    r2
                } else if *s == 4.0 {
                    r2 * r2
                } else {
                    r2.powf(0.5 * s)
                }
            }
            Kind::PseudoRel(m) => {
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                // r²/(√(r²+m²)+m) avoids cancellation near the origin.
                r2 / ((r2 + m * m).sqrt() + m)
            }
            Kind::Custom(f) => f(xi),
        }
    }

    /// Value at a radial argument `r = |ξ|` for the builtin radial symbols;
    /// custom symbols are evaluated along the first axis.
    pub fn radial_value(&self, r: f64) -> f64 {
        let mut buf = [0.0; MAX_DIM];
        buf[0] = r;
        self.value(&buf[..self.dim])
    }
}

/// Configuration-file form of the builtin symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "symbol", rename_all = "lowercase")]
pub enum SymbolSpec {
    Fraclap { s: f64 },
    Laplacian,
    Bilaplacian,
    Pseudorel { m: f64 },
}

impl SymbolSpec {
    pub fn build(&self, dim: usize) -> Result<Symbol> {
        match *self {
            SymbolSpec::Fraclap { s } => Symbol::frac_lap(dim, s),
            SymbolSpec::Laplacian => Symbol::laplacian(dim),
            SymbolSpec::Bilaplacian => Symbol::bilaplacian(dim),
            SymbolSpec::Pseudorel { m } => Symbol::pseudo_rel(dim, m),
        }
    }
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolSpec::Fraclap { s } => write!(f, "fraclap(s={s})"),
            SymbolSpec::Laplacian => write!(f, "laplacian"),
            SymbolSpec::Bilaplacian => write!(f, "bilaplacian"),
            SymbolSpec::Pseudorel { m } => write!(f, "pseudorel(m={m})"),
        }
    }
}

/// The lattice multiplier `G₀,h(ξ) = G₀((2/h)sin(hξ₁/2), …)`.
#[derive(Clone, Debug)]
pub struct DiscretizedSymbol {
    parent: Symbol,
    h: f64,
}

impl DiscretizedSymbol {
    pub fn new(parent: Symbol, h: f64) -> Result<DiscretizedSymbol> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Parameter(format!("mesh size must be positive, got {h}")));
        }
        Ok(DiscretizedSymbol { parent, h })
    }

    pub fn parent(&self) -> &Symbol {
        &self.parent
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.parent.dim {
            return Err(Error::Shape(format!(
                "expected a point in R^{}, got {} coordinates",
                self.parent.dim,
                xi.len()
            )));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite frequency {xi:?}")));
        }
        Ok(self.value(xi))
    }

    #[inline]
    pub fn value(&self, xi: &[f64]) -> f64 {
        let mut mapped = [0.0; MAX_DIM];
        let scale = 2.0 / self.h;
        for (m, &x) in mapped.iter_mut().zip(xi) {
            *m = scale * (0.5 * self.h * x).sin();
        }
        self.parent.value(&mapped[..xi.len()])
    }
}

/// `θ′` from `1/θ′ = 1/θ + 1/(τ − d)`. An infinite `tau` gives `θ′ = θ`.
pub fn theta_prime(theta: f64, tau: f64, dim: usize) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Parameter(format!("Hölder exponent must lie in (0, 1], got {theta}")));
    }
    let excess = tau - dim as f64;
    if !(excess > 0.0) {
        return Err(Error::Parameter(format!("decay exponent τ = {tau} must exceed d = {dim}")));
    }
    if excess.is_infinite() {
        return Ok(theta);
    }
    Ok(1.0 / (1.0 / theta + 1.0 / excess))
}

/// Predicted exponent `γ` of the norm-resolvent error `≤ C·h^γ`.
///
/// `theta_prime` is the effective potential exponent, absent for `V ≡ 0`.
pub fn predicted_rate(sym: &Symbol, theta_prime: Option<f64>) -> Result<f64> {
    sym.class.validate()?;
    let free = sym.class.free_rate();
    match theta_prime {
        None => Ok(free),
        Some(tp) if tp > 0.0 => Ok(free.min(tp)),
        Some(tp) => Err(Error::Parameter(format!("θ′ must be positive, got {tp}"))),
    }
}

fn check_free_z(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::SpectralParameter(format!(
            "z = {z} lies in [0, ∞), the spectrum of the free operator"
        )));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::SpectralParameter(format!("non-finite z = {z}")));
    }
    Ok(())
}

/// Sampling of the box `hξ ∈ [−3π/2, 3π/2]^d` used by [`symbol_resolvent_gap`].
#[derive(Clone, Debug, PartialEq)]
pub struct GapSampling {
    pub per_axis: usize,
    pub random: usize,
    pub seed: u64,
}

impl Default for GapSampling {
    fn default() -> Self {
        GapSampling { per_axis: 512, random: 10_000, seed: 0x5eed }
    }
}

fn resolvent_gap_at(dsym: &DiscretizedSymbol, z: Complex64, xi: &[f64]) -> f64 {
    let gh = dsym.value(xi);
    let g = dsym.parent.value(xi);
    ((Complex64::new(gh, 0.0) - z).inv() - (Complex64::new(g, 0.0) - z).inv()).norm()
}

/// Largest `|(G₀,h(ξ) − z)⁻¹ − (G₀(ξ) − z)⁻¹|` over the given points.
pub fn symbol_resolvent_gap_on(dsym: &DiscretizedSymbol, z: Complex64, points: &[Vec<f64>]) -> Result<f64> {
    check_free_z(z)?;
    let mut best = 0.0f64;
    for p in points {
        if p.len() != dsym.parent.dim {
            return Err(Error::Shape("sample point has wrong dimension".into()));
        }
        best = best.max(resolvent_gap_at(dsym, z, p));
    }
    Ok(best)
}

/// Sup of the symbol-level resolvent difference over `hξ ∈ [−3π/2, 3π/2]^d`,
/// estimated on a tensor grid plus random points.
pub fn symbol_resolvent_gap(dsym: &DiscretizedSymbol, z: Complex64, sampling: &GapSampling) -> Result<f64> {
    check_free_z(z)?;
    let d = dsym.parent.dim;
    if sampling.per_axis < 2 {
        return Err(Error::Parameter("need at least two grid points per axis".into()));
    }
    let half = 1.5 * PI / dsym.h;
    let n = sampling.per_axis;
    let axis: Vec<f64> = (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect();
    let mut best = 0.0f64;
    let mut idx = vec![0usize; d];
    let mut xi = vec![0.0; d];
    let total = n.pow(d as u32);
    for _ in 0..total {
        for k in 0..d {
            xi[k] = axis[idx[k]];
        }
        best = best.max(resolvent_gap_at(dsym, z, &xi));
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    for _ in 0..sampling.random {
        for v in xi.iter_mut() {
            *v = rng.random_range(-half..=half);
        }
        best = best.max(resolvent_gap_at(dsym, z, &xi));
    }
    Ok(best)
}

/// One condition of a class-membership check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ZeroAtOrigin,
    NonNegative,
    GrowthLowerBound,
    GradientBound,
    ReflectionSymmetry,
    PurePower,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub passed: bool,
    /// Point with the largest violation (or the tightest margin when passing).
    pub worst_point: Vec<f64>,
    /// Largest ratio `observed / allowed`; values above one are violations.
    pub worst_ratio: f64,
    pub samples: usize,
}

/// Outcome of sampling-based class validation. Sampling can falsify a class
/// declaration but never prove it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub class: SymbolClass,
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, condition: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

struct Tracker {
    condition: Condition,
    worst_point: Vec<f64>,
    worst_ratio: f64,
    samples: usize,
    tol: f64,
}

impl Tracker {
    fn new(condition: Condition, tol: f64) -> Tracker {
        Tracker { condition, worst_point: Vec::new(), worst_ratio: f64::NEG_INFINITY, samples: 0, tol }
    }

    fn observe(&mut self, point: &[f64], ratio: f64) {
        self.samples += 1;
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.worst_point = point.to_vec();
        }
    }

    fn finish(self) -> ConditionCheck {
        let worst_ratio = if self.samples == 0 { 0.0 } else { self.worst_ratio };
        ConditionCheck {
            condition: self.condition,
            passed: worst_ratio <= 1.0 + self.tol,
            worst_point: self.worst_point,
            worst_ratio,
            samples: self.samples,
        }
    }
}

fn gradient(f: &dyn Fn(&[f64]) -> f64, xi: &[f64]) -> Vec<f64> {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let step = 1e-6 * (1.0 + norm);
    let mut p = xi.to_vec();
    (0..xi.len())
        .map(|k| {
            p[k] = xi[k] + step;
            let fp = f(&p);
            p[k] = xi[k] - step;
            let fm = f(&p);
            p[k] = xi[k];
            (fp - fm) / (2.0 * step)
        })
        .collect()
}

/// Sampling check of the declared class conditions.
///
/// Points are drawn with `|ξ|` log-uniform on `[10⁻³, 10⁸]`, random
/// directions, plus uniform points in `[−10, 10]^d`. Gradients use central
/// differences with step `10⁻⁶(1 + |ξ|)`.
pub fn validate_class(sym: &Symbol, sample_budget: usize, rng_seed: u64) -> Result<ValidationReport> {
    if sample_budget < 1000 {
        return Err(Error::Parameter(format!("sample budget must be at least 1000, got {sample_budget}")));
    }
    let d = sym.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(sample_budget);
    let radial = sample_budget * 3 / 4;
    for _ in 0..radial {
        let r = 10f64.powf(rng.random_range(-3.0..8.0));
        let mut dir: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        dir.iter_mut().for_each(|v| *v *= r / n);
        points.push(dir);
    }
    while points.len() < sample_budget {
        points.push((0..d).map(|_| rng.random_range(-10.0..10.0)).collect());
    }

    let class = sym.class;
    let g = sym.growth;
    let alpha = class.alpha();
    let full = |x: &[f64]| sym.value(x);
    let remainder = |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        sym.value(x) - r.powf(alpha)
    };

    let origin = vec![0.0; d];
    let mut checks = Vec::new();

    // Condition (1): value at the origin (of the remainder for class (ii)).
    let mut zero = Tracker::new(Condition::ZeroAtOrigin, 0.0);
    let g0 = match class {
        SymbolClass::ClassII { .. } => remainder(&origin),
        _ => full(&origin),
    };
    zero.observe(&origin, if g0.abs() <= 1e-14 { 0.0 } else { f64::INFINITY });
    checks.push(zero.finish());

    let mut nonneg = Tracker::new(Condition::NonNegative, 0.0);
    let mut symmetry = Tracker::new(Condition::ReflectionSymmetry, 0.0);
    let mut growth = Tracker::new(Condition::GrowthLowerBound, 1e-9);
    let mut grad = Tracker::new(Condition::GradientBound, 1e-6);
    let mut power = Tracker::new(Condition::PurePower, 0.0);
    let mut reflected = vec![0.0; d];

    for p in &points {
        let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        let value = full(p);
        let base = match class {
            SymbolClass::ClassII { .. } => remainder(p),
            _ => value,
        };
        nonneg.observe(p, if base >= -1e-12 * (1.0 + value.abs()) { 0.0 } else { f64::INFINITY });

        for (q, v) in reflected.iter_mut().zip(p) {
            *q = v.abs();
        }
        let mirror = full(&reflected);
        let rel = (value - mirror).abs() / value.abs().max(mirror.abs()).max(1e-300);
        symmetry.observe(p, if rel <= 1e-12 { 0.0 } else { rel / 1e-12 });

        match class {
            SymbolClass::ClassI { alpha, beta } => {
                if r >= g.c0 {
                    growth.observe(p, g.c * r.powf(alpha) / value.max(1e-300));
                }
                let gn = gradient(&full, p).iter().map(|v| v * v).sum::<f64>().sqrt();
                grad.observe(p, gn / (g.c_grad * r.powf(beta)).max(1e-300));
            }
            SymbolClass::ClassII { beta_tilde, .. } => {
                if r >= g.c0 {
                    let gn = gradient(&remainder, p).iter().map(|v| v * v).sum::<f64>().sqrt();
                    grad.observe(p, gn / (g.c_grad * r.powf(beta_tilde)).max(1e-300));
                }
            }
            SymbolClass::ClassIII { alpha } => {
                let expect = r.powf(alpha);
                let rel = (value - expect).abs() / expect.max(1e-300);
                power.observe(p, if rel <= 1e-10 { 0.0 } else { rel / 1e-10 });
            }
        }
    }
    checks.push(nonneg.finish());
    match class {
        SymbolClass::ClassI { .. } => {
            checks.push(growth.finish());
            checks.push(grad.finish());
        }
        SymbolClass::ClassII { .. } => checks.push(grad.finish()),
        SymbolClass::ClassIII { .. } => checks.push(power.finish()),
    }
    checks.push(symmetry.finish());
    Ok(ValidationReport { class, checks })
}
