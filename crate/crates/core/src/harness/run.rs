//! Runs one configured experiment over its mesh sweep.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind};
use super::fit::{fit_rate, RateReport};
use super::report::{emit, Check, Format, Report};
use crate::error::{Error, Result};
use crate::lattice::{projection_check, ContinuumProxy, Domain, LatticeField, LatticeGrid, LinearMap, Transfer};
use crate::resolvent::{
    error_norm_fiber, potential_commutator_norm, power_norm, y_blowup_scan, ErrorOperator, FiberSampling, NormMethod,
    PotentialSpec, PowerOptions,
};
use crate::riesz::{biorthogonality_defect, cell_samples, kernel_witness, verified_tau, RieszPair};
use crate::spectra::{
    continuum_spectrum, discrete_spectrum, gap_check, local_hausdorff, resolvent_spectrum_distance,
    spectral_projection_distance, track_eigenvalues, union_with_zero_check, Reference, SpectrumSet, Window,
};
use crate::symbols::{predicted_rate, Symbol};

/// Environment variable capping the worker pool.
pub const THREADS_VAR: &str = "FOURLAT_THREADS";

/// Worker pool sized from `FOURLAT_THREADS`, else one thread per core.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Configuration(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Configuration(format!("cannot build worker pool: {e}")))
}

struct Setup {
    symbol: Symbol,
    pair: RieszPair,
    potential: Option<PotentialSpec>,
}

impl Setup {
    fn new(cfg: &ExperimentConfig) -> Result<Setup> {
        let d = cfg.grid.d;
        let potential = match &cfg.potential {
            Some(k) => Some(k.build(d)?).filter(|v| !v.is_zero()),
            None => None,
        };
        Ok(Setup { symbol: cfg.symbol.build(d)?, pair: cfg.pair.build(d)?, potential })
    }

    fn potential(&self) -> Option<&PotentialSpec> {
        self.potential.as_ref()
    }

    fn require_potential(&self, kind: ExperimentKind) -> Result<&PotentialSpec> {
        self.potential().ok_or_else(|| Error::Configuration(format!("{} needs a non-zero potential", kind.name())))
    }

    fn theta_prime(&self) -> Result<Option<f64>> {
        match self.potential() {
            None => Ok(None),
            Some(v) => Ok(Some(v.theta_prime(verified_tau(&self.pair)?, self.symbol.dim())?)),
        }
    }

    fn gamma(&self, cfg: &ExperimentConfig) -> Result<f64> {
        match cfg.gamma {
            Some(g) => Ok(g),
            None => predicted_rate(&self.symbol, self.theta_prime()?),
        }
    }

    fn reference(&self, cfg: &ExperimentConfig) -> Result<Reference> {
        let box_length = cfg.grid.grid_at(cfg.h[0])?.box_length();
        Reference::new(&self.symbol, self.potential(), box_length, cfg.reference_mesh)
    }
}

fn proxy_at(cfg: &ExperimentConfig, h: f64) -> Result<ContinuumProxy> {
    ContinuumProxy::new(cfg.grid.grid_at(h)?, cfg.grid.refine)
}

fn power_opts(cfg: &ExperimentConfig) -> PowerOptions {
    PowerOptions { seed: cfg.seed ^ PowerOptions::default().seed, ..PowerOptions::default() }
}

fn window(cfg: &ExperimentConfig) -> Result<Window> {
    cfg.window.ok_or_else(|| Error::Configuration(format!("{} needs a window", cfg.kind.name())))
}

/// Evaluates `f` at every `h` in parallel; the result is sorted by decreasing `h`.
fn sweep(hs: &[f64], stage: &str, f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<(f64, f64)>> {
    let mut rows: Vec<(f64, f64)> =
        hs.par_iter().map(|&h| f(h).map(|e| (h, e)).map_err(|e| e.at_stage(h, stage))).collect::<Result<_>>()?;
    rows.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(rows)
}

/// Runs the experiment on the `FOURLAT_THREADS` pool and writes any
/// configured outputs.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let pool = thread_pool()?;
    let report = pool.install(|| run_kind(cfg))?;
    if let Some(p) = &cfg.output.csv {
        emit(&report, Format::Csv, p)?;
    }
    if let Some(p) = &cfg.output.json {
        emit(&report, Format::Json, p)?;
    }
    Ok(report)
}

fn run_kind(cfg: &ExperimentConfig) -> Result<Report> {
    let s = Setup::new(cfg)?;
    let mut report = Report::new(&cfg.experiment, cfg.kind, &s.symbol.tag().to_string());
    let tol = cfg.tolerance();
    match cfg.kind {
        ExperimentKind::IdentitySuite => identity_suite(cfg, &s, &mut report)?,
        ExperimentKind::RateFree => {
            if s.potential().is_some() {
                return Err(Error::Configuration("rate-free takes no potential; use rate-potential".into()));
            }
            let z = cfg.probe.z();
            report.rows = sweep(&cfg.h, "free error norm", |h| match cfg.probe.method {
                NormMethod::Fiber => {
                    let sampling = FiberSampling { seed: cfg.seed, ..FiberSampling::for_dim(cfg.grid.d) };
                    Ok(error_norm_fiber(&s.symbol, &s.pair, h, z, &sampling)?.norm)
                }
                NormMethod::Power => {
                    let op = ErrorOperator::new(&s.symbol, &s.pair, None, &proxy_at(cfg, h)?, z, cfg.probe.gmres())?;
                    Ok(power_norm(&op, &power_opts(cfg))?.norm)
                }
            })?;
            report.rate = Some(RateReport::new(&report.rows, s.gamma(cfg)?, tol, cfg.drop_largest)?);
        }
        ExperimentKind::RatePotential => {
            let v = s.require_potential(cfg.kind)?;
            let z = cfg.probe.z();
            report.rows = sweep(&cfg.h, "error norm", |h| {
                let op = ErrorOperator::new(&s.symbol, &s.pair, Some(v), &proxy_at(cfg, h)?, z, cfg.probe.gmres())?;
                Ok(power_norm(&op, &power_opts(cfg))?.norm)
            })?;
            report.rate = Some(RateReport::new(&report.rows, s.gamma(cfg)?, tol, cfg.drop_largest)?);
        }
        ExperimentKind::Commutator => {
            let v = s.require_potential(cfg.kind)?;
            report.rows = sweep(&cfg.h, "commutator", |h| {
                Ok(potential_commutator_norm(v, &s.pair, &proxy_at(cfg, h)?, &power_opts(cfg))?.norm)
            })?;
            let gamma = match cfg.gamma {
                Some(g) => g,
                None => s.theta_prime()?.expect("potential present"),
            };
            report.rate = Some(RateReport::new(&report.rows, gamma, tol, cfg.drop_largest)?);
        }
        ExperimentKind::SpectrumDistance => {
            let mu = cfg.window.map(|w| w.mu).unwrap_or_else(|| s.potential().map_or(1.0, |v| v.mu()));
            report.rows = sweep(&cfg.h, "spectrum distance", |h| {
                resolvent_spectrum_distance(&s.symbol, s.potential(), &proxy_at(cfg, h)?, mu)
            })?;
            report.rate = Some(RateReport::new(&report.rows, s.gamma(cfg)?, tol, cfg.drop_largest)?);
        }
        ExperimentKind::LocalSpectrum => local_spectrum(cfg, &s, &mut report)?,
        ExperimentKind::Gap => {
            let w = window(cfg)?;
            let reference = match s.potential() {
                Some(_) => Some(s.reference(cfg)?),
                None => None,
            };
            let grids: Vec<LatticeGrid> = cfg.h.iter().map(|&h| cfg.grid.grid_at(h)).collect::<Result<_>>()?;
            let gap = gap_check(&s.symbol, s.potential(), w.a, w.b, &grids, reference.as_ref())?;
            report.rows = gap.entries.iter().map(|e| (e.h, e.distance)).collect();
            report.checks = gap.entries.iter().map(|e| Check::flag("window-free", Some(e.h), e.empty)).collect();
            report.details = json!({ "onset": gap.onset, "a": w.a, "b": w.b });
        }
        ExperimentKind::Projection => {
            let w = window(cfg)?;
            let reference = s.reference(cfg)?;
            let gamma = s.gamma(cfg)?;
            report.rows = sweep(&cfg.h, "projection", |h| {
                let margin = (5.0 * h.powf(gamma)).max(1e-3);
                let d = spectral_projection_distance(
                    &s.symbol,
                    s.potential(),
                    &s.pair,
                    &proxy_at(cfg, h)?,
                    w.a,
                    w.b,
                    &reference,
                    margin,
                    &power_opts(cfg),
                )?;
                Ok(d.norm)
            })?;
            report.rate = Some(RateReport::new(&report.rows, gamma, tol, cfg.drop_largest)?);
        }
        ExperimentKind::EigenTrack => eigen_track(cfg, &s, &mut report)?,
        ExperimentKind::YBlowup => y_blowup(cfg, &s, &mut report)?,
    }
    Ok(report.finish())
}

fn identity_suite(cfg: &ExperimentConfig, s: &Setup, report: &mut Report) -> Result<()> {
    let d = cfg.grid.d;
    let h = cfg.grid.h.unwrap_or(1.0);
    let grid = LatticeGrid::new(d, h, cfg.grid.n.unwrap_or(256))?;
    let proxy = ContinuumProxy::new(grid.clone(), cfg.grid.refine)?;
    let stage = |e: Error, name: &str| e.at_stage(h, name);

    let per_axis = if d == 1 { 1024 } else { 32 };
    let bio = biorthogonality_defect(&s.pair, &cell_samples(d, per_axis)).map_err(|e| stage(e, "biorthogonality"))?;
    report.checks.push(Check::at_most("biorthogonality-defect", Some(h), bio, 1e-10));

    let transfer = Transfer::new(&s.pair, &proxy)?;
    let (j, k) = (transfer.embedding(), transfer.discretization());
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let u = LatticeField::random(grid.clone(), Domain::Frequency, cfg.seed.wrapping_add(trial)).into_values();
        let back = k.apply(&j.apply(&u)?)?;
        let num: f64 = back.iter().zip(&u).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = u.iter().map(|a| a.norm_sqr()).sum();
        worst = worst.max((num / den).sqrt());
    }
    report.checks.push(Check::at_most("discretize-embed-identity", Some(h), worst, 1e-8));

    let proj = projection_check(&s.pair, &proxy, 100, cfg.seed).map_err(|e| stage(e, "projection"))?;
    report.checks.push(Check::at_most("projection-idempotency", Some(h), proj.idempotency_residual, 1e-8));

    let f = kernel_witness(&s.pair, &proxy).map_err(|e| stage(e, "kernel witness"))?;
    let fnorm = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let kf = k.apply(f.values())?;
    let ratio = kf.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() / fnorm;
    report.checks.push(Check::flag("kernel-witness-nonzero", Some(h), fnorm > 0.0));
    report.checks.push(Check::at_most("kernel-witness", Some(h), ratio, 1e-8));

    let small = ContinuumProxy::new(LatticeGrid::new(d, h, if d == 1 { 16 } else { 8 })?, 4)?;
    if small.fine().len() <= 1024 {
        let u = union_with_zero_check(&s.pair, &small, cfg.seed).map_err(|e| stage(e, "union with zero"))?;
        report.checks.push(Check::at_most("union-with-zero", Some(h), u.distance, 1e-6));
    }
    report.details = json!({ "projection_defect": proj.max_defect, "witness_norm": fnorm });
    Ok(())
}

fn local_spectrum(cfg: &ExperimentConfig, s: &Setup, report: &mut Report) -> Result<()> {
    let w = window(cfg)?;
    let reference = match s.potential() {
        Some(_) => Some(s.reference(cfg)?),
        None => None,
    };
    let rows = sweep(&cfg.h, "local spectrum", |h| {
        let grid = cfg.grid.grid_at(h)?;
        let discrete = discrete_spectrum(&s.symbol, s.potential(), &grid)?;
        let continuum = match &reference {
            Some(r) => SpectrumSet::points(r.eigenvalues().to_vec(), "reference")?,
            None => {
                let floor = continuum_spectrum(&s.symbol, None, &grid)?.min().unwrap_or(0.0);
                // [inf G₀, ∞) cut off well past the window.
                SpectrumSet::range(floor, floor.max(w.b) + 2.0 * (w.b - w.a) + 1.0, 4097, "free continuum")?
            }
        };
        Ok(local_hausdorff(&discrete, &continuum, w.a, w.b))
    })?;
    report.rows = rows;
    if report.rows.iter().all(|r| r.1 <= 1e-14) {
        report.checks.push(Check::at_most("local-distance-vanishes", None, report.rows[0].1, 1e-14));
    } else {
        report.rate = Some(RateReport::new(&report.rows, s.gamma(cfg)?, cfg.tolerance(), cfg.drop_largest)?);
    }
    Ok(())
}

fn eigen_track(cfg: &ExperimentConfig, s: &Setup, report: &mut Report) -> Result<()> {
    let w = window(cfg)?;
    let m = w.multiplicity.unwrap_or(1);
    let reference = s.reference(cfg)?;
    let grids: Vec<LatticeGrid> = cfg.h.iter().map(|&h| cfg.grid.grid_at(h)).collect::<Result<_>>()?;
    let track = track_eigenvalues(&s.symbol, s.potential(), &s.pair, &grids, cfg.grid.refine, w.a, w.b, m, &reference)?;
    let gamma = s.gamma(cfg)?;
    for e in &track.entries {
        report.checks.push(Check::flag("eigenvalue-count", Some(e.h), e.count_ok));
        let kmin = e.k_norms.iter().copied().fold(f64::INFINITY, f64::min);
        report.checks.push(Check::at_least("discretized-eigenvector-norm", Some(e.h), kmin, 0.5));
        if e.count_ok {
            report.rows.push((e.h, e.errors.iter().copied().fold(0.0, f64::max)));
        }
    }
    if report.rows.len() == track.entries.len() {
        report.rate = Some(RateReport::new(&report.rows, gamma, cfg.tolerance(), cfg.drop_largest)?);
    }
    let residuals: Vec<(f64, f64)> =
        track.entries.iter().map(|e| (e.h, e.residuals.iter().copied().fold(0.0, f64::max))).collect();
    let fit = fit_rate(&residuals, cfg.drop_largest)?;
    report.checks.push(Check::at_most("subspace-residual-rate", None, (fit.slope - gamma).abs(), cfg.tolerance()));
    report.details = json!({
        "continuum": track.continuum,
        "residual_slope": fit.slope,
        "entries": track.entries,
    });
    Ok(())
}

fn y_blowup(cfg: &ExperimentConfig, s: &Setup, report: &mut Report) -> Result<()> {
    let h = cfg.h[0];
    let x = cfg.blowup_x;
    let norm_at = |z: Complex64| -> Result<f64> {
        match s.potential() {
            None => {
                let sampling = FiberSampling { seed: cfg.seed, ..FiberSampling::for_dim(cfg.grid.d) };
                Ok(error_norm_fiber(&s.symbol, &s.pair, h, z, &sampling)?.norm)
            }
            Some(v) => {
                let op = ErrorOperator::new(&s.symbol, &s.pair, Some(v), &proxy_at(cfg, h)?, z, cfg.probe.gmres())?;
                Ok(power_norm(&op, &power_opts(cfg))?.norm)
            }
        }
    };
    let scan = y_blowup_scan(|z| norm_at(z).map_err(|e| e.at_stage(h, "blowup")), x, &cfg.y)?;
    // Growth per halving of y: at most 2^N with N = 2 free, N = 4 with a potential.
    let cap = if s.potential().is_some() { 16.0 } else { 4.0 };
    for (i, r) in scan.ratios.iter().enumerate() {
        let halving = cfg.y[i] / cfg.y[i + 1];
        report.checks.push(Check::at_most("growth-per-halving", Some(cfg.y[i + 1]), r.powf(2f64.ln() / halving.ln()), cap));
    }
    // Rows hold (y, norm) for this kind.
    report.rows = scan.y.iter().copied().zip(scan.norms.iter().copied()).collect();
    report.details = json!({ "h": h, "x": x, "exponent": scan.exponent, "ratios": scan.ratios });
    Ok(())
}
