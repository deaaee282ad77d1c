//! Subcommand implementations.

use crate::config::{CachePolicy, RunConfig};
use breakup::cache::{self, fmt_f64};
use breakup::harness::{self, ScalingMap};
use breakup::kdv::{self, KdvConfig, KdvField};
use breakup::phase::{alpha, PhaseContext};
use breakup::pi2::{self, Pi2Grid};
use breakup::profile::{locate_catastrophe, CatastrophePoint, InitialProfile};
use breakup::scattering;
use breakup::{Error, Result};
use std::path::PathBuf;

pub fn resolve_profile(cfg: &RunConfig) -> Result<(InitialProfile, CatastrophePoint)> {
    let profile = InitialProfile::by_name(&cfg.profile)
        .ok_or_else(|| Error::Config(format!("unknown profile '{}'", cfg.profile)))?;
    let point = locate_catastrophe(&profile)?;
    Ok((profile, point))
}

fn kdv_config(cfg: &RunConfig, eps: f64) -> KdvConfig {
    let mut kc = KdvConfig::for_epsilon(eps);
    kc.domain_half_length = cfg.kdv_ld;
    kc.n_modes = cfg.kdv_n;
    kc.dt = cfg
        .kdv_dt
        .unwrap_or(0.05 * 2.0 * cfg.kdv_ld / cfg.kdv_n as f64);
    kc
}

/// `T` ladder for the model family: the configured values plus waypoints
/// so that consecutive spacing never exceeds the continuation limit, with
/// the seed value 0 always included.
pub fn family_ladder(t_values: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = t_values.to_vec();
    pts.push(0.0);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out = Vec::new();
    for w in pts.windows(2) {
        out.push(w[0]);
        let gap = w[1] - w[0];
        let steps = (gap / 0.25).ceil() as usize;
        for s in 1..steps {
            out.push(w[0] + gap * s as f64 / steps as f64);
        }
    }
    out.push(*pts.last().unwrap());
    out
}

pub fn pi2_cache_path(cfg: &RunConfig) -> PathBuf {
    cfg.out_dir.join(format!(
        "pi2_family_L{}_h{}.csv",
        cfg.pi2_l, cfg.pi2_h
    ))
}

pub fn kdv_cache_path(cfg: &RunConfig, eps: f64, t: f64) -> PathBuf {
    cfg.out_dir
        .join(format!("kdv_eps{}_t{:.12e}.csv", eps, t))
}

/// catastrophe: emit the catastrophe data as a CSV row.
pub fn run_catastrophe(cfg: &RunConfig) -> Result<String> {
    let (profile, point) = resolve_profile(cfg)?;
    let row = format!(
        "{},{},{},{},{},{}",
        profile.name(),
        fmt_f64(point.x_c),
        fmt_f64(point.t_c),
        fmt_f64(point.u_c),
        fmt_f64(point.xi_c),
        fmt_f64(point.k)
    );
    let text = format!("name,x_c,t_c,u_c,xi_c,k\n{row}\n");
    cache::write_atomic(&cfg.out_dir.join("catastrophe.csv"), &text)?;
    Ok(row)
}

/// hopf: solution scan at a fixed time.
pub fn run_hopf(
    cfg: &RunConfig,
    time: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<PathBuf> {
    let (profile, point) = resolve_profile(cfg)?;
    let xs: Vec<f64> = (0..points)
        .map(|i| x_min + (x_max - x_min) * i as f64 / (points - 1).max(1) as f64)
        .collect();
    let samples = breakup::hopf::scan(&profile, &point, &xs, time)?;
    let mut text = String::from("x,u,ux\n");
    for s in &samples {
        text.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(s.x),
            fmt_f64(s.u),
            fmt_f64(s.ux)
        ));
    }
    let path = cfg.out_dir.join(format!("hopf_t{time}.csv"));
    cache::write_atomic(&path, &text)?;
    Ok(path)
}

/// phase-check: identity residual table; `Ok(true)` when everything is
/// within tolerance.
pub fn run_phase_check(cfg: &RunConfig) -> Result<(PathBuf, bool)> {
    let (profile, point) = resolve_profile(cfg)?;
    let ctx = PhaseContext::new(&profile, &point)?;
    let (x, t) = (point.x_c, point.t_c);
    let uc = point.u_c;
    let mut text = String::from("lambda,residual_id,residual_propg,residual_phi_routes\n");
    let mut ok = true;
    let n = 25;
    for i in 0..n {
        // identity grid below u_c and boundary-relation grid above it
        let lam_lo = -0.95 + (uc - 0.05 + 0.95) * i as f64 / (n - 1) as f64;
        let id = (ctx.g_function(lam_lo, x, t)?.re - ctx.rho(lam_lo)? + alpha(lam_lo, x, t)
            - ctx.phi(lam_lo, x, t)?.re)
            .abs();
        let routes = (ctx.phi(lam_lo, x, t)? - ctx.phi_alt(lam_lo, x, t)?).norm();
        let lam_hi = uc + 0.05 + (-0.05 - uc - 0.05) * i as f64 / (n - 1) as f64;
        let propg = (2.0 * ctx.g_function(lam_hi, x, t)?.re - 2.0 * ctx.rho(lam_hi)?
            + 2.0 * alpha(lam_hi, x, t))
        .abs();
        ok &= id < 1e-7 && propg < 1e-7 && routes < 1e-8;
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(lam_lo),
            fmt_f64(id),
            fmt_f64(propg),
            fmt_f64(routes)
        ));
    }
    // conformal slope against the closed form
    let maps = ctx.local_maps(ctx.x_tilde_c(), point.t_c)?;
    let h = 1e-4;
    let fd = (maps.f(uc + h)? - maps.f(uc - h)?) / (2.0 * h);
    let expect = (8.0 * point.k).powf(2.0 / 7.0);
    let rel = ((fd - expect) / expect).abs();
    ok &= rel < 1e-6;
    text.push_str(&format!("# f_prime_rel_dev={}\n", fmt_f64(rel)));
    let path = cfg.out_dir.join("phase_check.csv");
    cache::write_atomic(&path, &text)?;
    Ok((path, ok))
}

/// scattering-check: WKB sweep table plus the fitted rate.
pub fn run_scattering_check(cfg: &RunConfig) -> Result<(PathBuf, f64, bool)> {
    let (profile, point) = resolve_profile(cfg)?;
    let ctx = PhaseContext::new(&profile, &point)?;
    let grid: Vec<f64> = (0..17).map(|i| -0.9 + 0.8 * i as f64 / 16.0).collect();
    let report = scattering::wkb_validation(&ctx, &grid, &[0.1, 0.05, 0.025])?;
    let mut text = String::from("lambda,eps,abs_r,abs_kappa_minus_1,unitarity_residual\n");
    for e in &report.evals {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(e.lambda),
            fmt_f64(e.eps),
            fmt_f64(e.r.norm()),
            fmt_f64((e.kappa - 1.0).norm()),
            fmt_f64(e.unitarity_residual)
        ));
    }
    text.push_str(&format!("# slope={}\n", fmt_f64(report.slope)));
    let path = cfg.out_dir.join("scattering_check.csv");
    cache::write_atomic(&path, &text)?;
    let ok = (report.slope - 1.0).abs() < 0.2;
    Ok((path, report.slope, ok))
}

/// pi2: build (or reuse) the model family cache.
pub fn run_pi2(cfg: &RunConfig) -> Result<PathBuf> {
    let path = pi2_cache_path(cfg);
    if cfg.cache == CachePolicy::Use && path.exists() {
        cache::read_pi2_family(&path)?;
        return Ok(path);
    }
    let grid = Pi2Grid::with_spacing(cfg.pi2_l, cfg.pi2_h)?;
    let family = pi2::continuation_in_t(&grid, &family_ladder(&cfg.t_values))?;
    cache::write_pi2_family(&path, &family)?;
    Ok(path)
}

/// Times at which the comparison samples the KdV flow, ascending per eps.
pub fn compare_times(cfg: &RunConfig, point: &CatastrophePoint) -> Vec<(f64, Vec<f64>)> {
    let map = ScalingMap::new(point);
    cfg.eps
        .iter()
        .map(|&eps| {
            let mut ts: Vec<f64> = cfg.t_values.iter().map(|&bt| map.t(bt, eps)).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (eps, ts)
        })
        .collect()
}

/// kdv: populate the snapshot caches for the comparison (or one explicit
/// `(eps, t)` run when given).
pub fn run_kdv(cfg: &RunConfig, single: Option<(f64, f64)>) -> Result<Vec<PathBuf>> {
    let (profile, point) = resolve_profile(cfg)?;
    let jobs: Vec<(f64, Vec<f64>)> = match single {
        Some((eps, t)) => vec![(eps, vec![t])],
        None => compare_times(cfg, &point),
    };
    let mut written = Vec::new();
    for (eps, times) in jobs {
        let mut field: Option<KdvField> = None;
        for t in times {
            let path = kdv_cache_path(cfg, eps, t);
            if cfg.cache == CachePolicy::Use && path.exists() {
                continue;
            }
            let f = field.get_or_insert(kdv::init_field(&profile, kdv_config(cfg, eps))?);
            f.evolve(t)?;
            cache::write_kdv_snapshot(&path, f)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub struct CompareOutcome {
    pub path: PathBuf,
    pub slope: Option<f64>,
    pub missing: Vec<PathBuf>,
}

/// compare: run the double-scaling comparison from the caches.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareOutcome> {
    let (profile, point) = resolve_profile(cfg)?;

    if cfg.cache == CachePolicy::Rebuild {
        run_pi2(cfg)?;
        run_kdv(cfg, None)?;
    } else {
        // strict use policy: every cache must already exist
        let mut missing = Vec::new();
        let p = pi2_cache_path(cfg);
        if !p.exists() {
            missing.push(p);
        }
        for (eps, times) in compare_times(cfg, &point) {
            for t in times {
                let p = kdv_cache_path(cfg, eps, t);
                if !p.exists() {
                    missing.push(p);
                }
            }
        }
        if !missing.is_empty() {
            return Ok(CompareOutcome {
                path: cfg.out_dir.join("compare.csv"),
                slope: None,
                missing,
            });
        }
    }

    let family = cache::read_pi2_family(&pi2_cache_path(cfg))?;
    let cfg_ref = &*cfg;
    let mut provider = move |eps: f64, t: f64| -> Result<KdvField> {
        cache::read_kdv_snapshot(&kdv_cache_path(cfg_ref, eps, t))
    };
    let report = harness::universality_compare(
        &point,
        &family,
        &cfg.eps,
        &cfg.t_values,
        cfg.x_window,
        &mut provider,
    )?;
    let _ = profile;

    let mut text = String::from("eps,T,sup_error\n");
    for row in &report.rows {
        match (row.sup_error, &row.note) {
            (Some(v), _) => text.push_str(&format!(
                "{},{},{}\n",
                fmt_f64(row.eps),
                fmt_f64(row.big_t),
                fmt_f64(v)
            )),
            (None, note) => text.push_str(&format!(
                "{},{},failed:{}\n",
                fmt_f64(row.eps),
                fmt_f64(row.big_t),
                note.as_deref().unwrap_or("unknown")
            )),
        }
    }
    match report.slope {
        Some(s) => text.push_str(&format!("slope={} target=0.5714\n", fmt_f64(s))),
        None => text.push_str("slope=unavailable target=0.5714\n"),
    }
    let path = cfg.out_dir.join("compare.csv");
    cache::write_atomic(&path, &text)?;
    Ok(CompareOutcome {
        path,
        slope: report.slope,
        missing: Vec::new(),
    })
}
