//! Command implementations: point evaluations, the parallel sweep, scaling
//! fits, and the figure recipes.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use xychain::analysis::{
    displacement_curve, factorization_scaling, fss_collapse, grid_derivative, qc_ratio_map,
    thermal_scaling, thermal_scaling_with, CollapseResult, ScalingDataset,
};
use xychain::ed::{adaptive_hx, correlators_ed, ground_state, EdConfig};
use xychain::engine::{correlators_for, HxChoice, StateRequest};
use xychain::info::{discord, CorrelationTriple};
use xychain::{density, fermion, ChainLength, CorrelatorSet, ModelParams, Provenance};

use crate::output::{deliver, fmt_float, Sidecar, Table};
use crate::spec::{from_xy, CliError, CliResult, Convention, HxFlag, Resolved};

fn request(res: &Resolved, h: f64, t: f64, l: ChainLength, r_max: usize) -> StateRequest {
    let params = res.params_at(h, t, l);
    match res.convention {
        Convention::Symmetric | Convention::Thermal => StateRequest::symmetric(params, r_max),
        Convention::Broken => {
            let hx = match res.hx {
                HxFlag::Adaptive => HxChoice::Adaptive,
                HxFlag::Fixed(v) => HxChoice::Fixed(v),
            };
            StateRequest::broken(params, r_max, hx)
        }
    }
}

fn correlator_set(res: &Resolved, h: f64, t: f64, l: ChainLength) -> CliResult<CorrelatorSet> {
    let r_max = *res.radii.iter().max().unwrap();
    let req = request(res, h, t, l, r_max);
    correlators_for(&req, res.engine.as_deref()).map_err(from_xy)
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::BulkQuadrature => "bulk-quadrature",
        Provenance::FiniteLSum => "finite-l",
        Provenance::Ed => "ed",
    }
}

fn length_label(l: ChainLength) -> String {
    match l.finite() {
        None => "bulk".to_string(),
        Some(n) => n.to_string(),
    }
}

fn common_tolerances() -> serde_json::Value {
    json!({
        "quadrature_abs": fermion::QUAD_ABS_TOL,
        "optimizer_refine": 1e-9,
        "density_validate": 1e-12,
    })
}

/// `correlators`: one parameter point, one row per distance.
pub fn correlators_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    let (h, t, l) = res.point()?;
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let set = correlator_set(res, h, t, l)?;
        let mut table = Table::new(&[
            "gamma", "h", "temp", "L", "state", "backend", "r", "g_z", "g_x", "g_xx", "g_yy",
            "g_zz", "g_xz", "g_zx",
        ]);
        for &r in &res.radii {
            table.push(vec![
                fmt_float(res.gamma),
                fmt_float(h),
                fmt_float(t),
                length_label(l),
                res.convention.name().to_string(),
                provenance_name(set.provenance).to_string(),
                r.to_string(),
                fmt_float(set.g_z),
                fmt_float(set.g_x),
                fmt_float(set.g_xx[r - 1]),
                fmt_float(set.g_yy[r - 1]),
                fmt_float(set.g_zz[r - 1]),
                fmt_float(set.g_xz[r - 1]),
                fmt_float(set.g_zx[r - 1]),
            ]);
        }
        let mut sc = Sidecar::new("correlators", canonical);
        sc.tolerances = common_tolerances();
        sc.results = json!({ "backend": provenance_name(set.provenance) });
        Ok((table, sc))
    })
}

/// `rho`: the two-spin density matrix at one point, entry per row.
pub fn rho_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    let (h, t, l) = res.point()?;
    let r = res.radii[0];
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let set = correlator_set(res, h, t, l)?;
        let rho = density::rho_pair(&set, r).map_err(from_xy)?;
        rho.validate().map_err(from_xy)?;
        let mut table = Table::new(&["row", "col", "re", "im"]);
        for i in 0..4 {
            for j in 0..4 {
                table.push(vec![
                    i.to_string(),
                    j.to_string(),
                    fmt_float(rho.mat[(i, j)].re),
                    fmt_float(rho.mat[(i, j)].im),
                ]);
            }
        }
        let mut sc = Sidecar::new("rho", canonical);
        sc.tolerances = common_tolerances();
        sc.results = json!({
            "r": r,
            "backend": provenance_name(set.provenance),
            "symmetry": format!("{:?}", rho.symmetry),
        });
        Ok((table, sc))
    })
}

/// `discord`: measures at one point, one row per distance.
pub fn discord_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    let (h, t, l) = res.point()?;
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let set = correlator_set(res, h, t, l)?;
        let mut table = Table::new(&[
            "gamma",
            "h",
            "temp",
            "L",
            "r",
            "mutual_info",
            "classical",
            "discord",
            "theta",
            "phi",
        ]);
        for &r in &res.radii {
            let rho = density::rho_pair(&set, r).map_err(from_xy)?;
            let m = discord(&rho).map_err(from_xy)?;
            let basis = m.argmax.canonical();
            table.push(vec![
                fmt_float(res.gamma),
                fmt_float(h),
                fmt_float(t),
                length_label(l),
                r.to_string(),
                fmt_float(m.mutual_info),
                fmt_float(m.classical),
                fmt_float(m.discord),
                fmt_float(basis.theta),
                fmt_float(basis.phi),
            ]);
        }
        let mut sc = Sidecar::new("discord", canonical);
        sc.tolerances = common_tolerances();
        sc.results = json!({ "backend": provenance_name(set.provenance) });
        Ok((table, sc))
    })
}

struct CellRow {
    values: Option<(CorrelationTriple, f64, f64)>,
    error: String,
}

/// `sweep`: the full grid h × T × L, one row per (point, r). Cells are
/// computed in parallel; a failed cell fills the `error` column of its rows
/// and the run keeps going.
pub fn sweep_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(res.workers)
        .build()
        .map_err(|e| CliError::Validation(format!("workers: {e}")))?;
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let mut cells = Vec::new();
        for &h in &res.h_grid {
            for &t in &res.t_grid {
                for &l in &res.lengths {
                    cells.push((h, t, l));
                }
            }
        }
        let n_rows = cells.len() * res.radii.len();
        eprintln!(
            "sweep: {} cells x {} distances = {} rows",
            cells.len(),
            res.radii.len(),
            n_rows
        );
        let start = Instant::now();

        let computed: Vec<Vec<CellRow>> = pool.install(|| {
            cells
                .par_iter()
                .map(|&(h, t, l)| {
                    match correlator_set(res, h, t, l) {
                        Ok(set) => res
                            .radii
                            .iter()
                            .map(|&r| {
                                let m = density::rho_pair(&set, r)
                                    .and_then(|rho| discord(&rho))
                                    .map_err(from_xy);
                                match m {
                                    Ok(m) => CellRow {
                                        values: Some((m, set.g_z, set.g_x)),
                                        error: String::new(),
                                    },
                                    Err(e) => CellRow { values: None, error: e.to_string() },
                                }
                            })
                            .collect(),
                        Err(e) => res
                            .radii
                            .iter()
                            .map(|_| CellRow { values: None, error: e.to_string() })
                            .collect(),
                    }
                })
                .collect()
        });

        let mut table = Table::new(&[
            "index",
            "gamma",
            "h",
            "temp",
            "L",
            "r",
            "state",
            "mutual_info",
            "classical",
            "discord",
            "g_z",
            "g_x",
            "error",
        ]);
        let mut index = 0usize;
        let mut failures = 0usize;
        for (cell, rows) in cells.iter().zip(&computed) {
            let (h, t, l) = *cell;
            for (ri, row) in rows.iter().enumerate() {
                let (mi, cc, qd, gz, gx) = match &row.values {
                    Some((m, gz, gx)) => (
                        fmt_float(m.mutual_info),
                        fmt_float(m.classical),
                        fmt_float(m.discord),
                        fmt_float(*gz),
                        fmt_float(*gx),
                    ),
                    None => {
                        failures += 1;
                        Default::default()
                    }
                };
                table.push(vec![
                    index.to_string(),
                    fmt_float(res.gamma),
                    fmt_float(h),
                    fmt_float(t),
                    length_label(l),
                    res.radii[ri].to_string(),
                    res.convention.name().to_string(),
                    mi,
                    cc,
                    qd,
                    gz,
                    gx,
                    row.error.clone(),
                ]);
                index += 1;
            }
        }
        eprintln!(
            "sweep: done in {:.2} s ({failures} failed rows)",
            start.elapsed().as_secs_f64()
        );
        let mut sc = Sidecar::new("sweep", canonical);
        sc.tolerances = common_tolerances();
        sc.results = json!({ "rows": n_rows, "failed_rows": failures });
        Ok((table, sc))
    })
}

/// `fidelity`: ground-state overlap F(h, h + dh) on the h grid. Unlike the
/// sweep this aborts on the first failure, because a sector mismatch means
/// the requested overlap does not exist.
pub fn fidelity_cmd(res: &Resolved, dh: f64, canonical: &str) -> CliResult<()> {
    if res.t_grid != [0.0] {
        return Err(CliError::Validation("fidelity is a ground-state overlap; temp must be 0".into()));
    }
    if !(dh.is_finite() && dh != 0.0) {
        return Err(CliError::Validation("dh must be a nonzero finite number".into()));
    }
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let mut table = Table::new(&["gamma", "h", "L", "dh", "fidelity"]);
        for &l in &res.lengths {
            let Some(n) = l.finite() else {
                return Err(CliError::Validation("fidelity needs a finite L".into()));
            };
            for &h in &res.h_grid {
                let f = fermion::fidelity(&ModelParams::finite(res.gamma, h, 0.0, n), dh)
                    .map_err(from_xy)?;
                table.push(vec![
                    fmt_float(res.gamma),
                    fmt_float(h),
                    n.to_string(),
                    fmt_float(dh),
                    fmt_float(f),
                ]);
            }
        }
        let mut sc = Sidecar::new("fidelity", canonical);
        sc.tolerances = common_tolerances();
        Ok((table, sc))
    })
}

fn collapse_sidecar(op: &str, canonical: &str, res: &CollapseResult) -> Sidecar {
    let mut sc = Sidecar::new(op, canonical);
    sc.tolerances = common_tolerances();
    let fits: Vec<serde_json::Value> = res
        .fits
        .iter()
        .map(|(name, f)| {
            json!({
                "name": name,
                "slope": f.slope,
                "intercept": f.intercept,
                "r_squared": f.r_squared,
                "slope_halfwidth": f.slope_halfwidth,
            })
        })
        .collect();
    sc.results = json!({
        "exponents": res.exponents.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "shifts": res.shifts,
        "residual": res.residual,
        "fits": fits,
    });
    sc
}

fn q1_dataset(res: &Resolved, observable: &str) -> CliResult<ScalingDataset> {
    let r = res.radii[0];
    let t = res.t_grid[0];
    let mut ds = ScalingDataset::new(observable, res.gamma);
    for &l in &res.lengths {
        let Some(n) = l.finite() else {
            return Err(CliError::Validation("scaling slices need finite lengths".into()));
        };
        let ys: Vec<f64> = res
            .h_grid
            .iter()
            .map(|&h| {
                let set = correlator_set(res, h, t, l)?;
                let rho = density::rho_pair(&set, r).map_err(from_xy)?;
                Ok(discord(&rho).map_err(from_xy)?.discord)
            })
            .collect::<CliResult<_>>()?;
        let values: Vec<f64> = if observable == "neg_dq_dh" {
            grid_derivative(&res.h_grid, &ys).iter().map(|d| -d).collect()
        } else {
            ys
        };
        for (i, &h) in res.h_grid.iter().enumerate() {
            ds.push(n as f64, h, values[i]);
        }
        eprintln!("scaling: slice L={n} done ({} fields)", res.h_grid.len());
    }
    Ok(ds)
}

fn dataset_table(ds: &ScalingDataset, value_name: &str) -> Table {
    let mut table = Table::new(&["L", "h", value_name]);
    for l in ds.slices() {
        for (h, v) in ds.slice_points(l) {
            table.push(vec![format!("{}", l as usize), fmt_float(h), fmt_float(v)]);
        }
    }
    table
}

/// `scaling fss`: finite-size collapse of −∂_h Q_r across the L slices.
pub fn scaling_fss_cmd(res: &Resolved, omega: f64, nu: f64, canonical: &str) -> CliResult<()> {
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let ds = q1_dataset(res, "neg_dq_dh")?;
        let col = fss_collapse(&ds, omega, nu).map_err(from_xy)?;
        let table = dataset_table(&ds, "neg_dq_dh");
        let mut sc = collapse_sidecar("scaling-fss", canonical, &col);
        if let serde_json::Value::Object(map) = &mut sc.results {
            map.insert("omega".to_string(), json!(omega));
            map.insert("nu".to_string(), json!(nu));
        }
        Ok((table, sc))
    })
}

/// `scaling factorization`: exponential collapse toward the largest slice
/// near the factorizing field.
pub fn scaling_factorization_cmd(
    res: &Resolved,
    alpha: Option<f64>,
    canonical: &str,
) -> CliResult<()> {
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let ds = q1_dataset(res, "q")?;
        let col = factorization_scaling(&ds, alpha).map_err(from_xy)?;
        let table = dataset_table(&ds, "q");
        Ok((table, collapse_sidecar("scaling-factorization", canonical, &col)))
    })
}

/// `scaling thermal`: log-T fit of the critical-line slope ∂_h Q_r plus the
/// collapse residual over any off-critical h slices supplied.
pub fn scaling_thermal_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    if res.t_grid.iter().any(|&t| t <= 0.0) {
        return Err(CliError::Validation("scaling thermal needs temp > 0".into()));
    }
    let slices: Vec<f64> =
        res.h_grid.iter().copied().filter(|&h| (h - 1.0).abs() > 1e-12).collect();
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let col =
            thermal_scaling(res.gamma, res.radii[0], &res.t_grid, &slices).map_err(from_xy)?;
        let sampler = xychain::analysis::bulk_slope_sampler(res.gamma, res.radii[0]);
        let mut table = Table::new(&["h", "t", "dq_dh"]);
        let mut fields = vec![1.0];
        fields.extend_from_slice(&slices);
        for &h in &fields {
            for &t in &res.t_grid {
                let s = sampler(h, t).map_err(from_xy)?;
                table.push(vec![fmt_float(h), fmt_float(t), fmt_float(s)]);
            }
            eprintln!("scaling: thermal slice h={h} done");
        }
        Ok((table, collapse_sidecar("scaling-thermal", canonical, &col)))
    })
}

/// `displacement`: spread of Q_r across distances as a function of T.
pub fn displacement_cmd(res: &Resolved, canonical: &str) -> CliResult<()> {
    if res.h_grid.len() != 1 {
        return Err(CliError::Validation("displacement takes a single field; temp may be a grid".into()));
    }
    let h = res.h_grid[0];
    if res.lengths.len() != 1 || !res.lengths[0].is_bulk() {
        return Err(CliError::Validation("displacement is a bulk diagnostic; use L=bulk".into()));
    }
    deliver(res.out.as_deref(), res.cache_dir.as_deref(), canonical, || {
        let curve =
            displacement_curve(res.gamma, h, &res.t_grid, &res.radii).map_err(from_xy)?;
        let mut table = Table::new(&["t", "displacement"]);
        for &(t, d) in &curve {
            table.push(vec![fmt_float(t), fmt_float(d)]);
        }
        let mut sc = Sidecar::new("displacement", canonical);
        sc.tolerances = common_tolerances();
        sc.results = json!({
            "h": h,
            "radii": res.radii,
            "low_t_value": curve.first().map(|&(_, d)| d),
        });
        Ok((table, sc))
    })
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn q_ed_pinned(gamma: f64, h: f64, l: usize, hx: f64, r_max: usize) -> CliResult<Vec<f64>> {
    let cfg = EdConfig::new(l, gamma, h).with_hx(hx);
    let set = correlators_ed(&ground_state(&cfg).map_err(from_xy)?, r_max).map_err(from_xy)?;
    (1..=r_max)
        .map(|r| {
            let rho = density::rho_pair(&set, r).map_err(from_xy)?;
            Ok(discord(&rho).map_err(from_xy)?.discord)
        })
        .collect()
}

fn q_bulk(gamma: f64, h: f64, t: f64, r: usize) -> CliResult<f64> {
    Ok(xychain::correlation_measures(&ModelParams::bulk(gamma, h, t), r)
        .map_err(from_xy)?
        .discord)
}

/// `reproduce`: regenerate the data behind one of the reference figures.
/// Every recipe stamps its desk-scale substitutions into the sidecar.
pub fn reproduce_cmd(figure: &str, out_dir: &Path, cache_dir: Option<&Path>) -> CliResult<()> {
    let gamma = 0.7;
    let canonical = format!("version={};op=reproduce;figure={figure}", crate::spec::version());
    let out = out_dir.join(format!("{figure}.csv"));
    let start = Instant::now();
    let produce = || -> CliResult<(Table, Sidecar)> {
        let pair = match figure {
            "fig1" => fig1(gamma, &canonical)?,
            "fig2" => fig2(gamma, &canonical)?,
            "fig3" => fig3(gamma, &canonical)?,
            "fig4" => fig4(gamma, &canonical)?,
            "fig5a" => fig5a(gamma, &canonical)?,
            "fig5b" => fig5b(gamma, &canonical)?,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown figure '{other}' (want fig1..fig4, fig5a, fig5b)"
                )))
            }
        };
        eprintln!("reproduce {figure}: built in {:.2} s", start.elapsed().as_secs_f64());
        Ok(pair)
    };
    deliver(Some(&out), cache_dir, &canonical, produce)?;
    eprintln!("reproduce {figure}: wrote {}", out.display());
    Ok(())
}

/// Discord versus field for r = 1..5 in both state conventions at T = 0.
fn fig1(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let l_ed = 14usize;
    let radii = 5usize;
    let hs = lin_grid(0.0, 1.6, 33);
    let mut table = Table::new(&["state", "h", "r", "discord"]);
    for &h in &hs {
        for r in 1..=radii {
            table.push(vec![
                "symmetric".to_string(),
                fmt_float(h),
                r.to_string(),
                fmt_float(q_bulk(gamma, h, 0.0, r)?),
            ]);
        }
    }
    eprintln!("reproduce fig1: symmetric branch done");
    for &h in &hs {
        let qs = q_ed_pinned(gamma, h, l_ed, adaptive_hx(gamma, h, l_ed), radii)?;
        for (r, &q) in (1..=radii).zip(&qs) {
            table.push(vec![
                "broken".to_string(),
                fmt_float(h),
                r.to_string(),
                fmt_float(q),
            ]);
        }
    }
    let mut sc = Sidecar::new("reproduce-fig1", canonical);
    sc.tolerances = common_tolerances();
    sc.substitutions.push(format!(
        "symmetry-broken branch from exact diagonalization at L = {l_ed} with an adaptive \
         pinning field, in place of matrix-product-state data at L = 400"
    ));
    sc.results = json!({ "gamma": gamma, "radii": radii, "h_grid": [0.0, 1.6, 33] });
    Ok((table, sc))
}

/// Finite-size collapse of −∂_h Q_1 around the critical field.
fn fig2(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let hs = lin_grid(0.86, 1.30, 23);
    let mut ds = ScalingDataset::new("neg_dq1_dh", gamma);
    for l in [8usize, 10, 12, 14, 16] {
        let ys: Vec<f64> = hs
            .iter()
            .map(|&h| Ok(q_ed_pinned(gamma, h, l, 1e-6, 1)?[0]))
            .collect::<CliResult<_>>()?;
        let d = grid_derivative(&hs, &ys);
        for (i, &h) in hs.iter().enumerate() {
            ds.push(l as f64, h, -d[i]);
        }
        eprintln!("reproduce fig2: L={l} done");
    }
    let col = fss_collapse(&ds, 0.472, 1.0).map_err(from_xy)?;
    let flat = fss_collapse(&ds, 0.0, 1.0).map_err(from_xy)?.residual;
    let linear = fss_collapse(&ds, 1.0, 1.0).map_err(from_xy)?.residual;
    let table = dataset_table(&ds, "neg_dq1_dh");
    let mut sc = collapse_sidecar("reproduce-fig2", canonical, &col);
    sc.substitutions.push(
        "exact diagonalization limited to L <= 16; peak-drift exponents need larger chains \
         (see `scaling fss` on free-fermion slices)"
            .to_string(),
    );
    if let serde_json::Value::Object(map) = &mut sc.results {
        map.insert("residual_omega_0".to_string(), json!(flat));
        map.insert("residual_omega_1".to_string(), json!(linear));
    }
    Ok((table, sc))
}

/// Exponential finite-size convergence of Q_1 near the factorizing field.
fn fig3(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let h_f = xychain::model::factorizing_field(gamma);
    let fields: Vec<f64> =
        [-4i32, -3, -2, -1, 1, 2, 3, 4].iter().map(|&i| h_f + 0.003 * i as f64).collect();
    let mut ds = ScalingDataset::new("q1", gamma);
    for l in [8usize, 10, 12, 14] {
        for &h in &fields {
            ds.push(l as f64, h, q_ed_pinned(gamma, h, l, 0.0, 1)?[0]);
        }
        eprintln!("reproduce fig3: L={l} done");
    }
    for &h in &fields {
        let set = fermion::correlators(&ModelParams::finite(gamma, h, 0.0, 18), 1)
            .map_err(from_xy)?;
        let rho = density::rho_pair(&set, 1).map_err(from_xy)?;
        ds.push(18.0, h, discord(&rho).map_err(from_xy)?.discord);
    }
    let col = factorization_scaling(&ds, None).map_err(from_xy)?;
    let table = dataset_table(&ds, "q1");
    let mut sc = collapse_sidecar("reproduce-fig3", canonical, &col);
    sc.substitutions.push(
        "slices from desk-scale exact diagonalization (L <= 14) against a free-fermion \
         reference at L = 18, in place of matrix-product-state sizes"
            .to_string(),
    );
    Ok((table, sc))
}

/// Thermal scaling of the critical-line slope ∂_h Q_1 with off-critical
/// collapse slices.
fn fig4(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let t_grid: Vec<f64> = lin_grid(-3.0, -1.0, 9).iter().map(|e| 10f64.powf(*e)).collect();
    let slices = [1.005, 1.01, 1.02];
    let sampler = xychain::analysis::bulk_slope_sampler(gamma, 1);
    let col = thermal_scaling_with(&sampler, &t_grid, &slices).map_err(from_xy)?;
    let mut table = Table::new(&["h", "t", "dq_dh"]);
    let mut fields = vec![1.0];
    fields.extend_from_slice(&slices);
    for &h in &fields {
        for &t in &t_grid {
            table.push(vec![fmt_float(h), fmt_float(t), fmt_float(sampler(h, t).map_err(from_xy)?)]);
        }
        eprintln!("reproduce fig4: slice h={h} done");
    }
    let mut sc = collapse_sidecar("reproduce-fig4", canonical, &col);
    sc.substitutions.push(
        "temperature window [1e-3, 1e-1]; the slope along h = 1 grows with ln T, so the \
         off-critical slices collapse under a fitted power rather than the log slope"
            .to_string(),
    );
    Ok((table, sc))
}

/// Q_1/C_1 ratio map over the (h, T) plane with its T derivative.
fn fig5a(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let h_grid = lin_grid(0.6, 1.4, 9);
    let t_grid = lin_grid(0.05, 0.5, 10);
    let map = qc_ratio_map(gamma, &h_grid, &t_grid).map_err(from_xy)?;
    let mut table = Table::new(&["h", "t", "q_over_c", "d_dt"]);
    for (i, &h) in map.h_grid.iter().enumerate() {
        for (j, &t) in map.t_grid.iter().enumerate() {
            table.push(vec![
                fmt_float(h),
                fmt_float(t),
                fmt_float(map.ratio[i][j]),
                fmt_float(map.dt_ratio[i][j]),
            ]);
        }
    }
    let (h_star, t_star) = map.argmax_abs_dt();
    let mut sc = Sidecar::new("reproduce-fig5a", canonical);
    sc.tolerances = common_tolerances();
    sc.results = json!({ "argmax_abs_dt": { "h": h_star, "t": t_star } });
    Ok((table, sc))
}

/// Discord displacement across r = 1..5 versus T at the factorizing field.
fn fig5b(gamma: f64, canonical: &str) -> CliResult<(Table, Sidecar)> {
    let h_f = xychain::model::factorizing_field(gamma);
    let t_grid = [0.01, 0.05, 0.1, 0.2];
    let radii = [1usize, 2, 3, 4, 5];
    let curve = displacement_curve(gamma, h_f, &t_grid, &radii).map_err(from_xy)?;
    let mut table = Table::new(&["t", "displacement"]);
    for &(t, d) in &curve {
        table.push(vec![fmt_float(t), fmt_float(d)]);
    }
    let mut sc = Sidecar::new("reproduce-fig5b", canonical);
    sc.tolerances = common_tolerances();
    sc.results = json!({
        "h_f": h_f,
        "radii": radii,
        "low_t_value": curve.first().map(|&(_, d)| d),
    });
    Ok((table, sc))
}
