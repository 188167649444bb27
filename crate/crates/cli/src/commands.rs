use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use specwave::adr::{AdrConfig, KprimeSource, ProbeConfig};
use specwave::grid::Grid;
use specwave::io::{create, read_columns};
use specwave::qldrp::{
    band, default_axis, gvp_area, gvp_map, DerivativeRule, GvpMapMeta, KprimeRequest, SpectralCurve, Window,
};
use specwave::reproduce::{self, Target};
use specwave::schemes::SchemeSpec;
use specwave::svg::band_map;
use specwave::timeint::{stride_for, History, TimeKind, TimeSpec};
use specwave::waves::{
    measure_group_velocity_dft, measure_group_velocity_envelope, measure_phase_velocity_peak, solve_advection,
    solve_coupled, AdvectionProblem, CombinationWaveSpec, CoupledProblem, Solution,
};

use crate::args::*;
use crate::error::CliError;
use crate::manifest::{sidecar, Manifest};

/// What a command hands back to `main`: the JSON for standard output and
/// the number of failed reproduction checks.
#[derive(Debug, Default)]
pub struct Outcome {
    pub json: Option<Value>,
    pub failures: usize,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Self {
            json: Some(v),
            failures: 0,
        }
    }
}

type Settings = BTreeMap<String, String>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn kprime_request(
    scheme: &SchemeSpec,
    source: KprimeSource,
    probe: ProbeConfig,
    time: TimeArg,
    dt: Option<f64>,
    tau: f64,
) -> Result<KprimeRequest, CliError> {
    if source == KprimeSource::Analytic && !scheme.is_linear() {
        return Err(usage(format!("the analytic method needs a linear scheme, not {scheme}")));
    }
    Ok(KprimeRequest {
        source,
        probe,
        adr_time: TimeSpec::new(time.into(), dt.unwrap_or(tau))?,
        tau,
    })
}

pub fn spectrum(a: &SpectrumArgs, settings: Settings) -> Result<Outcome, CliError> {
    let scheme = a.scheme.spec();
    let p = &a.probe;
    let probe = ProbeConfig {
        nx: a.nx,
        phase_average_count: p.phases,
        amplitude: p.amplitude,
        probe: p.probe.into(),
        seed: p.seed,
    };
    let table = kprime_request(&scheme, a.method.into(), probe, p.time, p.dt, p.tau)?.table(&scheme)?;
    let Some(out) = &a.out else {
        let stdout = std::io::stdout();
        table.write_csv(stdout.lock())?;
        return Ok(Outcome::default());
    };
    let mut w = create(out)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    let result = json!({
        "csv": out,
        "scheme": scheme.name(),
        "method": table.source,
        "nx": table.nx(),
        "rows": table.len(),
        "annihilated": table.kprime.iter().filter(|v| v.is_none()).count(),
    });
    let manifest_path = sidecar(out);
    Manifest::new("spectrum", settings, &result).write(&manifest_path)?;
    let mut v = result;
    v["manifest"] = json!(manifest_path);
    Ok(Outcome::json(v))
}

pub fn gvpmap(a: &GvpmapArgs, settings: Settings) -> Result<Outcome, CliError> {
    let scheme = a.scheme.spec();
    let source = a.kprime.map_or(
        if scheme.is_linear() { KprimeSource::Analytic } else { KprimeSource::AdrNt },
        KprimeSource::from,
    );
    if a.resolution < 2 {
        return Err(usage(format!("--resolution must be at least 2, got {}", a.resolution)));
    }
    let probe = ProbeConfig {
        nx: a.nx,
        phase_average_count: a.phases,
        seed: a.seed,
        ..ProbeConfig::default()
    };
    let table = kprime_request(&scheme, source, probe, a.adr_time, a.dt, a.tau)?.table(&scheme)?;
    let curve = SpectralCurve::from_table(&table, DerivativeRule::Numeric)?;
    let time: TimeKind = a.map_time.into();
    let axis = default_axis(a.resolution);
    let meta = GvpMapMeta {
        scheme: scheme.name().into(),
        time,
        sigma: a.sigma,
        source,
        table_nx: a.nx,
    };
    let map = gvp_map(&curve, time, a.sigma, &axis, &axis, meta)?;
    let result = json!({
        "scheme": scheme.name(),
        "time": time,
        "sigma": a.sigma,
        "kprime": source,
        "table_nx": a.nx,
        "resolution": a.resolution,
        "gvp_area": gvp_area(&map, None),
        "gvp_area_near_origin": gvp_area(&map, Some(Window::near_origin())),
        "csv": a.out_csv,
        "svg": a.out_svg,
    });
    if let Some(path) = &a.out_csv {
        let mut w = create(path)?;
        map.write_csv(&mut w)?;
        w.flush()?;
        Manifest::new("gvpmap", settings.clone(), &result).write(&sidecar(path))?;
    }
    if let Some(path) = &a.out_svg {
        let title = format!("{} + {}, sigma = {}", scheme.name(), time, a.sigma);
        let mut w = create(path)?;
        w.write_all(band_map(&map, &title).as_bytes())?;
        w.flush()?;
        Manifest::new("gvpmap", settings, &result).write(&sidecar(path))?;
    }
    Ok(Outcome::json(result))
}

/// `lo,hi`.
pub fn parse_domain(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || usage(format!("--domain expects `lo,hi`, got '{s}'"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(usage(format!("--domain needs lo < hi, got {lo},{hi}")));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub time: f64,
    pub file: String,
}

/// The `result` block of a `simulate` manifest, read back by `measure`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunInfo {
    pub problem: String,
    /// Scheme name, or `exact` for closed-form snapshots.
    pub scheme: String,
    pub time: TimeKind,
    pub grid: Grid,
    pub dt: f64,
    pub t_final: f64,
    pub sigma: f64,
    pub exact_solution_available: bool,
    pub group_velocity: f64,
    pub phase_velocity: f64,
    /// Dominant DFT mode of the initial data, when there is exactly one.
    pub mode: Option<usize>,
    /// Largest `|u - u_exact|` at the final time.
    pub final_max_error: f64,
    pub warnings: Vec<String>,
    pub snapshots: Vec<SnapshotEntry>,
}

fn snapshot_times(dt: f64, t_final: f64, snapshots: usize) -> Vec<f64> {
    let steps = (t_final / dt).round() as usize;
    let stride = stride_for(steps, snapshots);
    (0..=steps)
        .filter(|i| i % stride == 0 || *i == steps)
        .map(|i| i as f64 * dt)
        .collect()
}

fn exact_history(times: Vec<f64>, state: impl Fn(f64) -> Vec<f64>) -> History {
    History {
        states: times.iter().map(|&t| state(t)).collect(),
        times,
    }
}

type ExactU = Box<dyn Fn(f64, f64) -> f64>;

pub fn simulate(a: &SimulateArgs, settings: Settings) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_domain(&a.domain)?;
    let grid = Grid::new(lo, hi, a.nx)?;
    let scheme = a.scheme.spec();
    let time: TimeKind = a.time.into();
    let length = hi - lo;
    let mut warnings = vec![];

    let (solution, exact_u, vg, vp, mode): (Solution, ExactU, f64, f64, Option<usize>) =
        match a.problem {
            ProblemArg::Advection => {
                if a.waves == 0 {
                    return Err(usage("--waves must be at least 1"));
                }
                let k = 2.0 * PI * a.waves as f64 / length;
                let c = a.c;
                let u0 = move |x: f64| (k * (x - lo)).sin();
                let mut prob = AdvectionProblem::new(c, grid, a.dt, a.t_final, u0)?;
                prob.snapshots = a.snapshots;
                let sol = if a.exact {
                    let times = snapshot_times(a.dt, a.t_final, a.snapshots);
                    Solution {
                        grid,
                        sigma: prob.sigma(),
                        coupled: false,
                        history: exact_history(times, |t| grid.sample(|x| u0(x - c * t))),
                        warnings: vec![],
                    }
                } else {
                    solve_advection(&prob, &scheme, time)?
                };
                (sol, Box::new(move |x, t| u0(x - c * t)), c, c, Some(a.waves))
            }
            ProblemArg::Coupled => {
                let (Some(k1), Some(w1), Some(k2), Some(w2)) = (a.k1, a.w1, a.k2, a.w2) else {
                    return Err(usage("the coupled problem needs --k1 --w1 --k2 --w2"));
                };
                let spec = CombinationWaveSpec::new(k1, w1, k2, w2)?;
                if let Some(given) = a.a {
                    if (given - spec.a()).abs() > 1e-12 * spec.a().abs() {
                        return Err(usage(format!("--a {given} contradicts w2/k2 = {}", spec.a())));
                    }
                }
                for k in [k1, k2] {
                    let periods = k * length / (2.0 * PI);
                    if (periods - periods.round()).abs() > 1e-9 {
                        warnings.push(format!(
                            "wavenumber {k} is not periodic on the domain; the exact solution does not apply"
                        ));
                    }
                }
                let mut prob = CoupledProblem::combination(&spec, grid, a.dt, a.t_final)?;
                prob.snapshots = a.snapshots;
                let sol = if a.exact {
                    let times = snapshot_times(a.dt, a.t_final, a.snapshots);
                    let state = |t: f64| {
                        let mut s = grid.sample(|x| spec.exact_u(x, t));
                        s.extend(grid.sample(|x| spec.exact_p(x, t)));
                        s
                    };
                    Solution {
                        grid,
                        sigma: prob.sigma(),
                        coupled: true,
                        history: exact_history(times, state),
                        warnings: vec![],
                    }
                } else {
                    solve_coupled(&prob, &scheme, time)?
                };
                let (vg, vp) = (spec.group_velocity(), spec.phase_velocity());
                (sol, Box::new(move |x, t| spec.exact_u(x, t)), vg, vp, None)
            }
        };
    warnings.extend(solution.warnings.iter().cloned());
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let files = solution.write_snapshots(&a.out)?;
    let last = solution.history.len() - 1;
    let t_end = solution.times()[last];
    let final_max_error = grid
        .points()
        .iter()
        .zip(solution.u(last))
        .map(|(&x, u)| (u - exact_u(x, t_end)).abs())
        .fold(0.0, f64::max);
    let info = RunInfo {
        problem: match a.problem {
            ProblemArg::Advection => "advection".into(),
            ProblemArg::Coupled => "coupled".into(),
        },
        scheme: if a.exact { "exact".into() } else { scheme.name().into() },
        time,
        grid,
        dt: a.dt,
        t_final: a.t_final,
        sigma: solution.sigma,
        exact_solution_available: warnings.iter().all(|w| !w.contains("not periodic")),
        group_velocity: vg,
        phase_velocity: vp,
        mode,
        final_max_error,
        warnings,
        snapshots: files
            .iter()
            .map(|f| SnapshotEntry {
                time: f.time,
                file: f.path.file_name().unwrap().to_string_lossy().into_owned(),
            })
            .collect(),
    };
    let manifest_path = a.out.join("manifest.json");
    Manifest::new("simulate", settings, &info).write(&manifest_path)?;
    Ok(Outcome::json(json!({
        "out": a.out,
        "manifest": manifest_path,
        "problem": info.problem,
        "scheme": info.scheme,
        "sigma": info.sigma,
        "snapshots": info.snapshots.len(),
        "exact_solution_available": info.exact_solution_available,
        "final_max_error": info.final_max_error,
        "warnings": info.warnings,
    })))
}

type Snapshots = Vec<(f64, Vec<f64>)>;

fn load_run(dir: &Path) -> Result<(RunInfo, Snapshots), CliError> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| usage(format!("cannot read run manifest {}: {e}", path.display())))?;
    let manifest: Manifest<RunInfo> = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{} is not a simulate manifest: {e}", path.display())))?;
    let info = manifest.result;
    let mut snaps = Vec::with_capacity(info.snapshots.len());
    for s in &info.snapshots {
        let (header, mut cols) = read_columns(&dir.join(&s.file))?;
        if header.get(1).map(String::as_str) != Some("u") {
            return Err(usage(format!("{} has no u column", s.file)));
        }
        snaps.push((s.time, cols.swap_remove(1)));
    }
    Ok((info, snaps))
}

fn velocity_report(method: &str, velocity: f64, exact: Option<f64>, extra: Value) -> Value {
    let ratio = exact.map(|e| velocity / e);
    let mut v = json!({
        "method": method,
        "velocity": velocity,
        "exact_velocity": exact,
        "ratio": ratio,
        "band": ratio.map(band),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    v
}

pub fn measure(a: &MeasureArgs) -> Result<Outcome, CliError> {
    match a.method {
        MeasureMethod::Dft => {
            let nx = a.nx.ok_or_else(|| usage("the dft method needs --nx"))?;
            let dt = a.dt.ok_or_else(|| usage("the dft method needs --dt"))?;
            let scheme = a.scheme.spec();
            let time = TimeSpec::new(a.time.into(), dt)?;
            let cfg = AdrConfig::new(nx, a.tau.unwrap_or(dt));
            let m = measure_group_velocity_dft(&scheme, time, &cfg, a.kappa, a.offset)?;
            let extra = json!({
                "scheme": scheme.name(),
                "time": time.kind,
                "nx": nx,
                "dt": dt,
                "tau": cfg.tau,
                "target_kappa": m.target_kappa,
                "modes": [m.modes.0, m.modes.1],
                "kappas": [m.kappas.0, m.kappas.1],
            });
            Ok(Outcome::json(velocity_report("dft", m.velocity, Some(1.0), extra)))
        }
        MeasureMethod::Envelope | MeasureMethod::Peak => {
            let dir = a.run.as_ref().ok_or_else(|| usage("envelope and peak measurements need --run DIR"))?;
            let (info, snaps) = load_run(dir)?;
            let views: Vec<(f64, &[f64])> = snaps.iter().map(|(t, u)| (*t, u.as_slice())).collect();
            let t_a = a.t_a.unwrap_or(views[0].0);
            let t_b = a.t_b.unwrap_or(views[views.len() - 1].0);
            let dx = info.grid.dx();
            let (name, v, exact) = if a.method == MeasureMethod::Envelope {
                let v = measure_group_velocity_envelope(dx, &views, t_a, t_b)?;
                ("envelope", v, info.group_velocity)
            } else {
                let v = measure_phase_velocity_peak(dx, &views, t_a, t_b, info.mode)?;
                ("peak", v, info.phase_velocity)
            };
            let extra = json!({
                "run": dir,
                "problem": info.problem,
                "scheme": info.scheme,
                "t_a": t_a,
                "t_b": t_b,
            });
            let exact = info.exact_solution_available.then_some(exact);
            Ok(Outcome::json(velocity_report(name, v, exact, extra)))
        }
    }
}

fn target(t: TargetArg) -> Target {
    match t {
        TargetArg::Table2 => Target::Table2,
        TargetArg::Fig12 => Target::Fig12,
        TargetArg::Fig3 => Target::Fig3,
        TargetArg::Fig6 => Target::Fig6,
        TargetArg::Fig7 => Target::Fig7,
        TargetArg::Fig9 => Target::Fig9,
        TargetArg::Sec51Ratios => Target::Sec51Ratios,
        TargetArg::All => Target::All,
    }
}

pub fn reproduce(a: &ReproduceArgs, settings: Settings) -> Result<Outcome, CliError> {
    let reports = reproduce::run(target(a.target))?;
    let mut lines = vec![];
    for r in &reports {
        lines.extend(r.lines());
        lines.extend(r.notes.iter().map(|n| format!("NOTE [{}] {n}", r.target)));
    }
    for l in &lines {
        eprintln!("{l}");
    }
    let failures: usize = reports
        .iter()
        .map(|r| r.rows.iter().filter(|x| !x.pass).count() + r.checks.iter().filter(|x| !x.pass).count())
        .sum();
    let mut written: Vec<PathBuf> = vec![];
    if let Some(dir) = &a.out {
        for r in &reports {
            for art in &r.artifacts {
                let path = dir.join(&r.target).join(&art.name);
                let mut w = create(&path)?;
                w.write_all(art.contents.as_bytes())?;
                w.flush()?;
                written.push(path);
            }
        }
        let mut w = create(&dir.join("report.txt"))?;
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        w.flush()?;
        let mut w = create(&dir.join("report.json"))?;
        serde_json::to_writer_pretty(&mut w, &reports)?;
        writeln!(w)?;
        w.flush()?;
        let summary = json!({ "passed": failures == 0, "failures": failures, "artifacts": written });
        Manifest::new("reproduce", settings, summary).write(&dir.join("manifest.json"))?;
    }
    Ok(Outcome {
        json: Some(json!({
            "passed": failures == 0,
            "failures": failures,
            "out": a.out,
            "reports": reports,
        })),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_parsing() {
        assert_eq!(parse_domain("-1,1").unwrap(), (-1.0, 1.0));
        assert_eq!(parse_domain(" 0 , 6.5 ").unwrap(), (0.0, 6.5));
        assert!(parse_domain("1,1").is_err());
        assert!(parse_domain("2,1").is_err());
        assert!(parse_domain("1").is_err());
        assert!(parse_domain("a,b").is_err());
    }

    #[test]
    fn exact_snapshot_times_match_solver_layout() {
        let g = Grid::new(-1.0, 1.0, 48).unwrap();
        let mut prob = AdvectionProblem::new(0.125, g, 1e-3, 2.0, |x| (8.0 * PI * x).sin()).unwrap();
        prob.snapshots = 20;
        let sol = solve_advection(&prob, &SchemeSpec::upw5(), TimeKind::Rk4).unwrap();
        let times = snapshot_times(1e-3, 2.0, 20);
        assert_eq!(times.len(), sol.times().len());
        for (a, b) in times.iter().zip(sol.times()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn report_carries_ratio_and_band() {
        let v = velocity_report("peak", 0.5, Some(0.5), json!({"scheme": "exact"}));
        assert_eq!(v["ratio"], 1.0);
        assert_eq!(v["band"], "gvp");
        assert_eq!(v["scheme"], "exact");
        let v = velocity_report("peak", 0.5, None, json!({}));
        assert!(v["ratio"].is_null() && v["band"].is_null());
    }
}
