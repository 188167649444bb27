use std::f64::consts::PI;

use num_complex::Complex64;

use specwave::adr::{
    adr_modified_wavenumber, adr_nt_modified_wavenumber, adr_nt_table_modes, adr_table_modes,
    analytic_table, max_jump_ratio, AdrConfig, KprimeSource, Probe, ProbeConfig,
};
use specwave::qldrp::{
    band, default_axis, dkappa_dk_numeric, group_velocity, gvp_map, DerivativeRule, GvpMap, GvpMapMeta,
    SpectralCurve,
};
use specwave::schemes::{upw5_stencil, SchemeSpec};
use specwave::timeint::{TimeKind, TimeSpec};

fn all_schemes() -> [SchemeSpec; 3] {
    [SchemeSpec::upw5(), SchemeSpec::weno5_js(), SchemeSpec::weno5_m()]
}

fn max_diff(a: &[Option<Complex64>], b: &[Option<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.unwrap() - y.unwrap()).norm())
        .fold(0.0, f64::max)
}

fn map_of(curve: &SpectralCurve, time: TimeKind, sigma: f64, axis: &[f64]) -> GvpMap {
    let meta = GvpMapMeta {
        scheme: "test".into(),
        time,
        sigma,
        source: curve.source,
        table_nx: 422,
    };
    gvp_map(curve, time, sigma, axis, axis, meta).unwrap()
}

#[test]
fn upw5_adr_euler_matches_closed_form() {
    let exact = analytic_table(&upw5_stencil(), 422).unwrap();
    let time = TimeSpec::new(TimeKind::Euler, 1e-8).unwrap();
    let adr = adr_modified_wavenumber(&SchemeSpec::upw5(), time, &AdrConfig::new(422, 1e-8)).unwrap();
    assert!(max_diff(&adr.kprime, &exact.kprime) < 1e-6);
}

#[test]
fn weno_adr_nt_agrees_with_short_time_adr() {
    let modes = [66, 67, 68];
    for scheme in [SchemeSpec::weno5_js(), SchemeSpec::weno5_m()] {
        let nt = adr_nt_table_modes(&scheme, &ProbeConfig::default(), &modes).unwrap();
        let time = TimeSpec::new(TimeKind::Rk4, 1e-8).unwrap();
        let adr = adr_table_modes(&scheme, time, &AdrConfig::new(422, 1e-8), &modes).unwrap();
        for (a, b) in nt.kprime.iter().zip(&adr.kprime) {
            let (a, b) = (a.unwrap(), b.unwrap());
            assert!((a.re - b.re).abs() < 1e-3 && (a.im - b.im).abs() < 1e-3, "{a} vs {b}");
        }
    }
}

#[test]
fn weno_js_slope_near_unit_kappa() {
    let nt = adr_nt_table_modes(&SchemeSpec::weno5_js(), &ProbeConfig::default(), &[66, 68]).unwrap();
    let slope = (nt.kprime[1].unwrap().re - nt.kprime[0].unwrap().re) / (nt.kappas[1] - nt.kappas[0]);
    assert!((slope - 0.8647).abs() < 0.02, "{slope}");
}

#[test]
fn phase_averaging_leaves_linear_tables_unchanged() {
    let one = adr_nt_modified_wavenumber(&SchemeSpec::upw5(), &ProbeConfig::default()).unwrap();
    let cfg = ProbeConfig {
        phase_average_count: 5,
        seed: 11,
        ..ProbeConfig::default()
    };
    let many = adr_nt_modified_wavenumber(&SchemeSpec::upw5(), &cfg).unwrap();
    assert!(max_diff(&one.kprime, &many.kprime) < 1e-12);
}

#[test]
fn prime_doubled_grid_has_no_jump_points() {
    let js = SchemeSpec::weno5_js();
    let good = adr_nt_modified_wavenumber(&js, &ProbeConfig::with_nx(422)).unwrap();
    let composite = adr_nt_modified_wavenumber(&js, &ProbeConfig::with_nx(420)).unwrap();
    let (r_good, r_comp) = (max_jump_ratio(&good, PI / 2.0), max_jump_ratio(&composite, PI / 2.0));
    assert!(r_good < 5.0, "422: {r_good}");
    assert!(r_comp > r_good, "420: {r_comp}, 422: {r_good}");
}

#[test]
fn tables_are_consistent_near_the_origin() {
    for scheme in all_schemes() {
        let t = adr_nt_modified_wavenumber(&scheme, &ProbeConfig::default()).unwrap();
        assert!(t.kprime[0].unwrap().norm() < 1e-10);
        let r = t.kprime[1].unwrap() / t.kappas[1];
        assert!((r - 1.0).norm() < 1e-3, "{}: {r}", scheme.name());
    }
}

#[test]
fn upwind_tables_are_dissipative() {
    for scheme in all_schemes() {
        let t = adr_nt_modified_wavenumber(&scheme, &ProbeConfig::default()).unwrap();
        let worst = t.kprime.iter().map(|v| v.unwrap().im).fold(f64::NEG_INFINITY, f64::max);
        assert!(worst <= 1e-10, "{}: {worst}", scheme.name());
    }
}

#[test]
fn cosine_and_complex_probes_agree_for_linear_scheme() {
    let time = TimeSpec::new(TimeKind::Euler, 1e-8).unwrap();
    let mut cfg = AdrConfig::new(422, 1e-8);
    let modes: Vec<usize> = (1..211).step_by(7).collect();
    let complex = adr_table_modes(&SchemeSpec::upw5(), time, &cfg, &modes).unwrap();
    cfg.probe.probe = Probe::Cosine;
    let cosine = adr_table_modes(&SchemeSpec::upw5(), time, &cfg, &modes).unwrap();
    assert!(max_diff(&complex.kprime, &cosine.kprime) < 1e-8);
}

#[test]
fn numeric_derivative_matches_closed_form() {
    let s = upw5_stencil();
    let t = analytic_table(&s, 4096).unwrap();
    let d = dkappa_dk_numeric(&t).unwrap();
    let err = t
        .kappas
        .iter()
        .zip(&d)
        .map(|(&k, v)| (v.unwrap() - s.modified_wavenumber_derivative(k)).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
}

#[test]
fn adr_maps_of_upw5_degenerate_to_closed_form_maps() {
    let axis = default_axis(64);
    let exact = SpectralCurve::from_table(&analytic_table(&upw5_stencil(), 422).unwrap(), DerivativeRule::Numeric)
        .unwrap();
    let time = TimeSpec::new(TimeKind::Euler, 1e-8).unwrap();
    let adr_table = adr_modified_wavenumber(&SchemeSpec::upw5(), time, &AdrConfig::new(422, 1e-8)).unwrap();
    let adr = SpectralCurve::from_table(&adr_table, DerivativeRule::Numeric).unwrap();
    for kind in TimeKind::ALL {
        let (a, b) = (map_of(&exact, kind, 0.01, &axis), map_of(&adr, kind, 0.01, &axis));
        let d = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(d < 1e-4, "{kind}: {d}");
    }
}

#[test]
fn numeric_and_analytic_derivative_maps_agree() {
    let t = analytic_table(&upw5_stencil(), 422).unwrap();
    let numeric = SpectralCurve::from_table(&t, DerivativeRule::Numeric).unwrap();
    let analytic = SpectralCurve::from_table(&t, DerivativeRule::Analytic(upw5_stencil())).unwrap();
    let axis = default_axis(64);
    let (a, b) = (map_of(&numeric, TimeKind::Rk4, 0.01, &axis), map_of(&analytic, TimeKind::Rk4, 0.01, &axis));
    let d = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d < 1e-3, "{d}");
}

#[test]
fn group_velocity_is_exact_at_the_origin() {
    for scheme in all_schemes() {
        let source = if scheme.is_linear() { KprimeSource::Analytic } else { KprimeSource::AdrNt };
        let table = specwave::qldrp::KprimeRequest::new(source).table(&scheme).unwrap();
        let curve = SpectralCurve::from_table(&table, DerivativeRule::Numeric).unwrap();
        for kind in TimeKind::ALL {
            let v = group_velocity(kind, &curve.point(1e-3, 1e-3, 0.01).unwrap());
            assert!((v - 1.0).abs() < 1e-3, "{} {kind}: {v}", scheme.name());
        }
    }
}

/// At sigma = 0.01 the integrators differ by at most about
/// `sigma |kappa'| |d kappa'/d kappa|`, which reaches 0.024 near Nyquist for
/// UPW5. They agree to 1e-2 for `kappa <= 1` and classify almost every cell
/// into the same band.
#[test]
fn small_cfl_maps_nearly_independent_of_integrator() {
    let curve = SpectralCurve::from_table(&analytic_table(&upw5_stencil(), 422).unwrap(), DerivativeRule::Numeric)
        .unwrap();
    let axis = default_axis(256);
    let maps: Vec<GvpMap> = TimeKind::ALL.iter().map(|&k| map_of(&curve, k, 0.01, &axis)).collect();
    let mut global: f64 = 0.0;
    let mut low_kappa: f64 = 0.0;
    let mut same = 0usize;
    for (i, &v) in maps[0].values.iter().enumerate() {
        let kappa = axis[i % axis.len()];
        let d = maps[1..].iter().map(|m| (m.values[i] - v).abs()).fold(0.0, f64::max);
        global = global.max(d);
        if kappa <= 1.0 {
            low_kappa = low_kappa.max(d);
        }
        if maps[1..].iter().all(|m| band(m.values[i]) == band(v)) {
            same += 1;
        }
    }
    assert!(low_kappa < 1e-2, "{low_kappa}");
    assert!(global < 2.5e-2, "{global}");
    assert!(same as f64 / maps[0].values.len() as f64 > 0.99);
}

#[test]
fn map_rejects_kappa_beyond_table() {
    let curve = SpectralCurve::from_table(&analytic_table(&upw5_stencil(), 64).unwrap(), DerivativeRule::Numeric)
        .unwrap();
    let meta = GvpMapMeta {
        scheme: "upw5".into(),
        time: TimeKind::Rk4,
        sigma: 0.01,
        source: KprimeSource::Analytic,
        table_nx: 64,
    };
    assert!(gvp_map(&curve, TimeKind::Rk4, 0.01, &[1.0, 3.2], &[0.5], meta).is_err());
}

#[test]
fn map_csv_layout() {
    let curve = SpectralCurve::from_table(&analytic_table(&upw5_stencil(), 64).unwrap(), DerivativeRule::Numeric)
        .unwrap();
    let map = map_of(&curve, TimeKind::Rk3, 0.1, &default_axis(5));
    let mut buf = Vec::new();
    map.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("omega_dt\\kappa,"));
    for (i, line) in lines[1..].iter().enumerate() {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[0], map.omega_dt_axis[i]);
        assert_eq!(&cells[1..], map.rows().nth(i).unwrap());
    }
    let json = serde_json::to_value(&map.meta).unwrap();
    assert_eq!(json["time"], "rk3");
    assert_eq!(json["source"], "analytic");
}
