use hstrn::channels::{db_to_linear, shadowing_preset, AlphaMuParams, SrParams};
use hstrn::metrics::*;
use hstrn::orderstats::{LinkPair, Topology};

fn cfg(case: u8, rho_b_db: f64, rho_e_db: f64, phi_c: f64, (n, p, q): (u32, u32, u32)) -> SecrecyConfig {
    let sr = SrParams::from_shadowing(shadowing_preset(case).unwrap(), db_to_linear(10.0)).unwrap();
    SecrecyConfig {
        user_link: LinkPair::user(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(rho_b_db)).unwrap()),
        eve_link: LinkPair::eavesdropper(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(rho_e_db)).unwrap()),
        topo: Topology::new(n, p, q).unwrap(),
        phi_c,
    }
}

const GRID: [f64; 6] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0];
const CONTROL: MetricControl = MetricControl {
    series: hstrn::channels::SeriesControl {
        t1_max: 20,
        t2_max: 20,
        t_cap: 60,
        comp_cap: hstrn::specfun::DEFAULT_COMPOSITION_CAP,
        tol: 1e-10,
    },
    tol: hstrn::quadrature::Tolerance::new(1e-8, 1e-14),
    integrals: IntegralMode::Quadrature,
};

fn along(f: impl Fn(f64) -> f64) -> Vec<f64> {
    GRID.iter().map(|&g| f(g)).collect()
}

#[test]
fn sopm_falls_and_pnsmc_rises_with_rho_b() {
    let s = along(|r| sopm(&cfg(2, r, -10.0, 0.5, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value);
    let p = along(|r| pnsmc(&cfg(2, r, -10.0, 0.5, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value);
    assert!(s.windows(2).all(|w| w[1] <= w[0]), "{s:?}");
    assert!(p.windows(2).all(|w| w[1] >= w[0]), "{p:?}");
}

#[test]
fn sopm_rises_with_rho_e_and_phi_c() {
    for &r in &GRID {
        let base = sopm(&cfg(2, r, -10.0, 0.5, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value;
        let eve = sopm(&cfg(2, r, -5.0, 0.5, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value;
        let rate = sopm(&cfg(2, r, -10.0, 1.0, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value;
        assert!(eve >= base && rate >= base, "rho_b {r}: {base} {eve} {rate}");
    }
}

#[test]
fn esmc_rises_with_n_and_falls_with_p() {
    for &r in &GRID {
        let e = |n, p| esmc(&cfg(2, r, -10.0, 0.5, (n, p, 5)), &CONTROL, Path::Quadrature).unwrap().raw_value;
        assert!(e(1, 3) <= e(3, 3) && e(3, 3) <= e(5, 3), "N at {r}");
        assert!(e(3, 1) >= e(3, 3) && e(3, 3) >= e(3, 5), "P at {r}");
    }
}

#[test]
fn heavier_shadowing_raises_outage() {
    for &r in &GRID {
        let s: Vec<f64> = (1..=4).map(|c| sopm(&cfg(c, r, -10.0, 0.5, (5, 5, 5)), &CONTROL, Path::Quadrature).unwrap().value).collect();
        assert!(s.windows(2).all(|w| w[0] >= w[1]), "rho_b {r}: {s:?}");
    }
}

#[test]
fn closed_form_agrees_with_quadrature_on_small_configs() {
    for case in [1, 2, 4] {
        for topo in [(1, 1, 1), (2, 1, 2), (2, 2, 2)] {
            let c = cfg(case, 10.0, -10.0, 0.5, topo);
            for metric in [sopm, esmc] {
                let a = metric(&c, &CONTROL, Path::ClosedForm).unwrap().raw_value;
                let b = metric(&c, &CONTROL, Path::Quadrature).unwrap().raw_value;
                assert!((a - b).abs() <= 1e-3 * b.abs(), "case {case} {topo:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn pnsmc_is_one_minus_sopm_at_zero_rate() {
    let c = cfg(3, 5.0, -5.0, 1.2, (2, 2, 2));
    for path in [Path::Quadrature, Path::ClosedForm] {
        let p = pnsmc(&c, &CONTROL, path).unwrap().raw_value;
        let s = sopm(&c.with_phi_c(0.0), &CONTROL, path).unwrap().raw_value;
        assert!((p + s - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn probabilities_stay_in_unit_interval() {
    for &r in &GRID {
        for phi_c in [0.0, 0.5, 3.0, 30.0] {
            let c = cfg(1, r, 0.0, phi_c, (3, 3, 3));
            let s = sopm(&c, &CONTROL, Path::Quadrature).unwrap();
            assert!((0.0..=1.0).contains(&s.value));
            assert!(s.raw_value >= -1e-6 && s.raw_value <= 1.0 + 1e-6);
        }
    }
}

#[test]
fn meijer_mode_matches_quadrature_mode() {
    // every log term is a series of contour integrals, so keep the expansion small
    let mut c = cfg(2, 10.0, -10.0, 0.5, (1, 1, 1));
    for alpha_e in [1.0, 3.0] {
        c.eve_link.hop2 = AlphaMuParams::new(alpha_e, 1.0, db_to_linear(-10.0)).unwrap();
        let meijer = MetricControl { integrals: IntegralMode::MeijerG, ..CONTROL };
        for metric in [sopm, esmc] {
            let a = metric(&c, &meijer, Path::ClosedForm).unwrap();
            let b = metric(&c, &CONTROL, Path::Quadrature).unwrap();
            assert!((a.raw_value - b.raw_value).abs() <= 1e-6 * b.raw_value.abs(), "alpha_e {alpha_e}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn non_integer_orders_need_quadrature() {
    let mut c = cfg(2, 10.0, -10.0, 0.5, (2, 2, 2));
    c.user_link.hop2 = AlphaMuParams::new(2.5, 1.0, 10.0).unwrap();
    assert!(matches!(sopm(&c, &CONTROL, Path::ClosedForm), Err(hstrn::Error::Unsupported(_))));
    assert!(sopm(&c, &CONTROL, Path::Quadrature).is_ok());
}
