use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vague_core::expectations::{
    emit_tone, gen_panel, gen_panel_allow_unit_lambda, gen_signals, Panel, SimulationConfig,
};
use vague_core::Execution;

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

fn corr(a: &[f64], b: &[f64]) -> f64 {
    let (ma, sa) = mean_sd(a);
    let (mb, sb) = mean_sd(b);
    let c = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / (a.len() as f64 - 1.0);
    c / (sa * sb)
}

/// Average ranks, ties sharing the mean rank.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn default_panel() -> Panel {
    let cfg = SimulationConfig::default();
    assert_eq!(cfg.n_analysts * cfg.n_firms * cfg.n_periods, 100_000);
    gen_panel(&cfg, Execution::default()).unwrap()
}

#[test]
fn vague_draws_have_the_configured_spread() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sigma = 0.7;
    let draws: Vec<f64> = (0..100_000)
        .map(|_| gen_signals(&mut rng, 1.0, sigma, 1.0, true).1)
        .collect();
    let (_, sd) = mean_sd(&draws);
    assert!((sd / sigma - 1.0).abs() < 0.02, "sd {sd}");
    let off: Vec<f64> = (0..1000)
        .map(|_| gen_signals(&mut rng, 1.0, sigma, 1.0, false).1)
        .collect();
    assert!(off.iter().all(|&v| v == 0.0));
}

#[test]
fn panel_properties() {
    let panel = default_panel();
    let cfg = &panel.config;

    // Realized state minus both expectations is pure noise with mean zero.
    let resid: Vec<f64> = panel
        .rows
        .iter()
        .zip(&panel.audit)
        .map(|(r, a)| r.realized - a.precise_exp - a.vague_exp)
        .collect();
    let (m, sd) = mean_sd(&resid);
    assert!(m.abs() < 3.0 * sd / (resid.len() as f64).sqrt(), "mean {m}");

    // Vague expectations are zero wherever no vague signal was assigned.
    for a in panel.audit.iter().filter(|a| !a.vague_assigned) {
        assert_eq!(a.vague_exp, 0.0);
    }

    // F − precise_exp on the covariates recovers the bias coefficients.
    let n = panel.len();
    let k = cfg.bias_coeffs.len();
    let x = DMatrix::from_fn(n, k, |i, j| panel.rows[i].covariates[j]);
    let y = DVector::from_fn(n, |i, _| {
        panel.rows[i].forecast - panel.audit[i].precise_exp
    });
    let xtx = x.transpose() * &x;
    let inv = xtx.clone().try_inverse().unwrap();
    let beta = &inv * x.transpose() * &y;
    let resid = &y - &x * &beta;
    let s2 = resid.norm_squared() / (n - k) as f64;
    for j in 0..k {
        let se = (s2 * inv[(j, j)]).sqrt();
        let gap = (beta[j] - cfg.bias_coeffs[j]).abs();
        assert!(
            gap < 2.0 * se,
            "coef {j}: {} vs {}",
            beta[j],
            cfg.bias_coeffs[j]
        );
    }

    // Errors move against vague expectations.
    let err: Vec<f64> = panel.rows.iter().map(|r| r.forecast_error).collect();
    let vague: Vec<f64> = panel.audit.iter().map(|a| a.vague_exp).collect();
    assert!(corr(&err, &vague) < 0.0);

    // Tone moves with the next revision.
    let (tone, rev): (Vec<f64>, Vec<f64>) = panel
        .rows
        .iter()
        .filter_map(|r| r.revision.map(|v| (r.tone, v)))
        .unzip();
    assert!(corr(&tone, &rev) > 0.0);
}

#[test]
fn tone_ranks_follow_vague_expectations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (tone, vague): (Vec<f64>, Vec<f64>) = (0..10_000)
        .map(|_| {
            let v = gen_signals(&mut rng, 1.0, 0.5, 1.0, true).1;
            (emit_tone(v, 0.05, &mut rng), v)
        })
        .unzip();
    let rho = corr(&ranks(&tone), &ranks(&vague));
    assert!(rho > 0.95, "rank correlation {rho}");
}

#[test]
fn revision_identity_holds_to_machine_precision() {
    for seed in [1, 2, 3] {
        let cfg = SimulationConfig {
            seed,
            n_analysts: 10,
            n_firms: 10,
            n_periods: 12,
            lambda: 0.3,
            ..SimulationConfig::default()
        };
        let panel = gen_panel(&cfg, Execution::Sequential).unwrap();
        let (worst, checked) = panel.max_revision_identity_residual();
        assert_eq!(checked, 10 * 10 * 10);
        assert!(worst < 1e-12, "residual {worst}");
    }
}

#[test]
fn full_updating_forecasts_the_last_vague_expectation() {
    let cfg = SimulationConfig {
        n_analysts: 5,
        n_firms: 4,
        n_periods: 6,
        lambda: 1.0,
        ..SimulationConfig::default()
    };
    assert!(gen_panel(&cfg, Execution::Sequential).is_err());
    let panel = gen_panel_allow_unit_lambda(&cfg, Execution::Sequential).unwrap();
    for (i, row) in panel.rows.iter().enumerate() {
        if let Some(next) = row.next_forecast {
            assert_eq!(next, panel.audit[i].vague_exp);
        }
    }
}

#[test]
fn execution_modes_and_seeds() {
    let cfg = SimulationConfig {
        n_analysts: 20,
        n_firms: 10,
        n_periods: 5,
        ..SimulationConfig::default()
    };
    let a = gen_panel(&cfg, Execution::Sequential).unwrap();
    let b = gen_panel(&cfg, Execution::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.panel_csv(), b.panel_csv());
    let other = gen_panel(&SimulationConfig { seed: 7, ..cfg }, Execution::Sequential).unwrap();
    assert_ne!(a.rows, other.rows);
}
