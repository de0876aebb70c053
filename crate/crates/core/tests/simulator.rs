use nonlocal_rd::error::Error;
use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::meanfield::{density_model1, ModelParams};
use nonlocal_rd::simulator::*;
use nonlocal_rd::trace::DensityTrace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(d: f64, diffusion: f64, r: f64, q: f64, m: f64, b: f64, n0: f64) -> ModelParams {
    ModelParams {
        diffusion,
        rk: Kernel::normal(r, 1.0, d),
        qk: Kernel::normal(q, 1.0, d),
        death: m,
        birth: b,
        n0,
        dim: d,
    }
}

fn count_after(config: &SimConfig, seed: u64, steps: usize) -> usize {
    let stepper = Stepper::new(config).unwrap();
    let mut st = init_poisson(config, ChaCha8Rng::seed_from_u64(seed)).unwrap();
    for _ in 0..steps {
        stepper.step(&mut st).unwrap();
    }
    st.count()
}

#[test]
fn poisson_initial_counts() {
    let empty = SimConfig::new(model(2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0), 40.0, vec![0.0], 1);
    assert_eq!(init_poisson(&empty, ChaCha8Rng::seed_from_u64(1)).unwrap().count(), 0);

    let c = SimConfig::new(model(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0), 1000.0, vec![0.0], 1);
    let n = init_poisson(&c, ChaCha8Rng::seed_from_u64(9)).unwrap().count();
    assert!((n as f64 - 1000.0).abs() <= 95.0, "{n}");

    let c = SimConfig::new(model(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.5), 40.0, vec![0.0], 1);
    let draws = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let total: usize = (0..draws)
        .map(|_| init_poisson(&c, ChaCha8Rng::seed_from_u64(rand::Rng::random(&mut rng))).unwrap().count())
        .sum();
    let mean = total as f64 / draws as f64;
    assert!((mean - 20.0).abs() < 3.0 * (20.0f64 / draws as f64).sqrt(), "{mean}");
}

#[test]
fn initial_positions_in_box() {
    let c = SimConfig::new(model(3.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.2), 40.0, vec![0.0], 4);
    let st = init_poisson(&c, ChaCha8Rng::seed_from_u64(4)).unwrap();
    assert!(st.positions.iter().all(|&x| (0.0..40.0).contains(&x)));
}

#[test]
fn frozen_state_without_rates_is_unchanged() {
    let mut c = SimConfig::new(model(2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1), 40.0, vec![0.0, 1.0], 2);
    c.dt = Some(0.1);
    let mut st = init_poisson(&c, ChaCha8Rng::seed_from_u64(2)).unwrap();
    let before = st.positions.clone();
    for _ in 0..10 {
        step(&mut st, &c).unwrap();
    }
    assert_eq!(st.positions, before);
}

#[test]
fn diffusion_alone_conserves_particles() {
    let mut c = SimConfig::new(model(2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.1), 40.0, vec![0.0, 5.0], 2);
    c.dt = Some(0.05);
    let st = init_poisson(&c, ChaCha8Rng::seed_from_u64(2)).unwrap();
    assert_eq!(count_after(&c, 2, 100), st.count());
}

#[test]
fn pure_death_is_exponential() {
    let (m, t) = (0.5, 2.0);
    let mut c = SimConfig::new(model(1.0, 1.0, 0.0, 0.0, m, 0.0, 1.0), 1000.0, vec![0.0, t], 3);
    c.dt = Some(0.01);
    let reps = 20;
    let (mut n0, mut nt) = (0.0, 0.0);
    for seed in 0..reps {
        n0 += init_poisson(&c, ChaCha8Rng::seed_from_u64(seed)).unwrap().count() as f64;
        nt += count_after(&c, seed, 200) as f64;
    }
    let p = (-m * t).exp();
    let want = n0 * p;
    let sigma = (n0 * p * (1.0 - p)).sqrt();
    assert!((nt - want).abs() < 4.0 * sigma, "{nt} vs {want} ± {sigma}");
}

#[test]
fn branching_grows_exponentially() {
    let (q, t, dt) = (0.5, 2.0, 0.01);
    let mut c = SimConfig::new(model(1.0, 1.0, 0.0, q, 0.0, 0.0, 0.2), 1000.0, vec![0.0, t], 3);
    c.dt = Some(dt);
    let reps = 20;
    let (mut n0, mut nt) = (0.0, 0.0);
    for seed in 0..reps {
        n0 += init_poisson(&c, ChaCha8Rng::seed_from_u64(seed)).unwrap().count() as f64;
        nt += count_after(&c, seed, 200) as f64;
    }
    // Yule process: variance of the offspring count per ancestor is e^{qT}(e^{qT} − 1)
    let g = (q * t).exp();
    let sigma = (n0 * g * (g - 1.0)).sqrt();
    let want = n0 * g;
    assert!((nt - want).abs() < 4.0 * sigma + 0.01 * want, "{nt} vs {want} ± {sigma}");
}

#[test]
fn supercritical_growth_hits_the_cap() {
    let mut c = SimConfig::new(model(1.0, 1.0, 0.0, 2.0, 0.0, 0.0, 1.0), 100.0, vec![0.0, 20.0], 3);
    c.max_particles = 5000;
    assert!(matches!(run(&c), Err(Error::CapExceeded { .. })));
}

#[test]
fn pair_probability_depends_on_minimum_image_distance() {
    let r = 2.0;
    let mut c = SimConfig::new(model(1.0, 0.0, r, 0.0, 0.0, 0.0, 0.0), 100.0, vec![0.0, 1.0], 0);
    c.dt = Some(0.2);
    let stepper = Stepper::new(&c).unwrap();
    let sep: f64 = 0.8;
    let k = Kernel::normal(r, 1.0, 1.0);
    let p = 1.0 - (-k.real_space(sep).unwrap() * 0.2).exp();
    let trials = 4000;
    for (a, b) in [(50.0, 50.0 + sep), (0.3, 100.0 - (sep - 0.3))] {
        let mut hits = 0;
        for seed in 0..trials {
            let mut st = init_poisson(&c, ChaCha8Rng::seed_from_u64(seed)).unwrap();
            st.positions = vec![a, b];
            stepper.step(&mut st).unwrap();
            if st.count() == 0 {
                hits += 1;
            }
        }
        let frac = hits as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((frac - p).abs() < 4.0 * sigma, "({a}, {b}): {frac} vs {p}");
    }
}

#[test]
fn same_seed_is_bit_identical() {
    let c = SimConfig::new(model(1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 1.0), 200.0, log_spaced(1.0, 20.0, 10), 42);
    let a = run_replicas(&c, 3).unwrap();
    let b = run_replicas(&c, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_replica_csv(), b.to_replica_csv());
    let other = run_replicas(&SimConfig { seed: 43, ..c.clone() }, 3).unwrap();
    assert_ne!(a.densities, other.densities);
    assert_eq!(a.config_hash, c.digest());
}

fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Asymptotic Kolmogorov survival function.
fn ks_pvalue(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n * m) as f64 / (n + m) as f64;
    let lam = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let s: f64 = (1..100)
        .map(|k| {
            let k = k as f64;
            2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lam * lam).exp()
        })
        .sum();
    s.clamp(0.0, 1.0)
}

#[test]
fn translation_invariance() {
    let mut c = SimConfig::new(model(1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 1.0), 100.0, vec![0.0, 5.0], 0);
    c.dt = Some(0.05);
    let stepper = Stepper::new(&c).unwrap();
    let reps = 300;
    let mut plain = Vec::new();
    let mut shifted = Vec::new();
    for seed in 0..reps {
        for (shift, out) in [(0.0, &mut plain), (37.3, &mut shifted)] {
            let mut st = init_poisson(&c, ChaCha8Rng::seed_from_u64(seed)).unwrap();
            st.positions.iter_mut().for_each(|x| *x = (*x + shift) % 100.0);
            for _ in 0..100 {
                stepper.step(&mut st).unwrap();
            }
            out.push(st.count() as f64);
        }
    }
    let d = ks_statistic(&mut plain, &mut shifted);
    let p = ks_pvalue(d, reps as usize, reps as usize);
    assert!(p > 0.01, "KS D = {d}, p = {p}");
}

#[test]
fn halving_dt_keeps_the_exponent() {
    let mut c = SimConfig::new(model(1.0, 1.0, 2.0, 0.0, 0.0, 0.0, 1.0), 2000.0, log_spaced(1.0, 300.0, 25), 8);
    c.dt = Some(0.05);
    let coarse = fit_decay_exponent(&run_replicas(&c, 16).unwrap(), 10.0, 300.0).unwrap();
    c.dt = Some(0.025);
    let fine = fit_decay_exponent(&run_replicas(&c, 16).unwrap(), 10.0, 300.0).unwrap();
    let joint = (coarse.stderr.powi(2) + fine.stderr.powi(2)).sqrt();
    assert!((coarse.slope - fine.slope).abs() < 2.0 * joint, "{coarse:?} vs {fine:?}");
}

#[test]
fn fit_recovers_synthetic_slopes() {
    let times = log_spaced(1.0, 1e3, 20);
    let power = DensityTrace::deterministic(times.clone(), times.iter().map(|t| 3.0 * t.powf(-0.5)).collect());
    let f = fit_decay_exponent(&power, 1.0, 1e3).unwrap();
    assert!((f.slope + 0.5).abs() < 1e-12 && f.stderr < 1e-12);
    let flat = DensityTrace::deterministic(times.clone(), vec![0.2; times.len()]);
    assert!(fit_decay_exponent(&flat, 1.0, 1e3).unwrap().slope.abs() < 1e-12);
    let late = log_spaced(1e4, 1e6, 20);
    let mf = DensityTrace::deterministic(late.clone(), late.iter().map(|&t| density_model1(1.0, 2.0, t)).collect());
    assert!((fit_decay_exponent(&mf, 1e4, 1e6).unwrap().slope + 1.0).abs() < 1e-4);
    assert!(matches!(fit_decay_exponent(&power, 1.0, 3.0), Err(Error::InsufficientData(_))));
}

#[test]
fn config_validation() {
    let good = SimConfig::new(model(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0), 100.0, vec![0.0, 1.0], 0);
    assert!(good.validate().is_ok());
    assert!(SimConfig { box_len: 20.0, ..good.clone() }.validate().is_err());
    assert!(SimConfig { record_times: vec![1.0, 0.5], ..good.clone() }.validate().is_err());
    assert!(SimConfig { dt: Some(0.0), ..good.clone() }.validate().is_err());
    let mut four = good.clone();
    four.params = model(4.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    assert!(four.validate().is_err());
}
