use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::propagators::*;
use nonlocal_rd::quad::{integrate, QuadOptions};
use proptest::prelude::*;

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn inv(self) -> C {
        let n = self.0 * self.0 + self.1 * self.1;
        C(self.0 / n, -self.1 / n)
    }
}

/// Sum of the n ≥ 2 Dyson terms `qⁿ/(−iω + a)^{n+1}` up to `n_max`.
fn dyson_tail(a: f64, q: f64, omega: f64, n_max: usize) -> C {
    let g0 = C(a, -omega).inv();
    let mut term = g0.mul(g0).mul(g0);
    let mut scale = q * q;
    let mut acc = C(0.0, 0.0);
    for _ in 2..=n_max {
        acc = C(acc.0 + scale * term.0, acc.1 + scale * term.1);
        term = term.mul(g0);
        scale *= q;
    }
    acc
}

/// Inverse Fourier transform of the truncated Dyson sum. The n = 0, 1 terms
/// are transformed analytically; the remainder decays like ω⁻³.
fn dyson_time(a: f64, q: f64, t: f64) -> f64 {
    let opts = QuadOptions::new(1e-13, 1e-11);
    let f = |w: f64| {
        let g = dyson_tail(a, q, w, 80);
        g.0 * (w * t).cos() + g.1 * (w * t).sin()
    };
    let (w_max, panels) = (4e3, 2000);
    let h = w_max / panels as f64;
    let mut s = 0.0;
    for i in 0..panels {
        s += integrate(f, i as f64 * h, (i + 1) as f64 * h, &opts).value;
    }
    (1.0 + q * t) * (-a * t).exp() + s / std::f64::consts::PI
}

#[test]
fn dressed_is_dyson_limit() {
    let (d, m) = (1.2, 1.0);
    let qk = Kernel::normal(d * 0.6, 1.5, 3.0);
    for (k, t) in [(0.0, 0.5), (0.7, 1.0), (1.5, 2.0)] {
        let a = d * (k * k + m);
        let q = qk.momentum_space(k);
        assert!(q < a);
        let want = dyson_time(a, q, t);
        let got = dressed_propagator(k, t, d, m, &qk);
        assert!((got - want).abs() < 1e-6 * got, "k={k} t={t}: {got} vs {want}");
    }
}

#[test]
fn bare_frequency_form_matches_transform() {
    let opts = QuadOptions::new(1e-14, 1e-12);
    let (d, m) = (0.8, 0.3);
    for (k, w) in [(0.0, 0.0), (0.5, 1.0), (2.0, -3.0), (1.0, 10.0)] {
        let a = d * (k * k + m);
        let t_max = 60.0 / a;
        let re = integrate(|t| (w * t).cos() * bare_propagator(k, t, d, m), 0.0, t_max, &opts).value;
        let im = integrate(|t| (w * t).sin() * bare_propagator(k, t, d, m), 0.0, t_max, &opts).value;
        let (fr, fi) = bare_propagator_freq(k, w, d, m);
        assert!((re - fr).abs() < 1e-6 * fr.abs().max(1e-3), "re k={k} w={w}");
        assert!((im - fi).abs() < 1e-6 * fr.abs().max(1e-3), "im k={k} w={w}");
    }
}

#[test]
fn phi_phi_frequency_form_matches_transform() {
    let opts = QuadOptions::new(1e-14, 1e-12);
    let p = PropagatorParams {
        diffusion: 1.3,
        death: 0.2,
        qk: Kernel::screened_poisson(1.3 * 0.4, 2.0, 3.0),
        rk: Kernel::normal(1.0, 1.0, 3.0),
        g: 0.7,
        x: 0.5,
    };
    for (k, w) in [(0.0, 0.0), (0.4, 0.5), (1.0, 2.0), (2.5, -7.0)] {
        let rate = p.diffusion * f_factor(k, &p);
        assert!(rate > 0.0);
        let t_max = 60.0 / rate;
        let ft = 2.0 * integrate(|t| (w * t).cos() * phi_phi(k, t, &p).unwrap(), 0.0, t_max, &opts).value;
        let want = phi_phi_freq(k, w, &p).unwrap();
        assert!((ft - want).abs() < 1e-6 * want.abs(), "k={k} w={w}: {ft} vs {want}");
    }
}

#[test]
fn response_reduces_to_bare_without_reactions() {
    let rk = Kernel::normal(2.0, 1.0, 2.0);
    for (k, t1, t2) in [(0.0, 0.0, 3.0), (0.8, 1.0, 2.5), (2.0, 0.3, 0.9)] {
        let got = response_functional(k, t1, t2, &rk, 1e-12, 1.1).unwrap();
        let want = bare_propagator(k, t2 - t1, 1.1, 0.0);
        assert!((got - want).abs() < 1e-10 * want);
    }
}

#[test]
fn local_response_exponent_is_two() {
    let rk = Kernel::local(1.5, 1.0);
    let (t1, t2, n0) = (0.5, 4.0, 2.0);
    let got = response_functional(0.0, t1, t2, &rk, n0, 1.0).unwrap();
    let base: f64 = (1.0 + 1.5 * n0 * t1) / (1.0 + 1.5 * n0 * t2);
    assert!((got.ln() / base.ln() - 2.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn bare_semigroup(k in 0.0f64..5.0, t1 in 0.0f64..3.0, t2 in 0.0f64..3.0, d in 0.1f64..3.0, m in 0.0f64..2.0) {
        let lhs = bare_propagator(k, t1 + t2, d, m);
        let rhs = bare_propagator(k, t1, d, m) * bare_propagator(k, t2, d, m);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300));
    }

    #[test]
    fn phibar_phi_is_causal_and_bounded(k in 0.0f64..5.0, t in -3.0f64..3.0) {
        let p = PropagatorParams {
            diffusion: 1.0,
            death: 0.5,
            qk: Kernel::normal(0.3, 1.0, 3.0),
            rk: Kernel::normal(1.0, 1.0, 3.0),
            g: 0.2,
            x: 0.4,
        };
        let v = phibar_phi(k, t, &p);
        if t < 0.0 {
            prop_assert_eq!(v, 0.0);
        } else {
            prop_assert!(v > 0.0 && v <= 1.0);
        }
    }
}
