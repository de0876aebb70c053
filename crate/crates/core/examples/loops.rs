//! Loop integrals: I2 closed forms against quadrature, the effective
//! coupling across the crossover time, and the tadpoles.

use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::loops::{
    crossover_time, effective_coupling, i2, i2_quadrature, single_loop_tadpole, two_loop_tadpole, x1_loop,
    AngularStrategy,
};
use nonlocal_rd::propagators::PropagatorParams;
use nonlocal_rd::quad::QuadOptions;

fn main() -> nonlocal_rd::error::Result<()> {
    let opts = QuadOptions::new(1e-15, 1e-10);
    for k in [Kernel::normal(1.0, 1.0, 2.5), Kernel::screened_poisson(1.0, 1.0, 2.5)] {
        let closed = i2(&k, 1.0, 2.5, 1.0, &opts)?;
        let quad = i2_quadrature(&k, 1.0, 2.5, 1.0, &opts)?;
        println!("{}: I2 = {:.12e} ({}), quadrature {:.12e}", k.profile, closed.value, closed.method.name(), quad.value);
    }
    match i2(&Kernel::local(1.0, 3.0), 1.0, 3.0, 1.0, &opts) {
        Ok(r) => println!("local d=3: {}", r.value),
        Err(e) => println!("local d=3: {e}"),
    }

    let k = Kernel::normal(1.0, 1.0, 1.0);
    println!("d=1 normal kernel, crossover time {}", crossover_time(&k, 1.0));
    for t in [1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0] {
        println!("  t = {t:>6}: I2/I1 = {:.6e}", effective_coupling(&k, 1.0, 1.0, t, &opts)?);
    }

    let x1 = x1_loop(1.0, &k, 1.0, 1.0, 1.0, &QuadOptions::new(1e-14, 1e-7))?;
    println!("one-loop density correction at t = 1: {:.8e} ± {:.1e}", x1.value, x1.est_error);

    let d = 3.5;
    let p = PropagatorParams {
        diffusion: 1.0,
        death: 0.16,
        qk: Kernel::screened_poisson(0.05, 10.0, d),
        rk: Kernel::screened_poisson(1.0, 10.0, d),
        g: 1.0,
        x: 0.1,
    };
    let opts = QuadOptions::new(1e-14, 1e-6);
    println!("tadpoles at tau_bar = {}:", p.tau_bar());
    println!("  single loop {:.6e}", single_loop_tadpole(&p, d, &opts)?.value);
    for s in [AngularStrategy::MeanAngle, AngularStrategy::LocalQ] {
        println!("  two loop ({}) {:.6e}", s.name(), two_loop_tadpole(&p, d, s, &opts)?.value);
    }
    Ok(())
}
