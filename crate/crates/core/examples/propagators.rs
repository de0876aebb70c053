//! Bare, dressed and correlation propagators of Model II over a small grid.

use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::propagators::{bare_propagator, dressed_propagator, f_factor, phi_phi, phibar_phi, PropagatorParams};

fn main() -> nonlocal_rd::error::Result<()> {
    let p = PropagatorParams {
        diffusion: 1.0,
        death: 0.1,
        qk: Kernel::screened_poisson(0.05, 1.0, 3.0),
        rk: Kernel::screened_poisson(1.0, 1.0, 3.0),
        g: 1.0,
        x: 0.1,
    };
    println!("tau_bar = {}, F(0) = {}", p.tau_bar(), f_factor(0.0, &p));
    println!("{:>4} {:>4} {:>12} {:>12} {:>12} {:>12}", "k", "t", "bare", "dressed", "phibar_phi", "phi_phi");
    for k in [0.0, 0.5, 2.0] {
        for t in [0.0, 1.0, 5.0] {
            println!(
                "{k:>4} {t:>4} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
                bare_propagator(k, t, p.diffusion, p.death),
                dressed_propagator(k, t, p.diffusion, p.death, &p.qk),
                phibar_phi(k, t, &p),
                phi_phi(k, t, &p)?
            );
        }
    }
    Ok(())
}
