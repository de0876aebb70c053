//! Renormalization-group flows: the Model I coupling and the Model II
//! running state.

use nonlocal_rd::rgflow::{critical_exponents_model2, gstar, u_flow, RGStateI, RGStateII};
use nonlocal_rd::simulator::log_spaced;

fn main() -> nonlocal_rd::error::Result<()> {
    let st = RGStateI::new(1.0, 1.0, 1.0, 1.0, 1.0)?;
    println!("Model I, d = 1: g* = {}", gstar(st.eps())?);
    for g in log_spaced(1e-4, 1.0, 5) {
        println!("  gamma = {g:.1e}: g_r = {:.8}", st.rescaled(g)?.g_r);
    }

    println!("Model II, eps = 1, u = 0.02 -> 1/6:");
    for g in log_spaced(1e-6, 1.0, 4) {
        println!("  gamma = {g:.1e}: u = {:.8}", u_flow(0.02, g, 1.0)?);
    }
    let s = RGStateII { u: 0.02, tau: 0.1, x: 0.1, b: 0.01, lambda_r: 1.0, lambda_q: 1.0, mu: 1.0, eps: 1.0 };
    let r = s.rescaled(0.01)?;
    println!("  state at gamma = 0.01: u {:.5}, tau {:.5e}, X {:.5e}, b {:.5e}", r.u, r.tau, r.x, r.b);
    let e = critical_exponents_model2(1.0);
    println!("  exponents: tau {}, X {}, b {}", e.tau_exp, e.x_exp, e.b_exp);
    Ok(())
}
