//! Mean-field densities: the Model I closed form and the Model II Riccati
//! equation approaching its steady state.

use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::meanfield::{density_model1, density_model2_ode, steady_state_model2, ModelParams, SignConvention};

fn main() -> nonlocal_rd::error::Result<()> {
    println!("Model I, n0 = 1, R = 2:");
    for t in [0.0, 1.0, 10.0, 100.0, 1000.0] {
        println!("  t = {t:>6}: X = {:.6e}", density_model1(1.0, 2.0, t));
    }

    let p = ModelParams {
        diffusion: 1.0,
        rk: Kernel::normal(1.0, 1.0, 3.0),
        qk: Kernel::normal(0.2, 1.0, 3.0),
        death: 0.1,
        birth: 0.01,
        n0: 0.01,
        dim: 3.0,
    };
    let x_inf = steady_state_model2(&p, SignConvention::Physical)?;
    println!("Model II, tau = {}, steady state {x_inf:.6}", p.tau());
    let grid: Vec<f64> = (0..=8).map(|i| 10.0 * i as f64).collect();
    let trace = density_model2_ode(&p, &grid, SignConvention::Physical)?;
    for (t, x) in trace.times.iter().zip(&trace.densities) {
        println!("  t = {t:>4}: X = {x:.6}");
    }
    Ok(())
}
