//! Annihilating particles in d = 1 with a Gaussian reaction kernel: the
//! replica-averaged density and its fitted decay exponent.

use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::meanfield::ModelParams;
use nonlocal_rd::simulator::{fit_decay_exponent, log_spaced, run_replicas, SimConfig};

fn main() -> nonlocal_rd::error::Result<()> {
    let params = ModelParams::model1(1.0, Kernel::normal(2.0, 1.0, 1.0), 1.0);
    let config = SimConfig::new(params, 10_000.0, log_spaced(1.0, 1000.0, 31), 7);
    let trace = run_replicas(&config, 8)?;
    print!("{}", trace.to_replica_csv());
    let fit = fit_decay_exponent(&trace, 50.0, 1000.0)?;
    println!("slope {:.3} ± {:.3} (diffusion-limited value -0.5)", fit.slope, fit.stderr);
    Ok(())
}
