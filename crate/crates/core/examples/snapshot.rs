//! Step a single Model II system by hand and round-trip its state through
//! the binary snapshot format.

use nonlocal_rd::kernels::Kernel;
use nonlocal_rd::meanfield::ModelParams;
use nonlocal_rd::simulator::{init_poisson, read_snapshot, SimConfig, Stepper};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nonlocal_rd::error::Result<()> {
    let params = ModelParams {
        diffusion: 1.0,
        rk: Kernel::normal(1.0, 1.0, 2.0),
        qk: Kernel::normal(0.3, 1.0, 2.0),
        death: 0.1,
        birth: 0.0,
        n0: 0.2,
        dim: 2.0,
    };
    let config = SimConfig::new(params, 40.0, vec![10.0], 3);
    let mut state = init_poisson(&config, ChaCha8Rng::seed_from_u64(config.seed))?;
    let stepper = Stepper::new(&config)?;
    while state.t < 10.0 {
        stepper.step(&mut state)?;
    }
    println!("t = {:.2}, {} particles, density {:.4}", state.t, state.count(), state.density());

    let mut buf = Vec::new();
    state.write_snapshot(&mut buf)?;
    let (dim, positions) = read_snapshot(buf.as_slice())?;
    println!("snapshot: {} bytes, dim {dim}, {} particles", buf.len(), positions.len() / dim);
    Ok(())
}
