//! The four kernel profiles in real and momentum space, plus a numerical
//! check of each Fourier pair.

use nonlocal_rd::kernels::{Kernel, Profile};
use nonlocal_rd::quad::QuadOptions;

fn main() -> nonlocal_rd::error::Result<()> {
    let d = 3.0;
    let opts = QuadOptions::new(1e-16, 1e-11);
    for profile in [Profile::Normal, Profile::ScreenedPoisson, Profile::Spherical] {
        let k = Kernel::new(profile, 1.0, 2.0, d)?;
        println!("{profile}: variance {:.6}, 1e-12 truncation radius {:.4}", k.variance(), k.truncation_radius(1e-12)?);
        println!("  {:>6} {:>14} {:>14} {:>14}", "x", "R(r=x)", "R(k=x)", "FT rel err");
        for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let numeric = k.radial_fourier(x, &opts)?;
            let exact = k.momentum_space(x);
            println!(
                "  {x:>6} {:>14.6e} {exact:>14.6e} {:>14.2e}",
                k.real_space(x)?,
                ((numeric - exact) / exact).abs()
            );
        }
    }
    let local = Kernel::local(1.0, d);
    println!("local: R(k) = {} for all k, real_space -> {:?}", local.momentum_space(3.0), local.real_space(0.0));
    Ok(())
}
