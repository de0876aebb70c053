//! Gamma, incomplete gamma and Bessel functions at a few sample points.

use nonlocal_rd::specialfns::{bessel_j, bessel_k, gamma, upper_incomplete_gamma};

fn main() -> nonlocal_rd::error::Result<()> {
    for x in [0.5, 1.5, -0.5, 4.5] {
        println!("Gamma({x}) = {:.15e}", gamma(x)?);
    }
    // Analytically continued to non-positive first argument.
    for a in [1.5, 0.0, -0.75] {
        println!("Gamma({a}, 2) = {:.15e}", upper_incomplete_gamma(a, 2.0)?);
    }
    for (nu, x) in [(0.5, 1.0), (1.5, 10.0), (2.25, 1e4)] {
        println!("J_{nu}({x}) = {:.15e}   K_{nu}({x}) = {:.15e}", bessel_j(nu, x)?, bessel_k(nu, x)?);
    }
    Ok(())
}
