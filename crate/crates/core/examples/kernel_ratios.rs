//! Ratios `G(ξ)/|ξ|^{2s}` and `H(ξ)/|ξ|^{2s}` along the dual lattice.

use shiftinv::sobolev::{kernel_ratio, relative_spread, Kernel};
use shiftinv::Lattice;

fn main() -> shiftinv::Result<()> {
    let z = Lattice::integer(1);
    for s in [0.3, 0.5, 0.7] {
        for kernel in [Kernel::G, Kernel::H] {
            let ratios: Vec<f64> = (1..=100)
                .map(|k| kernel_ratio(&[k as f64], s, &z, kernel).map(|r| r.ratio))
                .collect::<Result<_, _>>()?;
            let far = &ratios[49..];
            println!(
                "s = {s}, {kernel:?}: ratio at ξ=1 {:.5}, ξ=100 {:.5}, spread over [50,100] {:.3}%",
                ratios[0],
                ratios[99],
                100.0 * relative_spread(far)
            );
        }
    }
    Ok(())
}
