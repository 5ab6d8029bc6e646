//! Sampling the Gramian `Σ_λ F̂(x-λ)F̂*(x-λ)` on a grid and inspecting its spectrum.

use shiftinv::periodization::{bracket_product, gramian_field};
use shiftinv::spectral::{weyl_check, SpectralProfile};
use shiftinv::{GeneratorSet, GeneratorSpec, Lattice};

fn main() -> shiftinv::Result<()> {
    let f = GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?;
    let g = GeneratorSpec::bump_fourier(vec![0.0], 0.45)?;
    let set = GeneratorSet::new(vec![f.clone(), g.clone()])?;
    let z = Lattice::integer(1);

    let field = gramian_field(&set, &z, 16, 1e-12)?;
    println!("{} nodes, radius {}, certified tail {:.1e}", field.len(), field.radius, field.trunc_err);
    let profile = SpectralProfile::compute(&field, None)?;
    for (x, ev) in field.points.iter().zip(&profile.eigvals).step_by(4) {
        println!("x = {:+.4}  eigenvalues {:?}", x[0], ev);
    }

    let b = bracket_product(&f, &g, &z, &[0.1], 1e-12)?;
    println!("[f̂, ĝ](0.1) = {:.8}", b.re);

    let w = weyl_check(&field, &profile);
    println!("Weyl check: {} pairs, {} violations", w.pairs, w.violations);
    Ok(())
}
