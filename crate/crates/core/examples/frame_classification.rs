//! Frame and Riesz classification of a few systems of integer translates.

use shiftinv::periodization::gramian_field;
use shiftinv::spectral::classify;
use shiftinv::{GeneratorSet, GeneratorSpec, Lattice};

fn main() -> shiftinv::Result<()> {
    let cases = [
        ("χ_[-1/2,1/2)", vec![GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?]),
        ("χ_[0,1/2)", vec![GeneratorSpec::indicator_box(vec![0.0], vec![0.5])?]),
        ("hat (sinc²)", vec![GeneratorSpec::sinc_power(2, 1)?]),
        ("gaussian", vec![GeneratorSpec::gaussian(1)?]),
        (
            "χ + bump",
            vec![
                GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?,
                GeneratorSpec::bump_fourier(vec![0.0], 0.45)?,
            ],
        ),
    ];
    for (name, specs) in cases {
        let set = GeneratorSet::new(specs)?;
        let field = gramian_field(&set, &Lattice::integer(1), 512, 1e-10)?;
        let c = classify(&field, None, None)?;
        println!(
            "{name:>14}: {:?}, riesz {}, bounds ({:.4e}, {:.4e}), ranks {}..={}",
            c.status, c.is_riesz, c.frame_bounds.0, c.frame_bounds.1, c.min_rank, c.rho
        );
    }
    Ok(())
}
