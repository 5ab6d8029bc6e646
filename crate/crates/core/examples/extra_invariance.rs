//! Rank additivity test for invariance under a finer lattice.

use shiftinv::spectral::invariance_test;
use shiftinv::{GeneratorSet, GeneratorSpec, Lattice};

fn main() -> shiftinv::Result<()> {
    let z = Lattice::integer(1);
    let half = Lattice::scaled_integer(1, 0.5)?;

    let paley_wiener = GeneratorSet::new(vec![GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?])?;
    let r = invariance_test(&paley_wiener, &z, &half, 256, 1e-10, None)?;
    println!("χ_[-1/2,1/2): invariant under ½ℤ = {} ({} mismatches)", r.invariant, r.mismatches);

    let hat = GeneratorSet::new(vec![GeneratorSpec::sinc_power(2, 1)?])?;
    let r = invariance_test(&hat, &z, &half, 256, 1e-14, Some(1e-12))?;
    println!(
        "hat function: invariant under ½ℤ = {} ({} of {} nodes mismatch)",
        r.invariant,
        r.mismatches,
        r.ledger.len()
    );
    for e in r.ledger.iter().step_by(64) {
        println!("  x = {:+.4}: rank {} vs {:?}", e.x[0], e.rank_lambda, e.ranks_gamma);
    }
    Ok(())
}
