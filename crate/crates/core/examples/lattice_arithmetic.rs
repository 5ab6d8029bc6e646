//! Dual lattices, reduction into a fundamental domain and coset representatives.

use shiftinv::{coset_reps, index, Lattice};

fn main() -> shiftinv::Result<()> {
    let lambda = Lattice::from_rows(&[vec![2.0, 1.0], vec![0.0, 3.0]])?;
    let gamma = Lattice::integer(2);

    println!("Λ basis rows: {:?}", lambda.rows());
    println!("Λ* basis rows: {:?}", lambda.dual().rows());
    println!("|det Λ| = {}, |det Λ*| = {}", lambda.det_abs(), lambda.dual().det_abs());

    let p = [3.7, -5.2];
    println!("{p:?} reduced into M_Λ: {:?}", lambda.reduce(&p));

    let idx = index(&lambda, &gamma)?;
    let reps = coset_reps(&lambda, &gamma)?;
    println!("[ℤ² : Λ] = {idx}");
    for r in &reps.reps {
        println!("  coset of Λ*/ℤ²: {r:?}");
    }

    let near = lambda.points_in_ball(&[0.0, 0.0], 4.0);
    println!("{} points of Λ within radius 4", near.len());
    Ok(())
}
