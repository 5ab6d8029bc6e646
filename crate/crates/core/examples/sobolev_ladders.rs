//! Truncation ladders of fractional Sobolev seminorms and their divergence verdicts.

use shiftinv::lattice::Lattice;
use shiftinv::presets::half_indicator_coefficients;
use shiftinv::sobolev::{default_rd_ladder, moment_estimate, rd_estimate, torus_fourier_ladder, RdMode};
use shiftinv::GeneratorSpec;

fn main() -> shiftinv::Result<()> {
    let ladder = default_rd_ladder();
    let chi = GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?;
    let bump = GeneratorSpec::bump_fourier(vec![0.0], 0.45)?;

    for s in [0.3, 0.4, 0.5] {
        let e = rd_estimate(&chi, s, RdMode::FourierIntegral, &ladder)?;
        println!("χ_I, s = {s}: {:?}, slope {:.5}", e.verdict, e.fit.slope);
    }
    let e = rd_estimate(&bump, 0.5, RdMode::Gagliardo, &ladder)?;
    println!("bump, Gagliardo s = 0.5: {:?}, last partial {:.6}", e.verdict, e.partials.last().unwrap().1);

    let m = moment_estimate(&chi, &ladder)?;
    println!("∫|x||sinc x|²: {:?}, slope {:.5} (1/π² = {:.5})", m.verdict, m.fit.slope, 1.0 / (std::f64::consts::PI.powi(2)));

    let ns: Vec<f64> = (0..=12).map(|k| 10f64.powf(2.0 + k as f64 / 4.0)).collect();
    let t = torus_fourier_ladder(half_indicator_coefficients, &Lattice::integer(1), 0.5, &ns)?;
    println!("χ_[0,1/2) on the torus, s = 1/2: {:?}, slope {:.5}", t.verdict, t.fit.slope);
    for (n, v) in t.partials.iter().step_by(4) {
        println!("  N = {n:>9.1}: {v:.6}");
    }
    Ok(())
}
