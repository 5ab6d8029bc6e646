//! Generator families: Fourier values, time samples and decay envelopes.

use shiftinv::{Envelope, GeneratorSpec};

fn main() -> shiftinv::Result<()> {
    let gens = [
        ("indicator [-1/2,1/2)", GeneratorSpec::indicator_box(vec![-0.5], vec![0.5])?),
        ("bump in frequency", GeneratorSpec::bump_fourier(vec![0.0], 0.45)?),
        ("bump in time, ω=2", GeneratorSpec::bump_time(0.0, 1.0 / 3.0, 1.0, 2.0)?),
        ("sinc²", GeneratorSpec::sinc_power(2, 1)?),
        ("gaussian", GeneratorSpec::gaussian(1)?),
    ];
    for (name, g) in &gens {
        let env = match g.envelope() {
            Envelope::CompactSupport { radius, .. } => format!("supported in |ξ| ≤ {radius}"),
            Envelope::PolyDecay { constant, exponent } => format!("|f̂| ≤ {constant:.3}(1+|ξ|)^-{exponent}"),
        };
        println!("{name:>22}: {env}");
        for xi in [0.0, 0.25, 1.5, 10.0] {
            let v = g.eval_fourier(&[xi]);
            println!("{:>26} f̂({xi:>5}) = {:+.6} {:+.6}i   bound {:.3e}", "", v.re, v.im, g.decay_envelope(xi));
        }
        if let Some(n) = g.l2_norm_squared() {
            println!("{:>26} ‖f‖² = {n:.10}", "");
        }
    }

    let shifted = gens[0].1.shift_modulate(&[0.25])?;
    let a = gens[0].1.eval_fourier(&[0.3]);
    let b = shifted.eval_fourier(&[0.3]);
    println!("shift by 1/4 keeps |f̂|: {:.12} vs {:.12}", a.norm(), b.norm());
    Ok(())
}
