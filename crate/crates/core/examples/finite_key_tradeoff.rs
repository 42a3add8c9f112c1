//! Extractable key length as a function of ε̄, and the ε̄ that fixes the
//! security rate ε̄ / l.

use qkdsec::bounds::{epsilon_for_security_rate, extractable_key_length, FiniteKeyParams};
use qkdsec::Error;

fn main() -> qkdsec::Result<()> {
    let base = FiniteKeyParams::reference(1_000_000);
    println!("n = 10^6, Q = {}, μ = {}", base.qber, base.mu);
    println!("{:>8} {:>10} {:>8}", "ε̄", "l", "rate");
    for e in [-30, -20, -14, -10, -6, -2] {
        let eps = 10f64.powi(e);
        let l = extractable_key_length(&base.with_eps_bar(eps))?;
        println!("{eps:>8.0e} {l:>10} {:>8.4}", l as f64 / 1e6);
    }

    println!("\nsecurity rate ε̄ / l = 1e-14:");
    for exp in 3..=7 {
        let n = 10u64.pow(exp);
        match epsilon_for_security_rate(1e-14, &FiniteKeyParams::reference(n)) {
            Ok(s) => println!(
                "  n = 1e{exp}: ε̄ = {:.3e}, l = {}, rate = {:.4}",
                s.eps_bar, s.key_len, s.rate
            ),
            Err(Error::NoSolution(_)) => println!("  n = 1e{exp}: no solution"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
