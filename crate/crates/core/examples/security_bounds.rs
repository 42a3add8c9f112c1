//! Guessing-probability bounds for a 10⁴-bit key with averaged trace
//! distance 10⁻⁶, against what a uniform key would give.

use qkdsec::bounds::{
    leakage_profile_log, markov_individual_bound, required_epsilon, yuen_upper_bound,
};

fn main() -> qkdsec::Result<()> {
    let l = 10_000;
    println!(
        "{:>8} {:>14} {:>14} {:>10} {:>10}",
        "ε̄", "averaged", "individual", "f", "leaked"
    );
    for eps_bar in [1e-3, 1e-6, 1e-9, 1e-12, 1e-14] {
        let avg = yuen_upper_bound(eps_bar, l)?;
        let ind = markov_individual_bound(eps_bar, l)?;
        let leak = leakage_profile_log(l, &ind)?;
        println!(
            "{eps_bar:>8.0e} {:>14} {:>14} {:>10.4} {:>10.1}",
            avg.scientific(),
            ind.scientific(),
            leak.f,
            leak.leaked_bits
        );
    }
    let ideal = required_epsilon(l)?;
    println!(
        "\nuniform {l}-bit key: guessing probability {} (log10 {:.2})",
        ideal.scientific(),
        ideal.log10()
    );
    Ok(())
}
