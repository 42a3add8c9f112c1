//! Three couplings of the same pair of distributions, the exact LP minimum,
//! and what happens when the ideal key is drawn independently.

use qkdsec::coupling::{
    contradiction_report, independent_coupling, maximal_coupling, min_mismatch_oracle,
    mismatch_probability,
};
use qkdsec::probdist::statistical_distance;
use qkdsec::Distribution;

fn main() -> qkdsec::Result<()> {
    let p = Distribution::dense(2, vec![0.4, 0.3, 0.2, 0.1])?;
    let q = Distribution::dense(2, vec![0.25, 0.25, 0.25, 0.25])?;

    let d = statistical_distance(&p, &q)?;
    let maximal = maximal_coupling(&p, &q)?;
    let independent = independent_coupling(&p, &q)?;
    println!("δ(p, q)                   = {d}");
    println!(
        "LP minimum of Pr[X != Y]  = {}",
        min_mismatch_oracle(&p, &q)?
    );
    println!(
        "maximal coupling mismatch = {}",
        mismatch_probability(&maximal)
    );
    println!(
        "independent mismatch      = {}",
        mismatch_probability(&independent)
    );

    println!("\nmaximal coupling (rows x, columns y):");
    let j = maximal.joint();
    for x in 0..j.x_len() {
        let row: Vec<String> = j.row(x).iter().map(|v| format!("{v:.4}")).collect();
        println!("  {}", row.join("  "));
    }

    println!("\nagainst an independently drawn uniform 4-bit key:");
    for eps in [0.0, 0.01, 0.5] {
        let k = qkdsec::BitString::from_index(5, 4);
        let r = contradiction_report(&Distribution::spike(k, eps)?)?;
        println!(
            "  ε = {eps:<4}  δ = {:.6}  best mismatch = {:.6}  independent = {}",
            r.delta,
            r.maximal_mismatch,
            r.independent_failure.value()
        );
    }
    Ok(())
}
