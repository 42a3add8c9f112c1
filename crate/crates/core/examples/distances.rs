//! Statistical distance, guessing probability and min-entropy of small key
//! distributions, including a spike far too large to store densely.

use qkdsec::probdist::{guessing_probability, min_entropy, statistical_distance};
use qkdsec::{BitString, Distribution};

fn main() -> qkdsec::Result<()> {
    let p = Distribution::dense(2, vec![0.4, 0.3, 0.2, 0.1])?;
    let u = Distribution::uniform(2)?;
    println!("p            = {:?}", p.masses()?);
    println!("δ(p, U)      = {}", statistical_distance(&p, &u)?);
    println!("P_guess(p)   = {}", guessing_probability(&p));
    println!("H_min(p)     = {:.4} bits", min_entropy(&p));

    // 64-bit spike: δ to uniform comes from the closed form
    let k_star = BitString::from_index(0xdead_beef, 64);
    let spike = Distribution::spike(k_star, 1e-6)?;
    let u64 = Distribution::uniform(64)?;
    println!();
    println!("64-bit spike, ε = 1e-6");
    println!("δ(spike, U)  = {:e}", statistical_distance(&spike, &u64)?);
    println!("P_guess      = {:e}", guessing_probability(&spike));
    println!("H_min        = {:.4} bits", min_entropy(&spike));

    println!();
    println!("{}", p.to_document());
    Ok(())
}
