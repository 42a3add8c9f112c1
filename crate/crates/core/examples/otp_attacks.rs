//! Ciphertext-only and known-plaintext attacks on a one-time pad whose key
//! is a spike distribution.

use qkdsec::attacks::{ciphertext_only_attack, kpa_next_bits, otp_encrypt, spike_distribution};
use qkdsec::{BitString, Distribution};

fn main() -> qkdsec::Result<()> {
    let l = 12;
    let k_star: BitString = "110010100111".parse()?;
    let x: BitString = "010101010101".parse()?;
    let c = otp_encrypt(&x, &k_star)?;
    println!("x = {x}\nk = {k_star}\nc = {c}\n");

    let uniform = Distribution::uniform(l)?;
    for eps in [0.0, 1.0 / 64.0, 0.25] {
        let p_k = spike_distribution(l, eps, &k_star)?;
        let r = ciphertext_only_attack(&c, &uniform, &p_k)?;
        println!(
            "ε = {eps:<8} MAP key {} (posterior {:.4}), average success {:.6}",
            r.map_guess, r.map_posterior, r.avg_success
        );
    }

    println!("\nknown prefix against spike(ε = 2^-4):");
    let p_k = spike_distribution(l, 1.0 / 16.0, &k_star)?;
    for m in [2, 4, 6, 8, 10] {
        let r = kpa_next_bits(&p_k, &k_star.prefix(m))?;
        println!(
            "  m = {m:>2}: remainder {} with posterior {:.4}",
            r.map_guess, r.map_posterior
        );
    }
    Ok(())
}
