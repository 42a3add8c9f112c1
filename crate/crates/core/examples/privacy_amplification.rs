//! Toeplitz hashing of a partially known 4-bit key down to 2 bits, for every
//! seed: guessing the hashed key is never harder than guessing the key.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use qkdsec::attacks::{all_toeplitz_seeds, pa_effect_on_guessing, toeplitz_hash};
use qkdsec::probdist::random_joint;
use qkdsec::BitString;

fn main() -> qkdsec::Result<()> {
    let k: BitString = "1011".parse()?;
    let seed: BitString = "01101".parse()?;
    println!(
        "hash({k}) with seed {seed} = {}",
        toeplitz_hash(&k, &seed, 2)?
    );

    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let joint = random_joint(&mut rng, 4, 2)?;
    let seeds = all_toeplitz_seeds(4, 2)?;
    let pa = pa_effect_on_guessing(&joint, 2, &seeds)?;
    println!("\nP_guess(K | E) before hashing = {:.4}", pa.before);
    for (s, a) in seeds.iter().zip(&pa.after) {
        println!("  seed {s}: after = {a:.4}");
    }
    println!("mean after = {:.4}", pa.after_avg);
    Ok(())
}
