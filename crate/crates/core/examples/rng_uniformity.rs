//! A slightly biased bit source: its distance to uniform is small, yet the
//! sampled blocks are never exactly uniform, and an independently drawn
//! ideal key disagrees with it almost always.

use qkdsec::rngtest::{
    model_distance_to_uniform, sample_blocks, uniformity_failure_report, SourceModel,
};

fn main() -> qkdsec::Result<()> {
    let model = SourceModel::iid(1e-4)?;
    println!(
        "bias 1e-4, one-bit model δ = {}",
        model_distance_to_uniform(&model, 1)?
    );
    println!(
        "{:>5} {:>12} {:>12} {:>8} {:>14}",
        "bits", "model δ", "sampled δ", "exact", "independent"
    );
    for block_len in [1, 4, 8, 12] {
        let s = sample_blocks(&model, block_len, 1_000_000, 1)?;
        let r = uniformity_failure_report(&s)?;
        println!(
            "{block_len:>5} {:>12.3e} {:>12.3e} {:>8} {:>14}",
            model_distance_to_uniform(&model, block_len)?,
            r.empirical_delta,
            r.exactly_uniform,
            r.independent_failure.scientific()
        );
    }
    Ok(())
}
