//! Distinguishing qubit states: Helstrom error, trace distance, the best a
//! fixed measurement can do, and the overlap.

use qkdsec::quantum::{
    helstrom_min_error, measured_distance, overlap, trace_distance_q, DensityMatrix, Povm, C64,
};

fn main() -> qkdsec::Result<()> {
    let zero = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[C64::new(h, 0.0), C64::new(h, 0.0)])?;

    let td = trace_distance_q(&zero, &plus)?;
    println!("|0> vs |+>");
    println!("  trace distance      = {td:.6}");
    println!(
        "  Helstrom error      = {:.6}",
        helstrom_min_error(&zero, &plus, 0.5)?
    );
    println!("  Tr(ρσ)              = {:.6}", overlap(&zero, &plus)?);
    for (name, axis) in [
        ("Z", [0.0, 0.0, 1.0]),
        ("X", [1.0, 0.0, 0.0]),
        ("(X+Z)/√2", [h, 0.0, h]),
    ] {
        let m = Povm::qubit_projective(axis)?;
        println!(
            "  measured along {name:<9}= {:.6}",
            measured_distance(&zero, &plus, &m)?
        );
    }

    println!("\nclassical states embed on the diagonal:");
    let rho = DensityMatrix::from_diagonal(&[0.9, 0.1])?;
    let sigma = DensityMatrix::from_diagonal(&[0.5, 0.5])?;
    println!("  trace distance = {:.6}", trace_distance_q(&rho, &sigma)?);
    print!("{}", rho.to_document());
    Ok(())
}
