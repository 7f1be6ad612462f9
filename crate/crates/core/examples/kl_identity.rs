//! On random distributions with `I(A:B|C) = 0` and `H(C|A,B) = 0`, the
//! divergence from the adhesion to the hat transform equals the slack
//! `I(C:D|A) + I(C:D|B) + I(A:B) - I(C:D)`.
//!
//! ```text
//! cargo run --example kl_identity
//! ```

use iitk::families::{random_constrained, Alphabets};
use iitk::number::{format_fraction, format_real};
use iitk::transform::kl_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sizes = Alphabets::new(4, 3, 2, 3);
    println!("seed  divergence      slack           hat total");
    for seed in 0..8 {
        let d = random_constrained(sizes, seed)?;
        let k = kl_report(&d)?;
        assert!((k.divergence - k.slack).abs() < 1e-9);
        assert!(k.hat_subnormalized);
        println!(
            "{seed:<5} {:<15} {:<15} {}",
            format_real(k.divergence),
            format_real(k.slack),
            format_fraction(&k.hat_total),
        );
    }
    Ok(())
}
