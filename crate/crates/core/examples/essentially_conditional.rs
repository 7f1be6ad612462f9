//! Searches each family for a member violating the κ-extension
//! `I(C:D) <= I(C:D|A) + I(C:D|B) + κ·(residuals)`.
//!
//! The third family only fails for ε below roughly `2^-(2κ)`, so its grid
//! has to reach far further down than the others.
//!
//! ```text
//! cargo run --release --example essentially_conditional
//! ```

use iitk::families::{gap_minima, refute, FamilyId, Refutation};
use iitk::number::{log2_rational, pow2};
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs = [
        (FamilyId::ZyA, 100, -40),
        (FamilyId::ZyB, 100, -40),
        (FamilyId::ZyC, 10, -40),
        (FamilyId::ZyC, 1000, -40),
        (FamilyId::ZyC, 1000, -2200),
    ];
    for (id, kappa, log_eps_min) in runs {
        let kappa = BigRational::from_integer(kappa.into());
        let outcome = refute(id, &kappa, &pow2(log_eps_min), 80)?;
        print!("{id} kappa={kappa} eps-min=2^{log_eps_min}: ");
        match outcome {
            Refutation::Violation { witness, threshold } => {
                println!(
                    "violated at eps=2^{:.2}, gap {}",
                    log2_rational(&witness.eps),
                    witness.gap
                );
                if let Some(t) = threshold {
                    println!("  largest violating eps found: 2^{:.4}", log2_rational(&t.eps));
                }
            }
            Refutation::NoViolation { grid } => match gap_minima(&grid).first() {
                Some(g) => println!(
                    "no violation; gap dips to {} at eps=2^{:.2}",
                    g.gap,
                    log2_rational(&g.eps)
                ),
                None => println!("no violation"),
            },
        }
    }
    Ok(())
}
