//! How the quantities of each family approach their `ε = 0` values.
//!
//! ```text
//! cargo run --release --example asymptotics
//! ```

use iitk::expr::parse_expr;
use iitk::families::{log_grid, slope, zy_b_series, FamilyId, Model};
use iitk::number::pow2;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = log_grid(&pow2(-40), &pow2(-10), 24)?;
    let fits = [
        (FamilyId::ZyA, "I(C:D)", Model::Linear),
        (FamilyId::ZyA, "I(A:B)", Model::Quadratic),
        (FamilyId::ZyC, "I(A:B|C)", Model::Linear),
        (FamilyId::ZyC, "I(B:D|C)", Model::Linear),
        (
            FamilyId::ZyC,
            "I(C:D|A) + I(C:D|B) + I(A:B) - I(C:D)",
            Model::EpsLogEps,
        ),
    ];
    for (id, text, model) in fits {
        let r = slope(id, &parse_expr(text)?, model, &grid)?;
        println!(
            "{id} {text}: limit {}, exponent {:.3}, {model:?} coefficient {:.4}",
            r.limit, r.exponent, r.coefficient
        );
    }

    println!();
    for eps in [
        BigRational::new(1.into(), 1000.into()),
        BigRational::new(1.into(), 10000.into()),
    ] {
        for s in zy_b_series(&eps)? {
            println!(
                "{} - 1 at eps={}: {:.6e}; series error base 2 {:.2e}, base e {:.2e}",
                s.quantity, s.eps, s.deviation, s.base2_error, s.base_e_error
            );
        }
    }
    Ok(())
}
