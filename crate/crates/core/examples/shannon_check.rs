//! Decides Shannon-derivability of a few statements and checks the
//! certificate or polymatroid witness that comes back.
//!
//! ```text
//! cargo run --example shannon_check
//! ```

use iitk::cone::{decide, elementals, verify_certificate, verify_witness, Derivability};
use iitk::expr::parse_stmt;
use iitk::profile::subset_label;
use num_traits::Zero;

const STATEMENTS: &[&str] = &[
    "H(A,B) <= H(A) + H(B)",
    "I(A:B|C) >= 0",
    "I(A:B) = 0 => H(A,B) >= H(A) + H(B)",
    "I(A:B|C) + I(A:C) >= I(A:B)",
    "I(A:B) >= I(A:B|C)",
    "I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A) + I(C:D|B)",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in STATEMENTS {
        let stmt = parse_stmt(text)?.canonical()?;
        let vars = &stmt.vars;
        println!("{text}");
        match decide(&stmt.goal, &stmt.constraints)? {
            Derivability::Derivable(cert) => {
                assert!(verify_certificate(&cert, &stmt.goal, &stmt.constraints));
                let elems = elementals(vars.len())?;
                for (lambda, e) in cert.lambda.iter().zip(&elems) {
                    if !lambda.is_zero() {
                        println!("  {lambda} * {}", e.label(vars));
                    }
                }
                for (j, mu) in cert.mu.iter().enumerate() {
                    println!("  mu[{j}] = {mu}");
                }
            }
            Derivability::NotDerivable(w) => {
                assert!(verify_witness(&w, &stmt.goal, &stmt.constraints));
                let point: Vec<String> = w
                    .point
                    .iter()
                    .enumerate()
                    .map(|(i, h)| format!("h({})={h}", subset_label(i as u32 + 1, vars)))
                    .collect();
                println!("  not derivable: {}", point.join(" "));
            }
        }
    }
    Ok(())
}
