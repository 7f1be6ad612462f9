//! Entropy profile of a small table, and a few quantities evaluated on it.
//!
//! ```text
//! cargo run --example entropy_profile
//! ```

use iitk::dist::JointDist;
use iitk::expr::{canonicalize, parse_expr};
use iitk::number::format_real;
use iitk::profile::{entropy_profile, eval_form, subset_label};

const TABLE: &str = "\
# X is a fair bit, Y copies it, Z is their XOR with a fresh bit
vars X Y Z
0 0 0 1/4
0 0 1 1/4
1 1 0 1/4
1 1 1 1/4
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = JointDist::parse(TABLE)?;
    let h = entropy_profile(&d);
    for (mask, value) in h.iter() {
        println!("H({}) = {}", subset_label(mask, d.vars()), format_real(value));
    }
    for text in ["I(X:Y)", "I(X:Z)", "H(Z|X,Y)", "I(X:Y|Z) - I(X:Y)"] {
        let form = canonicalize(&parse_expr(text)?, d.vars())?;
        println!("{text} = {}", format_real(eval_form(&h, &form)?));
    }
    Ok(())
}
