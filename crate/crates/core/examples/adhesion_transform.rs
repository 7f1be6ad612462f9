//! Adhesion of two blocks over a shared one: the block marginals survive
//! and the blocks become conditionally independent.
//!
//! ```text
//! cargo run --example adhesion_transform
//! ```

use iitk::dist::JointDist;
use iitk::expr::{canonicalize, parse_expr};
use iitk::number::format_real;
use iitk::profile::{entropy_profile, eval_form};
use iitk::transform::{adhesion, SplitSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = JointDist::parse(
        "vars A B C\n\
         0 0 0 1/2\n\
         1 1 0 1/4\n\
         1 0 1 1/4\n",
    )?;
    let t = adhesion(&d, &SplitSpec::new(["A"], ["B"], ["C"]))?;
    print!("{}", t.to_text());

    for keep in [["A", "C"], ["B", "C"]] {
        assert_eq!(t.marginal(&keep)?.to_text(), d.marginal(&keep)?.to_text());
    }
    let cmi = canonicalize(&parse_expr("I(A:B|C)")?, d.vars())?;
    println!(
        "I(A:B|C): {} before, {} after",
        format_real(eval_form(&entropy_profile(&d), &cmi)?),
        format_real(eval_form(&entropy_profile(&t), &cmi)?),
    );
    Ok(())
}
