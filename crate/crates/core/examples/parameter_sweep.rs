//! Writes both sides of a κ-extension across a grid of ε as CSV.
//!
//! ```text
//! cargo run --release --example parameter_sweep -- zy-c 10 > sweep.csv
//! ```

use iitk::families::{scan, FamilyId};
use iitk::number::{parse_rational, pow2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id: FamilyId = args.next().as_deref().unwrap_or("zy-a").parse()?;
    let kappa = parse_rational(args.next().as_deref().unwrap_or("1"))?;

    let rows = scan(id, &kappa, &pow2(-30), 40)?;
    let mut out = csv::Writer::from_writer(std::io::stdout().lock());
    let mut header = vec!["log2_eps".to_string(), "lhs".into(), "rhs".into(), "gap".into()];
    header.extend(id.extension().residual_names().into_iter().map(String::from));
    out.write_record(&header)?;
    for r in rows {
        let mut record = vec![
            format!("{:.6}", iitk::number::log2_rational(&r.eps)),
            r.lhs.to_scientific(),
            r.rhs.to_scientific(),
            r.gap.to_scientific(),
        ];
        record.extend(r.residuals.iter().map(|(_, v)| v.to_scientific()));
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}
