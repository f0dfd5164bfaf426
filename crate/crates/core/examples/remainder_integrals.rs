//! The integrals of `f_k(t) log^j(t)/t²` and the coefficients built from them.

use kfree::counting::Census;
use kfree::limits;

fn main() -> kfree::Result<()> {
    let x = 1_000_000;
    let census = Census::new(3, x)?;
    let c = limits::cj_integrals(&census, 4, x)?;
    for (j, cj) in c.iter().enumerate() {
        println!("c_{j} = {cj:+.10}");
    }
    for m in 0..=4 {
        let y = limits::ym_integral(&census, m, x)?;
        let r = limits::cj_recurrence(&census, m, x)?;
        println!("y_{m} = {:+.10}  via c: {:+.10}", y.value, r.value);
    }
    let audit = limits::audit_window(&census, 2, 900_001, 1_000_000)?;
    println!("audit of a 1e5 window: |double - 40 digits| = {:.1e}", audit.abs_diff);
    Ok(())
}
