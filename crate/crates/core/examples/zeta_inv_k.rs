//! The two `ζ(1/k)` estimators, and the series behind each figure written
//! to `fig1.csv`..`fig4.csv` in the working directory.

use std::fs::File;
use std::io::BufWriter;

use kfree::continuation::{self, InvKForm, Stride};
use kfree::counting::Census;

fn main() -> kfree::Result<()> {
    let x = 100_000;
    for k in 2..=5 {
        let census = Census::new(k, x)?;
        let reference = continuation::zeta_inv_k_reference(k)?;
        let a = continuation::zeta_inv_k(&census, x, InvKForm::Derivative)?;
        let b = continuation::zeta_inv_k(&census, x, InvKForm::Shifted)?;
        let rows = continuation::figure_series(&census, x, Stride::Every)?;
        let name = continuation::figure_file_name(k);
        continuation::write_figure_csv(&rows, &mut BufWriter::new(File::create(&name)?))?;
        println!(
            "k = {k}  zeta(1/k) = {reference:.8}  derivative {a:+.4}  shifted {b:+.4}  window mean {:+.4}  -> {name}",
            continuation::trailing_window_mean(&rows, 0.1)
        );
    }
    Ok(())
}
