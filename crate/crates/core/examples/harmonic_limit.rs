//! `γ^{M,2}_0` from `Σ μ²(n)/n − log(x)/ζ(2)` as `x` grows.

use kfree::counting::Census;
use kfree::laurent;
use kfree::limits;

fn main() -> kfree::Result<()> {
    let exact = laurent::closed_form_gamma0(2, 30)?.to_f64();
    let census = Census::new(2, 100_000_000)?;
    let xs: Vec<u64> = (4..=8).map(|e| 10u64.pow(e)).collect();
    let vals = limits::wolf_limit_series(&census, 0, &xs)?;
    for (x, v) in xs.iter().zip(vals) {
        println!("x = 1e{}  estimate {v:.10}  error {:.2e}", (*x as f64).log10(), (v - exact).abs());
    }
    for est in limits::wolf_limits(&census, 3, 100_000_000)? {
        println!("n = {}  {:+.8}  predicted error {:.1e}", est.n, est.value, est.predicted_error);
    }
    Ok(())
}
