//! `Q_k(x)` at and between steps, and the size of `f_k(x)`.

use kfree::counting::{self, Census, Convention};

fn main() -> kfree::Result<()> {
    let census = Census::new(2, 1_000_000)?;
    for conv in [Convention::Left, Convention::Average, Convention::Right] {
        let cp = counting::count_q(&census, 10.0, conv)?;
        println!("Q_2(10) {conv:?}: {}  f = {:+.6}", cp.q, cp.f.to_f64());
    }
    let start = counting::count_q(&census, 1.0, Convention::Left)?;
    println!("at 1-: q = {}, f = {:.12}", start.q, start.f.to_f64());

    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let q = census.q_at(x);
        println!("x = {x:>8}  Q = {q:>7}  Q/x = {:.6}", q as f64 / x as f64);
    }
    println!("1/zeta(2) = {:.6}", census.inv_zeta());

    let scan = counting::remainder_bound_scan(&census, 1_000_000)?;
    println!("sup |f|/x^(1/2) = {:.3}, envelope slope = {:.3}", scan.c_obs, scan.exponent_fit);
    Ok(())
}
