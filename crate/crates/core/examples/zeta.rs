//! Euler–Maclaurin zeta at real and complex points, and its constants.

use kfree::zetacore::{self, ComplexX};

fn main() -> kfree::Result<()> {
    println!("zeta(2)   = {}", zetacore::zeta_at_integer(2, 50)?);
    println!("zeta'(2)  = {}", zetacore::zeta_derivative(1, 2, 30)?);
    println!("zeta(1/2) = {}", zetacore::zeta_real(0.5, 30)?);
    let s = ComplexX::with_digits(30, 0.5, 14.134_725_141_734_693);
    println!("zeta(1/2 + 14.1347i) = {}", zetacore::zeta_em(&s, 30)?);
    println!("gamma     = {}", zetacore::euler_gamma(40)?);
    for (n, g) in zetacore::stieltjes_gammas(4, 30)?.iter().enumerate() {
        println!("gamma_{n}   = {g}");
    }
    Ok(())
}
