//! Squarefree and cube-free numbers from the segmented sieve, and a cached
//! block read back from disk.

use kfree::sieve::{self, cache, SieveConfig};

fn main() -> kfree::Result<()> {
    let block = sieve::sieve_kfree(2, 1, 30)?;
    let sq: Vec<u64> = block.iter_ones().collect();
    println!("squarefree <= 30: {sq:?}");

    let mu = sieve::sieve_mobius(20)?;
    println!("mu(1..=20): {:?}", mu.values());
    println!("M(20) = {}", mu.mertens());

    let dir = std::env::temp_dir().join("kfree-example-cache");
    let cfg = SieveConfig::default();
    let big = cache::load_or_sieve(3, 1, 10_000_000, &cfg, &dir)?;
    println!("cube-free <= 1e7: {} (cached under {})", big.count_ones(), dir.display());
    Ok(())
}
