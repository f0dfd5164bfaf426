/// Primes `p ≤ limit` by the sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i represents 2i + 1
    let n = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; n];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < n {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(n / 4 + 1);
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    out
}

/// `⌊n^(1/k)⌋`, exact for every `u64`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}
