//! Prime enumeration by segmented sieving. Large ranges are cut into
//! disjoint segments that are sieved independently (in parallel when the
//! `parallel` feature is on) and concatenated in order.

use crate::par;

const SEGMENT: u64 = 1 << 16;

/// All primes `<= n` by the plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes in `[lo, hi]` given all base primes up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let mut start = (lo.div_ceil(p) * p).max(p * p);
        while start <= hi {
            composite[(start - lo) as usize] = true;
            start += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// All primes in `[lo, hi]`, in increasing order.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let base = primes_up_to(isqrt(hi));
    let segments = par::chunks(lo.max(2), hi, SEGMENT);
    par::map(&segments, |&(a, b)| sieve_segment(a, b, &base))
        .into_iter()
        .flatten()
        .collect()
}

/// Sequential twin of [`primes_in_range`], kept for benchmarking and as a
/// cross-check of the segmented path.
pub fn primes_in_range_sequential(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let base = primes_up_to(isqrt(hi));
    par::chunks(lo.max(2), hi, SEGMENT)
        .into_iter()
        .flat_map(|(a, b)| sieve_segment(a, b, &base))
        .collect()
}

/// Number of primes `<= n`.
pub fn prime_pi(n: u64) -> u64 {
    primes_in_range(2, n).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::arith::is_prime;

    #[test]
    fn segmented_matches_trial_division() {
        let expected: Vec<u64> = (0..5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes_in_range(0, 4999), expected);
        assert_eq!(primes_in_range_sequential(0, 4999), expected);
        assert_eq!(primes_up_to(4999), expected);
        let window: Vec<u64> = (1_000_000..1_001_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes_in_range(1_000_000, 1_000_999), window);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(prime_pi(100), 25);
        assert_eq!(prime_pi(1_000_000), 78_498);
    }
}
