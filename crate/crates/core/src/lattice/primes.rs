use alloc::vec;
use alloc::vec::Vec;

/// Upper bound for the `k`-th prime: `k (ln k + ln ln k)` for `k >= 6`.
pub fn nth_prime_bound(k: usize) -> u64 {
    if k < 6 {
        return 13;
    }
    let kf = k as f64;
    (kf * (libm::log(kf) + libm::log(libm::log(kf)))) as u64 + 1
}

/// The first `count` primes, by a sieve of Eratosthenes.
pub fn primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let limit = nth_prime_bound(count) as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::with_capacity(count);
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        if out.len() == count {
            break;
        }
        let mut m = p * p;
        while m <= limit {
            composite[m] = true;
            m += p;
        }
    }
    out
}

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta for real `s > 1` by Euler-Maclaurin summation: a direct
/// head of 20 terms, the integral tail and ten Bernoulli corrections.
pub fn zeta_reference(s: f64) -> f64 {
    const HEAD: usize = 20;
    let n = HEAD as f64;
    let mut sum = 0.0;
    for k in (1..HEAD).rev() {
        sum += libm::pow(k as f64, -s);
    }
    sum += libm::pow(n, 1.0 - s) / (s - 1.0);
    sum += 0.5 * libm::pow(n, -s);
    // rising factorial s (s+1) ... (s+2k-2) / (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = libm::pow(n, -s - 1.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        sum += b / fact * rising * power;
        let two_k = 2.0 * (k as f64 + 1.0);
        rising *= (s + two_k - 1.0) * (s + two_k);
        fact *= (two_k + 1.0) * (two_k + 2.0);
        power /= n * n;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(primes(10), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes(0).is_empty());
        let big = primes(10_000);
        assert_eq!(big.len(), 10_000);
        assert_eq!(big[9_999], 104_729);
    }

    #[test]
    fn zeta_known_values() {
        let pi = core::f64::consts::PI;
        assert!((zeta_reference(2.0) - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta_reference(4.0) - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta_reference(3.0) - 1.202_056_903_159_594_2).abs() < 1e-14);
        assert!((zeta_reference(1.5) - 2.612_375_348_685_488).abs() < 1e-12);
    }

    #[test]
    fn zeta_matches_euler_product() {
        for s in [2.0, 2.5, 3.0, 6.0] {
            let product: f64 = primes(20_000)
                .iter()
                .map(|&p| 1.0 / (1.0 - libm::pow(p as f64, -s)))
                .product();
            assert!((product - zeta_reference(s)).abs() < 1e-5, "s={s}");
        }
    }
}
