//! Integer helpers: primality, factorization, multi-indices.

use rug::{integer::IsPrime, Integer};
use std::collections::BTreeMap;

/// Deterministic-enough primality test (BPSW + Miller-Rabin rounds).
pub fn is_prime(n: &Integer) -> bool {
    n.is_probably_prime(40) != IsPrime::No
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&Integer::from(n))
}

/// Iterator over rational primes 2, 3, 5, ...
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime_u64(n))
}

/// Factors |n| into a prime → exponent map. Trial division for small
/// factors, Pollard's rho for the rest.
pub fn factor(n: &Integer) -> BTreeMap<Integer, u32> {
    let mut out = BTreeMap::new();
    let mut m = n.clone().abs();
    assert!(!m.is_zero(), "cannot factor zero");
    for p in 2u64..=100_000 {
        if m == 1 {
            return out;
        }
        let pi = Integer::from(p);
        if pi.clone().square() > m {
            break;
        }
        let v = m.remove_factor_mut(&pi);
        if v > 0 {
            out.insert(pi, v);
        }
    }
    if m != 1 {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if is_prime(&c) {
                *out.entry(c).or_insert(0) += 1;
            } else {
                let d = pollard_rho(&c);
                let q = c.clone().div_exact(&d);
                stack.push(d);
                stack.push(q);
            }
        }
    }
    out
}

fn pollard_rho(n: &Integer) -> Integer {
    // n is odd, composite, and has no factor below 1e5 here.
    let mut c = Integer::from(1);
    loop {
        let mut x = Integer::from(2);
        let mut y = Integer::from(2);
        let mut d = Integer::from(1);
        let f = |v: &Integer| (v.clone() * v + &c) % n;
        while d == 1 {
            x = f(&x);
            y = f(&f(&y));
            d = Integer::from(&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// All multi-indices in {0..=max}^k in lexicographic order.
pub fn multi_indices(k: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * (max as usize + 1));
        for prefix in &out {
            for v in 0..=max {
                let mut idx = prefix.clone();
                idx.push(v);
                next.push(idx);
            }
        }
        out = next;
    }
    out
}

/// Exact floor of the square root, or None if n is negative.
pub fn isqrt(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        None
    } else {
        Some(n.clone().sqrt())
    }
}

/// The exact square root of n, if n is a perfect square.
pub fn perfect_sqrt(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let (root, rem) = n.clone().sqrt_rem(Integer::new());
    if rem.is_zero() {
        Some(root)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring() {
        let f = factor(&Integer::from(2u64 * 2 * 3 * 97 * 97 * 1_000_003));
        assert_eq!(f.get(&Integer::from(2)), Some(&2));
        assert_eq!(f.get(&Integer::from(3)), Some(&1));
        assert_eq!(f.get(&Integer::from(97)), Some(&2));
        assert_eq!(f.get(&Integer::from(1_000_003)), Some(&1));
        // semiprime beyond the trial-division bound
        let p = Integer::from(1_000_033u64);
        let q = Integer::from(1_000_037u64);
        let f = factor(&(p.clone() * &q));
        assert_eq!(f.len(), 2);
        assert_eq!(f.get(&p), Some(&1));
        assert_eq!(f.get(&q), Some(&1));
    }

    #[test]
    fn indices() {
        assert_eq!(multi_indices(0, 4), vec![Vec::<u32>::new()]);
        assert_eq!(multi_indices(1, 2), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(multi_indices(2, 1).len(), 4);
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(perfect_sqrt(&Integer::from(49)), Some(Integer::from(7)));
        assert_eq!(perfect_sqrt(&Integer::from(50)), None);
        assert_eq!(isqrt(&Integer::from(50)), Some(Integer::from(7)));
    }
}
