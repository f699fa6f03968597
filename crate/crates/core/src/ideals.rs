//! Prime splitting, valuations, fractional-ideal factorization, class
//! numbers and principality testing in O_K.
//!
//! A prime ideal above p is identified by (p, r) where r is the canonical
//! (least nonnegative) root of the minimal polynomial of ω mod p used in
//! its second generator r − ω; inert primes carry no root. This makes
//! conjugate primes distinguishable deterministically.

use crate::qfield::{FieldDesc, KElem};
use crate::util;
use crate::{Error, Result};
use rug::ops::{Pow, RemRounding};
use rug::{Integer, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// A prime of O_K above the rational prime p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    /// Rational prime below.
    pub p: u64,
    /// Ramification index.
    pub e: u8,
    /// Residue degree.
    pub f: u8,
    /// Canonical root r of the minimal polynomial of ω mod p (None iff inert).
    pub root: Option<u64>,
}

impl PrimeIdeal {
    /// Residue field size p^f.
    pub fn q(&self) -> Integer {
        Integer::from(self.p).pow(self.f as u32)
    }

    /// Second generator: r − ω for degree-one primes, p itself when inert.
    pub fn gen2(&self) -> KElem {
        match self.root {
            Some(r) => KElem::new(Integer::from(r), Integer::from(-1), Integer::from(1))
                .expect("unit denominator"),
            None => KElem::from_int(self.p),
        }
    }

    pub fn is_ramified(&self) -> bool {
        self.e == 2
    }

    /// The conjugate prime (self if ramified or inert).
    pub fn conjugate(&self, field: &FieldDesc) -> PrimeIdeal {
        match (self.e, self.root) {
            (1, Some(r)) if self.f == 1 => {
                let t = if field.omega_half { 1u64 } else { 0 };
                let other = (t + self.p - r % self.p) % self.p;
                PrimeIdeal {
                    root: Some(other),
                    ..self.clone()
                }
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            Some(r) => write!(f, "({}, {})", self.p, r),
            None => write!(f, "({}, inert)", self.p),
        }
    }
}

/// Finite-support factorization of a fractional ideal.
pub type FracFactorization = BTreeMap<PrimeIdeal, i64>;

/// Stable text rendering of a factorization as sorted "(p, r)^k" terms.
pub fn render_factorization(fac: &FracFactorization) -> String {
    if fac.is_empty() {
        return "1".to_string();
    }
    fac.iter()
        .map(|(pr, k)| format!("{pr}^{k}"))
        .collect::<Vec<_>>()
        .join(" * ")
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, m: u64) -> u64 {
    // m prime here
    powmod(a, m - 2, m)
}

/// Square root mod an odd prime p via Tonelli-Shanks; None for non-residues.
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if powmod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod(n, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| powmod(z, (p - 1) / 2, p) == p - 1)
        .expect("nonresidue exists");
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// The 1 or 2 primes of O_K above p, with split primes ordered by root.
pub fn split_prime(field: &FieldDesc, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !util::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let t: i64 = if field.omega_half { 1 } else { 0 };
    if p == 2 {
        let n = if field.omega_half {
            (field.d - 1) / 4
        } else {
            field.d
        };
        // roots of X² − tX − n mod 2 by inspection
        let roots: Vec<u64> = (0..2u64)
            .filter(|&r| {
                let v = (r as i64) * (r as i64) - t * (r as i64) - n;
                v.rem_euclid(2) == 0
            })
            .collect();
        return Ok(match roots.len() {
            2 => roots
                .into_iter()
                .map(|r| PrimeIdeal {
                    p,
                    e: 1,
                    f: 1,
                    root: Some(r),
                })
                .collect(),
            1 => vec![PrimeIdeal {
                p,
                e: 2,
                f: 1,
                root: Some(roots[0]),
            }],
            _ => vec![PrimeIdeal {
                p,
                e: 1,
                f: 2,
                root: None,
            }],
        });
    }
    let disc = field.disc.rem_euclid(p as i64) as u64;
    if disc == 0 {
        // ramified: double root t/2 mod p
        let r = mulmod(t.rem_euclid(p as i64) as u64, invmod(2, p), p);
        return Ok(vec![PrimeIdeal {
            p,
            e: 2,
            f: 1,
            root: Some(r),
        }]);
    }
    match sqrt_mod(disc, p) {
        Some(s) => {
            let tp = t.rem_euclid(p as i64) as u64;
            let half = invmod(2, p);
            let mut roots = [
                mulmod((tp + s) % p, half, p),
                mulmod((tp + p - s) % p, half, p),
            ];
            roots.sort_unstable();
            Ok(roots
                .iter()
                .map(|&r| PrimeIdeal {
                    p,
                    e: 1,
                    f: 1,
                    root: Some(r),
                })
                .collect())
        }
        None => Ok(vec![PrimeIdeal {
            p,
            e: 1,
            f: 2,
            root: None,
        }]),
    }
}

/// All primes of O_K above the prime factors of |n|, n ≠ 0.
pub fn primes_above(field: &FieldDesc, n: &Integer) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for (p, _) in util::factor(n) {
        let p = p.to_u64().ok_or_else(|| {
            Error::Precondition(format!("prime factor {p} exceeds the supported range"))
        })?;
        out.extend(split_prime(field, p)?);
    }
    Ok(out)
}

/// Multiplicity of p in n ≠ 0.
pub fn int_valuation(n: &Integer, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    n.clone().abs().remove_factor_mut(&Integer::from(p))
}

/// v_P(a) for a ≠ 0, computed from norms and residue probes only — no full
/// factorization, so this stays cheap on elements with huge coordinates.
pub fn valuation(field: &FieldDesc, a: &KElem, prime: &PrimeIdeal) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let p = Integer::from(prime.p);
    // strip the common p-power from the integral numerator
    let mut x = a.x.clone();
    let mut y = a.y.clone();
    let vx = if x.is_zero() { u32::MAX } else { x.clone().remove_factor_mut(&p) };
    let vy = if y.is_zero() { u32::MAX } else { y.clone().remove_factor_mut(&p) };
    let c = vx.min(vy);
    if c > 0 {
        let pc = p.clone().pow(c);
        x.div_exact_mut(&pc);
        y.div_exact_mut(&pc);
    }
    let c = c as i64;
    let m = int_valuation(&field.norm_coords(&x, &y), prime.p) as i64;
    let num_val = match (prime.e, prime.f) {
        (1, 2) => {
            debug_assert_eq!(m, 0, "inert norm form is anisotropic mod p");
            c
        }
        (2, 1) => 2 * c + m,
        (1, 1) => {
            // after stripping, at most one of the two conjugate primes divides
            let r = Integer::from(prime.root.expect("degree-one prime has a root"));
            let probe = (x + y * &r) % &p;
            if m > 0 && probe.is_zero() {
                c + m
            } else {
                c
            }
        }
        _ => unreachable!("efg = 2 in a quadratic field"),
    };
    let den_val = int_valuation(&a.den, prime.p) as i64 * prime.e as i64;
    Ok(num_val - den_val)
}

/// Full-support factorization of the fractional ideal aO_K.
pub fn factor_element(field: &FieldDesc, a: &KElem) -> Result<FracFactorization> {
    if a.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let mut support = field.norm_coords(&a.x, &a.y).abs();
    support *= a.den.clone().square();
    let mut out = FracFactorization::new();
    if support == 1 {
        return Ok(out);
    }
    for prime in primes_above(field, &support)? {
        let v = valuation(field, a, &prime)?;
        if v != 0 {
            out.insert(prime, v);
        }
    }
    Ok(out)
}

/// Checks the product formula norm(a) = ∏ q_p^{v_p(a)} exactly, a ≠ 0.
pub fn product_formula_holds(field: &FieldDesc, a: &KElem) -> Result<bool> {
    let fac = factor_element(field, a)?;
    let mut prod = Rational::from(1);
    for (prime, v) in &fac {
        let q = prime.q();
        if *v >= 0 {
            prod *= Rational::from(q.pow(*v as u32));
        } else {
            prod /= Rational::from(q.pow(-*v as u32));
        }
    }
    Ok(prod == field.norm(a))
}

/// h_K by counting reduced primitive binary quadratic forms (a, b, c) of
/// discriminant D: b² − 4ac = D, −a < b ≤ a ≤ c, and b ≥ 0 when a = c.
pub fn class_number(field: &FieldDesc) -> u64 {
    class_number_of_disc(field.disc)
}

pub fn class_number_of_disc(disc: i64) -> u64 {
    assert!(disc < 0);
    let abs_d = -disc;
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) || gcd3(a, b, c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    }
    gcd(gcd(a, b), c)
}

/// A full-rank Z-submodule of O_K in the basis (1, ω), in Hermite form:
/// generated by (a, 0) and (b, c) with 0 ≤ b < a.
#[derive(Debug, Clone)]
struct IdealBasis {
    a: Integer,
    b: Integer,
    c: Integer,
}

fn hnf(vectors: &[(Integer, Integer)]) -> IdealBasis {
    // gcd of the ω-coordinates, tracking one combination that achieves it
    let mut c = Integer::new();
    let mut wx = Integer::new();
    for (x, y) in vectors {
        if y.is_zero() {
            continue;
        }
        if c.is_zero() {
            let s = Integer::from(y.signum_ref());
            c = y.clone().abs();
            wx = x.clone() * s;
        } else {
            let (g, s, t) = c.clone().extended_gcd(y.clone(), Integer::new());
            wx = wx.clone() * s + x.clone() * t;
            c = g;
        }
    }
    assert!(!c.is_zero(), "module must have full rank");
    let mut a = Integer::new();
    for (x, y) in vectors {
        let k = Integer::from(y / &c);
        a = a.gcd(&(x.clone() - k * &wx));
    }
    let a = a.abs();
    assert!(!a.is_zero(), "module must have full rank");
    let b = wx.rem_euc(&a);
    IdealBasis { a, b, c }
}

impl IdealBasis {
    fn from_prime(field: &FieldDesc, prime: &PrimeIdeal) -> IdealBasis {
        let p = Integer::from(prime.p);
        let g = prime.gen2();
        let gw = field.mul(&g, &field.omega());
        hnf(&[
            (p.clone(), Integer::new()),
            (Integer::new(), p),
            (g.x, g.y),
            (gw.x, gw.y),
        ])
    }

    fn mul(&self, other: &IdealBasis, field: &FieldDesc) -> IdealBasis {
        let gens = |m: &IdealBasis| {
            [
                KElem::new(m.a.clone(), Integer::new(), Integer::from(1)).unwrap(),
                KElem::new(m.b.clone(), m.c.clone(), Integer::from(1)).unwrap(),
            ]
        };
        let mut products = Vec::with_capacity(4);
        for u in gens(self) {
            for v in gens(other) {
                let w = field.mul(&u, &v);
                products.push((w.x, w.y));
            }
        }
        hnf(&products)
    }

    /// Gauss-Lagrange reduction: a lattice vector of minimal positive norm.
    fn shortest_vector(&self, field: &FieldDesc) -> KElem {
        let q = |v: &(Integer, Integer)| field.norm_coords(&v.0, &v.1);
        let mut u = (self.a.clone(), Integer::new());
        let mut v = (self.b.clone(), self.c.clone());
        if q(&u) > q(&v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            // μ = nearest integer to B(u,v)/Q(u); 2B = Q(u+v) − Q(u) − Q(v)
            let sum = (u.0.clone() + &v.0, u.1.clone() + &v.1);
            let two_b = q(&sum) - q(&u) - q(&v);
            let two_q = q(&u) << 1;
            let mu = two_b.div_rem_round(two_q).0;
            let r = (v.0.clone() - mu.clone() * &u.0, v.1.clone() - mu * &u.1);
            if q(&r) < q(&u) {
                v = u;
                u = r;
            } else {
                break;
            }
        }
        KElem::new(u.0, u.1, Integer::from(1)).unwrap()
    }
}

/// Norm threshold below which principality testing enumerates the
/// positive-definite norm form directly; above it, a Gauss-reduced ideal
/// basis supplies the candidate generator.
const ENUM_NORM_LIMIT: u64 = 20_000_000;

/// If P^k is principal, returns a generator g with gO_K = P^k.
pub fn is_principal(field: &FieldDesc, prime: &PrimeIdeal, k: u32) -> Result<Option<KElem>> {
    assert!(k >= 1);
    let target = prime.q().pow(k);
    let accept = |g: &KElem| -> Result<bool> {
        Ok(field.norm_coords(&g.x, &g.y) == target && valuation(field, g, prime)? == k as i64)
    };
    if target <= ENUM_NORM_LIMIT {
        for g in norm_form_solutions(field, &target) {
            if accept(&g)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    } else {
        let base = IdealBasis::from_prime(field, prime);
        let mut pow = base.clone();
        for _ in 1..k {
            pow = pow.mul(&base, field);
        }
        let g = pow.shortest_vector(field);
        if accept(&g)? {
            Ok(Some(g))
        } else {
            Ok(None)
        }
    }
}

/// All integral elements of norm exactly n, in a fixed deterministic order.
pub fn norm_form_solutions(field: &FieldDesc, n: &Integer) -> Vec<KElem> {
    let mut out = Vec::new();
    let abs_d = Integer::from(-field.d);
    // y-range from the positive-definite form: |d|·y² ≤ N (ω = √d) or
    // |d|·y²/4 ≤ N (ω = (1+√d)/2)
    let ybound = if field.omega_half {
        util::isqrt(&(Integer::from(4) * n / &abs_d)).unwrap()
    } else {
        util::isqrt(&(n.clone() / &abs_d)).unwrap()
    };
    let ybound = ybound.to_i64().unwrap_or(i64::MAX);
    let mut push = |x: Integer, y: i64| {
        out.push(KElem::new(x, Integer::from(y), Integer::from(1)).unwrap());
    };
    for y in interleave(ybound) {
        let yi = Integer::from(y);
        if field.omega_half {
            // x² + xy + (1−d)/4·y² = N ⟺ (2x + y)² = d·y² + 4N
            let disc = Integer::from(field.d) * yi.clone().square() + Integer::from(4) * n;
            if let Some(s) = util::perfect_sqrt(&disc) {
                for sign in [1i32, -1] {
                    let num = Integer::from(&s * sign) - &yi;
                    if num.is_even() {
                        push(num / 2, y);
                    }
                    if s.is_zero() {
                        break;
                    }
                }
            }
        } else {
            let rest = n.clone() - abs_d.clone() * yi.clone().square();
            if let Some(s) = util::perfect_sqrt(&rest) {
                push(s.clone(), y);
                if !s.is_zero() {
                    push(-s, y);
                }
            }
        }
    }
    out
}

/// 0, 1, −1, 2, −2, ...
fn interleave(bound: i64) -> impl Iterator<Item = i64> {
    (0..=bound).flat_map(|y| if y == 0 { vec![0] } else { vec![y, -y] })
}

/// Smallest k ≥ 1 with P^k principal; always divides h_K, so only divisors
/// of the class number are probed.
pub fn class_order(field: &FieldDesc, prime: &PrimeIdeal, h_k: u64) -> Result<u64> {
    let mut divisors: Vec<u64> = (1..=h_k).filter(|d| h_k % d == 0).collect();
    divisors.sort_unstable();
    for k in divisors {
        if is_principal(field, prime, k as u32)?.is_some() {
            return Ok(k);
        }
    }
    Err(Error::Precondition(format!(
        "no power of {prime} up to h_K = {h_k} is principal"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::make_field;

    fn k(x: i64, y: i64, den: i64) -> KElem {
        KElem::new(Integer::from(x), Integer::from(y), Integer::from(den)).unwrap()
    }

    #[test]
    fn splitting_in_gaussian_integers() {
        let f = make_field(-1).unwrap();
        let above2 = split_prime(&f, 2).unwrap();
        assert_eq!(above2.len(), 1);
        assert_eq!((above2[0].e, above2[0].f), (2, 1));
        assert_eq!(above2[0].q(), 2);
        // (1+i)² = 2·unit
        let g = k(1, 1, 1);
        let sq = f.mul(&g, &g);
        assert_eq!(f.div(&sq, &k(2, 0, 1)).unwrap(), k(0, 1, 1));

        let above5 = split_prime(&f, 5).unwrap();
        assert_eq!(above5.len(), 2);
        for pr in &above5 {
            assert_eq!((pr.e, pr.f), (1, 1));
            assert_eq!(pr.q(), 5);
        }
        // 5 = (2+i)(2−i)
        assert_eq!(f.mul(&k(2, 1, 1), &k(2, -1, 1)), k(5, 0, 1));

        let above3 = split_prime(&f, 3).unwrap();
        assert_eq!(above3.len(), 1);
        assert_eq!((above3[0].e, above3[0].f), (1, 2));
        assert_eq!(above3[0].q(), 9);

        assert!(matches!(split_prime(&f, 6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn splitting_consistency() {
        // Σ e·f = 2 for every prime in several fields
        for d in [-1i64, -3, -5, -7, -11, -15, -23] {
            let f = make_field(d).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13, 10007] {
                let above = split_prime(&f, p).unwrap();
                let sum: u32 = above.iter().map(|pr| pr.e as u32 * pr.f as u32).sum();
                assert_eq!(sum, 2, "d={d} p={p}");
                for pr in &above {
                    if let Some(r) = pr.root {
                        // r really is a root of the minimal polynomial of ω
                        let t: i64 = if f.omega_half { 1 } else { 0 };
                        let n = if f.omega_half { (f.d - 1) / 4 } else { f.d };
                        let v = (r as i128) * (r as i128) - (t as i128) * r as i128 - n as i128;
                        assert_eq!(v.rem_euclid(p as i128), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn valuations_in_gaussian_integers() {
        let f = make_field(-1).unwrap();
        let p2 = &split_prime(&f, 2).unwrap()[0];
        assert_eq!(valuation(&f, &k(2, 0, 1), p2).unwrap(), 2);
        assert_eq!(valuation(&f, &k(3, 0, 1), p2).unwrap(), 0);
        let above5 = split_prime(&f, 5).unwrap();
        assert_eq!(valuation(&f, &k(5, 0, 1), &above5[0]).unwrap(), 1);
        assert_eq!(valuation(&f, &k(5, 0, 1), &above5[1]).unwrap(), 1);
        // valuation is additive and respects conjugate separation
        let a = k(2, 1, 1); // above 5, one side only
        let side0 = valuation(&f, &a, &above5[0]).unwrap();
        let side1 = valuation(&f, &a, &above5[1]).unwrap();
        assert_eq!(side0 + side1, 1);
        assert_eq!(valuation(&f, &f.mul(&a, &a), &above5[0]).unwrap(), 2 * side0);
    }

    #[test]
    fn factorization_examples() {
        let f = make_field(-1).unwrap();
        assert!(factor_element(&f, &KElem::one()).unwrap().is_empty());
        let p2 = split_prime(&f, 2).unwrap()[0].clone();
        let fac2 = factor_element(&f, &k(2, 0, 1)).unwrap();
        assert_eq!(fac2.len(), 1);
        assert_eq!(fac2.get(&p2), Some(&2));
        // (1−ω)/2 = (1+i)^{-1} up to a unit
        let half = k(1, -1, 2);
        let fach = factor_element(&f, &half).unwrap();
        assert_eq!(fach.len(), 1);
        assert_eq!(fach.get(&p2), Some(&-1));
    }

    #[test]
    fn product_formula_on_samples() {
        for d in [-1i64, -5] {
            let f = make_field(d).unwrap();
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    for den in [1i64, 2, 3, 6] {
                        let a = k(x, y, den);
                        if !a.is_zero() {
                            assert!(product_formula_holds(&f, &a).unwrap(), "d={d} a={a}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number_of_disc(-4), 1);
        assert_eq!(class_number_of_disc(-3), 1);
        assert_eq!(class_number_of_disc(-20), 2);
        assert_eq!(class_number_of_disc(-23), 3);
        assert_eq!(class_number_of_disc(-47), 5);
        assert_eq!(class_number_of_disc(-163), 1);
    }

    #[test]
    fn principality() {
        // Q(√−5): the ramified prime above 2 is not principal, its square is (2)
        let f = make_field(-5).unwrap();
        let p2 = split_prime(&f, 2).unwrap()[0].clone();
        assert!(is_principal(&f, &p2, 1).unwrap().is_none());
        let g = is_principal(&f, &p2, 2).unwrap().unwrap();
        let fac = factor_element(&f, &g).unwrap();
        assert_eq!(fac.get(&p2), Some(&2));
        assert_eq!(fac.len(), 1);
        assert_eq!(class_order(&f, &p2, 2).unwrap(), 2);

        // Q(i): everything is principal
        let f1 = make_field(-1).unwrap();
        let q2 = split_prime(&f1, 2).unwrap()[0].clone();
        let g = is_principal(&f1, &q2, 1).unwrap().unwrap();
        assert_eq!(f1.norm_coords(&g.x, &g.y), 2);
        assert_eq!(class_order(&f1, &q2, 1).unwrap(), 1);
    }

    #[test]
    fn principality_large_norm_path() {
        // force the Gauss-reduction path with a split prime of large norm
        let f = make_field(-5).unwrap();
        let p = 100_003_u64; // splits: −20 is a QR mod it?
        let above = split_prime(&f, p).unwrap();
        if above.len() == 2 {
            let pr = &above[0];
            let ord = class_order(&f, pr, 2).unwrap();
            let g = is_principal(&f, pr, ord as u32).unwrap().unwrap();
            assert_eq!(
                f.norm_coords(&g.x, &g.y),
                pr.q().pow(ord as u32),
                "generator norm must match the ideal norm"
            );
            assert_eq!(valuation(&f, &g, pr).unwrap(), ord as i64);
        }
    }
}
