//! The ring O_{K,S}: membership, divisibility, S-units and their
//! generators, residue-field reduction, and the a/b decomposition.
//!
//! Membership and divisibility tests are arranged so that they never
//! factor large integers: denominators are stripped of the rational primes
//! below S, and the remaining checks are valuation probes at finitely many
//! known primes. This keeps certificate checking cheap even when witness
//! values have coordinates with millions of bits.
//!
//! A note on u_K: the torsion unit count used by the pigeonhole argument
//! is #O_K^× = w (2, 4, or 6). The S-unit group itself is infinite.

use crate::ideals::{self, PrimeIdeal};
use crate::qfield::{FieldDesc, KElem};
use crate::util;
use crate::{Error, Result};
use rug::ops::{Pow, RemRounding};
use rug::{Integer, Rational};

/// Which prime above p an S-spec entry selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeTag {
    /// The unique ramified prime above p.
    Ramified,
    /// The split prime with the smaller canonical root.
    Split1,
    /// The split prime with the larger canonical root.
    Split2,
}

/// O_{K,S} with all per-ring caches computed up front.
#[derive(Debug, Clone)]
pub struct SRing {
    pub field: FieldDesc,
    /// The primes of S, in spec order.
    pub s: Vec<PrimeIdeal>,
    /// Cached class number h_K.
    pub h_k: u64,
    /// class_order(𝔭_i) for each 𝔭_i ∈ S.
    pub class_orders: Vec<u64>,
    /// Sorted distinct rational primes below the primes of S.
    pub rational_primes_below: Vec<u64>,
    /// π_i with π_i·O_K = 𝔭_i^{class_order(𝔭_i)}.
    pub pis: Vec<KElem>,
    /// #O_K^× = w.
    pub u_k: u32,
}

/// Lemma-4.3 style decomposition x = a/b.
#[derive(Debug, Clone)]
pub struct ABDecomp {
    pub a: KElem,
    /// Integral, supported on the poles of x inside S.
    pub b: KElem,
    /// (prime, β_𝔭) for each pole handled.
    pub betas: Vec<(PrimeIdeal, u64)>,
}

/// Parses a ring spec string like "d=-1;S=2r" or "d=-1;S=5s1,5s2".
pub fn parse_spec(spec: &str) -> Result<(i64, Vec<(u64, PrimeTag)>)> {
    let bad = |msg: &str| Error::BadSSpec(format!("{msg} in {spec:?}"));
    let (dpart, spart) = spec
        .split_once(';')
        .ok_or_else(|| bad("expected 'd=<int>;S=<entries>'"))?;
    let d: i64 = dpart
        .trim()
        .strip_prefix("d=")
        .ok_or_else(|| bad("missing 'd='"))?
        .trim()
        .parse()
        .map_err(|_| bad("bad d value"))?;
    let entries = spart
        .trim()
        .strip_prefix("S=")
        .ok_or_else(|| bad("missing 'S='"))?;
    let mut out = Vec::new();
    for entry in entries.split(',') {
        let entry = entry.trim();
        let split_at = entry
            .find(|c: char| !c.is_ascii_digit())
            .ok_or_else(|| bad("entry must be <prime><r|s1|s2>"))?;
        let p: u64 = entry[..split_at]
            .parse()
            .map_err(|_| bad("bad prime in entry"))?;
        let tag = match &entry[split_at..] {
            "r" => PrimeTag::Ramified,
            "s1" => PrimeTag::Split1,
            "s2" => PrimeTag::Split2,
            other => return Err(bad(&format!("unknown tag {other:?}"))),
        };
        out.push((p, tag));
    }
    if out.is_empty() {
        return Err(Error::EmptyS);
    }
    Ok((d, out))
}

/// Builds the spec string for a (d, S) pair; inverse of [`parse_spec`].
pub fn render_spec(d: i64, entries: &[(u64, PrimeTag)]) -> String {
    let tags: Vec<String> = entries
        .iter()
        .map(|(p, t)| {
            let t = match t {
                PrimeTag::Ramified => "r",
                PrimeTag::Split1 => "s1",
                PrimeTag::Split2 => "s2",
            };
            format!("{p}{t}")
        })
        .collect();
    format!("d={d};S={}", tags.join(","))
}

/// Resolves one spec entry to a prime ideal.
pub fn resolve_prime(field: &FieldDesc, p: u64, tag: PrimeTag) -> Result<PrimeIdeal> {
    let above = ideals::split_prime(field, p)?;
    let err = |msg: &str| Error::BadSSpec(format!("{msg} (p = {p})"));
    match tag {
        PrimeTag::Ramified => {
            if above.len() == 1 && above[0].is_ramified() {
                Ok(above[0].clone())
            } else {
                Err(err("p is not ramified"))
            }
        }
        PrimeTag::Split1 | PrimeTag::Split2 => {
            if above.len() == 2 {
                let idx = if tag == PrimeTag::Split1 { 0 } else { 1 };
                Ok(above[idx].clone())
            } else {
                Err(err("p is not split"))
            }
        }
    }
}

/// Builds an SRing from a field and resolved S-spec, computing all caches.
pub fn make_sring(field: FieldDesc, spec: &[(u64, PrimeTag)]) -> Result<SRing> {
    if spec.is_empty() {
        return Err(Error::EmptyS);
    }
    let mut s = Vec::new();
    for &(p, tag) in spec {
        let prime = resolve_prime(&field, p, tag)?;
        if s.contains(&prime) {
            return Err(Error::BadSSpec(format!("duplicate prime {prime}")));
        }
        s.push(prime);
    }
    let h_k = ideals::class_number(&field);
    let mut class_orders = Vec::new();
    let mut pis = Vec::new();
    for prime in &s {
        let h_i = ideals::class_order(&field, prime, h_k)?;
        let pi = ideals::is_principal(&field, prime, h_i as u32)?
            .expect("class_order guarantees principality");
        class_orders.push(h_i);
        pis.push(pi);
    }
    let mut below: Vec<u64> = s.iter().map(|p| p.p).collect();
    below.sort_unstable();
    below.dedup();
    let u_k = field.w;
    Ok(SRing {
        field,
        s,
        h_k,
        class_orders,
        rational_primes_below: below,
        pis,
        u_k,
    })
}

/// Convenience constructor from a spec string.
pub fn sring_from_spec(spec: &str) -> Result<SRing> {
    let (d, entries) = parse_spec(spec)?;
    make_sring(crate::qfield::make_field(d)?, &entries)
}

impl SRing {
    /// C² = ∏_{𝔭∈S} q_𝔭^{−h_K}.
    pub fn c_squared(&self) -> Rational {
        let mut c = Rational::from(1);
        for prime in &self.s {
            c /= Rational::from(prime.q().pow(self.h_k as u32));
        }
        c
    }

    /// The torsion generator ζ.
    pub fn zeta(&self) -> KElem {
        self.field.zeta()
    }

    /// True iff p is one of the rational primes below S.
    pub fn is_below_s(&self, p: u64) -> bool {
        self.rational_primes_below.binary_search(&p).is_ok()
    }

    /// Primes above the rational primes below S that are NOT themselves in S
    /// (the conjugates that membership checks must probe).
    fn boundary_primes(&self) -> Vec<PrimeIdeal> {
        let mut out = Vec::new();
        for &p in &self.rational_primes_below {
            for prime in ideals::split_prime(&self.field, p).expect("cached primes are prime") {
                if !self.s.contains(&prime) && !out.contains(&prime) {
                    out.push(prime);
                }
            }
        }
        out
    }

    /// True iff x ∈ O_{K,S}; true for 0. Never factors large integers.
    pub fn is_s_integer(&self, x: &KElem) -> bool {
        if x.is_zero() || x.den == 1 {
            return true;
        }
        let mut den = x.den.clone();
        for &p in &self.rational_primes_below {
            den.remove_factor_mut(&Integer::from(p));
        }
        if den != 1 {
            return false;
        }
        self.boundary_primes()
            .iter()
            .all(|prime| ideals::valuation(&self.field, x, prime).unwrap() >= 0)
    }

    fn require_member(&self, x: &KElem) -> Result<()> {
        if self.is_s_integer(x) {
            Ok(())
        } else {
            Err(Error::NotAnSInteger(x.render()))
        }
    }

    /// x | y in O_{K,S}: ∃z ∈ O_{K,S} with y = xz. 0 divides only 0.
    pub fn divides(&self, x: &KElem, y: &KElem) -> Result<bool> {
        self.require_member(x)?;
        self.require_member(y)?;
        if x.is_zero() {
            return Ok(y.is_zero());
        }
        if y.is_zero() {
            return Ok(true);
        }
        let z = self.field.div(y, x)?;
        Ok(self.is_s_integer(&z))
    }

    /// True iff x is invertible in O_{K,S}, i.e. its ideal support lies in S.
    pub fn is_s_unit(&self, x: &KElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let nrm = self.field.norm(x);
        let mut num = nrm.numer().clone();
        let mut den = nrm.denom().clone();
        for &p in &self.rational_primes_below {
            let p = Integer::from(p);
            for part in [&mut num, &mut den] {
                part.remove_factor_mut(&p);
            }
        }
        if num != 1 || den != 1 {
            return false;
        }
        self.boundary_primes()
            .iter()
            .all(|prime| ideals::valuation(&self.field, x, prime).unwrap() == 0)
    }

    /// ∏ π_i^{a_i} with signed exponents.
    pub fn pi_power(&self, exps: &[i64]) -> KElem {
        assert_eq!(exps.len(), self.pis.len());
        let mut acc = KElem::one();
        for (pi, &a) in self.pis.iter().zip(exps) {
            let powed = self.field.pow(pi, a.unsigned_abs());
            acc = if a >= 0 {
                self.field.mul(&acc, &powed)
            } else {
                self.field.div(&acc, &powed).expect("π_i is nonzero")
            };
        }
        acc
    }

    /// Decomposition x = ζ^j·∏π_i^{a_i} of an S-unit in the generator lattice.
    pub fn unit_decompose(&self, x: &KElem) -> Result<(u32, Vec<i64>)> {
        if !self.is_s_unit(x) {
            return Err(Error::NotAnSUnit(x.render()));
        }
        let mut exps = Vec::with_capacity(self.s.len());
        for (prime, &h_i) in self.s.iter().zip(&self.class_orders) {
            let v = ideals::valuation(&self.field, x, prime)?;
            if v.rem_euclid(h_i as i64) != 0 {
                return Err(Error::OutsideGeneratorLattice(x.render()));
            }
            exps.push(v / h_i as i64);
        }
        let u = self
            .field
            .div(x, &self.pi_power(&exps))
            .expect("π powers are nonzero");
        match self.field.torsion_index(&u) {
            Some(j) => Ok((j, exps)),
            None => Err(Error::OutsideGeneratorLattice(x.render())),
        }
    }

    /// All S-units ζ^j·∏π_i^{a_i} with |a_i| ≤ bound, in (j, a) lex order.
    pub fn s_unit_box(&self, bound: i64) -> Vec<KElem> {
        let mut out = Vec::new();
        let k = self.pis.len();
        let mut exps = vec![-bound; k];
        loop {
            for j in 0..self.field.w {
                let u = self
                    .field
                    .mul(&self.field.torsion_units[j as usize], &self.pi_power(&exps));
                out.push(u);
            }
            // lexicographic increment
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if exps[i] < bound {
                    exps[i] += 1;
                    for e in exps.iter_mut().skip(i + 1) {
                        *e = -bound;
                    }
                    break;
                }
            }
        }
    }

    /// Image of x in F_p^× = k(P)^× under ω ↦ r, for degree-one P ∉ S with
    /// v_P(x) = 0 and p not dividing den(x).
    pub fn reduce_mod(&self, prime: &PrimeIdeal, x: &KElem) -> Result<u64> {
        if prime.f != 1 {
            return Err(Error::BadReduction(format!("{prime} has residue degree 2")));
        }
        if self.s.contains(prime) {
            return Err(Error::BadReduction(format!("{prime} lies in S")));
        }
        let p = prime.p;
        if x.den.is_divisible(&Integer::from(p)) {
            return Err(Error::BadReduction(format!(
                "denominator of {} is divisible by {p}",
                x.render()
            )));
        }
        if x.is_zero() || ideals::valuation(&self.field, x, prime)? != 0 {
            return Err(Error::BadReduction(format!(
                "v_P({}) ≠ 0 at {prime}",
                x.render()
            )));
        }
        let r = prime.root.expect("degree-one prime has a root");
        let pi = Integer::from(p);
        let num = (x.x.clone() + x.y.clone() * Integer::from(r)).rem_euc(&pi);
        let den_inv = x
            .den
            .clone()
            .invert(&pi)
            .expect("denominator is prime to p");
        let res = (num * den_inv).rem_euc(&pi);
        let res = res.to_u64().expect("residue fits");
        debug_assert!(res != 0);
        Ok(res)
    }

    /// Index [F_p^× : ψ_P(O_{K,S}^×)] for a degree-one prime P ∉ S: the
    /// subgroup is generated by the reductions of ζ and the π_i.
    pub fn unit_image_index(&self, prime: &PrimeIdeal) -> Result<u64> {
        let p = prime.p;
        let mut gens = vec![self.reduce_mod(prime, &self.zeta())?];
        for pi in &self.pis {
            gens.push(self.reduce_mod(prime, pi)?);
        }
        let sub = subgroup_order(&gens, p);
        Ok((p - 1) / sub)
    }

    /// True iff the residue b mod p lies in the subgroup of F_p^× of the
    /// given order (cyclic group membership test).
    pub fn in_subgroup(b: u64, p: u64, subgroup_order: u64) -> bool {
        powmod_u64(b % p, subgroup_order, p) == 1
    }

    /// Lemma-4.3 decomposition x = a/b.
    pub fn ab_decompose(&self, x: &KElem) -> Result<ABDecomp> {
        if x.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        self.require_member(x)?;
        let mut b = KElem::one();
        let mut betas = Vec::new();
        for (i, prime) in self.s.iter().enumerate() {
            let v = ideals::valuation(&self.field, x, prime)?;
            if v < 0 {
                let h_i = self.class_orders[i];
                // maximal multiple of class_order(𝔭) that is ≤ −v_𝔭(x)
                let beta = h_i * ((-v) as u64 / h_i);
                if beta > 0 {
                    let gen = self.field.pow(&self.pis[i], beta / h_i);
                    b = self.field.mul(&b, &gen);
                }
                betas.push((prime.clone(), beta));
            }
        }
        let a = self.field.mul(&b, x);
        Ok(ABDecomp { a, b, betas })
    }

    /// Checks every ABDecomp postcondition exactly; returns the first
    /// violated condition, if any.
    pub fn check_ab_decomp(&self, x: &KElem, dec: &ABDecomp) -> Result<Option<String>> {
        if !self.field.is_integral(&dec.b) {
            return Ok(Some("b is not integral".into()));
        }
        let recomposed = self.field.div(&dec.a, &dec.b)?;
        if &recomposed != x {
            return Ok(Some("a/b ≠ x".into()));
        }
        let h_k = self.h_k as i64;
        for prime in &self.s {
            let va = ideals::valuation(&self.field, &dec.a, prime)?;
            if va <= -h_k {
                return Ok(Some(format!("v_{prime}(a) = {va} ≤ −h_K")));
            }
            // b is supported on the poles of x inside S
            if ideals::valuation(&self.field, x, prime)? >= 0
                && ideals::valuation(&self.field, &dec.b, prime)? != 0
            {
                return Ok(Some(format!("v_{prime}(x) ≥ 0 but v_{prime}(b) ≠ 0")));
            }
        }
        if self.field.norm(&dec.a) <= self.c_squared() {
            return Ok(Some("norm(a) ≤ C²".into()));
        }
        Ok(None)
    }

    /// Multiplicative order of u (integral, v_P(u) = 0) in (O_K/P^k)^×.
    pub fn order_mod_prime_power(&self, u: &KElem, prime: &PrimeIdeal, k: u32) -> Integer {
        assert!(k >= 1);
        assert!(self.field.is_integral(u));
        // work modulo p^kp where e·kp ≥ k
        let kp = k.div_ceil(prime.e as u32);
        let modulus = Integer::from(prime.p).pow(kp);
        let q = prime.q();
        // |(O_K/P^k)^×| = q^{k−1}(q − 1)
        let group_order = q.clone().pow(k - 1) * (q - 1u32);
        let passes = |t: &Integer| -> bool {
            let w = self.pow_mod_coords(u, t, &modulus);
            let w1 = KElem::new(w.0 - 1u32, w.1, Integer::from(1)).unwrap();
            if w1.is_zero() {
                return true;
            }
            ideals::valuation(&self.field, &w1, prime).unwrap() >= k as i64
        };
        debug_assert!(passes(&group_order));
        let mut t = group_order.clone();
        for (ell, mult) in util::factor(&group_order) {
            for _ in 0..mult {
                let candidate = t.clone().div_exact(&ell);
                if passes(&candidate) {
                    t = candidate;
                } else {
                    break;
                }
            }
        }
        t
    }

    /// u^t with both coordinates reduced mod m at every step.
    fn pow_mod_coords(&self, u: &KElem, t: &Integer, m: &Integer) -> (Integer, Integer) {
        let (tr, n) = if self.field.omega_half {
            (1i64, (self.field.d - 1) / 4)
        } else {
            (0, self.field.d)
        };
        let mul = |a: &(Integer, Integer), b: &(Integer, Integer)| -> (Integer, Integer) {
            let yy = a.1.clone() * &b.1;
            let x = (a.0.clone() * &b.0 + yy.clone() * n).rem_euc(m);
            let y = (a.0.clone() * &b.1 + b.0.clone() * &a.1 + yy * tr).rem_euc(m);
            (x, y)
        };
        let base = (u.x.clone().rem_euc(m), u.y.clone().rem_euc(m));
        let mut acc = (Integer::from(1), Integer::new());
        for i in (0..t.significant_bits()).rev() {
            acc = mul(&acc, &acc);
            if t.get_bit(i) {
                acc = mul(&acc, &base);
            }
        }
        acc
    }
}

fn powmod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % m as u128) as u64;
        }
        a = ((a as u128 * a as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Order of the subgroup of F_p^× generated by the given residues: the lcm
/// of the element orders (cyclic group).
pub fn subgroup_order(gens: &[u64], p: u64) -> u64 {
    let mut sub = 1u64;
    for &g in gens {
        sub = lcm_u64(sub, element_order(g, p));
    }
    sub
}

/// Multiplicative order of g in F_p^×.
pub fn element_order(g: u64, p: u64) -> u64 {
    assert!(g % p != 0);
    let mut t = p - 1;
    for (ell, mult) in util::factor(&Integer::from(p - 1)) {
        let ell = ell.to_u64().expect("p fits in u64");
        for _ in 0..mult {
            if powmod_u64(g, t / ell, p) == 1 {
                t /= ell;
            } else {
                break;
            }
        }
    }
    t
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}
