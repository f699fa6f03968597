//! Exact arithmetic in an imaginary quadratic field K = Q(√d).
//!
//! Elements are stored in coordinates over the integral basis (1, ω) with a
//! common denominator, where ω = (1+√d)/2 when d ≡ 1 (mod 4) and ω = √d
//! otherwise, so that O_K = Z[ω] in both cases. All inequalities between
//! archimedean absolute values are decided on squared values; no floating
//! point is used anywhere.

use crate::{Error, Result};
use rug::{Integer, Rational};
use std::fmt;

/// An imaginary quadratic field K = Q(√d), d < 0 squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDesc {
    /// The squarefree negative integer d.
    pub d: i64,
    /// The fundamental discriminant: d if d ≡ 1 (mod 4), else 4d.
    pub disc: i64,
    /// True iff ω = (1+√d)/2 (the d ≡ 1 mod 4 case).
    pub omega_half: bool,
    /// Order of the torsion unit group of O_K: 4 for d = −1, 6 for d = −3, else 2.
    pub w: u32,
    /// The w roots of unity in O_K, starting at 1 and listed as powers of a
    /// fixed generator ζ (so `torsion_units[1]` generates the group).
    pub torsion_units: Vec<KElem>,
}

/// An element (x + y·ω)/den of K in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElem {
    pub x: Integer,
    pub y: Integer,
    pub den: Integer,
}

impl KElem {
    /// Canonicalize raw coordinates: den > 0 and gcd(x, y, den) = 1.
    pub fn new(x: Integer, y: Integer, den: Integer) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut e = KElem { x, y, den };
        e.canonicalize();
        Ok(e)
    }

    fn canonicalize(&mut self) {
        if self.den.is_negative() {
            self.x = -self.x.clone();
            self.y = -self.y.clone();
            self.den = -self.den.clone();
        }
        let mut g = self.x.clone().gcd(&self.y).gcd(&self.den);
        if g.is_zero() {
            g = Integer::from(1);
            self.den = Integer::from(1);
        }
        if g != 1 {
            self.x.div_exact_mut(&g);
            self.y.div_exact_mut(&g);
            self.den.div_exact_mut(&g);
        }
    }

    /// The rational integer n as an element of K.
    pub fn from_int(n: impl Into<Integer>) -> Self {
        KElem {
            x: n.into(),
            y: Integer::new(),
            den: Integer::from(1),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True iff the element is a rational integer.
    pub fn is_rational_integer(&self) -> bool {
        self.y.is_zero() && self.den == 1
    }

    /// Renders as "x + y*w" or "(x + y*w)/den"; inverse of [`KElem::parse`].
    pub fn render(&self) -> String {
        let core = format!("{} + {}*w", self.x, self.y);
        if self.den == 1 {
            core
        } else {
            format!("({})/{}", core, self.den)
        }
    }

    /// Parses the grammar produced by [`KElem::render`].
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let err = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg} in element {s:?}"),
        };
        let (core, den) = if let Some(rest) = s.strip_prefix('(') {
            let close = rest.find(')').ok_or_else(|| err("missing ')'"))?;
            let inner = &rest[..close];
            let tail = rest[close + 1..].trim();
            let den_str = tail
                .strip_prefix('/')
                .ok_or_else(|| err("missing '/den'"))?
                .trim();
            let den: Integer = den_str.parse().map_err(|_| err("bad denominator"))?;
            (inner.to_string(), den)
        } else {
            (s.to_string(), Integer::from(1))
        };
        let (xs, ys) = core
            .split_once('+')
            .ok_or_else(|| err("missing '+' between coordinates"))?;
        let x: Integer = xs.trim().parse().map_err(|_| err("bad x coordinate"))?;
        let ys = ys.trim();
        let ys = ys
            .strip_suffix("*w")
            .ok_or_else(|| err("missing '*w' suffix"))?;
        let y: Integer = ys.trim().parse().map_err(|_| err("bad y coordinate"))?;
        KElem::new(x, y, den)
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Validates d and computes the discriminant, ω-basis, and torsion units.
pub fn make_field(d: i64) -> Result<FieldDesc> {
    if d >= 0 {
        return Err(Error::NonNegativeD(d));
    }
    if !is_squarefree(d.unsigned_abs()) {
        return Err(Error::NonSquarefreeD(d));
    }
    // d ≡ 1 (mod 4) for negative d means d.rem_euclid(4) == 1.
    let omega_half = d.rem_euclid(4) == 1;
    let disc = if omega_half { d } else { 4 * d };
    let w = match d {
        -1 => 4,
        -3 => 6,
        _ => 2,
    };
    let zeta = match d {
        -1 => KElem::new(Integer::new(), Integer::from(1), Integer::from(1))?, // i
        -3 => KElem::new(Integer::new(), Integer::from(1), Integer::from(1))?, // (1+√−3)/2
        _ => KElem::from_int(-1),
    };
    let mut field = FieldDesc {
        d,
        disc,
        omega_half,
        w,
        torsion_units: Vec::new(),
    };
    let mut units = Vec::with_capacity(w as usize);
    let mut u = KElem::one();
    for _ in 0..w {
        units.push(u.clone());
        u = field.mul(&u, &zeta);
    }
    debug_assert_eq!(u, KElem::one());
    field.torsion_units = units;
    Ok(field)
}

impl FieldDesc {
    /// Trace and "norm part" of ω: ω² = t·ω + n.
    fn omega_square(&self) -> (i64, i64) {
        if self.omega_half {
            (1, (self.d - 1) / 4)
        } else {
            (0, self.d)
        }
    }

    pub fn omega(&self) -> KElem {
        KElem {
            x: Integer::new(),
            y: Integer::from(1),
            den: Integer::from(1),
        }
    }

    /// The torsion generator ζ (order w).
    pub fn zeta(&self) -> KElem {
        self.torsion_units[1].clone()
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        let x = a.x.clone() * &b.den + b.x.clone() * &a.den;
        let y = a.y.clone() * &b.den + b.y.clone() * &a.den;
        let den = a.den.clone() * &b.den;
        KElem::new(x, y, den).expect("nonzero denominator")
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        KElem {
            x: -a.x.clone(),
            y: -a.y.clone(),
            den: a.den.clone(),
        }
    }

    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        let (t, n) = self.omega_square();
        let yy = a.y.clone() * &b.y;
        let x = a.x.clone() * &b.x + yy.clone() * n;
        let y = a.x.clone() * &b.y + b.x.clone() * &a.y + yy * t;
        let den = a.den.clone() * &b.den;
        KElem::new(x, y, den).expect("nonzero denominator")
    }

    /// Complex conjugation: ω ↦ t − ω.
    pub fn conj(&self, a: &KElem) -> KElem {
        let (t, _) = self.omega_square();
        KElem::new(
            a.x.clone() + a.y.clone() * t,
            -a.y.clone(),
            a.den.clone(),
        )
        .expect("nonzero denominator")
    }

    pub fn div(&self, a: &KElem, b: &KElem) -> Result<KElem> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let bc = self.conj(b);
        let num = self.mul(a, &bc);
        // b·conj(b) is rational: scale by its numerator/denominator.
        let nb = self.mul(b, &bc);
        debug_assert!(nb.y.is_zero());
        KElem::new(num.x * &nb.den, num.y * &nb.den, num.den.clone() * &nb.x)
    }

    /// a·conj(a) as an exact nonnegative rational.
    pub fn norm(&self, a: &KElem) -> Rational {
        let p = self.mul(a, &self.conj(a));
        debug_assert!(p.y.is_zero());
        Rational::from((p.x, p.den))
    }

    /// Norm of an integral numerator (x + y·ω), as an integer.
    pub fn norm_coords(&self, x: &Integer, y: &Integer) -> Integer {
        let (t, n) = self.omega_square();
        // N(x + yω) = x² + t·x·y − n·y²
        x.clone() * x + x.clone() * y * t - y.clone() * y * n
    }

    /// True iff a ∈ O_K, i.e. den = 1 in canonical form.
    pub fn is_integral(&self, a: &KElem) -> bool {
        a.den == 1
    }

    /// Exponentiation by a nonnegative word-sized exponent.
    pub fn pow(&self, a: &KElem, mut e: u64) -> KElem {
        let mut base = a.clone();
        let mut acc = KElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Exponentiation by an arbitrary-precision nonnegative exponent.
    pub fn pow_big(&self, a: &KElem, e: &Integer) -> KElem {
        assert!(!e.is_negative());
        let bits = e.significant_bits();
        let mut acc = KElem::one();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.get_bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// True iff u is one of the w torsion units.
    pub fn is_torsion_unit(&self, u: &KElem) -> bool {
        self.torsion_units.iter().any(|t| t == u)
    }

    /// Index j with u = ζ^j, if u is torsion.
    pub fn torsion_index(&self, u: &KElem) -> Option<u32> {
        self.torsion_units
            .iter()
            .position(|t| t == u)
            .map(|j| j as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn k(x: i64, y: i64, den: i64) -> KElem {
        KElem::new(Integer::from(x), Integer::from(y), Integer::from(den)).unwrap()
    }

    #[test]
    fn field_constants() {
        let f = make_field(-1).unwrap();
        assert_eq!(f.disc, -4);
        assert!(!f.omega_half);
        assert_eq!(f.w, 4);
        // torsion = {1, i, −1, −i}, each u^4 = 1 with norm 1
        assert_eq!(f.torsion_units.len(), 4);
        for u in &f.torsion_units {
            assert_eq!(f.pow(u, 4), KElem::one());
            assert_eq!(f.norm(u), Rational::from(1));
        }

        let f3 = make_field(-3).unwrap();
        assert_eq!(f3.disc, -3);
        assert!(f3.omega_half);
        assert_eq!(f3.w, 6);
        // enumerate integral elements of norm 1 by bounded coordinate search
        let mut units = Vec::new();
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                let e = k(x, y, 1);
                if f3.norm(&e) == Rational::from(1) {
                    units.push(e);
                }
            }
        }
        assert_eq!(units.len(), 6);
        for u in &units {
            assert!(f3.is_torsion_unit(u), "missing torsion unit {u}");
        }

        let f5 = make_field(-5).unwrap();
        assert_eq!(f5.disc, -20);
        assert_eq!(f5.w, 2);
        assert_eq!(f5.torsion_units, vec![k(1, 0, 1), k(-1, 0, 1)]);
    }

    #[test]
    fn rejects_bad_d() {
        assert!(matches!(make_field(5), Err(Error::NonNegativeD(5))));
        assert!(matches!(make_field(0), Err(Error::NonNegativeD(0))));
        assert!(matches!(make_field(-4), Err(Error::NonSquarefreeD(-4))));
        assert!(matches!(make_field(-12), Err(Error::NonSquarefreeD(-12))));
        assert!(make_field(-15).is_ok());
    }

    #[test]
    fn gaussian_arithmetic() {
        let f = make_field(-1).unwrap();
        let a = k(1, 1, 1);
        let b = k(1, -1, 1);
        assert_eq!(f.mul(&a, &b), k(2, 0, 1));
        // div(1, 1+ω) = (1−ω)/2, checked by multiplying back
        let inv = f.div(&KElem::one(), &a).unwrap();
        assert_eq!(inv, k(1, -1, 2));
        assert_eq!(f.mul(&inv, &a), KElem::one());
        assert_eq!(f.conj(&k(3, 2, 1)), k(3, -2, 1));
    }

    #[test]
    fn norms() {
        let f = make_field(-1).unwrap();
        assert_eq!(f.norm(&KElem::zero()), Rational::from(0));
        assert_eq!(f.norm(&k(1, 1, 1)), Rational::from(2));
        assert_eq!(f.norm(&k(1, 1, 2)), Rational::from((1, 2)));
    }

    #[test]
    fn integrality() {
        let f = make_field(-1).unwrap();
        assert!(f.is_integral(&k(1, 1, 1)));
        assert!(!f.is_integral(&k(1, 1, 2)));
        // in Q(√−3), (1+√−3)/2 is ω itself, hence integral
        let f3 = make_field(-3).unwrap();
        assert!(f3.is_integral(&k(0, 1, 1)));
    }

    #[test]
    fn norm_multiplicativity_and_division_roundtrip() {
        for d in [-1i64, -3, -5, -7, -11] {
            let f = make_field(d).unwrap();
            let samples: Vec<KElem> = (-3..=3)
                .flat_map(|x| (-3..=3).map(move |y| (x, y)))
                .flat_map(|(x, y)| [k(x, y, 1), k(x, y, 2), k(x, y, 3)])
                .collect();
            for a in &samples {
                for b in samples.iter().step_by(7) {
                    let n = f.norm(&f.mul(a, b));
                    assert_eq!(n, f.norm(a) * f.norm(b));
                    if !a.is_zero() {
                        assert_eq!(f.div(&f.mul(a, b), a).unwrap(), *b);
                    }
                }
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        let cases = [k(1, 1, 1), k(-3, 2, 5), k(0, 0, 1), k(7, -4, 2)];
        for c in &cases {
            assert_eq!(KElem::parse(&c.render()).unwrap(), *c);
        }
        assert_eq!(k(1, 1, 1).render(), "1 + 1*w");
        assert_eq!(k(1, -1, 2).render(), "(1 + -1*w)/2");
    }
}
