//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Oracles are implemented locally (reduced-form counts,
//! subgroup brute force, direct inequality checks) so they do not share
//! code with the implementation they audit.

use std::collections::BTreeMap;
use std::process::Command;

use divring::construct::{
    build_produnits, compute_constants, find_lenstra_pair, lemma_checks, neq_block, sq_parts,
    witness_neq,
};
use divring::ideals;
use divring::lform::{eval_closed, search_exists, Assignment, Term};
use divring::qfield::KElem;
use divring::sring::{sring_from_spec, SRing};
use divring::verify::{sample_sq_instance, sq_hints};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

const CONFIGS: [&str; 2] = ["d=-1;S=2r", "d=-5;S=2r"];
const BUDGET: u64 = 60_000;

fn check(criterion: u32, name: &str, ok: bool) {
    println!(
        "acceptance {criterion} ({name}): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {criterion} ({name}) failed");
}

fn ring(spec: &str) -> SRing {
    sring_from_spec(spec).unwrap()
}

/// A seeded random element of O_{K,S} with bounded coordinates.
fn sample(ring: &SRing, rng: &mut ChaCha8Rng, coord: i64, den_exp: u32) -> KElem {
    loop {
        let m = rng.gen_range(-coord..=coord);
        let n = rng.gen_range(-coord..=coord);
        let mut den = Integer::from(1);
        for &p in &ring.rational_primes_below {
            den *= Integer::from(p).pow(rng.gen_range(0..=den_exp));
        }
        let x = KElem::new(Integer::from(m), Integer::from(n), den).unwrap();
        if ring.is_s_integer(&x) {
            return x;
        }
    }
}

fn sample_nonzero(ring: &SRing, rng: &mut ChaCha8Rng, coord: i64, den_exp: u32) -> KElem {
    loop {
        let x = sample(ring, rng, coord, den_exp);
        if !x.is_zero() {
            return x;
        }
    }
}

// -------------------------------------------------------------------
// 1. class-number oracle
// -------------------------------------------------------------------

/// Oracle: count reduced positive-definite binary quadratic forms
/// (a, b, c) of discriminant D < 0 (−a < b ≤ a ≤ c, b ≥ 0 when a = c).
fn reduced_forms_count(disc: i64) -> u64 {
    let mut count = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn squarefree(mut n: i64) -> bool {
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[test]
fn criterion_1_class_number_oracle() {
    let mut ok = true;
    for disc in (-200..=-3i64).rev() {
        let fundamental = if disc.rem_euclid(4) == 1 {
            squarefree(-disc)
        } else if disc % 4 == 0 {
            let m = disc / 4;
            squarefree(-m) && matches!(m.rem_euclid(4), 2 | 3)
        } else {
            false
        };
        if fundamental {
            ok &= ideals::class_number_of_disc(disc) == reduced_forms_count(disc);
        }
    }
    ok &= ideals::class_number_of_disc(-4) == 1;
    ok &= ideals::class_number_of_disc(-20) == 2;
    ok &= ideals::class_number_of_disc(-3) == 1;
    check(1, "class-number oracle, |D| <= 200", ok);
}

// -------------------------------------------------------------------
// 2. product formula
// -------------------------------------------------------------------

#[test]
fn criterion_2_product_formula() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let a = sample_nonzero(&ring, &mut rng, 200, 4);
            let mut product = Rational::from(1);
            for (prime, v) in ideals::factor_element(&ring.field, &a).unwrap() {
                product *= Rational::from(prime.q()).pow(v as i32);
            }
            ok &= product == ring.field.norm(&a);
        }
    }
    check(2, "product formula on 500 elements per configuration", ok);
}

// -------------------------------------------------------------------
// 3. Lemma 4.3 decomposition postconditions
// -------------------------------------------------------------------

#[test]
fn criterion_3_decomposition_invariants() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let c_sq = ring.c_squared();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x = sample_nonzero(&ring, &mut rng, 200, 4);
            let dec = ring.ab_decompose(&x).unwrap();
            // x = a/b exactly, b integral
            ok &= ring.field.div(&dec.a, &dec.b).unwrap() == x;
            ok &= dec.b.den == 1;
            // |a|² > C² exactly
            ok &= ring.field.norm(&dec.a) > c_sq;
            for prime in &ring.s {
                let va = ideals::valuation(&ring.field, &dec.a, prime).unwrap();
                ok &= va > -(ring.h_k as i64);
                let vx = ideals::valuation(&ring.field, &x, prime).unwrap();
                if vx >= 0 && !dec.b.is_zero() {
                    ok &= ideals::valuation(&ring.field, &dec.b, prime).unwrap() == 0;
                }
            }
        }
    }
    check(3, "Lemma 4.3 postconditions on 500 elements per configuration", ok);
}

// -------------------------------------------------------------------
// 4. Prop. 3.2 equivalence at desk scale
// -------------------------------------------------------------------

#[test]
fn criterion_4_produnits_equivalence() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let c = compute_constants(&ring, 2000).unwrap();
        let formula = build_produnits(&ring, &c);
        let unit_box = ring.s_unit_box(2);
        for x in &unit_box {
            for y in &unit_box {
                let xy = ring.field.mul(x, y);
                for z in &unit_box {
                    let mut a = Assignment::new();
                    a.insert("x".to_string(), x.clone());
                    a.insert("y".to_string(), y.clone());
                    a.insert("z".to_string(), z.clone());
                    let holds = eval_closed(&ring, &formula, &a, &Assignment::new()).unwrap();
                    ok &= holds == (*z == xy);
                }
            }
        }
    }
    check(4, "Prod_u(x,y,z) iff z = xy over the exhaustive S-unit box", ok);
}

// -------------------------------------------------------------------
// 5. psi_neq certificates and refutation
// -------------------------------------------------------------------

#[test]
fn criterion_5_neq() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let c = compute_constants(&ring, 2000).unwrap();
        let (formula, vars) = neq_block(Term::var("y"), &c, "");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let y = sample_nonzero(&ring, &mut rng, 100, 3);
            let w = witness_neq(&ring, &c, &y).unwrap();
            let mut a = Assignment::new();
            a.insert("y".to_string(), y.clone());
            ok &= eval_closed(&ring, &formula, &a, &w.witness_map(&vars)) == Ok(true);
        }
        let mut a = Assignment::new();
        a.insert("y".to_string(), KElem::from_int(0));
        ok &= search_exists(&ring, &formula, &a, 6, &BTreeMap::new()).is_none();
    }
    check(5, "psi_neq certificates at 200 y != 0; no witness at y = 0", ok);
}

// -------------------------------------------------------------------
// 6. phi_sq soundness with Lemma 4.4 / Claim B checks
// -------------------------------------------------------------------

#[test]
fn criterion_6_sq_soundness() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let c = compute_constants(&ring, 2000).unwrap();
        let parts = sq_parts(&ring, &c);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let (x, w) = sample_sq_instance(&ring, &c, &parts, &mut rng, BUDGET).unwrap();
            let y = ring.field.mul(&x, &x);
            let mut a = Assignment::new();
            a.insert("x".to_string(), x.clone());
            a.insert("y".to_string(), y);
            ok &= eval_closed(&ring, &parts.formula, &a, &w.assignment) == Ok(true);
            let report = lemma_checks(&ring, &c, &x, &w.inf.epsilon).unwrap();
            ok &= report.all_pass();
        }
    }
    check(6, "phi_sq certificates and Lemma 4.4 / Claim B on 100 x per configuration", ok);
}

// -------------------------------------------------------------------
// 7. phi_sq bounded refutation
// -------------------------------------------------------------------

#[test]
fn criterion_7_sq_refutation() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let c = compute_constants(&ring, 2000).unwrap();
        let parts = sq_parts(&ring, &c);
        let hints = sq_hints(&parts);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 100 {
            let x = sample(&ring, &mut rng, 4, 2);
            let y = sample(&ring, &mut rng, 4, 2);
            if y == ring.field.mul(&x, &x) {
                continue;
            }
            tested += 1;
            let mut a = Assignment::new();
            a.insert("x".to_string(), x.clone());
            a.insert("y".to_string(), y.clone());
            ok &= search_exists(&ring, &parts.formula, &a, 6, &hints).is_none();
        }
    }
    check(7, "no phi_sq witness at bound 6 for 100 pairs with y != x^2", ok);
}

// -------------------------------------------------------------------
// 8. Lenstra-pair search and re-certification
// -------------------------------------------------------------------

#[test]
fn criterion_8_lenstra() {
    let mut ok = true;
    for spec in CONFIGS {
        let ring = ring(spec);
        let (p, b, prime) = find_lenstra_pair(&ring, 2000).unwrap();
        // independent brute force: close the generator residues under
        // multiplication and confirm b is outside the subgroup
        let mut gens = vec![ring.reduce_mod(&prime, &ring.zeta()).unwrap()];
        for pi in &ring.pis {
            gens.push(ring.reduce_mod(&prime, pi).unwrap());
        }
        let mut subgroup = vec![1u64];
        loop {
            let before = subgroup.len();
            for &g in &gens {
                for i in 0..subgroup.len() {
                    let v = g * subgroup[i] % p;
                    if !subgroup.contains(&v) {
                        subgroup.push(v);
                    }
                }
            }
            if subgroup.len() == before {
                break;
            }
        }
        ok &= (p - 1) % subgroup.len() as u64 == 0;
        ok &= (p - 1) / subgroup.len() as u64 > 1;
        ok &= b > 0 && b < p && !subgroup.contains(&b);
        // px + b is never an S-unit
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = sample(&ring, &mut rng, 50, 3);
            let px = ring.field.mul(&KElem::from_int(p), &x);
            let v = ring.field.add(&px, &KElem::from_int(b));
            ok &= !ring.is_s_unit(&v);
        }
    }
    check(8, "Lenstra pair found, re-certified, and px + b never a unit", ok);
}

// -------------------------------------------------------------------
// 9. determinism of `verify all`
// -------------------------------------------------------------------

#[test]
fn criterion_9_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_divring"))
            .args(["verify", "all", "--seed", "7", "--samples", "10", "--json"])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    let ok = first.status.success()
        && second.status.success()
        && !first.stdout.is_empty()
        && first.stdout == second.stdout;
    check(9, "two `verify all` runs with one seed are byte-identical", ok);
}
