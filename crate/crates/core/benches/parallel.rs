//! Parallel vs sequential throughput on the two verification workloads
//! that dominate suite runtime: product-formula checks over sampled
//! elements and Prod_u evaluation over the exhaustive S-unit box.

use criterion::{criterion_group, criterion_main, Criterion};

use divring::construct::{build_produnits, compute_constants};
use divring::exec;
use divring::ideals;
use divring::lform::{eval_closed, Assignment};
use divring::qfield::KElem;
use divring::sring::{sring_from_spec, SRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

fn sample_elements(ring: &SRing, count: usize) -> Vec<KElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(-500i64..=500);
        let n = rng.gen_range(-500i64..=500);
        let mut den = Integer::from(1);
        for &p in &ring.rational_primes_below {
            den *= Integer::from(p).pow(rng.gen_range(0..=4u32));
        }
        let x = KElem::new(Integer::from(m), Integer::from(n), den).unwrap();
        if !x.is_zero() && ring.is_s_integer(&x) {
            out.push(x);
        }
    }
    out
}

fn product_formula_check(ring: &SRing, x: &KElem) -> bool {
    let mut product = Rational::from(1);
    for (prime, v) in ideals::factor_element(&ring.field, x).unwrap() {
        product *= Rational::from(prime.q()).pow(v as i32);
    }
    product == ring.field.norm(x)
}

fn bench_product_formula(c: &mut Criterion) {
    let ring = sring_from_spec("d=-5;S=2r").unwrap();
    let elements = sample_elements(&ring, 400);
    let mut group = c.benchmark_group("product_formula_400");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| exec::par_map(&elements, |x| product_formula_check(&ring, x)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| exec::seq_map(&elements, |x| product_formula_check(&ring, x)))
    });
    group.finish();
}

fn bench_produnits_box(c: &mut Criterion) {
    let ring = sring_from_spec("d=-1;S=2r").unwrap();
    let constants = compute_constants(&ring, 2000).unwrap();
    let formula = build_produnits(&ring, &constants);
    let unit_box = ring.s_unit_box(2);
    let eval_row = |x: &KElem| {
        let mut truths = 0u32;
        for y in &unit_box {
            for z in &unit_box {
                let mut a = Assignment::new();
                a.insert("x".to_string(), x.clone());
                a.insert("y".to_string(), y.clone());
                a.insert("z".to_string(), z.clone());
                if eval_closed(&ring, &formula, &a, &Assignment::new()).unwrap() {
                    truths += 1;
                }
            }
        }
        truths
    };
    let mut group = c.benchmark_group("produnits_box_8000");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| exec::par_map(&unit_box, eval_row)));
    group.bench_function("sequential", |b| b.iter(|| exec::seq_map(&unit_box, eval_row)));
    group.finish();
}

criterion_group!(benches, bench_product_formula, bench_produnits_box);
criterion_main!(benches);
