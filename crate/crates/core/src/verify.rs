//! Seeded property suites behind the `verify` CLI subcommand.
//!
//! Each suite replays the checkable claims of its subject — certificate
//! soundness, decomposition invariants, bounded refutations — on inputs
//! drawn from a ChaCha stream, so a fixed seed reproduces the run
//! byte-for-byte. Independent per-sample checks fan out through
//! [`exec::par_map`]; results are assembled in input order, keeping the
//! JSON report identical with and without the `parallel` feature.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::construct::{
    build_produnits, compute_constants, lemma_checks, neq_block, sq_parts, witness_neq,
    witness_sq, Constants, SqParts, SqWitness,
};
use crate::exec;
use crate::ideals;
use crate::lform::{eval_closed, search_exists, Assignment, Hint, Term};
use crate::qfield::KElem;
use crate::report::{CheckResult, VerifyReport, SCHEMA};
use crate::sring::SRing;
use crate::{Error, Result};

/// Tuning knobs for one verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Sample count per randomized check.
    pub samples: u32,
    /// RNG seed; fixed seed → byte-identical report.
    pub seed: u64,
    /// Height bound for bounded refutation searches.
    pub bound: i64,
    /// Prime scan bound for the Lenstra pair.
    pub scan_bound: u64,
    /// Upper bound on the ε-exponent accepted from the certificate
    /// sampler (the witness grows linearly in it).
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 25,
            seed: 0,
            bound: 6,
            scan_bound: 2000,
            budget: 60_000,
        }
    }
}

/// One verification suite, or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Constants,
    Lenstra,
    Produnits,
    Neq,
    Lemmas,
    Sq,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Lenstra => "lenstra",
            Suite::Produnits => "produnits",
            Suite::Neq => "neq",
            Suite::Lemmas => "lemmas",
            Suite::Sq => "sq",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constants" => Ok(Suite::Constants),
            "lenstra" => Ok(Suite::Lenstra),
            "produnits" => Ok(Suite::Produnits),
            "neq" => Ok(Suite::Neq),
            "lemmas" => Ok(Suite::Lemmas),
            "sq" => Ok(Suite::Sq),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown suite {other:?}"),
            }),
        }
    }
}

/// Runs one suite (or all) and assembles the JSON-ready report.
pub fn run_verify(ring: &SRing, spec: &str, suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let c = compute_constants(ring, opts.scan_bound)?;
    let mut checks = Vec::new();
    let run = |s: Suite| suite == Suite::All || suite == s;
    if run(Suite::Constants) {
        checks.extend(constants_checks(ring, &c)?);
    }
    if run(Suite::Lenstra) {
        checks.extend(lenstra_checks(ring, &c, opts)?);
    }
    if run(Suite::Produnits) {
        checks.extend(produnits_checks(ring, &c)?);
    }
    if run(Suite::Neq) {
        checks.extend(neq_checks(ring, &c, opts)?);
    }
    if run(Suite::Lemmas) {
        checks.extend(lemmas_checks(ring, &c, opts)?);
    }
    if run(Suite::Sq) {
        checks.extend(sq_checks(ring, &c, opts)?);
    }
    let pass = checks.iter().all(CheckResult::ok);
    Ok(VerifyReport {
        schema: SCHEMA,
        command: "verify".to_string(),
        spec: spec.to_string(),
        suite: suite.name().to_string(),
        seed: opts.seed,
        samples: opts.samples,
        bound: opts.bound,
        scan_bound: opts.scan_bound,
        checks,
        pass,
    })
}

// ---------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------

fn stream(opts: &VerifyOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

/// A random element (m + nω)/∏p_i^{e_i}, guaranteed to be in O_{K,S}.
fn sample_element(ring: &SRing, rng: &mut ChaCha8Rng, coord: i64, den_exp: u32) -> KElem {
    loop {
        let m = rng.gen_range(-coord..=coord);
        let n = rng.gen_range(-coord..=coord);
        let mut den = Integer::from(1);
        for &p in &ring.rational_primes_below {
            den *= Integer::from(p).pow(rng.gen_range(0..=den_exp));
        }
        let x = KElem::new(Integer::from(m), Integer::from(n), den).expect("den > 0");
        if ring.is_s_integer(&x) {
            return x;
        }
    }
}

fn sample_nonzero_element(ring: &SRing, rng: &mut ChaCha8Rng, coord: i64, den_exp: u32) -> KElem {
    loop {
        let x = sample_element(ring, rng, coord, den_exp);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Draws x from the certificate-friendly family ζ^j·∏π_i^{a_i}·2^n and
/// builds its φ_sq certificate, redrawing on refused inputs (the cleared
/// ±p^{−α} / ζ·p^{−α} forms) and on exponents beyond the budget.
pub fn sample_sq_instance(
    ring: &SRing,
    c: &Constants,
    parts: &SqParts,
    rng: &mut ChaCha8Rng,
    budget: u64,
) -> Result<(KElem, SqWitness)> {
    let f = &ring.field;
    loop {
        let j = rng.gen_range(0..ring.field.w);
        let mut x = f.pow(&ring.zeta(), j as u64);
        for pi in &ring.pis {
            let a: i64 = rng.gen_range(-1..=1);
            let powed = f.pow(pi, a.unsigned_abs());
            x = if a >= 0 {
                f.mul(&x, &powed)
            } else {
                f.div(&x, &powed).expect("π_i is nonzero")
            };
        }
        let n: i64 = rng.gen_range(-10..=10);
        let two = KElem::from_int(2);
        let powed = f.pow(&two, n.unsigned_abs());
        x = if n >= 0 {
            f.mul(&x, &powed)
        } else {
            f.div(&x, &powed).expect("2 is nonzero")
        };
        let y = f.mul(&x, &x);
        match witness_sq(ring, c, parts, &x, &y, Some(budget)) {
            Ok(w) => return Ok((x, w)),
            Err(Error::Precondition(_)) | Err(Error::WitnessTooLarge(..)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Unit hints for the bound variables of φ_sq (ε, the power chain, and
/// φ_∞'s m); everything else keeps the general shape.
pub fn sq_hints(parts: &SqParts) -> BTreeMap<String, Hint> {
    let mut hints = BTreeMap::new();
    hints.insert(parts.eps.clone(), Hint::Unit);
    for name in &parts.chain {
        hints.insert(name.clone(), Hint::Unit);
    }
    if let Some(m) = &parts.phi_inf.m {
        hints.insert(m.clone(), Hint::Unit);
    }
    hints
}

// ---------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------

/// Re-verifies every [`Constants`] invariant independently of how
/// [`compute_constants`] found the values.
fn constants_checks(ring: &SRing, c: &Constants) -> Result<Vec<CheckResult>> {
    let k = ring.rational_primes_below.len() as u32;

    let mut q_bound = CheckResult::new("q > 4/C²");
    let q_ok = Rational::from(c.q) * c.c_sq.clone() > 4u32;
    q_bound.record(q_ok, || format!("q = {}, C² = {}", c.q, c.c_sq));

    let mut admissible = CheckResult::new("q, q_i admissible and distinct");
    let mut qs = c.q_list.clone();
    qs.push(c.q);
    let distinct = {
        let mut sorted = c.q_list.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == c.q_list.len()
    };
    let ok = distinct
        && c.q_list.len() == ring.u_k as usize + 1
        && qs.iter().all(|&q| crate::util::is_prime_u64(q) && !ring.is_below_s(q));
    admissible.record(ok, || format!("q = {}, q_list = {:?}", c.q, c.q_list));

    let mut index_sets = CheckResult::new("index sets I = {0..4}^k, J = {0..6}^k");
    let ok = c.i_set.len() == 5usize.pow(k)
        && c.j_set.len() == 7usize.pow(k)
        && c.i_set.iter().all(|a| a.iter().all(|&v| v <= 4))
        && c.j_set.iter().all(|a| a.iter().all(|&v| v <= 6))
        && c.exponent_17 == 17
        && c.exponent_34 == 34;
    index_sets.record(ok, || format!("|I| = {}, |J| = {}", c.i_set.len(), c.j_set.len()));

    let mut lenstra = CheckResult::new("Lemma 2.3 pair certificate");
    lenstra.record(certify_lenstra(ring, c)?, || {
        format!("(p, b) = ({}, {}), P = {}", c.lenstra_p, c.lenstra_b, c.certifying_prime)
    });

    Ok(vec![q_bound, admissible, index_sets, lenstra])
}

/// Brute-force re-certification of the Lenstra pair: enumerate the
/// subgroup of F_p^× generated by the S-unit generator residues by
/// repeated multiplication and confirm b lies outside it.
fn certify_lenstra(ring: &SRing, c: &Constants) -> Result<bool> {
    let prime = &c.certifying_prime;
    let p = prime.p;
    if prime.f != 1 || prime.e != 1 || ring.s.contains(prime) {
        return Ok(false);
    }
    let mut gens = vec![ring.reduce_mod(prime, &ring.zeta())?];
    for pi in &ring.pis {
        gens.push(ring.reduce_mod(prime, pi)?);
    }
    let mut subgroup = vec![1u64];
    loop {
        let mut grew = false;
        let snapshot = subgroup.clone();
        for &g in &gens {
            for &h in &snapshot {
                let v = g * h % p;
                if !subgroup.contains(&v) {
                    subgroup.push(v);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let index = (p - 1) / subgroup.len() as u64;
    Ok(index > 1 && c.lenstra_b > 0 && c.lenstra_b < p && !subgroup.contains(&c.lenstra_b))
}

fn lenstra_checks(ring: &SRing, c: &Constants, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut certified = CheckResult::new("Lemma 2.3 subgroup brute force");
    certified.record(certify_lenstra(ring, c)?, || {
        format!("(p, b) = ({}, {})", c.lenstra_p, c.lenstra_b)
    });

    let mut rng = stream(opts, 0x4c45);
    let samples: Vec<KElem> = (0..opts.samples)
        .map(|_| sample_element(ring, &mut rng, 50, 3))
        .collect();
    let results = exec::par_map(&samples, |x| {
        let px = ring.field.mul(&KElem::from_int(c.lenstra_p), x);
        let v = ring.field.add(&px, &KElem::from_int(c.lenstra_b));
        (ring.is_s_unit(&v), x.render())
    });
    let mut never_unit = CheckResult::new("Lemma 2.3: px + b never an S-unit");
    for (is_unit, rendered) in results {
        never_unit.record(!is_unit, || format!("x = {rendered}"));
    }
    Ok(vec![certified, never_unit])
}

fn produnits_checks(ring: &SRing, c: &Constants) -> Result<Vec<CheckResult>> {
    let formula = build_produnits(ring, c);
    let k = ring.rational_primes_below.len() as u32;
    let expected = 5usize.pow(k) * (ring.u_k as usize + 1) * 2 + 3;

    let mut atoms = CheckResult::new("Prod_u atom count 5^k(u_K+1)·2 + 3");
    atoms.record(formula.atom_count() == expected, || {
        format!("got {}, expected {expected}", formula.atom_count())
    });

    // Prop. 3.2 at desk scale: over the exhaustive S-unit box, the
    // quantifier-free formula holds iff z = xy.
    let box2 = ring.s_unit_box(2);
    let results = exec::par_map(&box2, |x| {
        let mut mismatches = Vec::new();
        for y in &box2 {
            let xy = ring.field.mul(x, y);
            for z in &box2 {
                let mut a = Assignment::new();
                a.insert("x".to_string(), x.clone());
                a.insert("y".to_string(), y.clone());
                a.insert("z".to_string(), z.clone());
                let holds = eval_closed(ring, &formula, &a, &Assignment::new())
                    .expect("box elements are S-integers");
                if holds != (*z == xy) {
                    mismatches.push(format!("x = {}, y = {}, z = {}", x.render(), y.render(), z.render()));
                }
            }
        }
        (box2.len() * box2.len() - mismatches.len(), mismatches)
    });
    let mut equiv = CheckResult::new("Prop. 3.2: Prod_u(x,y,z) ⇔ z = xy");
    for (ok_count, mismatches) in results {
        for _ in 0..ok_count {
            equiv.passed += 1;
        }
        for m in mismatches {
            equiv.record(false, || m.clone());
        }
    }
    Ok(vec![atoms, equiv])
}

fn neq_checks(ring: &SRing, c: &Constants, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let (formula, vars) = neq_block(Term::var("y"), c, "");
    let mut rng = stream(opts, 0x4e51);
    let samples: Vec<KElem> = (0..opts.samples)
        .map(|_| sample_nonzero_element(ring, &mut rng, 50, 3))
        .collect();
    let results = exec::par_map(&samples, |y| {
        let outcome = witness_neq(ring, c, y).and_then(|w| {
            let mut a = Assignment::new();
            a.insert("y".to_string(), y.clone());
            eval_closed(ring, &formula, &a, &w.witness_map(&vars))
        });
        (outcome, y.render())
    });
    let mut sound = CheckResult::new("Lemma 2.5: ψ≠ certificate at y ≠ 0");
    for (outcome, rendered) in results {
        sound.record(outcome == Ok(true), || format!("y = {rendered}: {outcome:?}"));
    }

    let mut refuted = CheckResult::new("Lemma 2.5: no ψ≠ witness at y = 0");
    let mut a = Assignment::new();
    a.insert("y".to_string(), KElem::from_int(0));
    let found = search_exists(ring, &formula, &a, opts.bound, &BTreeMap::new());
    refuted.record(found.is_none(), || format!("witness {found:?}"));
    Ok(vec![sound, refuted])
}

fn lemmas_checks(ring: &SRing, _c: &Constants, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut rng = stream(opts, 0x4c4d);
    let samples: Vec<KElem> = (0..opts.samples)
        .map(|_| sample_nonzero_element(ring, &mut rng, 200, 4))
        .collect();

    // product formula: norm(a) = ∏ q_𝔭^{v_𝔭(a)}, recomputed from the
    // element's full factorization.
    let results = exec::par_map(&samples, |x| {
        let mut product = Rational::from(1);
        for (prime, v) in ideals::factor_element(&ring.field, x).expect("x ≠ 0") {
            let q = Rational::from(prime.q());
            product *= q.pow(v as i32);
        }
        (product == ring.field.norm(x), x.render())
    });
    let mut product_formula = CheckResult::new("product formula |a|² = ∏ q_𝔭^{v_𝔭(a)}");
    for (ok, rendered) in results {
        product_formula.record(ok, || format!("a = {rendered}"));
    }

    // Lemma 4.3 decomposition postconditions, checked exactly.
    let results = exec::par_map(&samples, |x| {
        let outcome = ring
            .ab_decompose(x)
            .and_then(|dec| ring.check_ab_decomp(x, &dec));
        (outcome, x.render())
    });
    let mut decomposition = CheckResult::new("Lemma 4.3: x = a/b decomposition invariants");
    for (outcome, rendered) in results {
        decomposition.record(outcome == Ok(None), || format!("x = {rendered}: {outcome:?}"));
    }
    Ok(vec![product_formula, decomposition])
}

fn sq_checks(ring: &SRing, c: &Constants, opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let parts = sq_parts(ring, c);
    let mut rng = stream(opts, 0x5351);
    let mut instances = Vec::new();
    for _ in 0..opts.samples {
        instances.push(sample_sq_instance(ring, c, &parts, &mut rng, opts.budget)?);
    }
    let results = exec::par_map(&instances, |(x, w)| {
        let y = ring.field.mul(x, x);
        let mut a = Assignment::new();
        a.insert("x".to_string(), x.clone());
        a.insert("y".to_string(), y);
        let holds = eval_closed(ring, &parts.formula, &a, &w.assignment);
        let report = lemma_checks(ring, c, x, &w.inf.epsilon);
        (holds, report, x.render())
    });
    let mut sound = CheckResult::new("Theorem 5.1: φ_sq certificate at (x, x²)");
    let mut lemma44 = CheckResult::new("Lemma 4.4: max{4/C², |a|², |b|²} ≤ max{|u|², |v|²}²");
    let mut claim_a = CheckResult::new("Claim A: admissible α ∈ J");
    let mut claim_b = CheckResult::new("Claim B: v_𝔭(av¹⁷ ± u¹⁷b) ≤ h_K + v_𝔭(a) + v_𝔭(b)");
    let mut e_pm = CheckResult::new("e± bound: v_𝔭(e±) ≥ −3h_K − v_𝔭(a) − v_𝔭(b)");
    for (holds, report, rendered) in results {
        sound.record(holds == Ok(true), || format!("x = {rendered}: {holds:?}"));
        match report {
            Ok(r) => {
                let fail = |o: Option<bool>| o == Some(false);
                claim_a.record(r.hypothesis_ok && !r.alpha.is_empty(), || {
                    format!("x = {rendered}: {:?}", r.notes)
                });
                lemma44.record(
                    r.lemma44_x == Some(true) && r.lemma44_y == Some(true),
                    || format!("x = {rendered}: X {:?}, Y {:?}", r.lemma44_x, r.lemma44_y),
                );
                claim_b.record(r.claim_b == Some(true), || format!("x = {rendered}"));
                e_pm.record(!fail(r.e_pm_bound), || format!("x = {rendered}"));
            }
            Err(e) => {
                let msg = format!("x = {rendered}: {e}");
                claim_a.record(false, || msg.clone());
                lemma44.record(false, || msg.clone());
                claim_b.record(false, || msg.clone());
                e_pm.record(false, || msg.clone());
            }
        }
    }

    // bounded refutation at y ≠ x²
    let hints = sq_hints(&parts);
    let mut pairs = Vec::new();
    while pairs.len() < opts.samples as usize {
        let x = sample_element(ring, &mut rng, 4, 2);
        let y = sample_element(ring, &mut rng, 4, 2);
        if y != ring.field.mul(&x, &x) {
            pairs.push((x, y));
        }
    }
    let results = exec::par_map(&pairs, |(x, y)| {
        let mut a = Assignment::new();
        a.insert("x".to_string(), x.clone());
        a.insert("y".to_string(), y.clone());
        let found = search_exists(ring, &parts.formula, &a, opts.bound, &hints);
        (found.is_none(), x.render(), y.render())
    });
    let mut refuted = CheckResult::new("φ_sq bounded refutation at y ≠ x²");
    for (ok, xr, yr) in results {
        refuted.record(ok, || format!("x = {xr}, y = {yr}"));
    }

    Ok(vec![sound, lemma44, claim_a, claim_b, e_pm, refuted])
}
