//! Golden-file regression: frozen constants, Lenstra pairs, and formula
//! texts for the two reference configurations.

use divring::construct::{
    build_neq, build_phi_inf, build_produnits, build_sq, compute_constants, find_lenstra_pair,
};
use divring::lform;
use divring::report::{to_json, ConstantsReport, LenstraReport, SCHEMA};
use divring::sring::{sring_from_spec, SRing};

fn ring(spec: &str) -> SRing {
    sring_from_spec(spec).unwrap()
}

fn constants_json(spec: &str) -> String {
    let ring = ring(spec);
    let c = compute_constants(&ring, 2000).unwrap();
    to_json(&ConstantsReport {
        schema: SCHEMA,
        command: "constants".to_string(),
        spec: spec.to_string(),
        lenstra_p: c.lenstra_p,
        lenstra_b: c.lenstra_b,
        certifying_prime: c.certifying_prime.to_string(),
        c_sq: c.c_sq.to_string(),
        q: c.q,
        q_list: c.q_list.clone(),
        i_size: c.i_set.len(),
        j_size: c.j_set.len(),
    })
}

fn lenstra_json(spec: &str) -> String {
    let ring = ring(spec);
    let (p, b, prime) = find_lenstra_pair(&ring, 2000).unwrap();
    to_json(&LenstraReport {
        schema: SCHEMA,
        command: "lenstra".to_string(),
        spec: spec.to_string(),
        p,
        b,
        certifying_prime: prime.to_string(),
        image_index: ring.unit_image_index(&prime).unwrap(),
    })
}

#[test]
fn constants_match_golden() {
    assert_eq!(
        constants_json("d=-1;S=2r"),
        include_str!("golden/constants_d-1_S2r.json")
    );
    assert_eq!(
        constants_json("d=-5;S=2r"),
        include_str!("golden/constants_d-5_S2r.json")
    );
}

#[test]
fn lenstra_pairs_match_golden() {
    assert_eq!(
        lenstra_json("d=-1;S=2r"),
        include_str!("golden/lenstra_d-1_S2r.json")
    );
    assert_eq!(
        lenstra_json("d=-5;S=2r"),
        include_str!("golden/lenstra_d-5_S2r.json")
    );
}

#[test]
fn formula_texts_match_golden() {
    let r1 = ring("d=-1;S=2r");
    let c1 = compute_constants(&r1, 2000).unwrap();
    let r5 = ring("d=-5;S=2r");
    let c5 = compute_constants(&r5, 2000).unwrap();
    let cases: [(&str, String); 6] = [
        ("golden/neq_d-1_S2r.sexp", lform::print(&build_neq(&r1, &c1))),
        (
            "golden/produnits_d-1_S2r.sexp",
            lform::print(&build_produnits(&r1, &c1)),
        ),
        (
            "golden/phi_inf_d-1_S2r.sexp",
            lform::print(&build_phi_inf(&r1, &c1)),
        ),
        ("golden/sq_d-1_S2r.sexp", lform::print(&build_sq(&r1, &c1))),
        (
            "golden/produnits_d-5_S2r.sexp",
            lform::print(&build_produnits(&r5, &c5)),
        ),
        ("golden/sq_d-5_S2r.sexp", lform::print(&build_sq(&r5, &c5))),
    ];
    let golden: [&str; 6] = [
        include_str!("golden/neq_d-1_S2r.sexp"),
        include_str!("golden/produnits_d-1_S2r.sexp"),
        include_str!("golden/phi_inf_d-1_S2r.sexp"),
        include_str!("golden/sq_d-1_S2r.sexp"),
        include_str!("golden/produnits_d-5_S2r.sexp"),
        include_str!("golden/sq_d-5_S2r.sexp"),
    ];
    for ((name, built), want) in cases.iter().zip(golden) {
        // the CLI appends a newline when printing formulas
        assert_eq!(format!("{built}\n"), want, "{name} diverged");
    }
}

#[test]
fn parse_golden_round_trips() {
    for text in [
        include_str!("golden/neq_d-1_S2r.sexp"),
        include_str!("golden/produnits_d-1_S2r.sexp"),
        include_str!("golden/phi_inf_d-1_S2r.sexp"),
        include_str!("golden/sq_d-1_S2r.sexp"),
    ] {
        let f = lform::parse(text.trim_end()).unwrap();
        assert_eq!(lform::print(&f), text.trim_end());
    }
}
