//! Acceptance run: one line per criterion with its verdict and wall time.

mod common;

use std::time::{Duration, Instant};

use abelian_cy::families::{build_t17, Family};
use abelian_cy::field::{make_field, Field};
use abelian_cy::heisenberg::{orbit, ProjectivePoint};
use abelian_cy::mpoly::{Monomial, PolyMatrix, SparsePoly};
use abelian_cy::singular::{node_test, NodeVerdict, SingularError};
use abelian_cy::verify::{canonical_json, verify, Status, VerificationReport, VerifyConfig};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(family: Family, prime: u64, seed: u64, ext: usize) -> Result<VerificationReport, String> {
    let config = VerifyConfig { ext, ..VerifyConfig::new(family, prime, seed) };
    verify(&config).map_err(|e| format!("{family} F_{prime} seed {seed}: {e}"))
}

/// Passes when the report has no failed row and every named row is present and passing.
fn rows_pass(report: &VerificationReport, required: &[&str]) -> Result<(), String> {
    let tag = format!("{} F_{} seed {}", report.family, report.prime, report.seed);
    if let Some(row) = report.failures().next() {
        return Err(format!("{tag}: {} expected {:?} got {:?}", row.check_name, row.expected, row.actual));
    }
    for name in required {
        match report.row(name) {
            Some(r) if r.status == Status::Pass => {}
            Some(r) => return Err(format!("{tag}: {name} is {:?}", r.status)),
            None => return Err(format!("{tag}: missing row {name}")),
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let f = make_field(101, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let n = rng.random_range(1..=4) * 2;
        let polynomial = case % 2 == 1;
        let nvars = if polynomial { 2 } else { 1 };
        let m = rand_alternating(&mut rng, f, n, nvars, polynomial);
        let pf = m.pfaffian().map_err(|e| e.to_string())?;
        let det = m.determinant().map_err(|e| e.to_string())?;
        require(&pf * &pf == det, format!("case {case}: pf^2 != det for size {n}"))?;
    }
    Ok("1000 alternating matrices of sizes 2..8".into())
}

fn criterion_2() -> Outcome {
    let required = [
        "generator_shape",
        "invariant_quintic_dim",
        "base_locus_lines",
        "orbit_size",
        "orbit_nodes",
        "scan_orbit_count",
        "scan_points_outside_two_orbits",
        "scan_singular_total",
        "translation_certificate",
    ];
    let mut errors = Vec::new();
    for prime in [11, 31] {
        for seed in [1, 2, 3] {
            match suite(Family::Hm, prime, seed, 1).and_then(|r| rows_pass(&r, &required)) {
                Ok(()) => {}
                Err(e) => errors.push(e),
            }
        }
    }
    if errors.is_empty() {
        Ok("F_11 and F_31, seeds 1..3".into())
    } else {
        Err(errors.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let required = [
        "gl_degree",
        "gl_divisible_by_vertex_square",
        "octic_degree",
        "vertex_nodes",
        "singular_total",
        "class_a",
        "class_b",
        "class_c",
        "class_criterion",
    ];
    let mut found = Vec::new();
    for prime in [13, 17] {
        let r = suite(Family::T14, prime, 1, 2)?;
        rows_pass(&r, &required)?;
        found.push(format!("F_{prime}^(k<=2): {} of 148 nodes found", r.scan.as_ref().map_or(0, |s| s.counts.singular)));
    }
    Ok(found.join(", "))
}

fn criterion_4() -> Outcome {
    let required = ["invariant_cubic_dim", "generators_invariant", "singular_total", "scan_nodes", "singular_set_h6_stable"];
    for prime in [13, 19] {
        rows_pass(&suite(Family::T16, prime, 1, 1)?, &required)?;
    }
    Ok("F_13 and F_19".into())
}

fn criterion_5() -> Outcome {
    let required =
        ["matrix_alternating", "orbit_size", "orbit_on_variety", "orbit_jacobian_rank_2", "span_stable", "translation_certificate"];
    for prime in [29, 43] {
        rows_pass(&suite(Family::T17, prime, 1, 1)?, &required)?;
    }
    Ok("F_29 and F_43".into())
}

fn criterion_6() -> Outcome {
    let required = [
        "generator_rank",
        "invariant_quadric_dim",
        "generators_span_invariant_quadrics",
        "orbit_size",
        "orbit_jacobian_rank_3",
        "translation_certificate",
    ];
    for prime in [17, 41] {
        rows_pass(&suite(Family::T18, prime, 1, 1)?, &required)?;
    }
    Ok("F_17 and F_41".into())
}

fn criterion_7() -> Outcome {
    let required = ["matrix_alternating", "generator_shape", "span_stable", "orbit_size", "translation_certificate"];
    for prime in [11, 31] {
        let r = suite(Family::T110, prime, 1, 1)?;
        let singular = r.row("orbit_singular").ok_or("missing orbit_singular row")?;
        require(singular.status == Status::ReportOnly, "orbit_singular must be report-only")?;
        rows_pass(&r, &required)?;
    }
    Ok("F_11 and F_31".into())
}

fn criterion_8() -> Outcome {
    let f = make_field(101, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let n = rng.random_range(1..=5);
        let entries = (0..n * n)
            .map(|_| {
                if case % 2 == 0 {
                    SparsePoly::constant(rand_elem(&mut rng, f), 2)
                } else {
                    rand_poly(&mut rng, f, 2, 1, 3)
                }
            })
            .collect();
        let m = PolyMatrix::new(n, n, entries).unwrap();
        require(m.determinant().unwrap() == cofactor_det(&m), format!("determinant case {case}"))?;
    }
    for case in 0..1000 {
        let a = rand_poly(&mut rng, f, 3, 3, 5);
        let b = rand_poly(&mut rng, f, 3, 3, 5);
        if b.is_zero() {
            continue;
        }
        let q = (&a * &b).exact_divide(&b).map_err(|e| format!("exact_divide case {case}: {e}"))?;
        require(q == a, format!("exact_divide case {case}"))?;
    }
    for case in 0..1000 {
        let g = rand_poly(&mut rng, f, 3, 3, 5);
        let a = rand_invertible(&mut rng, f, 3);
        let b = rand_invertible(&mut rng, f, 3);
        let lhs = g.substitute_linear(&(&a * &b)).unwrap();
        let rhs = g.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
        require(lhs == rhs, format!("composition case {case}"))?;
    }
    Ok("3 x 1000 cases".into())
}

fn poly(field: Field, n: usize, terms: &[(i64, &[u8])]) -> SparsePoly {
    SparsePoly::from_terms(field, n, terms.iter().map(|(c, e)| (Monomial::from_exponents(e), field.from_i64(*c))).collect())
}

fn criterion_9() -> Outcome {
    let f = make_field(11, 1).unwrap();
    let apex = ProjectivePoint::new([0, 0, 0, 0, 1].iter().map(|&v| f.constant(v)).collect()).unwrap();
    let conifold = poly(f, 5, &[(1, &[1, 0, 0, 1, 0]), (-1, &[0, 1, 1, 0, 0])]);
    require(node_test(&[conifold], &apex, 3) == Ok(NodeVerdict::Node), "xw - yz is not a node")?;
    let cusp = poly(f, 5, &[(1, &[2, 0, 0, 0, 1]), (1, &[0, 2, 0, 0, 1]), (1, &[0, 0, 2, 0, 1]), (1, &[0, 0, 0, 3, 0])]);
    require(node_test(&[cusp], &apex, 3) == Ok(NodeVerdict::NotNode), "x^2 + y^2 + z^2 + w^3 is a node")?;
    let quadric = poly(f, 5, &[(1, &[2, 0, 0, 0, 0]), (1, &[0, 2, 0, 0, 0]), (1, &[0, 0, 2, 0, 0]), (1, &[0, 0, 0, 2, 0]), (1, &[0, 0, 0, 0, 2])]);
    let smooth = ProjectivePoint::new([1, 1, 3, 0, 0].iter().map(|&v| f.constant(v)).collect()).unwrap();
    require(node_test(&[quadric], &smooth, 3) == Err(SingularError::NotSingular), "smooth point not rejected")?;

    let g = make_field(29, 1).unwrap();
    let inst = build_t17(&[3, 5, 11].map(|v| g.constant(v))).map_err(|e| e.to_string())?;
    let y = &inst.expected.orbit_seed[0];
    let verdicts: std::collections::BTreeSet<_> = orbit(inst.group(), y)
        .iter()
        .map(|p| format!("{:?}", node_test(&inst.generators, p, 3)))
        .collect();
    require(verdicts.len() == 1, format!("verdicts vary across the orbit: {verdicts:?}"))?;
    Ok(format!("orbit verdict {}", verdicts.into_iter().next().unwrap_or_default()))
}

fn criterion_10() -> Outcome {
    for (family, prime) in [(Family::Hm, 31), (Family::T16, 13), (Family::T14, 13)] {
        let base = VerifyConfig::new(family, prime, 7);
        let a = canonical_json(&verify(&VerifyConfig { jobs: 1, ..base.clone() }).map_err(|e| e.to_string())?);
        let b = canonical_json(&verify(&VerifyConfig { jobs: 1, ..base.clone() }).map_err(|e| e.to_string())?);
        let c = canonical_json(&verify(&VerifyConfig { jobs: 8, ..base }).map_err(|e| e.to_string())?);
        require(a == b, format!("{family}: repeated run differs"))?;
        require(a == c, format!("{family}: --jobs 8 differs from --jobs 1"))?;
    }
    Ok("hm, t16, t14 reports byte-identical".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "pfaffian squares to determinant", Duration::from_secs(10), criterion_1),
        (2, "HM quintic suite", Duration::from_secs(60), criterion_2),
        (3, "T14 octic suite", Duration::from_secs(120), criterion_3),
        (4, "T16 cubic suite", Duration::from_secs(60), criterion_4),
        (5, "T17 Pfaffian suite", Duration::from_secs(60), criterion_5),
        (6, "T18 quadric suite", Duration::from_secs(60), criterion_6),
        (7, "T110 Grassmannian suite", Duration::from_secs(60), criterion_7),
        (8, "oracle equivalence", Duration::from_secs(10), criterion_8),
        (9, "node test battery", Duration::from_secs(5), criterion_9),
        (10, "determinism", Duration::from_secs(600), criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (verdict, detail) = match (&outcome, elapsed <= limit) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; took longer than {limit:?}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {verdict} [{:.2}s] {name}: {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
