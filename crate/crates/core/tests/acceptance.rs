//! The twelve acceptance criteria, one test each. Every test prints a
//! single PASS/FAIL line with its runtime; run with `--nocapture` to see
//! them.

mod common;

use std::time::Duration;

use common::{random_products, small_corpus, timed, verdict};
use molkit::exactla::{int, rat};
use molkit::finlat::{
    check_closure_rules, congruence_from_quotient, congruence_lattice, decompose_finite_mol,
    find_isomorphism, is_isomorphism, is_subdirectly_irreducible, mo, product,
};
use molkit::frames::{
    canonical_frame, coordinate, embed_ring, embed_scalar, matrix_involution, ring_add,
    ring_inverse, ring_mul, ring_neg, ring_sub, star_polynomial,
};
use molkit::geometry::{check_neutral_filter_lemma, quotient_representation};
use molkit::subspaces::{random_form, random_subspace};
use molkit::terms::{
    identity_holds, orthoimplication_holds, parse, to_orthoimplication, Statement,
};
use molkit::witness::{
    build_generating_frame, doubling_embed, replay_generation_chain, verify_frame_doubling,
    WitnessConfig, CHAIN_CHECKLIST, DOUBLING_CHECKLIST,
};
use molkit::{Congruence, FormSpace, Rational, RationalMatrix, Subspace};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar_samples() -> Vec<Rational> {
    vec![
        int(0),
        int(1),
        int(-1),
        int(2),
        int(-2),
        rat(1, 2),
        rat(-1, 2),
        int(3),
        int(-3),
        int(5),
        rat(1, 3),
    ]
}

fn matrix_samples() -> Vec<RationalMatrix> {
    vec![
        RationalMatrix::zeros(2, 2),
        RationalMatrix::identity(2),
        RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]),
        RationalMatrix::from_i64(&[&[0, 1], &[0, 0]]),
        RationalMatrix::from_i64(&[&[2, 0], &[0, -1]]),
        RationalMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(-1), rat(1, 3)]]).unwrap(),
    ]
}

#[test]
fn criterion_01_frame_axioms() {
    let (ok, t) = timed(|| {
        let mut ok = true;
        for n in 3..=6 {
            for m in [1, 2] {
                let f = canonical_frame(n, m, Some(FormSpace::identity(n * m)));
                ok &= f
                    .map(|f| f.is_spanning() && f.is_orthogonal())
                    .unwrap_or(false);
            }
        }
        ok
    });
    let ok = ok && t < Duration::from_secs(5);
    verdict(1, "canonical frames n=3..6, blocks 1 and 2", ok, t, "");
    assert!(ok);
}

#[test]
fn criterion_02_ring_oracle() {
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        let f = canonical_frame(3, 1, None).unwrap();
        let s = scalar_samples();
        let e = |c: &Rational| embed_scalar(&f, c, 0, 1).unwrap();
        for x in &s {
            let ex = e(x);
            if ring_neg(&f, &ex).unwrap() != e(&-x) {
                failures.push(format!("⊖{x}"));
            }
            let inv = ring_inverse(&f, &ex).unwrap();
            let expected = (!x.is_zero()).then(|| e(&x.recip()));
            if inv != expected {
                failures.push(format!("{x}⁻¹"));
            }
            for y in &s {
                let ey = e(y);
                if ring_add(&f, &ex, &ey).unwrap() != e(&(x + y)) {
                    failures.push(format!("{x} ⊕ {y}"));
                }
                if ring_sub(&f, &ex, &ey).unwrap() != e(&(x - y)) {
                    failures.push(format!("{x} ⊖ {y}"));
                }
                if ring_mul(&f, &ex, &ey).unwrap() != e(&(x * y)) {
                    failures.push(format!("{x} ⊗ {y}"));
                }
            }
        }

        let g = canonical_frame(3, 2, None).unwrap();
        let ms = matrix_samples();
        let e = |c: &RationalMatrix| embed_ring(&g, c, 0, 1).unwrap();
        for (i, x) in ms.iter().enumerate() {
            let ex = e(x);
            if coordinate(&g, &ring_neg(&g, &ex).unwrap()).unwrap() != -x {
                failures.push(format!("⊖M{i}"));
            }
            let inv = ring_inverse(&g, &ex)
                .unwrap()
                .map(|r| coordinate(&g, &r).unwrap());
            if inv != x.inverse().ok() {
                failures.push(format!("M{i}⁻¹"));
            }
            for (j, y) in ms.iter().enumerate() {
                let ey = e(y);
                if coordinate(&g, &ring_add(&g, &ex, &ey).unwrap()).unwrap() != x + y {
                    failures.push(format!("M{i} ⊕ M{j}"));
                }
                if coordinate(&g, &ring_mul(&g, &ex, &ey).unwrap()).unwrap() != x * y {
                    failures.push(format!("M{i} ⊗ M{j}"));
                }
            }
        }
        failures
    });
    let ok = failures.is_empty() && t < Duration::from_secs(30);
    verdict(
        2,
        "coordinate ring ⊕ ⊗ ⊖ inverse vs rational arithmetic",
        ok,
        t,
        &failures.join(", "),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_03_involution_polynomial() {
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        for diag in [[int(1), int(2), int(3)], [int(1), rat(1, 2), int(5)]] {
            let f = canonical_frame(3, 1, Some(FormSpace::diagonal(&diag).unwrap())).unwrap();
            let alpha: Vec<RationalMatrix> =
                diag.iter().map(|d| RationalMatrix::scalar(1, d)).collect();
            for r in scalar_samples() {
                let x = embed_scalar(&f, &r, 0, 1).unwrap();
                let star = star_polynomial(&f, &x).unwrap();
                let mut at11 = RationalMatrix::zeros(3, 3);
                at11.set(0, 0, r.clone());
                let oracle = matrix_involution(&alpha, &at11)
                    .unwrap()
                    .submatrix(0, 0, 1, 1);
                if coordinate(&f, &star.value).unwrap() != oracle {
                    failures.push(format!("{r}* under {diag:?}"));
                }
                let mut at21 = RationalMatrix::zeros(3, 3);
                at21.set(1, 0, r.clone());
                let oracle12 = -&matrix_involution(&alpha, &at21)
                    .unwrap()
                    .submatrix(0, 1, 1, 1);
                if coordinate(&f, &star.orthogonal_part).unwrap() != oracle12 {
                    failures.push(format!("r'(a_1+a_2) for {r} under {diag:?}"));
                }
                if star_polynomial(&f, &star.value).unwrap().value != x {
                    failures.push(format!("{r}** under {diag:?}"));
                }
            }
        }

        // Block size 2 with non-scalar α_1 so that the involution is not
        // plain transposition.
        let alpha = vec![
            RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]),
            RationalMatrix::from_i64(&[&[1, 0], &[0, 3]]),
            RationalMatrix::from_i64(&[&[5, 2], &[2, 1]]),
        ];
        let form = FormSpace::new(RationalMatrix::block_diag(&alpha)).unwrap();
        let f = canonical_frame(3, 2, Some(form)).unwrap();
        for (i, r) in matrix_samples().iter().enumerate() {
            let x = embed_ring(&f, r, 0, 1).unwrap();
            let star = star_polynomial(&f, &x).unwrap();
            let mut at11 = RationalMatrix::zeros(6, 6);
            at11.set_block(0, 0, r);
            let oracle = matrix_involution(&alpha, &at11)
                .unwrap()
                .submatrix(0, 0, 2, 2);
            if coordinate(&f, &star.value).unwrap() != oracle {
                failures.push(format!("M{i}* with block form"));
            }
            if star_polynomial(&f, &star.value).unwrap().value != x {
                failures.push(format!("M{i}** with block form"));
            }
        }
        failures
    });
    let ok = failures.is_empty();
    verdict(
        3,
        "star polynomial vs block involution, twice = identity",
        ok,
        t,
        &failures.join(", "),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_04_frame_doubling_replay() {
    let (report, t) = timed(|| {
        verify_frame_doubling(
            &RationalMatrix::identity(1),
            &RationalMatrix::identity(1),
            6,
        )
        .unwrap()
    });
    let uncovered = report.uncovered(DOUBLING_CHECKLIST);
    let ok = report.passed() && uncovered.is_empty();
    let detail = format!(
        "{} steps, checklist {}/{}",
        report.steps.len(),
        DOUBLING_CHECKLIST.len() - uncovered.len(),
        DOUBLING_CHECKLIST.len()
    );
    verdict(4, "6-frame replay at a = b = 1 in L(Q^6)", ok, t, &detail);
    for s in report.steps.iter().filter(|s| !s.passed) {
        println!("  {s}\n    lhs: {}\n    rhs: {}", s.lhs, s.rhs);
    }
    assert!(ok);
}

#[test]
fn criterion_05_generating_frame() {
    let mut ok = true;
    let mut detail = Vec::new();
    let (_, total) = timed(|| {
        for k in 1..=3 {
            let (inst, t) = timed(|| build_generating_frame(&WitnessConfig::level(k).unwrap()));
            match inst {
                Ok(inst) => {
                    let ids: Vec<&str> = inst.report.steps.iter().map(|s| s.id).collect();
                    let both_pd = ids.contains(&"pd_minors") && ids.contains(&"pd_reduction");
                    ok &= inst.report.passed()
                        && both_pd
                        && inst.frame.is_orthogonal()
                        && inst.frame.is_spanning();
                    detail.push(format!(
                        "k={k} Q^{} {:?} {:.2?}",
                        3 * inst.config.n(),
                        inst.reading,
                        t
                    ));
                    if k == 3 {
                        ok &= t < Duration::from_secs(60);
                    }
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("k={k}: {e}"));
                }
            }
        }
    });
    verdict(
        5,
        "generating orthogonal 3-frame at k = 1, 2, 3",
        ok,
        total,
        &detail.join("; "),
    );
    assert!(ok);
}

#[test]
fn criterion_06_generation_chain() {
    let mut ok = true;
    let mut detail = Vec::new();
    let (_, t) = timed(|| {
        for k in 1..=2 {
            match replay_generation_chain(k, 1000) {
                Ok(r) => {
                    let count = |id: &str| r.steps.steps.iter().filter(|s| s.id == id).count();
                    let units = count("unit_e2") + count("unit_e4") + count("units_rest");
                    let pairs = count("frame_pairs") + count("pair_15") + count("mixed_pairs");
                    ok &= r.passed()
                        && r.steps.uncovered(CHAIN_CHECKLIST).is_empty()
                        && units == 6
                        && pairs == 15;
                    ok &= count("phi_sample") >= 3 && !r.trace.is_empty();
                    detail.push(format!(
                        "k={k} Q^{}: {} units, {} pairs, trace {}",
                        r.ambient,
                        units,
                        pairs,
                        r.trace.len()
                    ));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("k={k}: {e}"));
                }
            }
        }
    });
    verdict(
        6,
        "generation chain replay at k = 1, 2",
        ok,
        t,
        &detail.join("; "),
    );
    assert!(ok);
}

#[test]
fn criterion_07_decomposition() {
    let corpus = random_products(7, 24, 3);
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        for (name, l) in &corpus {
            match decompose_finite_mol(l) {
                Ok(d)
                    if is_isomorphism(l, &d.product, &d.iso)
                        && find_isomorphism(l, &d.product).is_some() => {}
                Ok(_) => failures.push(format!("{name}: product not isomorphic")),
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
        failures
    });
    let ok = failures.is_empty() && corpus.len() >= 20;
    verdict(
        7,
        "decomposition of random products",
        ok,
        t,
        &format!("{} lattices {}", corpus.len(), failures.join(", ")),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_08_congruences() {
    let corpus = small_corpus();
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        for (name, l) in &corpus {
            for a in 0..l.len() {
                for b in l.down_set(a).ones() {
                    let q = congruence_from_quotient(l, a, b).unwrap();
                    if let Err(e) = check_closure_rules(l, &q) {
                        failures.push(format!("{name} {}/{}: {e}", l.name(a), l.name(b)));
                    }
                }
            }
            let si = is_subdirectly_irreducible(l).unwrap();
            if !si.agree() {
                failures.push(format!("{name}: SI criteria disagree"));
            }
        }
        failures
    });
    let ok = failures.is_empty();
    verdict(
        8,
        "quotient closure rules and SI agreement",
        ok,
        t,
        &format!("{} lattices {}", corpus.len(), failures.join(", ")),
    );
    assert!(ok, "{failures:?}");
}

const IDENTITIES: &[&str] = &[
    "(= (+ x (* (' x) (+ x y))) (+ x y))",
    "(= (' (+ x y)) (* (' x) (' y)))",
    "(= (+ (' x) (' y)) (' (* x y)))",
    "(= (* x (+ x y)) x)",
    "(= x (+ x (* x y)))",
    "(= (+ (* x y) (* x z)) (* x (+ y z)))",
    "(= (+ x (* y z)) (* (+ x y) (+ x z)))",
    "(= (+ x (* y (+ x z))) (* (+ x y) (+ x z)))",
    "(= (* x x) x)",
    "(= (' (' x)) x)",
    "(= (+ x (' x)) 1)",
    "(= 0 (* x (' x)))",
    "(= (* x y) (* y x))",
];

#[test]
fn criterion_09_identity_translation() {
    let corpus = small_corpus();
    let (out, t) = timed(|| {
        let mut failures = Vec::new();
        let mut failing_somewhere = 0;
        for text in IDENTITIES {
            let Statement::Identity(g, h) = parse(text).unwrap() else {
                panic!("{text} is not an identity")
            };
            let oi = to_orthoimplication(&g, &h);
            let mut fails = false;
            for (name, l) in &corpus {
                let a = identity_holds(&g, &h, l).unwrap().holds;
                let b = orthoimplication_holds(&oi, l).unwrap().holds;
                fails |= !a;
                if a != b {
                    failures.push(format!("{text} on {name}: identity {a}, translation {b}"));
                }
            }
            failing_somewhere += usize::from(fails);
        }
        (failures, failing_somewhere)
    });
    let (failures, failing) = out;
    let ok = failures.is_empty() && IDENTITIES.len() >= 10 && failing > 0;
    verdict(
        9,
        "identity ⇔ translated orthoimplication",
        ok,
        t,
        &format!(
            "{} identities, {failing} failing somewhere",
            IDENTITIES.len()
        ),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_10_geometric_representation() {
    let (out, t) = timed(|| {
        let mut failures = Vec::new();
        let m = product(&mo(2), &molkit::finlat::boolean(1));
        let all: Vec<usize> = (0..m.len()).collect();
        let kernel = Congruence::from_key(m.len(), |x| x / 2);
        match quotient_representation(&m, &all, &kernel) {
            Ok(q) => {
                if find_isomorphism(&q.map.source, &mo(2)).is_none() {
                    failures.push("quotient is not MO_2".to_string());
                }
                if let Err(e) = q.map.verify_embedding().and(q.map.verify_orthogonality()) {
                    failures.push(e.to_string());
                }
            }
            Err(e) => failures.push(e.to_string()),
        }

        let mut triples = 0;
        for (name, l) in small_corpus() {
            let all: Vec<usize> = (0..l.len()).collect();
            for theta in congruence_lattice(&l) {
                let filter: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|&x| theta.related(x, l.top()))
                    .collect();
                match check_neutral_filter_lemma(&l, &all, &filter) {
                    Ok(n) => triples += n,
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
        }
        (failures, triples)
    });
    let (failures, triples) = out;
    let ok = failures.is_empty() && triples > 0;
    verdict(
        10,
        "quotient representation and neutral filter lemma",
        ok,
        t,
        &format!("{triples} triples {}", failures.join(", ")),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_11_subspace_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (out, t) = timed(|| {
        let mut failures = Vec::new();
        let mut count = 0;
        for n in 1..=8usize {
            let diag: Vec<Rational> = (1..=n as i64).map(int).collect();
            let forms = [
                FormSpace::identity(n),
                FormSpace::diagonal(&diag).unwrap(),
                random_form(&mut rng, n),
            ];
            for (fi, form) in forms.iter().enumerate() {
                for _ in 0..42 {
                    let u = random_subspace(&mut rng, n);
                    let v = random_subspace(&mut rng, n);
                    count += 1;
                    let up = form.ortho_complement(&u).unwrap();
                    let vp = form.ortho_complement(&v).unwrap();
                    let uv = u.sum(&v).unwrap();
                    let checks = [
                        (
                            "demorgan",
                            form.ortho_complement(&uv).unwrap() == up.intersect(&vp).unwrap(),
                        ),
                        ("involution", form.ortho_complement(&up).unwrap() == u),
                        ("anisotropy", u.intersect(&up).unwrap().is_zero()),
                        ("dimension", u.dim() + up.dim() == n),
                        (
                            "orthomodular",
                            u.sum(&up.intersect(&uv).unwrap()).unwrap() == uv,
                        ),
                    ];
                    for (name, ok) in checks {
                        if !ok {
                            failures.push(format!("{name} n={n} form {fi}"));
                        }
                    }
                }
            }
        }
        (failures, count)
    });
    let (failures, count) = out;
    let ok = failures.is_empty() && count >= 1000 && t < Duration::from_secs(60);
    verdict(
        11,
        "subspace lattice laws under three forms per n ≤ 8",
        ok,
        t,
        &format!("{count} samples"),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_12_doubling_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (failures, t) = timed(|| {
        let mut failures = Vec::new();
        let (f4, f8) = (FormSpace::identity(4), FormSpace::identity(8));
        let samples: Vec<Subspace> = (0..200).map(|_| random_subspace(&mut rng, 4)).collect();
        for (i, u) in samples.iter().enumerate() {
            let v = &samples[(i + 1) % samples.len()];
            let (du, dv) = (doubling_embed(u), doubling_embed(v));
            let checks = [
                (
                    "join",
                    doubling_embed(&u.sum(v).unwrap()) == du.sum(&dv).unwrap(),
                ),
                (
                    "meet",
                    doubling_embed(&u.intersect(v).unwrap()) == du.intersect(&dv).unwrap(),
                ),
                (
                    "ortho",
                    doubling_embed(&f4.ortho_complement(u).unwrap())
                        == f8.ortho_complement(&du).unwrap(),
                ),
                ("dim", du.dim() == 2 * u.dim()),
            ];
            for (name, ok) in checks {
                if !ok {
                    failures.push(format!("{name} at sample {i}"));
                }
            }
        }
        failures
    });
    let ok = failures.is_empty();
    verdict(
        12,
        "doubling embedding Q^4 → Q^8 on 200 subspaces",
        ok,
        t,
        &failures.join(", "),
    );
    assert!(ok, "{failures:?}");
}
