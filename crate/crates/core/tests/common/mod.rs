#![allow(dead_code)]

use std::time::{Duration, Instant};

use molkit::finlat::{boolean, mo, product, product_all};
use molkit::FiniteOrtholattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small MOLs: Boolean algebras, MO_n and a few products.
pub fn small_corpus() -> Vec<(String, FiniteOrtholattice)> {
    let mut out: Vec<(String, FiniteOrtholattice)> = Vec::new();
    for k in 1..=3 {
        out.push((format!("bool:{k}"), boolean(k)));
    }
    for n in 1..=4 {
        out.push((format!("mo:{n}"), mo(n)));
    }
    out.push(("mo:2 x bool:1".into(), product(&mo(2), &boolean(1))));
    out.push(("mo:3 x bool:1".into(), product(&mo(3), &boolean(1))));
    out.push(("mo:2 x mo:3".into(), product(&mo(2), &mo(3))));
    out.push(("bool:1 x mo:4".into(), product(&boolean(1), &mo(4))));
    out
}

/// Random products of `Boolean(≤3)` and `MO_{≤4}` with 1 to `max_factors`
/// factors, returned with the factor names.
pub fn random_products(
    seed: u64,
    count: usize,
    max_factors: usize,
) -> Vec<(String, FiniteOrtholattice)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=max_factors);
            let mut names = Vec::new();
            let mut factors = Vec::new();
            for _ in 0..k {
                if rng.gen_bool(0.5) {
                    let n = rng.gen_range(1..=3);
                    names.push(format!("bool:{n}"));
                    factors.push(boolean(n));
                } else {
                    let n = rng.gen_range(1..=4);
                    names.push(format!("mo:{n}"));
                    factors.push(mo(n));
                }
            }
            (names.join(" x "), product_all(&factors))
        })
        .collect()
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Prints the one-line verdict for an acceptance criterion.
pub fn verdict(n: usize, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {n:>2} {status} {name} ({:.2?}) {detail}",
        elapsed
    );
}
