//! The acceptance suite: every identity the kernel exists to verify, at the
//! stated parameters, with exact (zero-tolerance) equality and pinned runtime
//! budgets.  The criteria run in order and print one pass/fail line each;
//! failures are collected so a broken criterion never hides the others.

use std::time::{Duration, Instant};

use qfrob_core::cyclo::RootParams;
use qfrob_core::hyper::{HyperAlgebra, PrimeField};
use qfrob_core::report::{all_passed, Check};
use qfrob_core::suites::{
    blocks_suite, bridge_suite, contraction_suite, hopf_suite, identities_suite, modular_suite,
    splitting_suite, vanishing_bracket_suite, SuiteConfig,
};
use qfrob_core::torus::{
    kappa, kappa_bar, kappa_bar_closed_form, kappa_closed_form, kappa_prime, SmallTorusElement,
    TorusContext,
};

const FULL_SUITE_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    criterion: usize,
    name: &'static str,
    ok: bool,
    elapsed: Duration,
    detail: String,
}

struct Runner {
    outcomes: Vec<Outcome>,
}

impl Runner {
    fn new() -> Self {
        Runner { outcomes: Vec::new() }
    }

    fn run(
        &mut self,
        criterion: usize,
        name: &'static str,
        f: impl FnOnce() -> (bool, String),
    ) {
        let start = Instant::now();
        let (ok, detail) = f();
        let elapsed = start.elapsed();
        println!(
            "criterion {criterion:2} [{}] {name}: {elapsed:.2?}",
            if ok { "PASS" } else { "FAIL" }
        );
        self.outcomes.push(Outcome {
            criterion,
            name,
            ok,
            elapsed,
            detail,
        });
    }
}

fn gather(checks: &[Check], ok: &mut bool, detail: &mut String) {
    if !all_passed(checks) {
        *ok = false;
        for c in checks.iter().filter(|c| !c.passed()) {
            detail.push_str(&format!("{}: {:?}\n", c.name, c.witness));
        }
    }
}

fn over_budget(what: &str, elapsed: Duration, budget: Duration, ok: &mut bool, detail: &mut String) {
    if elapsed >= budget {
        *ok = false;
        detail.push_str(&format!("{what} took {elapsed:?}, budget {budget:?}\n"));
    }
}

#[test]
fn acceptance() {
    let mut r = Runner::new();

    // 1. For l in {3,5,7,9,15}: sum kappa'_n = 1 and kappa'_n kappa'_m =
    //    delta_nm kappa'_n, exact; under 5 seconds per l.
    r.run(1, "idempotent partition of unity", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5, 7, 9, 15] {
            let per_l = Instant::now();
            let ring = RootParams::new(l).unwrap();
            let mut sum = SmallTorusElement::zero(&ring);
            for n in 0..2 * l as i64 {
                sum = sum.add(&kappa_prime(&ring, n));
            }
            if sum != SmallTorusElement::one(&ring) {
                ok = false;
                detail.push_str(&format!("partition failed at l = {l}\n"));
            }
            for n in 0..2 * l as i64 {
                for m in 0..2 * l as i64 {
                    let prod = kappa_prime(&ring, n).mul(&kappa_prime(&ring, m));
                    let expected = if n == m {
                        kappa_prime(&ring, n)
                    } else {
                        SmallTorusElement::zero(&ring)
                    };
                    if prod != expected {
                        ok = false;
                        detail.push_str(&format!("orthogonality failed at l={l} n={n} m={m}\n"));
                    }
                }
            }
            over_budget(
                &format!("partition checks at l = {l}"),
                per_l.elapsed(),
                Duration::from_secs(5),
                &mut ok,
                &mut detail,
            );
        }
        (ok, detail)
    });

    // 2. Every divided-power coordinate of kappa_n, kappa_bar_n, kappa'_n is
    //    2-integral, and averaged and closed forms coincide, for the same l.
    r.run(2, "2-integrality and closed forms", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5, 7, 9, 15] {
            let ring = RootParams::new(l).unwrap();
            let ctx = TorusContext::new(ring.clone(), 2 * l as usize);
            for n in 0..l as i64 {
                if kappa_closed_form(&ring, n) != kappa(&ring, n)
                    || kappa_bar_closed_form(&ring, n) != kappa_bar(&ring, n)
                {
                    ok = false;
                    detail.push_str(&format!("closed form mismatch at l={l} n={n}\n"));
                }
                for x in [kappa(&ring, n), kappa_bar(&ring, n)] {
                    if ctx.small_to_big(&x).unwrap().assert_dyadic().is_err() {
                        ok = false;
                        detail.push_str(&format!("non-integral coordinate at l={l} n={n}\n"));
                    }
                }
            }
            for n in 0..2 * l as i64 {
                let big = ctx.small_to_big(&kappa_prime(&ring, n)).unwrap();
                if big.assert_dyadic().is_err() {
                    ok = false;
                    detail.push_str(&format!("non-integral kappa'_{n} at l={l}\n"));
                }
            }
        }
        (ok, detail)
    });

    // 3. Fr(phi(x)) = x on all basis elements with indices <= 2 and phi
    //    multiplicative on 64 seeded pairs, l in {3,5,7}; under 60 s per l.
    r.run(3, "multiplicative splitting of Fr", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5, 7] {
            let per_l = Instant::now();
            let checks = splitting_suite(&SuiteConfig::new(l).with_samples(64)).unwrap();
            gather(&checks, &mut ok, &mut detail);
            over_budget(
                &format!("splitting suite at l = {l}"),
                per_l.elapsed(),
                Duration::from_secs(60),
                &mut ok,
                &mut detail,
            );
        }
        (ok, detail)
    });

    // 4. kappa_(-s) [K; 2s-la-lb; s] = 0 for all s in [1, min(la, lb)] with
    //    l not dividing s, a, b <= 2, l in {3,5,7}.
    r.run(4, "bracket vanishing", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5, 7] {
            let checks = vanishing_bracket_suite(&SuiteConfig::new(l)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        (ok, detail)
    });

    // 5. Exhaustive symmetric-sum identities for every odd l <= 15, with the
    //    closed value l / prod (1 - q^(2k)); under 10 seconds per l.
    r.run(5, "polynomial identities", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5, 7, 9, 11, 13, 15] {
            let per_l = Instant::now();
            let checks = identities_suite(&SuiteConfig::new(l)).unwrap();
            gather(&checks, &mut ok, &mut detail);
            over_budget(
                &format!("identities at l = {l}"),
                per_l.elapsed(),
                Duration::from_secs(10),
                &mut ok,
                &mut detail,
            );
        }
        (ok, detail)
    });

    // 6. mu-partition, base changes, tower rule, Frobenius retraction on all
    //    indices < p^2, multiplicativity on 64 seeded pairs; p in {3,5,7}.
    r.run(6, "modular idempotents and splitting", || {
        let mut ok = true;
        let mut detail = String::new();
        for p in [3u64, 5, 7] {
            let checks = modular_suite(&SuiteConfig::new(p).with_p(p).with_samples(64)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        (ok, detail)
    });

    // 7. reduction(kappa_n) = mu_(2n) and reduction intertwines the two
    //    splittings on generators, l = p in {3,5,7}.
    r.run(7, "quantum-modular bridge", || {
        let mut ok = true;
        let mut detail = String::new();
        for p in [3u64, 5, 7] {
            let checks = bridge_suite(&SuiteConfig::new(p).with_p(p)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        (ok, detail)
    });

    // 8. (Fr x Fr) Delta = Delta Fr up to degree 2l, Delta(kappa) absorption,
    //    Omega Psi(kappa) = kappa; l in {3,5}.
    r.run(8, "Hopf compatibilities", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5] {
            let checks = hopf_suite(&SuiteConfig::new(l)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        (ok, detail)
    });

    // 9. contract(V(ls)) has dimension s+1 with weights {s, s-2, ..., -s} for
    //    s <= 3, plus the tensor identity with explicit intertwiner; l in {3,5}.
    r.run(9, "Frobenius contraction", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5] {
            let checks = contraction_suite(&SuiteConfig::new(l)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        (ok, detail)
    });

    // 10. Ideal ranks l^2 for each n in [0, 2l), the mu-blocks of Dist(G_1)
    //     fill p^3 for p in {3,5}, and p = 2 realizes 4 = 2 + 2.
    r.run(10, "block dimensions", || {
        let mut ok = true;
        let mut detail = String::new();
        for l in [3u64, 5] {
            let checks = blocks_suite(&SuiteConfig::new(l).with_p(l)).unwrap();
            gather(&checks, &mut ok, &mut detail);
        }
        let p2 = HyperAlgebra::new(PrimeField(2), 8);
        let checks = p2.block_decomposition_check(1, 1).unwrap();
        gather(&checks, &mut ok, &mut detail);
        (ok, detail)
    });

    let total: Duration = r.outcomes.iter().map(|o| o.elapsed).sum();
    println!("full acceptance suite: {total:.2?}");
    let mut failures = String::new();
    for o in &r.outcomes {
        if !o.ok {
            failures.push_str(&format!(
                "criterion {} ({}) failed:\n{}\n",
                o.criterion, o.name, o.detail
            ));
        }
    }
    assert!(failures.is_empty(), "{failures}");
    assert!(
        total < FULL_SUITE_BUDGET,
        "full suite took {total:?}, budget {FULL_SUITE_BUDGET:?}"
    );
}
