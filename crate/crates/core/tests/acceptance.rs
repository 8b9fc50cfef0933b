//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Built with `harness = false` so the lines always print.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rrg_core::bijection::{check_bijection_on, Side};
use rrg_core::families::{count, enumerate_overpartitions, Family, FamilySpec};
use rrg_core::identities::{
    negative_control, registry, verify, verify_grid, Ctx, Params, Verdict, VerificationReport,
};
use rrg_core::series::{expand_product_q, Factor, ProductSpec, SeriesQ};

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn grid(ids: &[&str], k_max: u32, order: usize, x_bound: Option<usize>) -> Vec<VerificationReport> {
    let cases: Vec<_> = registry()
        .into_iter()
        .filter(|c| ids.contains(&c.id))
        .collect();
    assert_eq!(cases.len(), ids.len(), "every listed id is registered");
    let ctx = Ctx::new(order).with_x_bound(x_bound);
    verify_grid(&cases, &[], k_max, &ctx)
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    let mut detail = format!("{} checks, {} failing", reports.len(), bad.len());
    let mut seen = Vec::new();
    for r in &bad {
        if !seen.contains(&r.id) {
            seen.push(r.id.clone());
            detail.push_str(&format!("; first {r}"));
        }
    }
    Outcome {
        pass: bad.is_empty() && !reports.is_empty(),
        detail,
    }
}

fn rrg_suite() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in 2..=4 {
        for a in 1..=k {
            let sa = FamilySpec::of(Family::A, k, a).unwrap();
            let sb = FamilySpec::of(Family::B, k, a).unwrap();
            for n in 0..=25 {
                checked += 1;
                let (x, y) = (count(&sa, n), count(&sb, n));
                if x != y {
                    bad.push(format!("k={k} a={a} n={n}: {x} vs {y}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: bad.is_empty() && secs < 60.0,
        detail: format!("{checked} counts in {secs:.2}s, {} mismatches {bad:?}", bad.len()),
    }
}

fn bijections() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (k, a) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)] {
        for side in [Side::U, Side::Ubar] {
            let r = check_bijection_on(side, k, a, 16).unwrap();
            if !r.passed {
                pass = false;
                notes.push(format!("{side:?} k={k} a={a}: {:?}", r.witnesses.first()));
            }
        }
        for id in ["thm-7.1-ub", "thm-7.1-ub2"] {
            let case = registry().into_iter().find(|c| c.id == id).unwrap();
            let r = verify(&case, Params::new(k, a), &Ctx::new(32).with_budget(32)).unwrap();
            if !r.passed() {
                pass = false;
                notes.push(r.to_string());
            }
        }
    }
    Outcome {
        pass,
        detail: format!("U and Ubar splits for 5 (k,a), n <= 16, series check at N=32 {notes:?}"),
    }
}

fn negative() -> Outcome {
    let r = verify(&negative_control(), Params::new(2, 2), &Ctx::new(20)).unwrap();
    let pass = r.verdict == Verdict::Fail && r.witness.as_ref().is_some_and(|w| w.n <= 10);
    Outcome {
        pass,
        detail: r.to_string(),
    }
}

fn series_from(values: &[i64], order: usize) -> SeriesQ {
    SeriesQ::from_i64s(values, order)
}

fn plumbing() -> Outcome {
    let order = 30;
    let mut notes = Vec::new();
    let f = series_from(&[1, -3, 0, 7, 2, -1], order);
    let g = series_from(&[2, 1, 5, 0, -4], order);
    let h = series_from(&[-1, 0, 0, 3], order);
    let ring = f.mul(&g).unwrap() == g.mul(&f).unwrap()
        && f.mul(&g).unwrap().mul(&h).unwrap() == f.mul(&g.mul(&h).unwrap()).unwrap()
        && f.mul(&g.add(&h).unwrap()).unwrap() == f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        && f.add(&f.neg()).unwrap().is_zero();
    if !ring {
        notes.push("ring axioms".to_string());
    }
    let euler = expand_product_q(&ProductSpec::new().times(Factor::poch(1, 1)), order).unwrap();
    let round = euler.invert().unwrap().invert().unwrap() == euler
        && euler.mul(&euler.invert().unwrap()).unwrap() == SeriesQ::one(order);
    if !round {
        notes.push("invert round trip".to_string());
    }
    let product = expand_product_q(
        &ProductSpec::new().times(Factor::poch_neg(1, 1)).over(Factor::poch(1, 1)),
        order,
    )
    .unwrap();
    for n in 0..=order {
        let c = enumerate_overpartitions(n as u32).count();
        if BigInt::from(c) != *product.coeff(n).unwrap() {
            notes.push(format!("overpartitions of {n}: {c}"));
        }
    }
    Outcome {
        pass: notes.is_empty(),
        detail: format!("ring axioms, invert, overpartition totals to n={order} {notes:?}"),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("A = B counts, 2 <= k <= 4, n <= 25", Box::new(rrg_suite)),
        (
            "Andrews-Gordon multisum vs product, k <= 4, N = 40",
            Box::new(|| summarize(&grid(&["eq-1.1"], 4, 40, None))),
        ),
        (
            "parity suite W, Wbar, G, k <= 4, N = 25",
            Box::new(|| {
                let ids = [
                    "thm-1.3", "thm-1.4", "thm-1.4-multisum", "thm-1.5", "thm-1.6",
                    "thm-1.6-product", "thm-1.7", "thm-1.8", "thm-1.9",
                ];
                summarize(&grid(&ids, 4, 25, None))
            }),
        ),
        (
            "Abar = Bbar, k <= 4, n <= 20",
            Box::new(|| summarize(&grid(&["thm-1.10"], 4, 20, None))),
        ),
        (
            "U and Ubar closed forms, all parity cases, modulus <= 4 (main) and <= 5 (sections), N = 25",
            Box::new(|| {
                let mut r = grid(&["thm-1.11", "thm-1.12", "thm-1.13", "thm-1.13-odd", "thm-5.1"], 4, 25, None);
                r.extend(grid(
                    &["thm-3.4", "thm-4.2", "thm-4.4", "thm-5.4", "thm-6.4-u", "thm-6.4-ubar"],
                    2,
                    25,
                    None,
                ));
                summarize(&r)
            }),
        ),
        (
            "two-variable closed forms, k <= 3, N = 20, x-degree 20",
            Box::new(|| {
                let ids = ["thm-3.1", "thm-5.3", "thm-6.3-u", "thm-6.3-ubar"];
                summarize(&grid(&ids, 3, 20, Some(20)))
            }),
        ),
        (
            "kernel relations, k <= 4, N = 30",
            Box::new(|| {
                let ids = ["lemma-2.1", "lemma-2.2", "lemma-2.3", "thm-2.4", "eq-2.3"];
                summarize(&grid(&ids, 4, 30, None))
            }),
        ),
        (
            "functional equations, k <= 3, N = 20, x-degree 20",
            Box::new(|| {
                let ids = [
                    "thm-3.2", "thm-3.3", "thm-4.1-uu12", "thm-4.1-u22a", "thm-4.3-uu21",
                    "thm-4.3-u2a", "thm-5.2", "thm-6.1-difu11", "thm-6.1-difu1", "thm-6.2",
                    "thm-6.2-base",
                ];
                summarize(&grid(&ids, 3, 20, Some(20)))
            }),
        ),
        ("bijection and UB/UB2 count identities", Box::new(bijections)),
        ("negative control fails with a small witness", Box::new(negative)),
        ("series plumbing", Box::new(plumbing)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
