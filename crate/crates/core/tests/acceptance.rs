//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasimap_core::arith::rat::{self, Rat};
use quasimap_core::arith::{FactoredRat, LinForm, MPoly, TaggedFactor};
use quasimap_core::intersection::{
    compute_w, compute_w_with, integrate_class, integrate_class_with, lemma_last,
    lemma_second_closed_form, lemma_second_value, main_theorem_rd, E6Form,
};
use quasimap_core::residue::{residue_at_point, ResiduePlan};
use quasimap_core::series::{self, j_from_w, lagrange_oracle, mirror_w, pf_recursion_check};
use quasimap_core::toric::{
    build_fan, det_bk, eval_recession, orientation_enumeration, relation_check,
    sr_generator_factors, sr_ideal, volume_form,
};
use quasimap_core::verify::{sample_monomials, sample_off_degree};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat::int(x)).collect()
}

fn expect_eq(what: &str, expected: &Rat, actual: &Rat) -> Result<(), String> {
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{what}: expected {expected}, got {actual}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn main_theorem() -> Outcome {
    let expected = ints(&[744, 473652, 451734080, 510531007770]);
    let start = Instant::now();
    for (i, e) in expected.iter().enumerate() {
        let d = i + 1;
        let half = compute_w(d, 1, 0).map_err(err)? / rat::int(2);
        expect_eq(&format!("d={d}"), e, &half)?;
    }
    let elapsed = start.elapsed();
    let w5 = compute_w(5, 1, 0).map_err(err)? / rat::int(2);
    let stretch = if w5 == mirror_w(5).map_err(err)?[4] {
        format!("d=5 stretch agrees ({w5})")
    } else {
        format!("d=5 stretch differs ({w5})")
    };
    Ok(format!("d=1..4 in {elapsed:.2?}; {stretch}"))
}

fn holomorphic_solution() -> Outcome {
    let expected = ints(&[120, 83160, 81681600, 93699005400, 117386113965120]);
    for (i, e) in expected.iter().enumerate() {
        let d = i + 1;
        let v = compute_w(d, 2, -1).map_err(err)? * rat::frac(d as i64, 2);
        expect_eq(&format!("d={d}"), e, &v)?;
        expect_eq(&format!("closed form d={d}"), e, &series::f0_coeff(d))?;
    }
    Ok("d=1..5".into())
}

fn volume_normalization() -> Outcome {
    for d in 1..=5 {
        let v = integrate_class(d, &volume_form(d)).map_err(err)?;
        expect_eq(&format!("d={d}"), &rat::int(1), &v)?;
    }
    Ok("d=1..5".into())
}

fn ideal_annihilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for d in 1..=3 {
        let top = 6 * d as u32 + 2;
        for (i, r) in sr_ideal(d).iter().enumerate() {
            let deg = r.total_degree().unwrap();
            for f in sample_monomials(d + 1, top - deg, 12, &mut rng) {
                let v = integrate_class(d, &(r * &f)).map_err(err)?;
                expect_eq(
                    &format!("d={d} r_{i} * {}", f.display_with("H")),
                    &Rat::zero(),
                    &v,
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} products, d=1..3"))
}

fn degree_selection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=3 {
        for _ in 0..25 {
            let k = sample_off_degree(d, &mut rng);
            let m = &sample_monomials(d + 1, k, 1, &mut rng)[0];
            let v = integrate_class(d, m).map_err(err)?;
            expect_eq(&format!("d={d} {}", m.display_with("H")), &Rat::zero(), &v)?;
        }
    }
    Ok("25 monomials per degree, d=1..3".into())
}

fn order_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in 1..=3 {
        let mut shuffled: Vec<usize> = (0..=d).collect();
        shuffled.shuffle(&mut rng);
        let plans = [
            ResiduePlan::ascending(d),
            ResiduePlan::descending(d),
            ResiduePlan::with_order(d, shuffled),
        ];
        for (a, b) in [(1, 0), (2, -1)] {
            let base = compute_w(d, a, b).map_err(err)?;
            for p in &plans[1..] {
                let v = compute_w_with(d, a, b, E6Form::Factorized, p).map_err(err)?;
                expect_eq(
                    &format!("w(z^{a}, z^{b})_{d} order {:?}", p.order),
                    &base,
                    &v,
                )?;
            }
        }
        for p in &plans[1..] {
            let v = integrate_class_with(d, &volume_form(d), p).map_err(err)?;
            expect_eq(&format!("Vol_{d} order {:?}", p.order), &rat::int(1), &v)?;
        }
    }
    Ok("ascending, descending and shuffled, d=1..3".into())
}

fn lemmas() -> Outcome {
    for d in 1..=4 {
        let v = lemma_second_value(d).map_err(err)?;
        expect_eq(&format!("second d={d}"), &lemma_second_closed_form(d), &v)?;
    }
    expect_eq(
        "second d=1",
        &rat::int(744),
        &lemma_second_value(1).map_err(err)?,
    )?;
    let mut splits = 0;
    for d in 2..=4 {
        for f in 1..d {
            let l = lemma_last(d, f).map_err(err)?;
            expect_eq(&format!("last d={d} f={f}"), &l.product, &l.residue)?;
            splits += 1;
        }
    }
    let b = [
        rat::int(744),
        rat::int(562932),
        series::f1_hat_coeff(3),
        series::f1_hat_coeff(4),
    ];
    for (i, e) in b.iter().enumerate() {
        let d = i + 1;
        expect_eq(&format!("R_{d}"), e, &main_theorem_rd(d).map_err(err)?)?;
    }
    Ok(format!("second d=1..4, last {splits} splits, R_d d=1..4"))
}

fn toric_checks() -> Outcome {
    for d in 1..=10 {
        let fan = build_fan(d).map_err(err)?;
        if !relation_check(&fan).passed() {
            return Err(format!("ray relations fail for d={d}"));
        }
    }
    for k in 1..=30 {
        if det_bk(k) != BigInt::from(9 * k as i64 - 6) {
            return Err(format!("det B_{k} = {}", det_bk(k)));
        }
    }
    for d in 1..=4 {
        orientation_enumeration(d).map_err(err)?;
    }
    let h = |n: usize, terms: &[(usize, i64)]| LinForm::from_terms(n, terms);
    let verbatim = [
        (
            1,
            0,
            vec![h(2, &[(0, 1)]); 4]
                .into_iter()
                .chain([h(2, &[(0, 2), (1, 1)])])
                .collect::<Vec<_>>(),
        ),
        (
            1,
            1,
            vec![h(2, &[(1, 1)]); 4]
                .into_iter()
                .chain([h(2, &[(0, 1), (1, 2)])])
                .collect(),
        ),
        (
            2,
            0,
            vec![h(3, &[(0, 1)]); 4]
                .into_iter()
                .chain([h(3, &[(0, 2), (1, 1)])])
                .collect(),
        ),
        (
            2,
            1,
            vec![h(3, &[(1, 1)]); 4]
                .into_iter()
                .chain([
                    h(3, &[(0, 1), (1, 2)]),
                    h(3, &[(1, 2), (2, 1)]),
                    h(3, &[(0, -1), (1, 2), (2, -1)]),
                ])
                .collect(),
        ),
        (
            2,
            2,
            vec![h(3, &[(2, 1)]); 4]
                .into_iter()
                .chain([h(3, &[(1, 1), (2, 2)])])
                .collect(),
        ),
    ];
    for (d, i, factors) in verbatim {
        let expected = MPoly::product_of(d + 1, &factors);
        if sr_ideal(d)[i] != expected
            || MPoly::product_of(d + 1, &sr_generator_factors(d, i)) != expected
        {
            return Err(format!("SR generator r_{i} for d={d}"));
        }
    }
    Ok("relations d<=10, det B_k k<=30, orientation d<=4, SR d=1,2".into())
}

fn series_suite() -> Outcome {
    pf_recursion_check(20).map_err(err)?;
    let w = mirror_w(4).map_err(err)?;
    if w != ints(&[744, 473652, 451734080, 510531007770]) {
        return Err(format!("mirror_w(4) = {w:?}"));
    }
    let j = j_from_w(&mirror_w(5).map_err(err)?);
    if j != ints(&[744, 196884, 21493760, 864299970, 20245856256]) {
        return Err(format!("j_from_w(5) = {j:?}"));
    }
    let w8 = mirror_w(8).map_err(err)?;
    if j_from_w(&w8) != lagrange_oracle(&w8).map_err(err)? {
        return Err("compositions and Lagrange inversion disagree".into());
    }
    Ok("PF order 20, w_1..4, j_1..5, Lagrange through 8".into())
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for d in 1..=3 {
        for a in -1..=2i64 {
            for b in -1..=2i64 {
                if a + b != 1 {
                    expect_eq(
                        &format!("w(z^{a}, z^{b})_{d}"),
                        &Rat::zero(),
                        &compute_w(d, a, b).map_err(err)?,
                    )?;
                }
            }
        }
    }
    for d in 1..=2 {
        let top = 6 * d as u32 + 2;
        let mut class = || {
            sample_monomials(d + 1, top, 3, &mut rng)
                .into_iter()
                .fold(MPoly::zero(d + 1), |acc, m| &acc + &m.scale(&rat::int(3)))
        };
        let (f, g) = (class(), class());
        let lhs = integrate_class(d, &(&f.scale(&rat::int(5)) - &g)).map_err(err)?;
        let rhs = rat::int(5) * integrate_class(d, &f).map_err(err)?
            - integrate_class(d, &g).map_err(err)?;
        expect_eq(&format!("linearity d={d}"), &rhs, &lhs)?;
    }
    for _ in 0..50 {
        let n = 3;
        let den: Vec<TaggedFactor> = (0..3)
            .map(|j| {
                let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..4)).collect();
                let c = if c.iter().all(|&x| x == 0) {
                    vec![1, 0, 0]
                } else {
                    c
                };
                TaggedFactor::new(LinForm::from_ints(&c), rng.gen_range(1..3), [j])
            })
            .collect();
        let num = sample_monomials(n, 3, 1, &mut rng).remove(0);
        let f = FactoredRat::new(rat::frac(rng.gen_range(1..9), 7), num, den).map_err(err)?;
        let mut ok =
            f.check_invariants() && f.reduce().check_invariants() && f.mul(&f).check_invariants();
        for t in f.den() {
            if let Some(p) = t.form.solve_for(0) {
                ok &= residue_at_point(&f, 0, &p).map_err(err)?.check_invariants();
            }
        }
        if !ok {
            return Err(format!("invariants broken for {f}"));
        }
    }
    for d in 1..=4 {
        let mut seen: HashMap<Vec<Rat>, Vec<Rat>> = HashMap::new();
        for _ in 0..10_000 {
            let alpha: Vec<Rat> = (0..=d)
                .map(|_| rat::frac(rng.gen_range(-40..41), rng.gen_range(1..4)))
                .collect();
            let t = rat::frac(rng.gen_range(1..20), rng.gen_range(1..5));
            let image = eval_recession(d, &alpha).map_err(err)?;
            let scaled: Vec<Rat> = alpha.iter().map(|x| x * &t).collect();
            let lhs = eval_recession(d, &scaled).map_err(err)?;
            if lhs != image.iter().map(|x| x * &t).collect::<Vec<_>>() {
                return Err(format!("F_{d} not positively homogeneous at {alpha:?}"));
            }
            if let Some(prev) = seen.insert(image, alpha.clone()) {
                if prev != alpha {
                    return Err(format!("F_{d} collision: {prev:?} and {alpha:?}"));
                }
            }
        }
    }
    Ok("zero results, linearity, closure invariants, F_d homogeneity and injectivity (10^4 samples, d<=4)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("main theorem: 1/2 w(z^1, z^0)_d = w_d", main_theorem),
        (
            "holomorphic solution: d/2 w(z^2, z^-1)_d = A_d",
            holomorphic_solution,
        ),
        ("residue normalization: int Vol_d = 1", volume_normalization),
        ("ideal annihilation", ideal_annihilation),
        ("degree selection", degree_selection),
        ("order independence", order_independence),
        ("second lemma, last lemma, R_d = B_d", lemmas),
        ("toric checks", toric_checks),
        ("series suite", series_suite),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name} [{detail}] ({:.2?})",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
