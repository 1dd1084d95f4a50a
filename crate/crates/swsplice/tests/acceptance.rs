//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with its own harness so the lines reach the terminal. The process
//! exits nonzero when a criterion finds a mismatch. A criterion that could
//! only be checked in part prints FAIL with its coverage but is not a
//! mismatch.

use std::time::Instant;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use swsplice::exact_core::{dedekind_sum, fmt_rational, q, qi, Rational};
use swsplice::lemma_lab::{
    alternating_polynomial, check_lemma_a, check_lemma_b, polynomial, LemmaInstance, LemmaMode, DEFAULT_TUPLE_BOUND,
};
use swsplice::plane_curve::{
    alexander_coefficients, d_invariant, derive_curve_invariants, natural_from_c, semigroup_series_check,
    NewtonPairs,
};
use swsplice::plumbing::{canonical_class_invariant, intersection_matrix, parse_graph, seifert_star_graph, torsion_sigma_can};
use swsplice::splicing::{fujita_splice, splice_casson_walker, SpliceSide};
use swsplice::suspension::{
    averaged_alexander_check, level_orders, sweep_towers, tower_setup, SuspensionTower, TowerSkeleton,
    DEFAULT_AVERAGE_BOUND,
};
use swsplice::Error;

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    /// A failed identity, as opposed to incomplete coverage.
    mismatch: bool,
    detail: String,
}

impl Verdict {
    fn pass(detail: String) -> Self {
        Verdict { pass: true, mismatch: false, detail }
    }

    fn mismatch(detail: String) -> Self {
        Verdict { pass: false, mismatch: true, detail }
    }

    fn check(ok: bool, detail: String) -> Self {
        Verdict { pass: ok, mismatch: !ok, detail }
    }
}

fn instance(np: &NewtonPairs, n: u64) -> String {
    format!("pairs {} n = {}", np, n)
}

/// Per-tower results shared by criteria 1, 2 and 8.
enum TowerResult {
    Ok { conjecture: bool, swadd: bool, master: bool },
    Err(Error),
}

fn analyze(np: &NewtonPairs, n: u64) -> TowerResult {
    let t = match SuspensionTower::new(np, n, None) {
        Ok(t) => t,
        Err(e) => return TowerResult::Err(e),
    };
    let top = t.top();
    let conjecture = qi(-8) * &top.sw0 == qi(top.sigma);
    let swadd = t.levels.iter().all(|lv| {
        let additive: Rational =
            t.levels[..lv.l].iter().map(|k| qi(k.d / lv.d) * &k.brieskorn.sw0).sum();
        additive == &lv.torsion - &lv.lambda_w / qi(2)
    });
    let master = t.levels.iter().all(|lv| lv.identity_defect.is_zero());
    TowerResult::Ok { conjecture, swadd, master }
}

fn sweep_criteria(towers: &[(NewtonPairs, u64)]) -> [Verdict; 3] {
    let start = Instant::now();
    let results: Vec<TowerResult> = towers.par_iter().map(|(np, n)| analyze(np, *n)).collect();
    let secs = start.elapsed().as_secs_f64();
    let mut first: [Option<String>; 3] = [None, None, None];
    for ((np, n), r) in towers.iter().zip(&results) {
        let flags = match r {
            TowerResult::Ok { conjecture, swadd, master } => [*conjecture, *swadd, *master],
            TowerResult::Err(e) => {
                let msg = format!("{}: {}", instance(np, *n), e);
                for slot in first.iter_mut() {
                    slot.get_or_insert_with(|| msg.clone());
                }
                continue;
            }
        };
        for (slot, ok) in first.iter_mut().zip(flags) {
            if !ok {
                slot.get_or_insert_with(|| instance(np, *n));
            }
        }
    }
    let total = towers.len();
    let make = |i: usize, what: &str| match &first[i] {
        None => Verdict::pass(format!("{} on all {} towers ({:.0} s)", what, total, secs)),
        Some(m) => Verdict::mismatch(format!("{} fails first at {}", what, m)),
    };
    [make(0, "-8·sw0 = sigma"), make(1, "sum d_k sw0(Sigma_k) = T(1) - lambda_W/2"), make(2, "E_l = 0 on every level")]
}

fn criterion_3(towers: &[(NewtonPairs, u64)]) -> Verdict {
    let candidates: Vec<TowerSkeleton> = towers
        .iter()
        .filter_map(|(np, n)| {
            let t = tower_setup(np, *n).ok()?;
            if (1..=t.s()).any(|l| t.h_tilde(l) != 1) {
                return None;
            }
            (level_orders(&t).ok()?.pop()? <= 2000u64.into()).then_some(t)
        })
        .collect();
    let worked = tower_setup(&"2:3".parse().unwrap(), 2).unwrap();
    let worked_ok = candidates.contains(&worked)
        && matches!(averaged_alexander_check(&worked, DEFAULT_AVERAGE_BOUND), Ok(r) if r.holds && r.averaged == vec![1, -1, 1]);
    let outcomes: Vec<Result<bool, Error>> =
        candidates.par_iter().map(|t| averaged_alexander_check(t, DEFAULT_AVERAGE_BOUND).map(|r| r.holds)).collect();
    let (mut checked, mut skipped, mut failed) = (0usize, 0usize, Vec::new());
    for (t, o) in candidates.iter().zip(outcomes) {
        match o {
            Ok(true) => checked += 1,
            Err(Error::WorkBoundExceeded { .. }) => skipped += 1,
            Ok(false) => failed.push(instance(&t.newton_pairs, t.n)),
            Err(e) => failed.push(format!("{}: {}", instance(&t.newton_pairs, t.n), e)),
        }
    }
    let detail = format!(
        "{} towers with all h~ = 1 and |H| <= 2000: {} equal exactly, {} beyond the work bound {}, {} differ; [(2,3)], n = 2 {}",
        candidates.len(),
        checked,
        skipped,
        DEFAULT_AVERAGE_BOUND,
        failed.len(),
        if worked_ok { "passes" } else { "FAILS" }
    );
    if !failed.is_empty() || !worked_ok {
        let first = failed.first().cloned().unwrap_or_default();
        return Verdict::mismatch(format!("{}; first difference at {}", detail, first));
    }
    Verdict { pass: skipped == 0, mismatch: false, detail }
}

fn criterion_4() -> Verdict {
    let mut count = 0;
    for p in 2..=15u64 {
        for a in 2..=15u64 {
            if p.gcd(&a) != 1 {
                continue;
            }
            for m in 1..=20u64 {
                let (d, dt) = (m.gcd(&p), m.gcd(&a));
                if d > 1 && dt > 1 {
                    continue;
                }
                let (pp, aa, dd) = if dt == 1 { (p, a, d) } else { (a, p, dt) };
                let closed = Rational::new((m * pp * (dd - 1) * (aa * aa - 1)).into(), (24 * dd * aa).into());
                let star = match seifert_star_graph(p, a, m) {
                    Ok(s) => s,
                    Err(e) => return Verdict::mismatch(format!("Sigma({},{},{}): {}", p, a, m, e)),
                };
                let tor = match torsion_sigma_can(&star.graph) {
                    Ok(t) => t,
                    Err(e) => return Verdict::mismatch(format!("Sigma({},{},{}): {}", p, a, m, e)),
                };
                let det = intersection_matrix(&star.graph).unwrap().det.abs();
                if tor != closed || det != num_bigint::BigInt::from(aa).pow(dd as u32 - 1) {
                    return Verdict::mismatch(format!(
                        "Sigma({},{},{}): torsion {} vs {}, |det| {}",
                        p,
                        a,
                        m,
                        fmt_rational(&tor),
                        fmt_rational(&closed),
                        det
                    ));
                }
                count += 1;
            }
        }
    }
    Verdict::pass(format!("torsion and |det| = a^(d-1) agree on {} Brieskorn stars", count))
}

/// Nonzero entries are ±1 and alternate in sign, `+1` at the top.
fn alternating(c: &[i64]) -> bool {
    let nz: Vec<i64> = c.iter().copied().filter(|&x| x != 0).collect();
    nz.iter().rev().enumerate().all(|(i, &x)| x == if i % 2 == 0 { 1 } else { -1 })
}

fn random_pairs(rng: &mut ChaCha8Rng) -> NewtonPairs {
    loop {
        let s = rng.gen_range(1..=4);
        let pairs: Vec<(u64, u64)> = (0..s).map(|_| (rng.gen_range(2..=10), rng.gen_range(2..=10))).collect();
        if let Ok(np) = NewtonPairs::new(pairs) {
            if derive_curve_invariants(&np).is_ok() {
                return np;
            }
        }
    }
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_deg = 0;
    for _ in 0..200 {
        let np = random_pairs(&mut rng);
        let c = match alexander_coefficients(&np, np.len()) {
            Ok(c) => c,
            Err(e) => return Verdict::mismatch(format!("{}: {}", np, e)),
        };
        let r = (c.len() - 1) / 2;
        max_deg = max_deg.max(2 * r);
        if !alternating(&c) {
            return Verdict::mismatch(format!("{}: coefficients not alternating", np));
        }
        drop(c);
        match semigroup_series_check(&np, 3 * r) {
            Ok(true) => {}
            other => return Verdict::mismatch(format!("{}: semigroup series {:?}", np, other)),
        }
    }
    Verdict::pass(format!("200 random lists alternate and match the semigroup series to 3r (max degree {})", max_deg))
}

fn d_oracle(c: &[i64]) -> i128 {
    let mut s: i128 = 0;
    for (i, &ci) in c.iter().enumerate() {
        for (j, &cj) in c.iter().enumerate() {
            s += (ci * cj) as i128 * (i.min(j) as i128 + 1);
        }
        s -= (i as i128 + 1) * ci as i128;
    }
    s
}

fn criterion_6() -> Verdict {
    let mut count = 0usize;
    for r in 0..=12u32 {
        for code in 0..3u64.pow(r) {
            let mut x = code;
            let c: Vec<i64> = (0..r)
                .map(|_| {
                    let v = (x % 3) as i64 - 1;
                    x /= 3;
                    v
                })
                .collect();
            if !alternating(&c) {
                continue;
            }
            count += 1;
            if d_invariant(&c) != 0 || d_oracle(&c) != 0 {
                return Verdict::mismatch(format!("D({:?}) = {}", c, d_invariant(&c)));
            }
        }
    }
    let d = d_invariant(&[-2, 1]);
    Verdict::check(d == 2 && d_oracle(&[-2, 1]) == 2, format!("D = 0 on {} alternating lists; D(-2, 1) = {}", count, d))
}

fn random_lemma_instance(rng: &mut ChaCha8Rng) -> (swsplice::exact_core::IntLaurentPolynomial, u64, u32, u32) {
    let deg = rng.gen_range(0..=8usize);
    let mut support: Vec<usize> = (0..deg).filter(|_| rng.gen_bool(0.5)).collect();
    support.push(deg);
    if support.len() % 2 == 0 {
        if support[0] == 0 {
            support.remove(0);
        } else {
            support.insert(0, 0);
        }
    }
    let a = (deg as u64).max(1) + rng.gen_range(0..=5);
    (alternating_polynomial(deg + 1, &support), a, rng.gen_range(2..=3), rng.gen_range(1..=3))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..100 {
        let (delta, a, d, k) = random_lemma_instance(&mut rng);
        let ia = LemmaInstance::new(delta.clone(), a, LemmaMode::A).unwrap();
        let ib = LemmaInstance::new(delta.clone(), a, LemmaMode::B { d, k }).unwrap();
        let ok = ia.hypotheses_hold()
            && check_lemma_a(&ia).unwrap_or(false)
            && check_lemma_b(&ib, DEFAULT_TUPLE_BOUND).unwrap_or(false);
        if !ok {
            return Verdict::mismatch(format!("instance {}: delta = {}, a = {}, d = {}, k = {}", i, delta, a, d, k));
        }
    }
    let counter = LemmaInstance::new(polynomial(&[1, -1, 1, -1, 1]), 3, LemmaMode::A).unwrap();
    let fails = check_lemma_a(&counter) == Ok(false);
    Verdict::check(fails, format!("100 random instances hold; a = 3, t^4-t^3+t^2-t+1 fails: {}", fails))
}

/// `s(q, p)` from the sawtooth sum over the common denominator `4p²`.
fn dedekind_oracle(qq: i64, p: i64) -> Rational {
    let mut num: i128 = 0;
    for k in 1..p {
        let kq = (k * qq).rem_euclid(p);
        if kq != 0 {
            num += (2 * k - p) as i128 * (2 * kq - p) as i128;
        }
    }
    Rational::new(num.into(), (4 * p as i128 * p as i128).into())
}

fn criterion_9() -> Verdict {
    let mut pairs = 0;
    for p in 2..=200i64 {
        for qq in 1..p {
            if p.gcd(&qq) != 1 {
                continue;
            }
            let (spq, sqp) = (dedekind_sum(qq, p), dedekind_sum(p, qq));
            let rhs = q(-1, 4) + (q(p, qq) + q(qq, p) + q(1, p * qq)) / qi(12);
            if spq != dedekind_oracle(qq, p) || sqp != dedekind_oracle(p, qq) || &spq + &sqp != rhs {
                return Verdict::mismatch(format!("reciprocity fails at p = {}, q = {}", p, qq));
            }
            pairs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..50 {
        let c: Vec<i64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(-2..3)).collect();
        let l1 = q(rng.gen_range(-50..50), rng.gen_range(1..20));
        let s1 = SpliceSide::trivial_knot(l1, Rational::zero(), rng.gen_range(1..6), natural_from_c(&c));
        let (o2, k2) = loop {
            let o2: i64 = rng.gen_range(1..40);
            let k2: i64 = rng.gen_range(-40..40);
            if k2 != 0 && o2.gcd(&k2) == 1 {
                break (o2, k2);
            }
        };
        let l2 = q(rng.gen_range(-50..50), rng.gen_range(1..20));
        let s2 = SpliceSide {
            lambda_w: l2,
            torsion_at_1: Rational::zero(),
            h1_order: o2 as u64,
            o: o2 as u64,
            k: k2,
            alexander_natural: None,
        };
        let direct = splice_casson_walker(&s1, &s2);
        if direct.is_err() || direct != fujita_splice(&s1, &s2) {
            return Verdict::mismatch(format!("splice instance {}: {:?} / {:?}", i, s1, s2));
        }
    }
    Verdict::pass(format!("reciprocity on {} coprime pairs; 50 random splices agree with the surgery route", pairs))
}

const E8: &str = "v 1 -2\nv 2 -2\nv 3 -2\nv 4 -2\nv 5 -2\nv 6 -2\nv 7 -2\nv 8 -2\n\
e 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 7\ne 5 8\n";

fn criterion_10() -> Verdict {
    let start = Instant::now();
    let g = parse_graph(E8).unwrap();
    let t = SuspensionTower::new(&"2:3".parse().unwrap(), 5, Some(&g)).unwrap();
    let k2 = canonical_class_invariant(&g).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let top = t.top();
    let ok = top.sw0 == qi(1)
        && top.sigma == -8
        && k2 == qi(8)
        && t.sw0.geometric_genus == Some(Rational::zero())
        && &top.sw0 - &k2 / qi(8) == Rational::zero()
        && secs < 1.0;
    Verdict::check(
        ok,
        format!(
            "sw0 = {}, sigma = {}, K^2 + #V = {}, p_g = {} in {:.3} s",
            fmt_rational(&top.sw0),
            top.sigma,
            fmt_rational(&k2),
            t.sw0.geometric_genus.as_ref().map(fmt_rational).unwrap_or_default(),
            secs
        ),
    )
}

fn report(n: usize, v: &Verdict) {
    println!("criterion {:>2}: {}  {}", n, if v.pass { "PASS" } else { "FAIL" }, v.detail);
}

fn main() {
    let mut verdicts: Vec<(usize, Verdict)> = Vec::new();
    let mut run = |n: usize, v: Verdict| {
        report(n, &v);
        verdicts.push((n, v));
    };
    run(10, criterion_10());
    run(4, criterion_4());
    run(5, criterion_5());
    run(6, criterion_6());
    run(7, criterion_7());
    run(9, criterion_9());
    let towers = sweep_towers(3, 7, 30);
    let [c1, c2, c8] = sweep_criteria(&towers);
    run(1, c1);
    run(2, c2);
    run(8, c8);
    run(3, criterion_3(&towers));
    verdicts.sort_by_key(|(n, _)| *n);
    println!();
    for (n, v) in &verdicts {
        println!("{:>2} {}", n, if v.pass { "PASS" } else { "FAIL" });
    }
    let passed = verdicts.iter().filter(|(_, v)| v.pass).count();
    let mismatches = verdicts.iter().filter(|(_, v)| v.mismatch).count();
    println!("acceptance: {} PASS, {} FAIL ({} by mismatch)", passed, verdicts.len() - passed, mismatches);
    if mismatches > 0 {
        std::process::exit(1);
    }
}
