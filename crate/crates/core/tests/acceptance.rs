//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smyth::algebra::{FieldParams, Poly};
use smyth::bounds::{
    construct_extremal_fqt, construct_extremal_int, fqt_solution_pool, min_balanced_search, order_bound_fqt,
    SubsetSearch,
};
use smyth::certfile::CertificateFile;
use smyth::engine::{
    balanced_multiset, certificate_from_balanced, check_criteria, fiber_table, is_balanced, verify_certificate,
    CoeffTuple, SearchConfig, DEFAULT_DET_CHECK_BOUND,
};
use smyth::heuristic::{limit_scan, monte_carlo, p_n_closed_form, FamilyKind, Growth, SampleMode};
use smyth::numfield::{
    construct_certificate, rou_relation_search, rou_twist, strong_criteria_check, verify_numfield_certificate,
    PlaceStatus, QuadField, RouSearch, Verdict, DEFAULT_BRIDGE_BUDGET,
};
use smyth::Jobs;

const GRID_BUDGET: u64 = 1 << 24;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cfg() -> SearchConfig {
    SearchConfig::default().with_budget(GRID_BUDGET).with_jobs(Jobs::all_cores())
}

fn tuple(q: u64, s: &str) -> CoeffTuple {
    CoeffTuple::parse(FieldParams::new(q).unwrap(), s).unwrap()
}

fn pow(q: u64, e: usize) -> u128 {
    (q as u128).pow(e as u32)
}

/// Criteria-passing tuples with random coefficients of degree at most 2,
/// together with a box exponent `d <= N <= 3` inside the budget.
fn passing_grid() -> Vec<(CoeffTuple, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut grid = Vec::new();
    for q in [2u64, 3, 5] {
        let field = FieldParams::new(q).unwrap();
        for n in [3usize, 4] {
            let mut found = 0;
            while found < 9 {
                let coeffs: Vec<Poly> =
                    (0..n).map(|_| Poly::from_index(field, rng.gen_range(1..pow(q, 3) as u64))).collect();
                let Ok(a) = CoeffTuple::new(coeffs) else { continue };
                if !check_criteria(&a).passes {
                    continue;
                }
                let lo = a.height().max(1);
                let fits: Vec<usize> = (lo..=3).filter(|&nb| pow(q, nb * (n - 1)) <= GRID_BUDGET as u128).collect();
                if fits.is_empty() {
                    continue;
                }
                grid.push((a, fits[rng.gen_range(0..fits.len())]));
                found += 1;
            }
        }
    }
    grid
}

/// Fiber counts by direct evaluation of every tuple in `V_N^n`.
fn naive_fibers(a: &CoeffTuple, n_box: usize) -> Vec<Vec<u64>> {
    let f = a.field();
    let side = pow(f.q(), n_box) as u64;
    let n = a.n();
    let values: Vec<Poly> = (0..side).map(|i| Poly::from_index(f, i)).collect();
    let mut table = vec![vec![0u64; side as usize]; n];
    let mut idx = vec![0usize; n];
    loop {
        let s = (0..n).fold(Poly::zero(f), |s, i| s.add(&a.coeffs()[i].mul(&values[idx[i]])));
        if s.is_zero() {
            for (j, &v) in idx.iter().enumerate() {
                table[j][v] += 1;
            }
        }
        let mut k = 0;
        while k < n && idx[k] + 1 == side as usize {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return table;
        }
        idx[k] += 1;
    }
}

fn counting_formula(grid: &[(CoeffTuple, usize)]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut cross_checked = 0;
    for (a, n_box) in grid {
        let expected = pow(a.field().q(), n_box * (a.n() - 2) - a.height()) as u64;
        let table = fiber_table(a, *n_box, &cfg()).unwrap();
        if table.iter().flatten().any(|&c| c != expected) {
            bad.push(format!("{:?} N={n_box}", a.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
        if pow(a.field().q(), n_box * a.n()) <= 1 << 12 {
            cross_checked += 1;
            if naive_fibers(a, *n_box) != table {
                bad.push(format!("naive mismatch N={n_box}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        grid.len() >= 50 && bad.is_empty() && t < Duration::from_secs(60),
        format!("{} tuples, {cross_checked} brute-forced, {} mismatches, {:.1?}", grid.len(), bad.len(), t),
    )
}

fn constructive_direction(grid: &[(CoeffTuple, usize)]) -> Outcome {
    let mut failures = 0;
    let mut largest = 0;
    for (a, n_box) in grid {
        let ok = (|| {
            let b = balanced_multiset(a, *n_box, &cfg()).ok()?;
            largest = largest.max(b.size());
            let balanced = is_balanced(a.coeffs(), b.tuples()).ok()?;
            let c = certificate_from_balanced(&b);
            Some(balanced && verify_certificate(a, &c, DEFAULT_DET_CHECK_BOUND).ok()?)
        })();
        failures += usize::from(ok != Some(true));
    }
    outcome(failures == 0, format!("{} tuples, {failures} failures, largest multiset {largest}", grid.len()))
}

fn negative_control() -> Outcome {
    let f = FieldParams::new(2).unwrap();
    let polys: Vec<Poly> = (1..8).map(|i| Poly::from_index(f, i)).collect();
    let mut tested = 0;
    let mut found = 0;
    'outer: for a in &polys {
        for b in &polys {
            for c in &polys {
                let Ok(t) = CoeffTuple::new(vec![a.clone(), b.clone(), c.clone()]) else { continue };
                if check_criteria(&t).passes {
                    continue;
                }
                for n_box in t.height().max(1)..=2 {
                    let pool = fqt_solution_pool(&t, n_box, &cfg()).unwrap();
                    let opts = SubsetSearch { size_bound: 6, max_multiplicity: 2, budget: GRID_BUDGET, jobs: Jobs::all_cores() };
                    if min_balanced_search(t.coeffs(), &pool, &opts).unwrap().is_some() {
                        found += 1;
                    }
                    tested += 1;
                }
                if tested >= 30 {
                    break 'outer;
                }
            }
        }
    }
    outcome(tested >= 20 && found == 0, format!("{tested} (tuple, N) pairs searched to size 6, {found} balanced"))
}

fn big_balanced_instance() -> Outcome {
    let start = Instant::now();
    let a = tuple(2, "1;t^2;t^2+t+1");
    let pool = fqt_solution_pool(&a, 2, &cfg()).unwrap();
    let opts = SubsetSearch { size_bound: 6, max_multiplicity: 2, budget: GRID_BUDGET, jobs: Jobs::SERIAL };
    let min = min_balanced_search(a.coeffs(), &pool, &opts).unwrap().map(|b| b.size());
    let c = a.coeffs();
    let ob = order_bound_fqt(&c[0], &c[1], &c[2]).unwrap();
    let t = start.elapsed();
    outcome(
        min == Some(3) && ob.order == 3 && ob.generator_flag && ob.verify().unwrap() && t < Duration::from_secs(1),
        format!("minimum {min:?}, order {}, generator {}, {:.1?}", ob.order, ob.generator_flag, t),
    )
}

fn extremal_fqt() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (q, d) in [(2u64, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let inst = construct_extremal_fqt(q, d, 0).unwrap();
        let ok = inst.claimed_min == pow(q, d) - 1
            && inst.certificate.order == inst.claimed_min
            && inst.certificate.verify().unwrap()
            && CertificateFile::from_extremal_fqt(&inst, None).verify().unwrap();
        pass &= ok;
        notes.push(format!("({q},{d})->{}", inst.claimed_min));
    }
    outcome(pass, notes.join(" "))
}

fn extremal_int() -> Outcome {
    let two = construct_extremal_int(2).unwrap();
    let three = construct_extremal_int(3).unwrap();
    let pass = two.triple[2] == 7
        && two.certificate.order == 6
        && two.certificate.verify().unwrap()
        && three.triple[2] == 19
        && three.certificate.order == 18
        && three.certificate.verify().unwrap();
    outcome(
        pass,
        format!(
            "D=2: p={} order {}; D=3: p={} order {}",
            two.triple[2], two.certificate.order, three.triple[2], three.certificate.order
        ),
    )
}

fn heuristic() -> Outcome {
    let a = tuple(2, "1;t;t+1");
    let r = monte_carlo(&a, 1, FamilyKind::Symmetric, 1 << 10, 0, SampleMode::Exhaustive, Jobs::SERIAL).unwrap();
    let rate_ok = r.exhaustive && r.hits * 4 == r.trials;
    let p = p_n_closed_form(2, 1, 3, 1, 2f64.ln()).p();
    let want = (15f64 / 16.0).powi(4);
    let rel = ((p - want) / want).abs();
    let scan = limit_scan(2, 1, 3, Growth::Linear, 1..=6);
    let falling = scan.rows.windows(2).all(|w| w[1].log_p < w[0].log_p);
    outcome(
        rate_ok && rel < 1e-12 && falling,
        format!("rate {}/{}, p_N rel err {rel:.1e}, scan decreasing {falling}", r.hits, r.trials),
    )
}

fn numfield_pipeline() -> Outcome {
    let start = Instant::now();
    let k = QuadField::new(-7).unwrap();
    let alpha = k.omega();
    let c = construct_certificate(&alpha, 3, DEFAULT_BRIDGE_BUDGET).unwrap();
    let verified = c.verified && verify_numfield_certificate(&alpha, 3, &c.permutations);
    let t = start.elapsed();

    let bad = QuadField::new(-15).unwrap();
    let a = [bad.int(1), bad.int(1), bad.omega()];
    let report = strong_criteria_check(&a).unwrap();
    let equality = report.archimedean.iter().any(|r| r.status == PlaceStatus::Equal);
    let none = rou_relation_search(&a, &RouSearch::default()).unwrap().is_none();
    outcome(
        verified && t < Duration::from_secs(30) && report.verdict == Verdict::Fail && equality && none,
        format!(
            "size {} via {:?} in {:.1?}; control: verdict {:?}, equality {equality}, relation none {none}",
            c.matrix.size(),
            c.strategy,
            t,
            report.verdict
        ),
    )
}

fn twist() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in [2u64, 3, 4] {
        for j in 0..3 {
            let t = rou_twist(&[1, 1, -2], &[vec![1, 1, 1]], j, m).unwrap();
            let ok = t.multiset.size() == m as usize && is_balanced(&t.coeffs, t.multiset.tuples()).unwrap();
            pass &= ok;
        }
        notes.push(format!("m={m}: size {m}"));
    }
    outcome(pass, format!("{} at every coordinate", notes.join(", ")))
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = 0;
    let mut made = 0;
    while made < 100 {
        let file = match made % 10 {
            8 => {
                let (q, d) = [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)][rng.gen_range(0..5)];
                CertificateFile::from_extremal_fqt(&construct_extremal_fqt(q, d, rng.gen()).unwrap(), None)
            }
            9 => {
                let (m, x, y) = [(-7, 0, 1), (-1, 1, 1), (-3, 0, 1), (-2, 0, 1), (1, 1, 0)][rng.gen_range(0..5)];
                let k = QuadField::new(m).unwrap();
                CertificateFile::from_numfield(&construct_certificate(&k.elem(x, y).unwrap(), 3, DEFAULT_BRIDGE_BUDGET).unwrap())
            }
            _ => {
                let q = [2u64, 3][rng.gen_range(0..2)];
                let f = FieldParams::new(q).unwrap();
                let coeffs: Vec<Poly> = (0..3).map(|_| Poly::from_index(f, rng.gen_range(1..pow(q, 2) as u64))).collect();
                let Ok(a) = CoeffTuple::new(coeffs) else { continue };
                if !check_criteria(&a).passes {
                    continue;
                }
                let n_box = a.height().max(1) + rng.gen_range(0..2);
                let b = balanced_multiset(&a, n_box, &cfg()).unwrap();
                if rng.gen() {
                    CertificateFile::from_balanced(&a, n_box, &b)
                } else {
                    CertificateFile::from_certificate(&a, Some(n_box), &certificate_from_balanced(&b))
                }
            }
        };
        made += 1;
        let text = file.to_json();
        let ok = match CertificateFile::from_json(&text) {
            Ok(back) => back == file && back.to_json() == text && back.verify() == Ok(true),
            Err(_) => false,
        };
        mismatches += usize::from(!ok);
    }
    outcome(mismatches == 0, format!("{made} certificates, {mismatches} mismatches"))
}

fn main() {
    let grid = passing_grid();
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("counting formula", Box::new(|| counting_formula(&grid))),
        ("constructive direction", Box::new(|| constructive_direction(&grid))),
        ("criteria-failing tuples have no balanced multiset", Box::new(negative_control)),
        ("(1, t^2, t^2+t+1) minimum and order bound", Box::new(big_balanced_instance)),
        ("extremal F_q[t] triples", Box::new(extremal_fqt)),
        ("extremal integer triples", Box::new(extremal_int)),
        ("heuristic model", Box::new(heuristic)),
        ("quadratic field pipeline and control", Box::new(numfield_pipeline)),
        ("root-of-unity twist", Box::new(twist)),
        ("certificate round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
