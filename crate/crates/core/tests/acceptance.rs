//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines. The tests serialize on a global lock so that the
//! stated runtime budgets are measured on an otherwise idle process.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use artinres::algebra::{build_algebra, tensor_algebra, ARing, RingSpec};
use artinres::harness::{
    random_control, run_family, verify_ci4, verify_flat, verify_limits, verify_monomial_ci,
    verify_short_nonci, SuiteConfig, SuiteReport,
};
use artinres::modules::{
    first_syzygy, resolve, restrict_scalars, tor_dims, ModulePresentation, ResolveOptions,
};
use artinres::series::alternating_tail;

fn lock() -> MutexGuard<'static, ()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

fn ring(name: &str, vars: &[&str], relations: &[&str]) -> ARing {
    build_algebra(&RingSpec {
        name: name.into(),
        characteristic: 7,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        relations: relations.iter().map(|s| s.to_string()).collect(),
        graded: true,
        truncate: None,
        degree_cap: None,
    })
    .unwrap()
}

fn m2zero() -> ARing {
    ring("m2zero", &["x", "y"], &["x^2", "x*y", "y^2"])
}

fn x2y2() -> ARing {
    ring("x2y2", &["x", "y"], &["x^2", "y^2"])
}

fn h132() -> ARing {
    ring("h132", &["x", "y", "z"], &["x^2", "y^2", "z^2", "y*z"])
}

fn pass(criterion: usize, name: &str, detail: String) {
    println!("ACCEPTANCE {criterion} ({name}): PASS: {detail}");
}

/// Criterion 1: residue-field Betti laws over GF(7), exact, under 30 s:
/// beta_n(k) = 2^n over k[x,y]/(x,y)^2 up to n = 12, and beta_n(k) = n + 1
/// over k[x,y]/(x^2,y^2) up to n = 20, the latter cross-checked by Tor.
#[test]
fn criterion_1_residue_field_betti_laws() {
    let _g = lock();
    let t0 = Instant::now();

    let a = m2zero();
    let k = ModulePresentation::residue_field(a);
    let res = resolve(&k, &ResolveOptions::with_stages(12));
    assert!(!res.truncated);
    let doubling: Vec<u64> = (0..=12).map(|n| 1u64 << n).collect();
    assert_eq!(res.betti, doubling);

    let b = x2y2();
    let kb = ModulePresentation::residue_field(b);
    let res_b = resolve(&kb, &ResolveOptions::with_stages(21));
    let linear: Vec<u64> = (1..=22).collect();
    assert_eq!(res_b.betti[..21], linear[..21]);
    // CI case cross-checked against Tor dimensions
    let tor = tor_dims(&res_b, kb.action_module(), 20);
    let expected: Vec<usize> = (1..=21).collect();
    assert_eq!(tor, expected);

    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(30), "took {dt:?}");
    pass(
        1,
        "residue-field Betti laws",
        format!("2^n to stage 12 and n+1 to stage 20 in {dt:?}"),
    );
}

fn recheck_evenness(report: &SuiteReport) -> (usize, usize) {
    let mut certified = 0;
    let mut checked_stages = 0;
    for m in &report.modules {
        if m.certified_bounded {
            certified += 1;
            assert_eq!(m.length % 2, 0, "odd length in {}", m.source);
            for &l in &m.syzygy_lengths {
                assert_eq!(l % 2, 0, "odd syzygy length in {}", m.source);
                checked_stages += 1;
            }
        }
    }
    (certified, checked_stages)
}

/// Criterion 2: periodicity and evenness over k[x,y]/(x^2,y^2): full
/// P^1(GF(7)) cyclic family plus 100 seeded extension-closure modules;
/// every certified-bounded module has even length and even syzygy lengths
/// at every stage <= 12; aggregate gcd >= 2; under 2 minutes.
#[test]
fn criterion_2_ci4_evenness() {
    let _g = lock();
    let t0 = Instant::now();
    let cfg = SuiteConfig {
        seed: 1,
        module_count: 100,
        controls: 10,
        stages: 12,
        ..Default::default()
    };
    let report = verify_ci4(&x2y2(), &cfg).unwrap();
    assert!(report.pass);
    let cyclics = report
        .modules
        .iter()
        .filter(|m| m.source.starts_with("cyclic"))
        .count();
    assert_eq!(cyclics, 8, "full projective line over GF(7)");
    let extensions = report
        .modules
        .iter()
        .filter(|m| m.source.starts_with("extension"))
        .count();
    assert_eq!(extensions, 100);
    let (certified, stages) = recheck_evenness(&report);
    assert!(report.aggregates.gcd_certified_lengths >= 2);
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(120), "took {dt:?}");
    pass(
        2,
        "CI-4 evenness",
        format!(
            "{certified} certified modules, {stages} even syzygy lengths, gcd = {} in {dt:?}",
            report.aggregates.gcd_certified_lengths
        ),
    );
}

/// Criterion 3: the syzygy length identity l(Omega^{i+1}) =
/// beta_i l(A) - l(Omega^i) holds exactly for every module and stage across
/// suite runs over rings of dimension 3 through 12, with at least 10^4
/// instances recomputed here from the reported tables.
#[test]
fn criterion_3_syzygy_length_identity() {
    let _g = lock();
    let sweeps: Vec<(ARing, SuiteConfig)> = vec![
        (
            m2zero(),
            SuiteConfig {
                seed: 2,
                module_count: 40,
                controls: 8,
                stages: 12,
                matrix_cap: 2048,
                ..Default::default()
            },
        ),
        (
            x2y2(),
            SuiteConfig {
                seed: 2,
                module_count: 260,
                controls: 10,
                stages: 12,
                ..Default::default()
            },
        ),
        (
            h132(),
            SuiteConfig {
                seed: 2,
                module_count: 40,
                controls: 8,
                stages: 10,
                matrix_cap: 1024,
                ..Default::default()
            },
        ),
        (
            ring("x4y2", &["x", "y"], &["x^4", "y^2"]),
            SuiteConfig {
                seed: 2,
                module_count: 40,
                controls: 8,
                stages: 10,
                matrix_cap: 2048,
                ..Default::default()
            },
        ),
        (
            ring("xyz222", &["x", "y", "z"], &["x^2", "y^2", "z^2"]),
            SuiteConfig {
                seed: 2,
                module_count: 30,
                controls: 6,
                stages: 10,
                matrix_cap: 2048,
                ..Default::default()
            },
        ),
        (
            {
                let r = ring("uv22", &["u", "v"], &["u^2", "v^2"]);
                let t = ring("z3", &["z"], &["z^3"]);
                tensor_algebra(&r, &t).unwrap()
            },
            SuiteConfig {
                seed: 2,
                module_count: 10,
                controls: 6,
                stages: 10,
                matrix_cap: 1024,
                ..Default::default()
            },
        ),
    ];
    let mut instances = 0usize;
    let mut dims = Vec::new();
    for (algebra, cfg) in &sweeps {
        dims.push(algebra.dim());
        let ell_a = algebra.dim() as u64;
        for member in run_family(algebra, cfg) {
            let betti = &member.resolution.betti;
            let lengths = &member.resolution.syzygy_lengths;
            assert_eq!(betti.len(), lengths.len());
            for i in 1..lengths.len() {
                assert_eq!(
                    lengths[i],
                    betti[i - 1] * ell_a - lengths[i - 1],
                    "identity failed for {} at stage {i}",
                    member.source
                );
                instances += 1;
            }
        }
    }
    assert!((3..=12).contains(dims.iter().min().unwrap()));
    assert!(dims.iter().max() == Some(&12));
    assert!(
        instances >= 10_000,
        "only {instances} identity instances checked"
    );
    pass(
        3,
        "syzygy length identity",
        format!("{instances} exact instances over rings of dim {dims:?}"),
    );
}

/// Criterion 4: evenness over GF(7)[x,y]/(x^4, y^2) with a family of at
/// least 50 modules; every certified-bounded module has even length; under
/// 2 minutes.
#[test]
fn criterion_4_monomial_ci_evenness() {
    let _g = lock();
    let t0 = Instant::now();
    let cfg = SuiteConfig {
        seed: 3,
        module_count: 30,
        controls: 10,
        stages: 10,
        matrix_cap: 2048,
        ..Default::default()
    };
    let report = verify_monomial_ci(7, &[4, 2], &cfg).unwrap();
    assert!(report.pass);
    assert!(report.modules.len() >= 50, "{} modules", report.modules.len());
    let (certified, _) = recheck_evenness(&report);
    assert!(certified > 0);
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(120), "took {dt:?}");
    pass(
        4,
        "monomial CI evenness",
        format!(
            "{} modules, {certified} certified even, gcd = {} in {dt:?}",
            report.modules.len(),
            report.aggregates.gcd_certified_lengths
        ),
    );
}

/// Criterion 5: flat transfer across S = k[u,v]/(u^2,v^2) (x) k[z]/(z^3):
/// at least 20 certified-bounded S-modules keep their length over R and
/// stay certified-bounded over R; the witness S/(u) has Betti sequence 1
/// over S and 3 over R, both periodic; under 2 minutes.
#[test]
fn criterion_5_flat_transfer() {
    let _g = lock();
    let t0 = Instant::now();
    let r = ring("uv22", &["u", "v"], &["u^2", "v^2"]);
    let t = ring("z3", &["z"], &["z^3"]);
    let cfg = SuiteConfig {
        seed: 4,
        module_count: 10,
        controls: 6,
        stages: 12,
        matrix_cap: 1024,
        ..Default::default()
    };
    let report = verify_flat(&r, &t, &cfg).unwrap();
    assert!(report.pass);
    let restricted = report
        .modules
        .iter()
        .filter(|m| m.verdicts.iter().any(|v| v.name == "length_preserved_over_R"))
        .count();
    assert!(restricted >= 20, "only {restricted} certified S-modules restricted");

    // the witness N = S/(u)
    let witness = report
        .modules
        .iter()
        .find(|m| m.source == "cyclic A/(u)")
        .expect("witness in the projective sweep");
    assert_eq!(witness.length, 6);
    assert!(witness.betti.iter().all(|&b| b == 1));
    assert!(witness.certified_bounded);
    // direct restriction of the witness: beta^R identically 3, periodic
    let s = tensor_algebra(&r, &t).unwrap();
    let u_in_s = {
        let mut v = s.zero();
        v[t.dim()] = 1;
        v
    };
    let m = ModulePresentation::cyclic(s.clone(), &u_in_s);
    let images: Vec<Vec<u64>> = r
        .generators()
        .iter()
        .map(|g| {
            let mut img = s.zero();
            for (i, &c) in g.iter().enumerate() {
                img[i * t.dim()] = c;
            }
            img
        })
        .collect();
    let over_r = restrict_scalars(&r, &images, m.action_module()).unwrap();
    assert_eq!(over_r.length(), 6);
    let res_r = resolve(&over_r, &ResolveOptions::with_stages(10));
    assert_eq!(res_r.betti, vec![3; 11]);
    assert!(res_r.periodic.is_some());

    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(120), "took {dt:?}");
    pass(
        5,
        "flat transfer",
        format!("{restricted} modules transferred, witness beta^S = 1 / beta^R = 3 in {dt:?}"),
    );
}

/// Criterion 6: the appendix limit law in exact rationals: for xi in
/// {2, 3, 5} and both theta shapes, |r_60 - 1/(xi+1)| < 1e-6; under 1 s.
#[test]
fn criterion_6_alternating_tail_limit() {
    let _g = lock();
    let t0 = Instant::now();
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000u64));
    for xi in [2u64, 3, 5] {
        let b = BigInt::from(xi);
        let target = BigRational::new(BigInt::one(), BigInt::from(xi + 1));
        let powers: Vec<BigInt> = (0..=60).map(|n| b.pow(n)).collect();
        let sums: Vec<BigInt> = (0..=60).map(|n| (b.pow(n + 1) - 1) / (&b - 1)).collect();
        for theta in [&powers, &sums] {
            let err = (alternating_tail(theta, 60) - &target).abs();
            assert!(err < tol, "xi = {xi}: error {err}");
        }
    }
    let report = verify_limits(&[2, 3, 5], 60, &SuiteConfig::default()).unwrap();
    assert!(report.pass);
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(1), "took {dt:?}");
    pass(
        6,
        "alternating tail limit",
        format!("r_60 within 1e-6 of 1/(xi+1) for xi in {{2,3,5}} in {dt:?}"),
    );
}

/// Criterion 7: m^2 annihilates every syzygy over every ring with m^3 = 0
/// in the suite set. The resolution engine asserts this on every computed
/// kernel; here the check counters are verified to be live and a sample of
/// syzygy modules is re-verified directly.
#[test]
fn criterion_7_msq_annihilation() {
    let _g = lock();
    let cfg = SuiteConfig {
        seed: 5,
        module_count: 12,
        controls: 4,
        stages: 8,
        matrix_cap: 1024,
        ..Default::default()
    };
    let mut total_checks = 0usize;
    let mut direct = 0usize;
    for algebra in [x2y2(), h132(), m2zero()] {
        assert!(algebra.radical_cube_zero());
        let members = run_family(&algebra, &cfg);
        let checks: usize = members.iter().map(|m| m.resolution.msq_checks).sum();
        assert!(checks > 0, "no m^2 checks ran over {}", algebra.name());
        total_checks += checks;
        // independent re-verification on retained syzygy presentations
        for member in members.iter().take(12) {
            for j in 1..=2 {
                if let Some(pres) = member.resolution.syzygy_presentation(j) {
                    if pres.length() == 0 {
                        continue;
                    }
                    let dims = pres.action_module().radical_filtration_dims();
                    assert_eq!(
                        dims.get(2).copied().unwrap_or(0),
                        0,
                        "m^2 Omega^{j} != 0 for {}",
                        member.source
                    );
                    direct += 1;
                }
            }
        }
    }
    pass(
        7,
        "m^2-annihilation of syzygies",
        format!("{total_checks} kernel checks, {direct} direct re-verifications"),
    );
}

/// Criterion 8: over k[x,y]/(x,y)^2 the first syzygy of 30 random non-free
/// modules is a direct sum of copies of k (all variable actions vanish) and
/// beta_{n+1} = 2 beta_n for 1 <= n <= 10, exactly.
#[test]
fn criterion_8_first_syzygy_law() {
    let _g = lock();
    let algebra = m2zero();
    let opts = ResolveOptions::with_stages(11);
    let mut verified = 0usize;
    let mut index = 0usize;
    while verified < 30 {
        let m = random_control(&algebra, 8, index);
        index += 1;
        let res = resolve(&m, &opts);
        if res.betti.get(1) == Some(&0) {
            continue; // free by accident; the law concerns non-free modules
        }
        let syz = first_syzygy(&m, &opts);
        assert!(
            syz.omega1.actions().iter().all(|a| a.is_zero()),
            "first syzygy has a nonzero variable action"
        );
        assert!(!res.truncated);
        for n in 1..=10 {
            assert_eq!(res.betti[n + 1], 2 * res.betti[n], "at stage {n}");
        }
        verified += 1;
    }
    pass(
        8,
        "first-syzygy law over m^2 = 0",
        format!("{verified} random non-free modules, doubling verified to stage 11"),
    );
}

/// Criterion 9: determinism. Repeating a suite with the same seed yields
/// byte-identical JSON reports, including across separately built rings.
#[test]
fn criterion_9_determinism() {
    let _g = lock();
    let cfg = SuiteConfig {
        seed: 6,
        module_count: 12,
        controls: 4,
        stages: 8,
        matrix_cap: 1024,
        ..Default::default()
    };
    let r1 = verify_ci4(&x2y2(), &cfg).unwrap().to_json();
    let r2 = verify_ci4(&x2y2(), &cfg).unwrap().to_json();
    assert_eq!(r1, r2);
    let s1 = verify_short_nonci(&h132(), &cfg).unwrap().to_json();
    let s2 = verify_short_nonci(&h132(), &cfg).unwrap().to_json();
    assert_eq!(s1, s2);
    pass(
        9,
        "determinism",
        format!("byte-identical reports ({} and {} bytes)", r1.len(), s1.len()),
    );
}

/// Criterion 10: control sanity over k[x,y,z]/(x^2,y^2,z^2,yz): at least
/// 90% of random control presentations have strictly increasing Betti
/// numbers on stages 4 through 10, so certification is not vacuous.
#[test]
fn criterion_10_control_sanity() {
    let _g = lock();
    let algebra = h132();
    let opts = ResolveOptions::with_stages(10);
    let total = 10usize;
    let mut increasing = 0usize;
    for i in 0..total {
        let m = random_control(&algebra, 10, i);
        let res = resolve(&m, &opts);
        let strict = !res.truncated
            && res.betti.len() == 11
            && res.betti[4..=10].windows(2).all(|w| w[0] < w[1]);
        if strict {
            increasing += 1;
        }
    }
    assert!(
        increasing * 10 >= total * 9,
        "{increasing}/{total} strictly increasing"
    );
    pass(
        10,
        "control sanity",
        format!("{increasing}/{total} controls strictly increasing on stages 4..=10"),
    );
}
