//! The verification suites: evenness over multiplicity-4 complete
//! intersections and monomial CI rings, divisibility over short non-CI
//! rings, curvature-gap divisibility, flat transfer, and the alternating
//! tail / ratio limit laws.

use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::family::{run_family, ResolvedMember};
use super::{Aggregates, ModuleRecord, RingSummary, SuiteConfig, SuiteReport, ToolInfo, Verdict};
use crate::algebra::{build_algebra, tensor_algebra, ARing, RingSpec};
use crate::error::{Error, Result};
use crate::modules::{resolve, restrict_scalars};
use crate::series::alternating_tail;

fn record(id: usize, m: &ResolvedMember) -> ModuleRecord {
    ModuleRecord {
        id,
        source: m.source.clone(),
        length: m.length,
        betti: m.resolution.betti.clone(),
        syzygy_lengths: m.resolution.syzygy_lengths.clone(),
        bounded_flag: m.resolution.bounded_flag,
        periodic: m.resolution.periodic,
        truncated: m.resolution.truncated,
        certified_bounded: m.certified(),
        free: m.free,
        verdicts: Vec::new(),
    }
}

fn aggregates(members: &[ResolvedMember]) -> Aggregates {
    let certified: Vec<&ResolvedMember> = members.iter().filter(|m| m.certified()).collect();
    let certified_nonfree = certified.iter().filter(|m| !m.free).count();
    let g = certified
        .iter()
        .filter(|m| m.length > 0)
        .fold(0u64, |acc, m| gcd(acc, m.length));
    Aggregates {
        module_total: members.len(),
        certified_count: certified.len(),
        certified_nonfree_count: certified_nonfree,
        gcd_certified_lengths: g,
        identity_checks: members.iter().map(|m| m.resolution.identity_checks).sum(),
        msq_checks: members.iter().map(|m| m.resolution.msq_checks).sum(),
        vacuous: certified_nonfree == 0,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    suite: &str,
    cfg: &SuiteConfig,
    ring: Option<RingSummary>,
    ring2: Option<RingSummary>,
    tensor_ring: Option<RingSummary>,
    modules: Vec<ModuleRecord>,
    assertions: Vec<Verdict>,
    observations: Vec<Verdict>,
    agg: Aggregates,
) -> SuiteReport {
    let pass = assertions.iter().all(|v| v.pass);
    SuiteReport {
        tool: ToolInfo::current(),
        suite: suite.to_string(),
        config: cfg.clone(),
        ring,
        ring2,
        tensor_ring,
        modules,
        assertions,
        observations,
        aggregates: agg,
        pass,
    }
}

/// Shared body of the evenness suites: every certified-bounded module must
/// have even length and even syzygy lengths at every recorded stage, and
/// the aggregate gcd must be at least 2.
fn evenness_suite(suite: &str, algebra: &ARing, cfg: &SuiteConfig) -> SuiteReport {
    let members = run_family(algebra, cfg);
    let mut records = Vec::new();
    let mut all_even = true;
    let mut all_syz_even = true;
    for (id, m) in members.iter().enumerate() {
        let mut rec = record(id, m);
        if m.certified() {
            let even = m.length % 2 == 0;
            let syz_even = m.resolution.syzygy_lengths.iter().all(|&l| l % 2 == 0);
            all_even &= even;
            all_syz_even &= syz_even;
            rec.verdicts.push(Verdict::new(
                "even_length",
                even,
                format!("l = {}", m.length),
            ));
            rec.verdicts.push(Verdict::new(
                "even_syzygy_lengths",
                syz_even,
                format!("{:?}", m.resolution.syzygy_lengths),
            ));
        }
        records.push(rec);
    }
    let agg = aggregates(&members);
    let assertions = vec![
        Verdict::new(
            "certified_lengths_even",
            all_even,
            "2 divides l(M) for every certified-bounded module",
        ),
        Verdict::new(
            "certified_syzygy_lengths_even",
            all_syz_even,
            "2 divides l(Omega^i M) at every recorded stage",
        ),
        Verdict::new(
            "aggregate_gcd_at_least_2",
            agg.gcd_certified_lengths >= 2,
            format!("gcd of certified lengths = {}", agg.gcd_certified_lengths),
        ),
    ];
    finish(
        suite,
        cfg,
        Some(RingSummary::of(algebra)),
        None,
        None,
        records,
        assertions,
        Vec::new(),
        agg,
    )
}

/// Evenness of lengths over a multiplicity-4 complete intersection
/// candidate: requires a short ring with Hilbert function [1, 2, 1].
pub fn verify_ci4(algebra: &ARing, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let class = algebra.classify();
    if !class.ci4_candidate {
        return Err(Error::WrongRingClass(format!(
            "ci4 suite requires Hilbert [1,2,1]; this ring has {:?}",
            algebra.hilbert().h
        )));
    }
    Ok(evenness_suite("ci4", algebra, cfg))
}

/// Evenness over k[X1..Xd]/(X1^a1..Xd^ad) with d >= 2, all exponents >= 2
/// and at least two of them even.
pub fn verify_monomial_ci(
    characteristic: u64,
    exponents: &[u32],
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    if exponents.len() < 2 {
        return Err(Error::BadExponents(
            "need at least two exponents".to_string(),
        ));
    }
    if exponents.iter().any(|&a| a < 2) {
        return Err(Error::BadExponents(
            "every exponent must be at least 2".to_string(),
        ));
    }
    if exponents.iter().filter(|&&a| a % 2 == 0).count() < 2 {
        return Err(Error::BadExponents(
            "at least two exponents must be even".to_string(),
        ));
    }
    let names = ["x", "y", "z", "w"];
    let vars: Vec<String> = (0..exponents.len())
        .map(|i| {
            if exponents.len() <= names.len() {
                names[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect();
    let relations: Vec<String> = vars
        .iter()
        .zip(exponents)
        .map(|(v, a)| format!("{v}^{a}"))
        .collect();
    let spec = RingSpec {
        name: format!(
            "monomial-ci({})",
            exponents
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        characteristic,
        vars,
        relations,
        graded: true,
        truncate: None,
        degree_cap: None,
    };
    let algebra = build_algebra(&spec)?;
    Ok(evenness_suite("monomial-ci", &algebra, cfg))
}

/// Divisibility over a short non-CI ring: certified-bounded lengths must
/// share a common divisor >= 2; the (h+1)-divisibility is reported, and
/// free modules must have lengths divisible by l(A).
pub fn verify_short_nonci(algebra: &ARing, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let class = algebra.classify();
    let hd = algebra.hilbert();
    if !class.short || class.ci4_candidate || hd.embdim < 2 {
        return Err(Error::WrongRingClass(format!(
            "short suite requires a short non-CI4 ring with embdim >= 2; Hilbert {:?}",
            hd.h
        )));
    }
    let members = run_family(algebra, cfg);
    let ell_a = algebra.dim() as u64;
    let mut records = Vec::new();
    let mut frees_ok = true;
    for (id, m) in members.iter().enumerate() {
        let mut rec = record(id, m);
        if m.free && m.certified() {
            let ok = m.length % ell_a == 0;
            frees_ok &= ok;
            rec.verdicts.push(Verdict::new(
                "free_length_divisible_by_l_A",
                ok,
                format!("l = {}, l(A) = {ell_a}", m.length),
            ));
        }
        records.push(rec);
    }
    let agg = aggregates(&members);
    let assertions = vec![
        Verdict::new(
            "aggregate_gcd_at_least_2",
            agg.gcd_certified_lengths >= 2,
            format!("gcd of certified lengths = {}", agg.gcd_certified_lengths),
        ),
        Verdict::new(
            "free_lengths_divisible_by_l_A",
            frees_ok,
            format!("l(A) = {ell_a}"),
        ),
    ];
    let mut observations = vec![Verdict::new(
        "certified_nonfree_count",
        !agg.vacuous,
        format!("{} certified-bounded non-free modules", agg.certified_nonfree_count),
    )];
    if let Some(les) = class.lescot {
        if les.r1 == 1 {
            let div = les.h + 1;
            let ok = members
                .iter()
                .filter(|m| m.certified() && m.length > 0)
                .all(|m| m.length % div == 0);
            observations.push(Verdict::new(
                "h_plus_one_divides_certified_lengths",
                ok,
                format!("h + 1 = {div}"),
            ));
        }
    }
    Ok(finish(
        "short",
        cfg,
        Some(RingSummary::of(algebra)),
        None,
        None,
        records,
        assertions,
        observations,
        agg,
    ))
}

/// Curvature-gap divisibility over a Lescot ring with integer roots
/// r1 < r2: modules certified periodic or with a trailing Betti-ratio
/// plateau strictly below r2 - 1/2 must have (r2+1) | l(Omega^i) for all
/// recorded i >= 1.
pub fn verify_curv(algebra: &ARing, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let class = algebra.classify();
    let Some(les) = class.lescot else {
        return Err(Error::WrongRingClass(
            "curv suite requires a Lescot classification with integer roots r1 < r2".to_string(),
        ));
    };
    let members = run_family(algebra, cfg);
    let div = les.r2 + 1;
    let mut records = Vec::new();
    let mut all_ok = true;
    let mut qualifying_nonfree = 0usize;
    for (id, m) in members.iter().enumerate() {
        let mut rec = record(id, m);
        let qualifies = qualifies_low_curvature(m, les.r2, cfg.window);
        if qualifies {
            if !m.free {
                qualifying_nonfree += 1;
            }
            let ok = m
                .resolution
                .syzygy_lengths
                .iter()
                .skip(1)
                .all(|&l| l % div == 0);
            all_ok &= ok;
            rec.verdicts.push(Verdict::new(
                "r2_plus_one_divides_syzygy_lengths",
                ok,
                format!("divisor {div}, lengths {:?}", m.resolution.syzygy_lengths),
            ));
        } else {
            rec.verdicts.push(Verdict::new(
                "excluded_curvature_not_below_r2",
                true,
                "curvature estimate not below r2 - 1/2".to_string(),
            ));
        }
        records.push(rec);
    }
    let agg = aggregates(&members);
    let assertions = vec![Verdict::new(
        "r2_plus_one_divides_low_curvature_syzygies",
        all_ok,
        format!("divisor r2 + 1 = {div}"),
    )];
    let observations = vec![Verdict::new(
        "qualifying_nonfree_count",
        qualifying_nonfree > 0,
        format!("{qualifying_nonfree} qualifying non-free modules"),
    )];
    Ok(finish(
        "curv",
        cfg,
        Some(RingSummary::of(algebra)),
        None,
        None,
        records,
        assertions,
        observations,
        agg,
    ))
}

fn qualifies_low_curvature(m: &ResolvedMember, r2: u64, window: usize) -> bool {
    if m.certified() {
        return true;
    }
    if m.resolution.truncated {
        return false;
    }
    let betti = &m.resolution.betti;
    if betti.last() == Some(&0) {
        return true; // finite free resolution
    }
    if betti.len() < window + 1 {
        return false;
    }
    let tail = &betti[betti.len() - window - 1..];
    // every trailing ratio b_{n+1}/b_n must be < r2 - 1/2, by cross
    // multiplication: 2 b_{n+1} < (2 r2 - 1) b_n
    tail.windows(2)
        .all(|w| w[0] > 0 && 2 * w[1] < (2 * r2 - 1) * w[0])
}

/// Flat transfer along R -> S = R (x) T: certified-bounded S-modules keep
/// their length over R, stay certified-bounded over R, and inherit the
/// divisibility that R's own suite establishes.
pub fn verify_flat(r: &ARing, t: &ARing, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let s = tensor_algebra(r, t)?;
    let members = run_family(&s, cfg);
    let nt = t.dim();
    // canonical inclusion R -> R (x) T on generator classes
    let images: Vec<Vec<u64>> = r
        .generators()
        .iter()
        .map(|v| {
            let mut img = s.zero();
            for (i, &c) in v.iter().enumerate() {
                img[i * nt] = c;
            }
            img
        })
        .collect();
    let r_class = r.classify();
    let transfer_divisor: Option<u64> = r_class.ci4_candidate.then_some(2);

    let mut records = Vec::new();
    let mut lengths_ok = true;
    let mut r_bounded_ok = true;
    let mut transfer_ok = true;
    let mut restricted_count = 0usize;
    for (id, m) in members.iter().enumerate() {
        let mut rec = record(id, m);
        if m.certified() {
            if let Some(pres) = &m.presentation {
                let restricted = restrict_scalars(r, &images, pres.action_module())?;
                let ell_r = restricted.length() as u64;
                let len_ok = ell_r == m.length;
                lengths_ok &= len_ok;
                let r_res = resolve(&restricted, &cfg.resolve_options());
                let bounded = r_res.periodic.is_some();
                r_bounded_ok &= bounded;
                restricted_count += 1;
                rec.verdicts.push(Verdict::new(
                    "length_preserved_over_R",
                    len_ok,
                    format!("l_S = {}, l_R = {ell_r}", m.length),
                ));
                rec.verdicts.push(Verdict::new(
                    "r_betti_certified_bounded",
                    bounded,
                    format!("beta^R = {:?}", r_res.betti),
                ));
                if let Some(d) = transfer_divisor {
                    let ok = m.length % d == 0;
                    transfer_ok &= ok;
                    rec.verdicts.push(Verdict::new(
                        "r_divisor_transfers",
                        ok,
                        format!("{d} | l_S(N) = {}", m.length),
                    ));
                }
            }
        }
        records.push(rec);
    }
    let agg = aggregates(&members);
    let mut assertions = vec![
        Verdict::new(
            "lengths_preserved_over_R",
            lengths_ok,
            format!("{restricted_count} certified modules restricted"),
        ),
        Verdict::new(
            "restricted_betti_certified_bounded",
            r_bounded_ok,
            "R-resolutions of certified S-modules are certified bounded",
        ),
    ];
    if let Some(d) = transfer_divisor {
        assertions.push(Verdict::new(
            "r_divisibility_transfers",
            transfer_ok,
            format!("{d} divides l_S(N) for every certified-bounded N"),
        ));
    }
    let restricted_gcd = members
        .iter()
        .filter(|m| m.certified() && m.length > 0 && m.presentation.is_some())
        .fold(0u64, |acc, m| gcd(acc, m.length));
    let observations = vec![Verdict::new(
        "restricted_lengths_gcd",
        restricted_gcd >= 2,
        format!("gcd of transferred lengths = {restricted_gcd}"),
    )];
    Ok(finish(
        "flat",
        cfg,
        Some(RingSummary::of(r)),
        Some(RingSummary::of(t)),
        Some(RingSummary::of(&s)),
        records,
        assertions,
        observations,
        agg,
    ))
}

/// Appendix limit law and the Betti ratio law, in exact rational
/// arithmetic: for theta_n = (h^{n+1}-1)/(h-1) and theta_n = h^n the
/// alternating tail r_{n_max} must be within 1e-6 of 1/(h+1), and the
/// consecutive ratios must converge to h.
pub fn verify_limits(h_list: &[u64], n_max: usize, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if let Some(&h) = h_list.iter().find(|&&h| h < 2) {
        return Err(Error::InvalidParameter(format!(
            "limit law requires growth rate > 1; got h = {h}"
        )));
    }
    if n_max < 60 {
        return Err(Error::InvalidParameter(format!(
            "n_max must be at least 60; got {n_max}"
        )));
    }
    let tol_limit = BigRational::new(BigInt::one(), BigInt::from(1_000_000u64));
    let tol_ratio = BigRational::new(BigInt::one(), BigInt::from(100u64));
    let mut assertions = Vec::new();
    for &h in h_list {
        let hb = BigInt::from(h);
        let target = BigRational::new(BigInt::one(), BigInt::from(h + 1));
        let powers: Vec<BigInt> = (0..=n_max).map(|n| hb.pow(n as u32)).collect();
        let sums: Vec<BigInt> = (0..=n_max)
            .map(|n| (hb.pow(n as u32 + 1) - 1) / (&hb - 1))
            .collect();
        for (kind, theta) in [("geometric", &powers), ("partial-sum", &sums)] {
            let r = alternating_tail(theta, n_max);
            let err = (&r - &target).abs();
            assertions.push(Verdict::new(
                format!("alternating_tail_h{h}_{kind}"),
                err < tol_limit,
                format!(
                    "|r_{n_max} - 1/{}| = {}",
                    h + 1,
                    err.to_string()
                ),
            ));
            let hq = BigRational::from_integer(hb.clone());
            let ratio_ok = theta[n_max - cfg.window..].windows(2).all(|w| {
                let q = BigRational::new(w[1].clone(), w[0].clone());
                (q - &hq).abs() < tol_ratio
            });
            assertions.push(Verdict::new(
                format!("ratio_limit_h{h}_{kind}"),
                ratio_ok,
                format!("trailing ratios within 1/100 of {h}"),
            ));
        }
    }
    let agg = Aggregates {
        module_total: 0,
        certified_count: 0,
        certified_nonfree_count: 0,
        gcd_certified_lengths: 0,
        identity_checks: 0,
        msq_checks: 0,
        vacuous: false,
    };
    Ok(finish(
        "limits",
        cfg,
        None,
        None,
        None,
        Vec::new(),
        assertions,
        Vec::new(),
        agg,
    ))
}

/// Lossy CSV projection of a report: one row per module.
pub fn report_to_csv(report: &SuiteReport) -> String {
    let max_betti = report
        .modules
        .iter()
        .map(|m| m.betti.len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str("id,source,length");
    for i in 0..max_betti {
        out.push_str(&format!(",beta{i}"));
    }
    out.push_str(",bounded,periodic_i,periodic_j\n");
    for m in &report.modules {
        out.push_str(&format!("{},\"{}\",{}", m.id, m.source, m.length));
        for i in 0..max_betti {
            match m.betti.get(i) {
                Some(b) => out.push_str(&format!(",{b}")),
                None => out.push(','),
            }
        }
        let (pi, pj) = m
            .periodic
            .map(|c| (c.i.to_string(), c.j.to_string()))
            .unwrap_or_default();
        out.push_str(&format!(",{},{},{}\n", m.bounded_flag, pi, pj));
    }
    out
}
