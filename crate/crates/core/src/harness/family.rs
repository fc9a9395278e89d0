//! Deterministic module families: the projective sweep of cyclic quotients,
//! their syzygies, seeded extension closure and random controls.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::SuiteConfig;
use crate::algebra::ARing;
use crate::linalg::ScalarMatrix;
use crate::modules::{
    extension_module, first_syzygy, hom_space, resolve, FreeMatrix, ModulePresentation,
    Resolution,
};

/// A family member together with its resolution. Syzygy members reuse the
/// parent's resolution tail instead of recomputing it.
pub struct ResolvedMember {
    pub source: String,
    pub length: u64,
    pub free: bool,
    pub resolution: Resolution,
    pub presentation: Option<Arc<ModulePresentation>>,
}

impl ResolvedMember {
    pub fn certified(&self) -> bool {
        self.resolution.periodic.is_some()
    }
}

/// All nonzero linear forms up to scalar: coefficient tuples over the
/// variable generators with the first nonzero coefficient normalized to 1,
/// enumerated deterministically. Capped to keep huge sweeps tractable.
pub fn projective_linear_forms(p: u64, nvars: usize, cap: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..nvars {
        let mut coeffs = vec![0u64; nvars];
        coeffs[lead] = 1;
        loop {
            out.push(coeffs.clone());
            if out.len() >= cap {
                return out;
            }
            let mut pos = lead + 1;
            while pos < nvars {
                coeffs[pos] += 1;
                if coeffs[pos] < p {
                    break;
                }
                coeffs[pos] = 0;
                pos += 1;
            }
            if pos == nvars {
                break;
            }
        }
    }
    out
}

fn linear_element(algebra: &ARing, coeffs: &[u64]) -> Vec<u64> {
    let mut el = algebra.zero();
    for (g, &c) in algebra.generators().iter().zip(coeffs) {
        if c != 0 {
            el = algebra.el_add(&el, &algebra.el_scale(c, g));
        }
    }
    el
}

fn linear_name(algebra: &ARing, coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (v, &c) in algebra.vars().iter().zip(coeffs) {
        match c {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{c}{v}")),
        }
    }
    parts.join("+")
}

/// A random cyclic presentation A/(f_1..f_s) with entries in the maximal
/// ideal. Cyclic quotients by several generic elements have unbounded Betti
/// numbers over every short non-hypersurface test ring; wider random
/// presentations often decompose into bounded cyclics over Lescot rings and
/// would defeat the control group's purpose.
fn random_presentation(algebra: &ARing, rng: &mut ChaCha20Rng) -> ModulePresentation {
    let p = algebra.field().modulus();
    let n = algebra.dim();
    let t = 1;
    let s = 2 + (rng.gen_range(0..2u8) as usize);
    let mut entries = Vec::with_capacity(t * s);
    for _ in 0..t * s {
        let mut e = vec![0u64; n];
        for x in e.iter_mut().skip(1) {
            *x = rng.gen_range(0..p);
        }
        entries.push(e);
    }
    ModulePresentation::new(FreeMatrix::from_entries(algebra.clone(), t, s, &entries))
}

/// The control-group generator, exposed for sanity checks: a seeded random
/// minimal presentation (expected to have unbounded Betti numbers over
/// short non-hypersurface rings).
pub fn random_control(algebra: &ARing, seed: u64, index: usize) -> ModulePresentation {
    let mut rng =
        ChaCha20Rng::seed_from_u64(seed.wrapping_add(0xc0).wrapping_add(index as u64 * 7919));
    random_presentation(algebra, &mut rng)
}

/// Runs the full deterministic family for one ring: the free module, the
/// projective cyclic sweep, two syzygy stages of each cyclic, seeded
/// extension closure over certified-bounded members, and random controls.
pub fn run_family(algebra: &ARing, cfg: &SuiteConfig) -> Vec<ResolvedMember> {
    let opts = cfg.resolve_options();
    let p = algebra.field().modulus();
    let nvars = algebra.vars().len();

    let mut jobs: Vec<(String, Arc<ModulePresentation>)> = Vec::new();
    jobs.push((
        "free A".to_string(),
        Arc::new(ModulePresentation::free(algebra.clone(), 1)),
    ));
    for coeffs in projective_linear_forms(p, nvars, 128) {
        let el = linear_element(algebra, &coeffs);
        jobs.push((
            format!("cyclic A/({})", linear_name(algebra, &coeffs)),
            Arc::new(ModulePresentation::cyclic(algebra.clone(), &el)),
        ));
    }
    for i in 0..cfg.controls {
        let mut rng =
            ChaCha20Rng::seed_from_u64(cfg.seed.wrapping_add(0xc0).wrapping_add(i as u64 * 7919));
        jobs.push((
            format!("control #{i}"),
            Arc::new(random_presentation(algebra, &mut rng)),
        ));
    }

    let ell_a = algebra.dim() as u64;
    let resolved: Vec<ResolvedMember> = jobs
        .par_iter()
        .map(|(source, pres)| {
            let res = resolve(pres, &opts);
            let length = pres.length() as u64;
            ResolvedMember {
                source: source.clone(),
                length,
                // free of rank beta_0 exactly when the length matches
                free: length == res.betti[0] * ell_a,
                resolution: res,
                presentation: Some(pres.clone()),
            }
        })
        .collect();

    // syzygies of the cyclic members, read off the parent resolutions
    let mut members: Vec<ResolvedMember> = Vec::new();
    let mut syzygies: Vec<ResolvedMember> = Vec::new();
    for member in resolved {
        if member.source.starts_with("cyclic") {
            for j in 1..=2usize {
                let Some(shifted) = member.resolution.shift(j, cfg.window) else {
                    continue;
                };
                let pres = member
                    .resolution
                    .syzygy_presentation(j)
                    .map(Arc::new);
                let length = shifted.syzygy_lengths[0];
                syzygies.push(ResolvedMember {
                    source: format!("syzygy {j} of {}", member.source),
                    length,
                    free: length == shifted.betti[0] * ell_a,
                    resolution: shifted,
                    presentation: pres,
                });
            }
        }
        members.push(member);
    }
    members.extend(syzygies);

    // extension closure over certified-bounded members
    let mut pool: Vec<(String, Arc<ModulePresentation>, Vec<u64>)> = members
        .iter()
        .filter(|m| m.certified() && !m.free)
        .filter_map(|m| {
            m.presentation
                .as_ref()
                .map(|p| (m.source.clone(), p.clone(), m.resolution.betti.clone()))
        })
        .collect();
    if pool.is_empty() {
        // no certified non-free seeds: extensions of the free module only
        pool = members
            .iter()
            .take(1)
            .filter_map(|m| {
                m.presentation
                    .as_ref()
                    .map(|p| (m.source.clone(), p.clone(), m.resolution.betti.clone()))
            })
            .collect();
    }
    for e in 0..cfg.module_count {
        let mut rng = ChaCha20Rng::seed_from_u64(
            cfg.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(e as u64),
        );
        let a = rng.gen_range(0..pool.len());
        let b = rng.gen_range(0..pool.len());
        let (src_a, pres_a, betti_a) = pool[a].clone();
        let (src_b, pres_b, betti_b) = pool[b].clone();
        let syz = first_syzygy(&pres_a, &opts);
        let homs = hom_space(&syz.omega1, pres_b.action_module());
        let cocycle = if homs.is_empty() {
            ScalarMatrix::zeros(pres_b.length(), syz.omega1.len())
        } else {
            let coeffs: Vec<u64> = (0..homs.len()).map(|_| rng.gen_range(0..p)).collect();
            let field = algebra.field();
            let mut c = ScalarMatrix::zeros(pres_b.length(), syz.omega1.len());
            for (phi, &co) in homs.iter().zip(&coeffs) {
                if co == 0 {
                    continue;
                }
                for i in 0..c.rows() {
                    for j in 0..c.cols() {
                        let v = field.add(c.get(i, j), field.mul(co, phi.get(i, j)));
                        c.set(i, j, v);
                    }
                }
            }
            c
        };
        let ext = Arc::new(extension_module(&pres_a, &pres_b, &cocycle, &opts));
        let res = resolve(&ext, &opts);
        // subadditivity of Betti numbers along an extension
        for (i, &b) in res.betti.iter().enumerate() {
            let bound = betti_a.get(i).copied().unwrap_or(0) + betti_b.get(i).copied().unwrap_or(0);
            if betti_a.get(i).is_some() && betti_b.get(i).is_some() {
                assert!(
                    b <= bound,
                    "extension Betti number exceeded the parent sum at stage {i}"
                );
            }
        }
        let length = ext.length() as u64;
        let member = ResolvedMember {
            source: format!("extension #{e} of ({src_a}; {src_b})"),
            length,
            free: length == res.betti[0] * ell_a,
            resolution: res,
            presentation: Some(ext.clone()),
        };
        if member.certified() && !member.free {
            pool.push((member.source.clone(), ext, member.resolution.betti.clone()));
        }
        members.push(member);
    }

    members
}
