//! Hom spaces between action modules, one-sided randomized isomorphism
//! testing (with an exhaustive sweep at small sizes), and Tor dimensions
//! via tensored resolutions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::resolve::Resolution;
use super::{ActionModule, FreeMatrix};
use crate::linalg::{self, ScalarMatrix};

/// Scalar basis of Hom_A(M, N): all matrices commuting with every variable
/// action. Solutions are ln x lm matrices with phi . A^M_g = A^N_g . phi.
pub fn hom_space(m: &ActionModule, n: &ActionModule) -> Vec<ScalarMatrix> {
    assert!(
        Arc::ptr_eq(m.algebra(), n.algebra()),
        "hom space requires modules over the same algebra"
    );
    let field = m.algebra().field();
    let (lm, ln) = (m.len(), n.len());
    if lm == 0 || ln == 0 {
        return Vec::new();
    }
    let unknowns = ln * lm;
    let ngens = m.actions().len();
    let mut sys = ScalarMatrix::zeros(ngens * unknowns, unknowns);
    for (g, (am, an)) in m.actions().iter().zip(n.actions()).enumerate() {
        for i in 0..ln {
            for j in 0..lm {
                let row = g * unknowns + i * lm + j;
                // (phi A^M)_{ij} = sum_k phi_{ik} A^M_{kj}
                for k in 0..lm {
                    let v = am.get(k, j);
                    if v != 0 {
                        let col = i * lm + k;
                        sys.set(row, col, field.add(sys.get(row, col), v));
                    }
                }
                // minus (A^N phi)_{ij} = sum_k A^N_{ik} phi_{kj}
                for k in 0..ln {
                    let v = an.get(i, k);
                    if v != 0 {
                        let col = k * lm + j;
                        sys.set(row, col, field.sub(sys.get(row, col), v));
                    }
                }
            }
        }
    }
    let kernel = linalg::kernel_basis(field, &sys);
    (0..kernel.cols())
        .map(|c| {
            let mut phi = ScalarMatrix::zeros(ln, lm);
            for i in 0..ln {
                for j in 0..lm {
                    phi.set(i, j, kernel.get(i * lm + j, c));
                }
            }
            phi
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoResult {
    Yes,
    No,
    Unknown,
}

const EXHAUSTIVE_REPS_CAP: u128 = 1_000_000;
const EXHAUSTIVE_WORK_CAP: u128 = 2_000_000_000;
const EXHAUSTIVE_DIM_CAP: usize = 8;

/// One-sided randomized isomorphism test. Cheap invariants (length, minimal
/// generators, Hilbert function) decide `No` immediately; otherwise random
/// elements of Hom(M, N) are tested for invertibility. At small sizes the
/// sweep over all hom elements up to scalar is exhaustive, so `No` is then
/// definitive as well.
pub fn is_isomorphic(m: &ActionModule, n: &ActionModule, trials: u64, seed: u64) -> IsoResult {
    iso_test(m, n, trials, seed, true)
}

/// Sampling-only variant for certificate searches, where only a `Yes`
/// matters and a definitive `No` is not worth an exhaustive sweep.
pub(crate) fn is_isomorphic_sampling(
    m: &ActionModule,
    n: &ActionModule,
    trials: u64,
    seed: u64,
) -> IsoResult {
    iso_test(m, n, trials, seed, false)
}

fn iso_test(
    m: &ActionModule,
    n: &ActionModule,
    trials: u64,
    seed: u64,
    allow_exhaustive: bool,
) -> IsoResult {
    if m.len() != n.len() {
        return IsoResult::No;
    }
    if m.len() == 0 {
        return IsoResult::Yes;
    }
    if m.min_generators() != n.min_generators() {
        return IsoResult::No;
    }
    if m.hilbert_function() != n.hilbert_function() {
        return IsoResult::No;
    }
    let hom = hom_space(m, n);
    if hom.is_empty() {
        return IsoResult::No;
    }
    let field = m.algebra().field();
    let p = field.modulus();
    let ell = m.len();
    let dim = hom.len();

    // a cheap randomized pass catches isomorphic pairs quickly
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let coeffs: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
        if combination_is_invertible(&hom, &coeffs, ell, field) {
            return IsoResult::Yes;
        }
    }
    if !allow_exhaustive {
        return IsoResult::Unknown;
    }

    // projective representative count (p^dim - 1)/(p - 1), with overflow care
    let mut reps: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..dim {
        reps += power;
        power = power.saturating_mul(p as u128);
        if reps > EXHAUSTIVE_REPS_CAP {
            break;
        }
    }
    let work = reps.saturating_mul((ell as u128).pow(3));
    if dim <= EXHAUSTIVE_DIM_CAP && reps <= EXHAUSTIVE_REPS_CAP && work <= EXHAUSTIVE_WORK_CAP {
        // scaling does not change invertibility: first nonzero coefficient 1
        for lead in 0..dim {
            let mut coeffs = vec![0u64; dim];
            coeffs[lead] = 1;
            loop {
                if combination_is_invertible(&hom, &coeffs, ell, field) {
                    return IsoResult::Yes;
                }
                // odometer over the positions after the leading coefficient
                let mut pos = lead + 1;
                while pos < dim {
                    coeffs[pos] += 1;
                    if coeffs[pos] < p {
                        break;
                    }
                    coeffs[pos] = 0;
                    pos += 1;
                }
                if pos == dim {
                    break;
                }
            }
        }
        return IsoResult::No;
    }
    IsoResult::Unknown
}

fn combination_is_invertible(
    hom: &[ScalarMatrix],
    coeffs: &[u64],
    ell: usize,
    field: &crate::linalg::PrimeField,
) -> bool {
    let mut candidate = ScalarMatrix::zeros(ell, hom[0].cols());
    for (phi, &c) in hom.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for i in 0..ell {
            for j in 0..phi.cols() {
                let v = field.add(candidate.get(i, j), field.mul(c, phi.get(i, j)));
                candidate.set(i, j, v);
            }
        }
    }
    linalg::rank(field, &candidate) == ell
}

/// Tensors the minimal free resolution with `n` and returns the homology
/// dimensions dim Tor_i for i = 0..=stages. The resolution must have been
/// computed (and retained) at least `stages + 1` differentials deep.
pub fn tor_dims(resolution: &Resolution, n: &ActionModule, stages: usize) -> Vec<usize> {
    assert!(
        Arc::ptr_eq(&resolution.algebra, n.algebra()),
        "tor requires modules over the same algebra"
    );
    let field = n.algebra().field();
    let ln = n.len();
    if ln == 0 {
        return vec![0; stages + 1];
    }
    assert!(
        resolution.differentials.len() > stages
            && resolution.differentials[..=stages].iter().all(|d| d.is_some()),
        "resolution too shallow for the requested Tor stages"
    );
    let basis_actions = n.basis_actions();
    // ranks[t] = rank of D_{t+1}, the tensored differential into degree t
    let mut ranks = Vec::with_capacity(stages + 1);
    for t in 0..=stages {
        let d = resolution.differentials[t].as_ref().unwrap();
        let tensored = tensored_matrix(d, n, &basis_actions);
        ranks.push(linalg::rank(field, &tensored));
    }
    // dim Tor_i = dim ker(D_i) - rank(D_{i+1}), with D_0 = 0
    let mut out = Vec::with_capacity(stages + 1);
    for i in 0..=stages {
        let chain_dim = resolution.betti[i] as usize * ln;
        let ker = if i == 0 {
            chain_dim
        } else {
            chain_dim - ranks[i - 1]
        };
        let im = ranks[i];
        assert!(ker >= im, "tensored differentials do not form a complex");
        out.push(ker - im);
    }
    out
}

fn tensored_matrix(
    d: &FreeMatrix,
    n: &ActionModule,
    basis_actions: &[ScalarMatrix],
) -> ScalarMatrix {
    let ln = n.len();
    let field = n.algebra().field();
    let mut out = ScalarMatrix::zeros(d.rows() * ln, d.cols() * ln);
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            let entry = d.entry(r, c);
            if entry.iter().all(|&x| x == 0) {
                continue;
            }
            let block = n.element_action(basis_actions, entry);
            for i in 0..ln {
                for j in 0..ln {
                    let v = block.get(i, j);
                    if v != 0 {
                        let cur = out.get(r * ln + i, c * ln + j);
                        out.set(r * ln + i, c * ln + j, field.add(cur, v));
                    }
                }
            }
        }
    }
    out
}
