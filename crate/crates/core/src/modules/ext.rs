//! Extension modules built from cocycles, and restriction of scalars along
//! a ring map given by generator images.

use super::resolve::{first_syzygy, ResolveOptions};
use super::{
    select_min_generators, ActionModule, FreeMatrix, KernelData, ModulePresentation,
};
use crate::algebra::ARing;
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;

/// Builds the extension 0 -> N -> E -> M -> 0 classified by `cocycle`, an
/// element of Hom(Omega^1 M, N) given as a matrix from the first-syzygy
/// action coordinates of M to the action coordinates of N.
///
/// E is the cokernel of the map Omega^1 M -> A^{beta_0(M)} (+) N sending
/// w to (w, -cocycle(w)); length additivity l(E) = l(M) + l(N) is checked.
pub fn extension_module(
    m: &ModulePresentation,
    n: &ModulePresentation,
    cocycle: &ScalarMatrix,
    opts: &ResolveOptions,
) -> ModulePresentation {
    let algebra = m.algebra().clone();
    let adim = algebra.dim();
    let field = *algebra.field();
    let syz = first_syzygy(m, opts);
    let beta0 = syz.d1.rows();
    let beta1 = syz.d1.cols();
    assert_eq!(cocycle.cols(), syz.omega1.len(), "cocycle domain mismatch");
    assert_eq!(cocycle.rows(), n.length(), "cocycle codomain mismatch");

    let n_min = n.minimal().clone();
    let tn = n_min.rows();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(beta1 + n_min.cols());
    for j in 0..beta1 {
        // class of the j-th generator of A^{beta1} inside Omega^1 = coker(d_2)
        let mut ambient = vec![0u64; beta1 * adim];
        ambient[j * adim] = 1;
        let coords = syz.omega1_quotient.project(&ambient);
        let image = cocycle.mat_vec(&field, &coords);
        let lifted = n.quotient().lift(&image);
        let mut col = syz.d1.scalar_column(j);
        col.extend(lifted.iter().map(|&x| field.neg(x)));
        columns.push(col);
    }
    for c in 0..n_min.cols() {
        let mut col = vec![0u64; beta0 * adim];
        col.extend(n_min.scalar_column(c));
        columns.push(col);
    }
    let phi = FreeMatrix::from_scalar_columns(algebra, beta0 + tn, &columns);
    let e = ModulePresentation::new(phi);
    assert_eq!(
        e.length(),
        m.length() + n.length(),
        "extension must satisfy l(E) = l(M) + l(N)"
    );
    e
}

/// Builds a minimal presentation of an action module: deterministic minimal
/// generators (greedy over the standard basis against m*M) followed by one
/// syzygy step.
pub fn presentation_from_action(module: &ActionModule) -> ModulePresentation {
    let algebra = module.algebra().clone();
    let field = *algebra.field();
    let n = algebra.dim();
    let ell = module.len();
    // minimal generators: standard basis vectors independent modulo m*M
    let mut acc = module.radical_span();
    let mut gens: Vec<usize> = Vec::new();
    for t in 0..ell {
        let mut e = vec![0u64; ell];
        e[t] = 1;
        if acc.insert(e) {
            gens.push(t);
        }
    }
    let mu = gens.len();
    let basis_actions = module.basis_actions();
    // surjection A^mu -> M expanded over scalars
    let mut cover = ScalarMatrix::zeros(ell, mu * n);
    for (c, &g) in gens.iter().enumerate() {
        for t in 0..n {
            let col = basis_actions[t].column(g);
            for (r, &x) in col.iter().enumerate() {
                cover.set(r, c * n + t, x);
            }
        }
    }
    let kd: KernelData = super::kernel_with_free_cols(&field, &mut cover);
    let (selected, _) = select_min_generators(&field, &kd.kernel, &kd.free_cols, &algebra);
    let columns: Vec<Vec<u64>> = selected.iter().map(|&c| kd.kernel.column(c)).collect();
    let phi = FreeMatrix::from_scalar_columns(algebra, mu, &columns);
    assert!(phi.entries_in_radical(), "presentation must be minimal");
    let out = ModulePresentation::new(phi);
    assert_eq!(out.length(), ell, "presentation changed the module length");
    out
}

/// Restriction of scalars along the ring map R -> S determined by `images`
/// (one element of S per variable of R). The map must send generators into
/// the maximal ideal and kill R's relations. Returns a minimal R-presentation
/// of the module; the length over R equals the length over S by construction
/// and is asserted.
pub fn restrict_scalars(
    r: &ARing,
    images: &[Vec<u64>],
    m: &ActionModule,
) -> Result<ModulePresentation> {
    let s = m.algebra();
    if r.field().modulus() != s.field().modulus() {
        return Err(Error::CharMismatch(
            r.field().modulus(),
            s.field().modulus(),
        ));
    }
    if images.len() != r.vars().len() {
        return Err(Error::NotARingMap(format!(
            "expected {} generator images, got {}",
            r.vars().len(),
            images.len()
        )));
    }
    for (v, img) in r.vars().iter().zip(images) {
        if !s.el_in_radical(img) {
            return Err(Error::NotARingMap(format!(
                "image of `{v}` is not in the maximal ideal"
            )));
        }
    }
    for rel in r.relations() {
        let value = s.eval_poly_at(rel, images);
        if !s.el_is_zero(&value) {
            return Err(Error::NotARingMap(rel.display(r.vars())));
        }
    }
    let basis_actions = m.basis_actions();
    let actions: Vec<ScalarMatrix> = images
        .iter()
        .map(|img| m.element_action(&basis_actions, img))
        .collect();
    let restricted = ActionModule::new(r.clone(), m.len(), actions);
    assert_eq!(restricted.len(), m.len(), "l_R(M) must equal l_S(M)");
    Ok(presentation_from_action(&restricted))
}
