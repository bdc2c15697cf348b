//! Radical and degeneracy analysis for the topological Petersson product.
//!
//! The left radical of a slice of the associated graded is computed as the
//! complex-linear kernel of the stacked pairing matrix against the slice
//! basis (the form is linear in its first slot). Degeneracy witnesses
//! realize top-cell elements that the pairing cannot see; the Kaehler check
//! restricts to even Atiyah-Hirzebruch degrees `n <= 2d/3` and attaches the
//! hard-Lefschetz injectivity certificate.

use super::{
    block_pairing, full_product, weight_at, GramSource, TcfElement, TppError,
};
use crate::cohomology::{self, CohClass, GradedRing, LefschetzReport};
use crate::modforms;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Relative singular-value cutoff for kernel extraction: Gram entries are
/// quadrature-approximate, so ranks are decided at this resolution.
pub const RADICAL_SVD_CUTOFF: f64 = 1e-8;

/// One slice basis element: cohomology basis class `coh` of AH degree `n`
/// tensor the `cusp`-th echelon basis vector of the attached weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceIndex {
    pub n: i64,
    pub coh: usize,
    pub cusp: usize,
}

/// Enumerate the slice basis in degree `m` over the AH degrees accepted by
/// `filter`, in lexicographic `(n, coh, cusp)` order.
pub fn slice_basis(
    ring: &GradedRing,
    m: i64,
    filter: &dyn Fn(i64) -> bool,
) -> Vec<SliceIndex> {
    let mut out = Vec::new();
    for n in 0..=(ring.top() as i64) {
        let Some(w) = weight_at(n, m) else { continue };
        if !filter(n) {
            continue;
        }
        let b = ring.betti(n as usize);
        let d = modforms::dim_cusp(w);
        for coh in 0..b {
            for cusp in 0..d {
                out.push(SliceIndex { n, coh, cusp });
            }
        }
    }
    out
}

fn basis_element(
    ring: &Arc<GradedRing>,
    m: i64,
    idx: SliceIndex,
) -> Result<TcfElement, TppError> {
    let w = weight_at(idx.n, m).expect("slice parity");
    let b = ring.betti(idx.n as usize);
    let d = modforms::dim_cusp(w);
    let mut mat = DMatrix::zeros(b, d);
    mat[(idx.coh, idx.cusp)] = Complex64::new(1.0, 0.0);
    TcfElement::new(Arc::clone(ring), m).with_component(idx.n, mat)
}

/// Report of a left-radical computation on one slice.
#[derive(Debug, Clone)]
pub struct RadicalReport {
    /// Cohomological degree of the slice.
    pub degree: i64,
    /// AH degrees contributing basis vectors.
    pub allowed_ah: Vec<i64>,
    pub slice_dim: usize,
    /// Orthonormal basis of the left radical.
    pub radical: Vec<TcfElement>,
    pub nondegenerate: bool,
    /// Largest pairing norm of a radical vector against the slice basis;
    /// a verification artifact, bounded by the SVD cutoff scale.
    pub max_pairing_residual: f64,
}

impl RadicalReport {
    pub fn radical_dim(&self) -> usize {
        self.radical.len()
    }
}

/// Left radical of the pairing on the slice of degree `m` whose AH degrees
/// pass `ah_filter`: the space of `f` with `<f, e_a> = 0` for every slice
/// basis vector `e_a`. Kernel extraction treats singular values below
/// `1e-8 * sigma_max` as zero; every claimed radical vector is re-verified
/// by direct pairing.
pub fn left_radical(
    ring: &Arc<GradedRing>,
    m: i64,
    ah_filter: &dyn Fn(i64) -> bool,
    grams: &dyn GramSource,
) -> Result<RadicalReport, TppError> {
    let slice = slice_basis(ring, m, ah_filter);
    if slice.is_empty() {
        return Err(TppError::EmptySlice { degree: m });
    }
    // All degrees the filter admits, inhabited or not.
    let allowed_ah: Vec<i64> = (0..=(ring.top() as i64))
        .filter(|&n| weight_at(n, m).is_some() && ah_filter(n))
        .collect();
    let cols = slice.len();

    // Rows: for each slice element `a` with 2 n_a within the ring, the
    // coordinates of the value in degree 2 n_a. Columns: the unknown `f`.
    let mut row_blocks: Vec<(usize, usize)> = Vec::new(); // (a, betti(2n_a))
    let mut total_rows = 0;
    for (a, s) in slice.iter().enumerate() {
        let target = 2 * s.n as usize;
        let b = if target <= ring.top() {
            ring.betti(target)
        } else {
            0
        };
        if b > 0 {
            row_blocks.push((a, b));
            total_rows += b;
        }
    }

    let grams_by_weight: BTreeMap<i64, DMatrix<Complex64>> = {
        let mut map = BTreeMap::new();
        for s in &slice {
            let w = weight_at(s.n, m).expect("slice parity");
            if let std::collections::btree_map::Entry::Vacant(e) = map.entry(w) {
                e.insert(grams.gram(w)?);
            }
        }
        map
    };

    // The pairing couples equal AH degrees only:
    // <e_(n,h,b), e_(n,h',a')> = Gram_w[b,a'] * (x_h ∪ x_h') in degree 2n.
    let mut mat = DMatrix::<Complex64>::zeros(total_rows.max(cols), cols);
    let mut row_base = 0;
    for &(a, nrows) in &row_blocks {
        let sa = slice[a];
        let w = weight_at(sa.n, m).expect("slice parity");
        let gram = &grams_by_weight[&w];
        for (beta, sb) in slice.iter().enumerate() {
            if sb.n != sa.n {
                continue;
            }
            let gv = gram[(sb.cusp, sa.cusp)];
            if gv.is_zero() {
                continue;
            }
            for (z, c) in
                ring.structure_vector(sb.n as usize, sb.coh, sa.n as usize, sa.coh)
            {
                mat[(row_base + z, beta)] += gv * crate::qexp::rational_to_f64(&c);
            }
        }
        row_base += nrows;
    }

    // Kernel by SVD (the matrix was padded square so every right singular
    // vector is exposed).
    let svd = mat.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let mut kernel: Vec<Vec<Complex64>> = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= RADICAL_SVD_CUTOFF * smax.max(1e-300) {
            let row = v_t.row(i);
            kernel.push(row.iter().map(|z| z.conj()).collect());
        }
    }
    // Deterministic orientation.
    for v in &mut kernel {
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8) {
            let phase = lead.conj() / lead.norm();
            for z in v.iter_mut() {
                *z *= phase;
            }
        }
    }
    kernel.sort_by(|a, b| {
        a.iter()
            .map(|z| (z.re, z.im))
            .partial_cmp(b.iter().map(|z| (z.re, z.im)))
            .expect("finite coordinates")
    });

    // Materialize and verify against the slice by direct pairing.
    let mut radical = Vec::new();
    let mut max_residual = 0.0f64;
    let verify_bound = 100.0 * RADICAL_SVD_CUTOFF * smax.max(1e-300) + 1e-12;
    for coords in kernel {
        let mut f = TcfElement::new(Arc::clone(ring), m);
        let mut blocks: BTreeMap<i64, DMatrix<Complex64>> = BTreeMap::new();
        for (s, c) in slice.iter().zip(&coords) {
            let w = weight_at(s.n, m).expect("slice parity");
            let block = blocks.entry(s.n).or_insert_with(|| {
                DMatrix::zeros(ring.betti(s.n as usize), modforms::dim_cusp(w))
            });
            block[(s.coh, s.cusp)] = *c;
        }
        for (n, block) in blocks {
            f.set_component(n, block)?;
        }
        for s in &slice {
            let e = basis_element(ring, m, *s)?;
            let v = full_product(&f, &e, grams)?;
            max_residual = max_residual.max(v.norm());
        }
        if max_residual > verify_bound {
            return Err(TppError::RadicalVerification {
                residual: max_residual,
            });
        }
        radical.push(f);
    }

    let nondegenerate = radical.is_empty();
    Ok(RadicalReport {
        degree: m,
        allowed_ah,
        slice_dim: cols,
        radical,
        nondegenerate,
        max_pairing_residual: max_residual,
    })
}

/// A top-cell element annihilated by the pairing: a nonzero cusp form of
/// weight `(top - m)/2` attached to a top-degree class. Returns `None` for
/// the point or when that weight carries no cusp forms. Membership in the
/// radical is verified by direct pairing before returning.
pub fn degeneracy_witness(
    ring: &Arc<GradedRing>,
    m: i64,
    grams: &dyn GramSource,
) -> Result<Option<TcfElement>, TppError> {
    let top = ring.top() as i64;
    if top == 0 {
        return Ok(None);
    }
    let Some(w) = weight_at(top, m) else {
        return Ok(None);
    };
    let dim = modforms::dim_cusp(w);
    if dim == 0 || ring.betti(top as usize) == 0 {
        return Ok(None);
    }
    let witness = basis_element(
        ring,
        m,
        SliceIndex {
            n: top,
            coh: 0,
            cusp: 0,
        },
    )?;
    // Verify membership in the radical of the full slice.
    let slice = slice_basis(ring, m, &|_| true);
    let mut residual = 0.0f64;
    for s in &slice {
        let e = basis_element(ring, m, *s)?;
        let v = full_product(&witness, &e, grams)?;
        residual = residual.max(v.norm());
    }
    if residual > 1e-12 {
        return Err(TppError::RadicalVerification { residual });
    }
    Ok(Some(witness))
}

/// Result of the Kaehler-range nondegeneracy check.
#[derive(Debug, Clone)]
pub struct KahlerReport {
    pub radical: RadicalReport,
    pub lefschetz: LefschetzReport,
    /// All injectivity certificates over the allowed slice degrees hold.
    pub certificate_ok: bool,
}

/// Restrict to the even AH degrees `n <= 2d/3` in cohomological degree `m`
/// and compute the left radical there, together with the hard-Lefschetz
/// injectivity certificate for multiplication by `omega^{n/2}`.
pub fn kahler_slice_check(
    ring: &Arc<GradedRing>,
    omega: &CohClass,
    d: usize,
    m: i64,
    grams: &dyn GramSource,
) -> Result<KahlerReport, TppError> {
    if ring.top() % 2 != 0 {
        return Err(TppError::Cohomology(
            cohomology::CohomologyError::OddTopDegree { top: ring.top() },
        ));
    }
    if ring.top() != 2 * d {
        return Err(TppError::KahlerDimension {
            top: ring.top(),
            d,
            expected: 2 * d,
        });
    }
    let filter = move |n: i64| n % 2 == 0 && 3 * n <= 2 * d as i64;
    let radical = left_radical(ring, m, &filter, grams)?;
    let lefschetz = cohomology::hard_lefschetz_report(ring, omega)?;
    let certificate_ok = lefschetz.injectivity.iter().all(|c| c.injective);
    Ok(KahlerReport {
        radical,
        lefschetz,
        certificate_ok,
    })
}
