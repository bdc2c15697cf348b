//! The topological Petersson product on the associated graded of the
//! Atiyah-Hirzebruch filtration of `tcf^*(X) ⊗ ℂ`.
//!
//! In cohomological degree `m`, the associated graded splits over
//! Atiyah-Hirzebruch degrees `n` into blocks `H^n(X; ℂ) ⊗ S_{(n-m)/2}`;
//! a [`TcfElement`] stores one complex matrix per nonempty block. The
//! pairing of two elements couples equal AH degrees only: the weight-`w`
//! classical Petersson product of the cusp-form legs multiplies the cup
//! product of the cohomology legs, landing in `H^{2n}(X; ℂ)`. Values are
//! [`TppValue`]s: nonhomogeneous complex cohomology classes.
//!
//! Classical Gram matrices enter through the [`GramSource`] oracle so tests
//! can swap the quadrature for an exact synthetic positive-definite form.
//!
//! Radical and degeneracy analysis lives in [`radical`] and is re-exported
//! here.

mod radical;

pub use radical::{
    degeneracy_witness, kahler_slice_check, left_radical, KahlerReport, RadicalReport,
};

use crate::cohomology::{CohomologyError, GradedRing};
use crate::modforms::{self, ModformsError};
use crate::petersson::{self, PeterssonError, QuadratureConfig};
use crate::qexp::rational_to_f64;
use crate::ratmat::RatMatrix;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TppError {
    #[error("elements live over different rings")]
    RingMismatch,
    #[error("elements have different cohomological degrees: {left} vs {right}")]
    DegreeMismatch { left: i64, right: i64 },
    #[error("the weight-j product needs an even cohomological degree, got {degree}")]
    OddDegreeWeightProduct { degree: i64 },
    #[error("component at AH degree {n}: {message}")]
    InvalidComponent { n: i64, message: String },
    #[error("the slice in degree {degree} is empty; nothing to pair")]
    EmptySlice { degree: i64 },
    #[error("claimed radical element fails verification: pairing residual {residual:e}")]
    RadicalVerification { residual: f64 },
    #[error("ring has top degree {top}, but complex dimension {d} needs top {expected}")]
    KahlerDimension { top: usize, d: usize, expected: usize },
    #[error(transparent)]
    Petersson(#[from] PeterssonError),
    #[error(transparent)]
    Modforms(#[from] ModformsError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// The cusp-form weight attached to AH degree `n` in cohomological degree
/// `m`, when it is an integer; odd `n - m` carries the zero space.
pub fn weight_at(n: i64, m: i64) -> Option<i64> {
    if (n - m) % 2 == 0 {
        Some((n - m) / 2)
    } else {
        None
    }
}

/// Dimension bookkeeping of the associated graded in cohomological degree
/// `m`: for every AH degree `n <= top` of matching parity, the block
/// dimension `b_n * dim S_{(n-m)/2}` (including zero blocks).
pub fn component_dims(ring: &GradedRing, m: i64) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for n in 0..=(ring.top() as i64) {
        if let Some(w) = weight_at(n, m) {
            out.insert(n, ring.betti(n as usize) * modforms::dim_cusp(w));
        }
    }
    out
}

/// An element of the associated graded of `tcf^m(X) ⊗ ℂ`.
///
/// `components[n]` is a `b_n x dim S_{(n-m)/2}` complex matrix; row `h`
/// holds the cusp-form coordinates (echelon basis) attached to the `h`-th
/// degree-`n` cohomology basis class. Absent components are zero.
#[derive(Debug, Clone)]
pub struct TcfElement {
    ring: Arc<GradedRing>,
    degree: i64,
    components: BTreeMap<i64, DMatrix<Complex64>>,
}

impl TcfElement {
    /// The zero element of degree `m`.
    pub fn new(ring: Arc<GradedRing>, degree: i64) -> TcfElement {
        TcfElement {
            ring,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Install the block at AH degree `n`, validating its shape against the
    /// ring and the cusp dimension.
    pub fn set_component(&mut self, n: i64, matrix: DMatrix<Complex64>) -> Result<(), TppError> {
        let err = |message: String| TppError::InvalidComponent { n, message };
        if n < 0 || n > self.ring.top() as i64 {
            return Err(err(format!("AH degree outside 0..={}", self.ring.top())));
        }
        let w = weight_at(n, self.degree).ok_or_else(|| {
            err(format!(
                "AH degree has the wrong parity for cohomological degree {}",
                self.degree
            ))
        })?;
        let dim = modforms::dim_cusp(w);
        if dim == 0 {
            return Err(err(format!("S_{w} is zero; this block cannot be nonzero")));
        }
        let b = self.ring.betti(n as usize);
        if b == 0 {
            return Err(err("the ring has no cohomology in this degree".into()));
        }
        if matrix.nrows() != b || matrix.ncols() != dim {
            return Err(err(format!(
                "expected shape {b} x {dim}, got {} x {}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        self.components.insert(n, matrix);
        Ok(())
    }

    pub fn with_component(mut self, n: i64, matrix: DMatrix<Complex64>) -> Result<Self, TppError> {
        self.set_component(n, matrix)?;
        Ok(self)
    }

    pub fn component(&self, n: i64) -> Option<&DMatrix<Complex64>> {
        self.components.get(&n)
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &DMatrix<Complex64>)> {
        self.components.iter().map(|(&n, m)| (n, m))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.components.values().all(|m| m.norm() <= tol)
    }

    pub fn norm(&self) -> f64 {
        self.components
            .values()
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &TcfElement) -> Result<TcfElement, TppError> {
        check_compatible(self, other)?;
        let mut out = self.clone();
        for (&n, m) in &other.components {
            match out.components.get_mut(&n) {
                Some(existing) => *existing += m,
                None => {
                    out.components.insert(n, m.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> TcfElement {
        TcfElement {
            ring: Arc::clone(&self.ring),
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(&n, m)| (n, m.map(|z| z * s)))
                .collect(),
        }
    }
}

fn check_compatible(f: &TcfElement, g: &TcfElement) -> Result<(), TppError> {
    if !Arc::ptr_eq(&f.ring, &g.ring) && f.ring.as_ref() != g.ring.as_ref() {
        return Err(TppError::RingMismatch);
    }
    if f.degree != g.degree {
        return Err(TppError::DegreeMismatch {
            left: f.degree,
            right: g.degree,
        });
    }
    Ok(())
}

/// A nonhomogeneous element of `H^*(X; ℂ)`: the value of the topological
/// Petersson product, one complex coordinate vector per even degree.
#[derive(Debug, Clone)]
pub struct TppValue {
    ring: Arc<GradedRing>,
    components: BTreeMap<usize, Vec<Complex64>>,
}

impl TppValue {
    pub fn zero(ring: Arc<GradedRing>) -> TppValue {
        TppValue {
            ring,
            components: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// Coordinates in one cohomological degree (zeros when absent).
    pub fn component(&self, degree: usize) -> Vec<Complex64> {
        self.components
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::zero(); self.ring.betti(degree)])
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Vec<Complex64>)> {
        self.components.iter().map(|(&d, c)| (d, c))
    }

    fn add_into(&mut self, degree: usize, coords: Vec<Complex64>) {
        if coords.is_empty() {
            return;
        }
        match self.components.get_mut(&degree) {
            Some(existing) => {
                for (e, c) in existing.iter_mut().zip(coords) {
                    *e += c;
                }
            }
            None => {
                self.components.insert(degree, coords);
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.components
            .values()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}

/// A homogeneous complex cohomology class, possibly of degree above the top
/// (then it has no coordinates and is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexClass {
    pub degree: i64,
    pub coords: Vec<Complex64>,
}

impl ComplexClass {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.coords.iter().all(|z| z.norm() <= tol)
    }
}

/// Supplier of classical Petersson Gram matrices per weight. Implementations
/// must be safe for concurrent read.
pub trait GramSource: Send + Sync {
    /// Hermitian positive-definite Gram matrix over the echelon basis of
    /// `S_weight`; the `dim x dim` zero-size matrix when the space is zero.
    fn gram(&self, weight: i64) -> Result<DMatrix<Complex64>, TppError>;
}

/// Quadrature-backed Gram matrices with an internally synchronized cache.
pub struct QuadratureGrams {
    config: QuadratureConfig,
    cache: RwLock<HashMap<i64, Arc<DMatrix<Complex64>>>>,
}

impl QuadratureGrams {
    pub fn new(config: QuadratureConfig) -> Self {
        QuadratureGrams {
            config,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }
}

impl GramSource for QuadratureGrams {
    fn gram(&self, weight: i64) -> Result<DMatrix<Complex64>, TppError> {
        if modforms::dim_cusp(weight) == 0 {
            return Ok(DMatrix::zeros(0, 0));
        }
        if let Some(hit) = self.cache.read().expect("gram cache").get(&weight) {
            return Ok(hit.as_ref().clone());
        }
        let g = petersson::gram(weight, &self.config)?;
        let m = Arc::new(g.matrix);
        self.cache
            .write()
            .expect("gram cache")
            .insert(weight, Arc::clone(&m));
        Ok(m.as_ref().clone())
    }
}

/// Exact synthetic Gram matrices for isolating the linear algebra from
/// quadrature error in tests: `diag(1, 2, ..., dim)` at every weight.
pub struct SyntheticGrams;

impl GramSource for SyntheticGrams {
    fn gram(&self, weight: i64) -> Result<DMatrix<Complex64>, TppError> {
        let dim = modforms::dim_cusp(weight);
        Ok(DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new((i + 1) as f64, 0.0)
            } else {
                Complex64::zero()
            }
        }))
    }
}

/// Pairing matrix of the AH-degree-`n` blocks: `P[h][i] = <f_h, g_i>` with
/// the weight taken from `n` and the element degree.
fn block_pairing(
    f: &TcfElement,
    g: &TcfElement,
    n: i64,
    grams: &dyn GramSource,
) -> Result<Option<DMatrix<Complex64>>, TppError> {
    let (Some(fm), Some(gm)) = (f.component(n), g.component(n)) else {
        return Ok(None);
    };
    let w = weight_at(n, f.degree).expect("validated component parity");
    let gram = grams.gram(w)?;
    if gram.nrows() != fm.ncols() {
        return Err(TppError::InvalidComponent {
            n,
            message: format!(
                "gram source returned a {} x {} matrix for weight {w}, expected {}",
                gram.nrows(),
                gram.ncols(),
                fm.ncols()
            ),
        });
    }
    Ok(Some(fm * gram * gm.adjoint()))
}

/// Accumulate `sum_{h,i} P[h][i] (x_h ∪ y_i)` into coordinates of degree
/// `2n`; empty when `2n` exceeds the top degree.
fn cup_contract(ring: &GradedRing, n: i64, pairing: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = n as usize;
    if 2 * n > ring.top() {
        return Vec::new();
    }
    let mut coords = vec![Complex64::zero(); ring.betti(2 * n)];
    for h in 0..pairing.nrows() {
        for i in 0..pairing.ncols() {
            let p = pairing[(h, i)];
            if p.is_zero() {
                continue;
            }
            for (z, c) in ring.structure_vector(n, h, n, i) {
                coords[z] += p * rational_to_f64(&c);
            }
        }
    }
    coords
}

/// The weight-`j` product: pairs the AH-degree-`2(j-k)` components (where
/// `m = -2k`) and lands in `H^{4(j-k)}(X; ℂ)`. Linear in `f`,
/// conjugate-linear in `g`.
pub fn weight_product(
    f: &TcfElement,
    g: &TcfElement,
    j: i64,
    grams: &dyn GramSource,
) -> Result<ComplexClass, TppError> {
    check_compatible(f, g)?;
    let m = f.degree;
    if m % 2 != 0 {
        return Err(TppError::OddDegreeWeightProduct { degree: m });
    }
    let k = -m / 2;
    let n = 2 * (j - k);
    let out_degree = 4 * (j - k);
    let zero = |ring: &GradedRing| ComplexClass {
        degree: out_degree,
        coords: if (0..=ring.top() as i64).contains(&out_degree) {
            vec![Complex64::zero(); ring.betti(out_degree as usize)]
        } else {
            Vec::new()
        },
    };
    if n < 0 || n > f.ring.top() as i64 || out_degree > f.ring.top() as i64 {
        return Ok(zero(&f.ring));
    }
    match block_pairing(f, g, n, grams)? {
        None => Ok(zero(&f.ring)),
        Some(p) => Ok(ComplexClass {
            degree: out_degree,
            coords: cup_contract(&f.ring, n, &p),
        }),
    }
}

/// The topological Petersson product simpliciter: the sum over AH degrees
/// of the per-degree pairings, written in cohomological degree `2n` for AH
/// degree `n`. Linear in `f`, conjugate-linear in `g`.
pub fn full_product(
    f: &TcfElement,
    g: &TcfElement,
    grams: &dyn GramSource,
) -> Result<TppValue, TppError> {
    check_compatible(f, g)?;
    let mut out = TppValue::zero(Arc::clone(&f.ring));
    for (&n, _) in &f.components {
        if 2 * n > f.ring.top() as i64 {
            // the cup product of two degree-n classes dies above the top
            continue;
        }
        if let Some(p) = block_pairing(f, g, n, grams)? {
            let coords = cup_contract(&f.ring, n, &p);
            out.add_into(2 * n as usize, coords);
        }
    }
    Ok(out)
}

/// Apply the topological Hecke operator componentwise: each AH-degree block
/// has its cusp coordinates multiplied by the classical weight-`w` matrix
/// of `T_index`; cohomology legs are untouched.
pub fn topological_hecke(f: &TcfElement, index: u64) -> Result<TcfElement, TppError> {
    let mut out = TcfElement::new(Arc::clone(&f.ring), f.degree);
    for (&n, mat) in &f.components {
        let w = weight_at(n, f.degree).expect("validated component parity");
        let dim = modforms::dim_cusp(w);
        let prec = index as usize * (dim + 1);
        let t = modforms::hecke_matrix(w, index, prec)?
            .entries
            .to_f64()
            .map(|x| Complex64::new(x, 0.0));
        // rows are coordinate vectors; T acts by v -> T v on columns
        out.components.insert(n, mat * t.transpose());
    }
    Ok(out)
}

/// Exact residual of the Adams-twisted Hecke relation on the associated
/// graded in degree `m`: evaluates
/// `T_{p^{r+2}} - (T_p T_{p^{r+1}} - p^{w-1} T_{p^r})` blockwise (the Adams
/// operation acts on the weight-`w` block by `p^w`, and the relation divides
/// it by `p`) and returns the entrywise absolute sum, weighted by each
/// block's cohomology multiplicity. Must be exactly zero.
pub fn adams_relation_residual(
    ring: &GradedRing,
    m: i64,
    p: u64,
    r: u32,
) -> Result<BigRational, TppError> {
    let mut total = BigRational::zero();
    for n in 0..=(ring.top() as i64) {
        let Some(w) = weight_at(n, m) else { continue };
        let b = ring.betti(n as usize);
        let dim = modforms::dim_cusp(w);
        if b == 0 || dim == 0 {
            continue;
        }
        let top_index = p.pow(r + 2);
        let prec = top_index as usize * (dim + 1);
        let t_top = modforms::hecke_matrix(w, top_index, prec)?.entries;
        let t_p = modforms::hecke_matrix(w, p, prec)?.entries;
        let t_mid = modforms::hecke_matrix(w, p.pow(r + 1), prec)?.entries;
        let t_low = modforms::hecke_matrix(w, p.pow(r), prec)?.entries;
        let adams_over_p = BigRational::from_integer(BigInt::from(p).pow((w - 1) as u32));
        let rhs = t_p.mul(&t_mid).sub(&t_low.scale(&adams_over_p));
        let diff = t_top.sub(&rhs);
        total += diff.abs_sum() * BigRational::from_integer(BigInt::from(b as i64));
    }
    Ok(total)
}

/// The exact-rational Hecke matrix converted for complex coordinate work.
pub(crate) fn hecke_matrix_c64(w: i64, index: u64) -> Result<DMatrix<Complex64>, TppError> {
    let dim = modforms::dim_cusp(w);
    let prec = index as usize * (dim + 1);
    Ok(modforms::hecke_matrix(w, index, prec)?
        .entries
        .to_f64()
        .map(|x| Complex64::new(x, 0.0)))
}

#[allow(unused_imports)]
pub(crate) use radical::slice_basis;


#[cfg(test)]
mod tests {
    use super::test_support::random_element;
    use super::*;
    use crate::cohomology::{parse_preset, preset};

    fn ring(spec: &str) -> Arc<GradedRing> {
        Arc::new(preset(&parse_preset(spec).unwrap()).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn component_dims_cp2() {
        // Weights 12, 13, 14 sit on the cells of cp(2) at m = -24; the
        // middle and top weights are zero-dimensional.
        let r = ring("cp(2)");
        let dims = component_dims(&r, -24);
        let expected: BTreeMap<i64, usize> = [(0, 1), (2, 0), (4, 0)].into();
        assert_eq!(dims, expected);
        // m = -28 puts S_16 on the top cell and S_14 = 0 on the basepoint.
        let dims = component_dims(&r, -28);
        let expected: BTreeMap<i64, usize> = [(0, 0), (2, 0), (4, 1)].into();
        assert_eq!(dims, expected);
    }

    #[test]
    fn component_dims_point_and_sphere() {
        let pt = ring("point");
        let dims = component_dims(&pt, -24);
        assert_eq!(dims, [(0i64, 1usize)].into());
        let s3 = ring("sphere(3)");
        let dims = component_dims(&s3, -21);
        // odd degree: only odd AH degrees appear; weight (3+21)/2 = 12
        assert_eq!(dims, [(1i64, 0usize), (3, 1)].into());
    }

    #[test]
    fn point_full_product_is_classical_gram_entry() {
        let pt = ring("point");
        let grams = SyntheticGrams;
        let m = -24;
        let f = TcfElement::new(Arc::clone(&pt), m)
            .with_component(0, DMatrix::from_row_slice(1, 1, &[c(2.0, 1.0)]))
            .unwrap();
        let g = TcfElement::new(Arc::clone(&pt), m)
            .with_component(0, DMatrix::from_row_slice(1, 1, &[c(0.5, -3.0)]))
            .unwrap();
        let v = full_product(&f, &g, &grams).unwrap();
        let got = v.component(0)[0];
        // <2+i, 0.5-3i> with gram [1] = (2+i) * conj(0.5-3i)
        let expected = c(2.0, 1.0) * c(0.5, -3.0).conj();
        assert!((got - expected).norm() < 1e-14);
        // weight products vanish away from k = 12
        for j in [10, 11, 13, 20] {
            let wp = weight_product(&f, &g, j, &grams).unwrap();
            assert!(wp.is_zero(0.0), "j={j}");
        }
        let wk = weight_product(&f, &g, 12, &grams).unwrap();
        assert_eq!(wk.degree, 0);
        assert!((wk.coords[0] - expected).norm() < 1e-14);
    }

    #[test]
    fn cp2_weight_shifted_block_lands_in_degree_4() {
        let r = ring("cp(2)");
        let grams = SyntheticGrams;
        // m = -26 gives k = 13: the AH-2 block carries weight 14... which is
        // zero; use m = -22, k = 11, so AH 2 carries weight 12.
        let m = -22;
        let f = TcfElement::new(Arc::clone(&r), m)
            .with_component(2, DMatrix::from_row_slice(1, 1, &[c(1.0, 2.0)]))
            .unwrap();
        let g = TcfElement::new(Arc::clone(&r), m)
            .with_component(2, DMatrix::from_row_slice(1, 1, &[c(3.0, -1.0)]))
            .unwrap();
        // j = k + 1 = 12 extracts AH degree 2 and lands in H^4
        let wp = weight_product(&f, &g, 12, &grams).unwrap();
        assert_eq!(wp.degree, 4);
        let expected = c(1.0, 2.0) * c(3.0, -1.0).conj();
        assert!((wp.coords[0] - expected).norm() < 1e-14);
        // the full product agrees and has no degree-2 part
        let v = full_product(&f, &g, &grams).unwrap();
        assert!((v.component(4)[0] - expected).norm() < 1e-14);
        assert!(v.component(2).iter().all(|z| z.is_zero()));
        assert!(v.component(0).iter().all(|z| z.is_zero()));
    }

    #[test]
    fn sphere_product_ignores_top_cell() {
        let grams = SyntheticGrams;
        for n in [2usize, 4] {
            let r = ring(&format!("sphere({n})"));
            let m = -24;
            let full = random_element(&r, m, 7);
            // strip to the basepoint block only
            let mut base_only = TcfElement::new(Arc::clone(&r), m);
            if let Some(mat) = full.component(0) {
                base_only.set_component(0, mat.clone()).unwrap();
            }
            let g = random_element(&r, m, 8);
            let a = full_product(&full, &g, &grams).unwrap();
            let b = full_product(&base_only, &g, &grams).unwrap();
            for deg in (0..=r.top()).step_by(2) {
                let (ca, cb) = (a.component(deg), b.component(deg));
                for (x, y) in ca.iter().zip(&cb) {
                    assert!((x - y).norm() < 1e-13, "sphere({n}) degree {deg}");
                }
            }
        }
    }

    #[test]
    fn bilinearity_and_conjugate_linearity() {
        let r = ring("product(cp(1),cp(1))");
        let grams = SyntheticGrams;
        let m = -24;
        let f1 = random_element(&r, m, 1);
        let f2 = random_element(&r, m, 2);
        let g = random_element(&r, m, 3);
        let alpha = c(0.7, -1.3);

        let lhs = full_product(&f1.scale(alpha).add(&f2).unwrap(), &g, &grams).unwrap();
        let a = full_product(&f1, &g, &grams).unwrap();
        let b = full_product(&f2, &g, &grams).unwrap();
        for deg in (0..=r.top()).step_by(2) {
            for (i, x) in lhs.component(deg).iter().enumerate() {
                let want = alpha * a.component(deg)[i] + b.component(deg)[i];
                assert!((x - want).norm() <= 1e-12, "first-slot linearity");
            }
        }

        let rhs = full_product(&g, &f1.scale(alpha).add(&f2).unwrap(), &grams).unwrap();
        let ga = full_product(&g, &f1, &grams).unwrap();
        let gb = full_product(&g, &f2, &grams).unwrap();
        for deg in (0..=r.top()).step_by(2) {
            for (i, x) in rhs.component(deg).iter().enumerate() {
                let want = alpha.conj() * ga.component(deg)[i] + gb.component(deg)[i];
                assert!((x - want).norm() <= 1e-12, "second-slot conjugate linearity");
            }
        }
    }

    #[test]
    fn distinct_ah_degrees_do_not_couple() {
        let r = ring("cp(3)");
        let grams = SyntheticGrams;
        let m = -24;
        // f supported in AH degree 0, g in AH degree 4 (weight 14 is zero,
        // so use m = -28: AH 0 -> weight 14 (zero), AH 4 -> 16...). Take
        // m = -24: AH 0 -> 12, AH 4 -> 14 (zero). Instead pair AH 0 against
        // AH 6 at m = -18: weights 9 (zero)... The clean cross check: over
        // cp(3) at m = -32, AH 0 -> 16 and AH 4 -> 18 are both nonzero.
        let m32 = -32;
        let f = TcfElement::new(Arc::clone(&r), m32)
            .with_component(0, DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]))
            .unwrap();
        let g = TcfElement::new(Arc::clone(&r), m32)
            .with_component(4, DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]))
            .unwrap();
        let v = full_product(&f, &g, &grams).unwrap();
        assert!(v.is_zero(0.0), "cross-degree pairing must vanish");
        let _ = m;
    }

    #[test]
    fn hecke_on_point_is_classical() {
        let pt = ring("point");
        let m = -24;
        let f = TcfElement::new(Arc::clone(&pt), m)
            .with_component(0, DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]))
            .unwrap();
        let t2 = topological_hecke(&f, 2).unwrap();
        let got = t2.component(0).unwrap()[(0, 0)];
        assert!((got - c(-24.0, 0.0)).norm() < 1e-12);
        let t1 = topological_hecke(&f, 1).unwrap();
        assert!((t1.component(0).unwrap()[(0, 0)] - c(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn hecke_acts_blockwise_on_cp2() {
        let r = ring("cp(2)");
        let m = -24;
        let f = random_element(&r, m, 5);
        let t2 = topological_hecke(&f, 2).unwrap();
        // the only nonzero block is AH 0 with weight 12: multiplication by -24
        let got = t2.component(0).unwrap();
        let want = f.component(0).unwrap() * c(-24.0, 0.0);
        assert!((got - want).norm() < 1e-12);
        assert!(t2.component(2).is_none() && t2.component(4).is_none());
    }

    #[test]
    fn hecke_self_adjoint_for_full_product() {
        let r = ring("cp(2)");
        let grams = SyntheticGrams;
        // Synthetic grams are diagonal, hence not classical: use degree 0
        // blocks only, where T_n self-adjointness w.r.t. the true Gram is the
        // real content. Checked against the quadrature in the acceptance
        // suite; here verify the blockwise algebra with weight 12 (1x1).
        let m = -24;
        let f = random_element(&r, m, 11);
        let g = random_element(&r, m, 12);
        for idx in [2u64, 3] {
            let tf = topological_hecke(&f, idx).unwrap();
            let tg = topological_hecke(&g, idx).unwrap();
            let a = full_product(&tf, &g, &grams).unwrap();
            let b = full_product(&f, &tg, &grams).unwrap();
            for deg in (0..=r.top()).step_by(2) {
                for (x, y) in a.component(deg).iter().zip(b.component(deg)) {
                    assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "T_{idx}");
                }
            }
        }
    }

    #[test]
    fn adams_relation_exact_on_point_and_cp2() {
        let pt = ring("point");
        let r2 = ring("cp(2)");
        for (space, m) in [(&pt, -24i64), (&r2, -24), (&r2, -28)] {
            for p in [2u64, 3] {
                let res = adams_relation_residual(space, m, p, 0).unwrap();
                assert!(res.is_zero(), "{} m={m} p={p}: {res}", space.name());
            }
        }
    }

    #[test]
    fn adams_relation_trivial_when_blocks_empty() {
        let pt = ring("point");
        // m = -20 -> weight 10, zero space
        let res = adams_relation_residual(&pt, -20, 5, 1).unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn component_validation_rejects_bad_shapes() {
        let r = ring("cp(2)");
        let mut f = TcfElement::new(Arc::clone(&r), -24);
        // weight 13 on AH degree 2 is zero-dimensional
        let err = f
            .set_component(2, DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]))
            .unwrap_err();
        assert!(matches!(err, TppError::InvalidComponent { n: 2, .. }));
        // wrong parity
        let err = f
            .set_component(1, DMatrix::from_row_slice(1, 1, &[c(1.0, 0.0)]))
            .unwrap_err();
        assert!(matches!(err, TppError::InvalidComponent { n: 1, .. }));
        // wrong shape at a valid block
        let err = f
            .set_component(0, DMatrix::from_row_slice(1, 2, &[c(1.0, 0.0); 2]))
            .unwrap_err();
        assert!(matches!(err, TppError::InvalidComponent { n: 0, .. }));
    }

    #[test]
    fn mismatched_elements_rejected() {
        let a = ring("cp(2)");
        let b = ring("sphere(2)");
        let grams = SyntheticGrams;
        let f = TcfElement::new(Arc::clone(&a), -24);
        let g = TcfElement::new(Arc::clone(&b), -24);
        assert!(matches!(
            full_product(&f, &g, &grams),
            Err(TppError::RingMismatch)
        ));
        let g = TcfElement::new(Arc::clone(&a), -26);
        assert!(matches!(
            full_product(&f, &g, &grams),
            Err(TppError::DegreeMismatch { .. })
        ));
        let g = TcfElement::new(Arc::clone(&a), -23);
        assert!(matches!(
            weight_product(&f, &g, 12, &grams),
            Err(TppError::DegreeMismatch { .. })
        ));
        let f = TcfElement::new(Arc::clone(&a), -23);
        assert!(matches!(
            weight_product(&f, &g, 12, &grams),
            Err(TppError::OddDegreeWeightProduct { degree: -23 })
        ));
    }
}
