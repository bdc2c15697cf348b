//! Spaces of level 1 cusp forms over the rationals.
//!
//! Provides the dimension count, Eisenstein generators, the discriminant
//! form, echelonized ("Miller") bases of `S_k`, exact Hecke operator
//! matrices, and numerically diagonalized eigenforms.

use crate::qexp::QExpansion;
use crate::ratmat::RatMatrix;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};
use thiserror::Error;

/// Tolerance for the eigenform residual checks, relative to the operator
/// norm: `||T_p v - lambda_p v|| <= tol * max(1, ||T_p||) * ||v||`.
pub const EIGENFORM_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModformsError {
    #[error("Eisenstein series is only provided for weights 4 and 6, got {0}")]
    UnsupportedEisensteinWeight(i64),
    #[error("insufficient precision for {what}: need at least {needed} coefficients, got {got}")]
    InsufficientPrecision {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("T_2 and T_3 share a repeated eigenvalue on S_{weight}; refusing to guess an eigenbasis")]
    DegenerateEigenvalues { weight: i64 },
    #[error("candidate eigenvector at weight {weight} fails the T_{index} residual check: {residual:e}")]
    EigenformResidual {
        weight: i64,
        index: u64,
        residual: f64,
    },
}

/// Dimension of the space of level 1 cusp forms of integer weight `k`.
///
/// Zero for odd weights and for `k < 12`; otherwise, writing `2k = 24j + r`,
/// the dimension is `j` for `r` in {0, 8, 12, 16, 20} and `j - 1` for
/// `r = 4`.
pub fn dim_cusp(k: i64) -> usize {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    let n = 2 * k;
    let j = (n / 24) as usize;
    match n % 24 {
        0 | 8 | 12 | 16 | 20 => j,
        4 => j - 1,
        _ => 0,
    }
}

/// Divisor power sums `sigma_e(1..=prec)`.
fn divisor_sums(e: u32, prec: usize) -> Vec<BigInt> {
    let mut sums = vec![BigInt::zero(); prec + 1];
    for d in 1..=prec {
        let dpow = BigInt::from(d).pow(e);
        let mut m = d;
        while m <= prec {
            sums[m] += &dpow;
            m += d;
        }
    }
    sums
}

/// The normalized Eisenstein series `E_4` or `E_6` to precision `prec`.
pub fn eisenstein(k: i64, prec: usize) -> Result<QExpansion, ModformsError> {
    let (e, scale) = match k {
        4 => (3u32, BigInt::from(240)),
        6 => (5u32, BigInt::from(-504)),
        _ => return Err(ModformsError::UnsupportedEisensteinWeight(k)),
    };
    let sums = divisor_sums(e, prec);
    let mut coeffs = vec![BigRational::zero(); prec + 1];
    coeffs[0] = BigRational::one();
    for n in 1..=prec {
        coeffs[n] = BigRational::from_integer(&scale * &sums[n]);
    }
    Ok(QExpansion::new(coeffs))
}

/// The discriminant form `Delta = q prod_{n>=1} (1 - q^n)^24` to precision
/// `prec`, computed by multiplying the binomial factors directly.
pub fn delta(prec: usize) -> QExpansion {
    // Product part needs degrees 0..prec-1; the leading q shifts them up.
    let mut p = vec![BigRational::zero(); prec.max(1)];
    p[0] = BigRational::one();
    let deg = p.len() - 1;
    for n in 1..=deg {
        for _ in 0..24 {
            for m in (n..=deg).rev() {
                let v = &p[m] - &p[m - n];
                p[m] = v;
            }
        }
    }
    let mut coeffs = vec![BigRational::zero(); prec + 1];
    for (m, c) in p.into_iter().enumerate() {
        if m + 1 <= prec {
            coeffs[m + 1] = c;
        }
    }
    QExpansion::new(coeffs)
}

/// The space `S_k` with its echelonized basis: `basis[i]` has `a_{i+1} = 1`
/// and `a_{j+1} = 0` for the other pivot positions `j < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspSpace {
    weight: i64,
    prec: usize,
    basis: Vec<QExpansion>,
}

impl CuspSpace {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn basis(&self) -> &[QExpansion] {
        &self.basis
    }
}

/// Echelonized basis of `S_k` to precision `prec`, built from the monomials
/// `E4^a E6^b Delta` of weight `k` and row-reduced exactly.
pub fn cusp_basis(k: i64, prec: usize) -> Result<CuspSpace, ModformsError> {
    let dim = dim_cusp(k);
    if prec < dim + 1 {
        return Err(ModformsError::InsufficientPrecision {
            what: "cusp basis",
            needed: dim + 1,
            got: prec,
        });
    }
    if dim == 0 {
        return Ok(CuspSpace {
            weight: k,
            prec,
            basis: Vec::new(),
        });
    }

    let e4 = eisenstein(4, prec).expect("weight 4 is supported");
    let e6 = eisenstein(6, prec).expect("weight 6 is supported");
    let d = delta(prec);

    // Monomials E4^a E6^b Delta with 4a + 6b = k - 12 span S_k and are
    // linearly independent, so there are exactly `dim` of them.
    let w = k - 12;
    let mut monomials = Vec::new();
    for b in 0..=(w / 6) {
        let rem = w - 6 * b;
        if rem % 4 == 0 {
            let a = rem / 4;
            let m = &(&e4.pow(a as u32) * &e6.pow(b as u32)) * &d;
            monomials.push(m);
        }
    }
    assert_eq!(
        monomials.len(),
        dim,
        "monomial count disagrees with dim S_{k}"
    );

    let mut mat = RatMatrix::from_rows(
        monomials
            .iter()
            .map(|m| m.coeffs().to_vec())
            .collect(),
    );
    let pivots = mat.rref();
    assert_eq!(
        pivots,
        (1..=dim).collect::<Vec<_>>(),
        "cusp forms of weight {k} are not determined by a_1..a_dim"
    );
    let basis = (0..dim)
        .map(|i| QExpansion::new(mat.row(i).to_vec()))
        .collect();
    Ok(CuspSpace {
        weight: k,
        prec,
        basis,
    })
}

static BASIS_CACHE: LazyLock<Mutex<HashMap<i64, Arc<CuspSpace>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Memoized [`cusp_basis`]. Returns a space with precision at least `prec`;
/// repeated calls share one computation per weight. Observably pure.
pub fn cusp_basis_cached(k: i64, prec: usize) -> Result<Arc<CuspSpace>, ModformsError> {
    let mut cache = BASIS_CACHE.lock().expect("basis cache poisoned");
    if let Some(space) = cache.get(&k) {
        if space.prec() >= prec {
            return Ok(Arc::clone(space));
        }
    }
    let space = Arc::new(cusp_basis(k, prec)?);
    cache.insert(k, Arc::clone(&space));
    Ok(space)
}

/// Apply the Hecke operator `T_n` to a weight-`k` expansion through the
/// coefficient action `a_m(T_n f) = sum_{d | gcd(m,n)} d^{k-1} a_{mn/d^2}`.
///
/// The output is known to precision `floor(f.prec / n)`.
pub fn hecke_apply(f: &QExpansion, k: i64, n: u64) -> Result<QExpansion, ModformsError> {
    assert!(n >= 1, "Hecke index must be positive");
    assert!(k >= 1, "Hecke action needs a positive weight");
    let out_prec = f.prec() / n as usize;
    if f.prec() < n as usize {
        return Err(ModformsError::InsufficientPrecision {
            what: "Hecke action",
            needed: n as usize,
            got: f.prec(),
        });
    }
    let mut coeffs = vec![BigRational::zero(); out_prec + 1];
    for (m, c) in coeffs.iter_mut().enumerate() {
        let g = if m == 0 { n } else { gcd(m as u64, n) };
        for d in 1..=g {
            if g % d != 0 {
                continue;
            }
            let idx = (m as u64 * n / (d * d)) as usize;
            let dpow = BigRational::from_integer(BigInt::from(d).pow((k - 1) as u32));
            *c += &dpow * f.coeff(idx);
        }
    }
    Ok(QExpansion::new(coeffs))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The matrix of `T_n` on the echelon basis of one weight, with exact
/// rational entries. Columns hold images: `T_n b_j = sum_i entries[(i,j)] b_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeMatrix {
    pub weight: i64,
    pub index: u64,
    pub entries: RatMatrix,
}

/// Matrix of `T_n` over an already-built cusp space.
pub fn hecke_matrix_on(space: &CuspSpace, n: u64) -> Result<HeckeMatrix, ModformsError> {
    let dim = space.dim();
    if dim == 0 {
        return Ok(HeckeMatrix {
            weight: space.weight(),
            index: n,
            entries: RatMatrix::zeros(0, 0),
        });
    }
    let needed = n as usize * (dim + 1);
    if space.prec() < needed {
        return Err(ModformsError::InsufficientPrecision {
            what: "Hecke matrix",
            needed,
            got: space.prec(),
        });
    }
    let mut entries = RatMatrix::zeros(dim, dim);
    for (j, b) in space.basis().iter().enumerate() {
        let image = hecke_apply(b, space.weight(), n)?;
        // In the echelon basis, coordinates are read off the pivot
        // coefficients a_1..a_dim.
        for i in 0..dim {
            entries[(i, j)] = image.coeff(i + 1).clone();
        }
    }
    Ok(HeckeMatrix {
        weight: space.weight(),
        index: n,
        entries,
    })
}

/// Matrix of `T_n` on `S_k`, building the basis at precision `prec`.
pub fn hecke_matrix(k: i64, n: u64, prec: usize) -> Result<HeckeMatrix, ModformsError> {
    let dim = dim_cusp(k);
    if dim == 0 {
        return Ok(HeckeMatrix {
            weight: k,
            index: n,
            entries: RatMatrix::zeros(0, 0),
        });
    }
    let needed = n as usize * (dim + 1);
    if prec < needed {
        return Err(ModformsError::InsufficientPrecision {
            what: "Hecke matrix",
            needed,
            got: prec,
        });
    }
    let space = cusp_basis_cached(k, prec)?;
    hecke_matrix_on(&space, n)
}

/// A numerically computed Hecke eigenform.
#[derive(Debug, Clone)]
pub struct Eigenform {
    pub weight: i64,
    /// `(p, lambda_p)` for the primes checked, in ascending order of `p`.
    pub eigenvalues: Vec<(u64, f64)>,
    /// Unit-normalized coordinates in the echelon basis.
    pub coords: DVector<Complex64>,
    /// The largest residual `||T_p v - lambda_p v|| / max(1, ||T_p||)` over
    /// the checked primes.
    pub residual: f64,
}

const EIGENFORM_PRIMES: [u64; 3] = [2, 3, 5];

/// Numerical eigenform basis of `S_k`: diagonalizes `T_2` in floating point
/// and verifies the vectors against `T_3` and `T_5`.
pub fn eigenforms(k: i64, prec: usize) -> Result<Vec<Eigenform>, ModformsError> {
    let dim = dim_cusp(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    let needed = 5 * (dim + 1);
    let prec = prec.max(needed);
    let space = cusp_basis_cached(k, prec)?;
    let t: Vec<DMatrix<f64>> = EIGENFORM_PRIMES
        .iter()
        .map(|&p| hecke_matrix_on(&space, p).map(|m| m.entries.to_f64()))
        .collect::<Result<_, _>>()?;
    let t2 = &t[0];

    let eigs = t2.complex_eigenvalues();
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let mut lambdas: Vec<f64> = eigs
        .iter()
        .map(|z| {
            debug_assert!(z.im.abs() <= 1e-9 * scale, "T_2 eigenvalue went complex");
            z.re
        })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    lambdas.dedup_by(|a, b| (*a - *b).abs() <= 1e-8 * scale);

    let mut vectors: Vec<DVector<f64>> = Vec::new();
    for &lambda in &lambdas {
        let shifted = t2 - DMatrix::<f64>::identity(dim, dim) * lambda;
        let basis = nullspace(&shifted, 1e-8);
        match basis.len() {
            0 => {
                return Err(ModformsError::EigenformResidual {
                    weight: k,
                    index: 2,
                    residual: f64::INFINITY,
                })
            }
            1 => vectors.push(basis.into_iter().next().expect("one kernel vector")),
            g => {
                // Repeated T_2 eigenvalue: split the eigenspace with T_3.
                let b = DMatrix::<f64>::from_columns(&basis);
                let small = b.transpose() * &t[1] * &b;
                let small_eigs = small.complex_eigenvalues();
                let mut sub: Vec<f64> = small_eigs.iter().map(|z| z.re).collect();
                sub.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
                let sub_scale = sub.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                sub.dedup_by(|a, b| (*a - *b).abs() <= 1e-8 * sub_scale);
                if sub.len() < g {
                    return Err(ModformsError::DegenerateEigenvalues { weight: k });
                }
                for mu in sub {
                    let shifted_small = &small - DMatrix::<f64>::identity(g, g) * mu;
                    let small_kernel = nullspace(&shifted_small, 1e-8);
                    for v in small_kernel {
                        vectors.push(&b * v);
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    for mut v in vectors {
        v /= v.norm();
        // Deterministic orientation: first sizable component positive.
        if let Some(lead) = v.iter().find(|x| x.abs() > 1e-8) {
            if *lead < 0.0 {
                v = -v;
            }
        }
        let mut eigenvalues = Vec::new();
        let mut residual = 0.0f64;
        for (i, &p) in EIGENFORM_PRIMES.iter().enumerate() {
            let image = &t[i] * &v;
            let lambda = image.dot(&v);
            let r = (&image - &v * lambda).norm() / t[i].norm().max(1.0);
            if r > EIGENFORM_RESIDUAL_TOL {
                return Err(ModformsError::EigenformResidual {
                    weight: k,
                    index: p,
                    residual: r,
                });
            }
            residual = residual.max(r);
            eigenvalues.push((p, lambda));
        }
        out.push(Eigenform {
            weight: k,
            eigenvalues,
            coords: v.map(|x| Complex64::new(x, 0.0)),
            residual,
        });
    }
    // Deterministic order: descending T_2 eigenvalue.
    out.sort_by(|a, b| {
        b.eigenvalues[0]
            .1
            .partial_cmp(&a.eigenvalues[0].1)
            .expect("finite eigenvalues")
    });
    Ok(out)
}

/// Orthonormal basis of the numerical kernel of `m`, from the right singular
/// vectors whose singular values fall below `eps * sigma_max`.
fn nullspace(m: &DMatrix<f64>, eps: f64) -> Vec<DVector<f64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= eps * smax.max(1e-300) {
            out.push(v_t.row(i).transpose());
        }
    }
    // Singular values of rank-deficient square matrices may list the kernel
    // directions last; also pick up rows v_t omits from a wide SVD.
    if out.is_empty() && m.nrows() == m.ncols() {
        // Fall back: smallest singular direction.
        if let Some((i, _)) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite singular values"))
        {
            out.push(v_t.row(i).transpose());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::rational_to_f64;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Independent dimension oracle: the classical floor formula.
    fn dim_oracle(k: i64) -> usize {
        if k % 2 != 0 || k < 4 {
            return 0;
        }
        let m = if k % 12 == 2 {
            (k / 12) as usize
        } else {
            (k / 12) as usize + 1
        };
        m.saturating_sub(1)
    }

    /// Independent divisor-sum oracle by trial division.
    fn sigma(e: u32, n: u64) -> BigInt {
        let mut s = BigInt::zero();
        for d in 1..=n {
            if n % d == 0 {
                s += BigInt::from(d).pow(e);
            }
        }
        s
    }

    #[test]
    fn dimensions_match_classical_formula() {
        for k in -5..=120 {
            assert_eq!(dim_cusp(k), dim_oracle(k), "weight {k}");
        }
        assert_eq!(dim_cusp(12), 1);
        assert_eq!(dim_cusp(24), 2);
        assert_eq!(dim_cusp(11), 0);
        assert_eq!(dim_cusp(2), 0);
    }

    #[test]
    fn eisenstein_against_divisor_oracle() {
        let e4 = eisenstein(4, 10).unwrap();
        let e6 = eisenstein(6, 10).unwrap();
        assert_eq!(e4.coeff(0), &rat(1));
        assert_eq!(e6.coeff(0), &rat(1));
        for n in 1..=10u64 {
            assert_eq!(
                e4.coeff(n as usize),
                &BigRational::from_integer(BigInt::from(240) * sigma(3, n))
            );
            assert_eq!(
                e6.coeff(n as usize),
                &BigRational::from_integer(BigInt::from(-504) * sigma(5, n))
            );
        }
        // sigma_3(2) = 9, sigma_5(2) = 33.
        assert_eq!(e4.coeff(2), &rat(2160));
        assert_eq!(e6.coeff(2), &rat(-16632));
        // (E4 + E6) has -264 at q^1.
        assert_eq!((&e4 + &e6).coeff(1), &rat(-264));
    }

    #[test]
    fn eisenstein_rejects_other_weights() {
        assert!(matches!(
            eisenstein(8, 10),
            Err(ModformsError::UnsupportedEisensteinWeight(8))
        ));
    }

    /// Pentagonal-number oracle for Euler's product, raised to the 24th.
    fn delta_oracle(prec: usize) -> QExpansion {
        let mut euler = vec![BigRational::zero(); prec + 1];
        euler[0] = BigRational::one();
        let mut j: i64 = 1;
        loop {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g1 > prec && g2 > prec {
                break;
            }
            let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
            if g1 <= prec {
                euler[g1] = sign.clone();
            }
            if g2 <= prec {
                euler[g2] = sign;
            }
            j += 1;
        }
        QExpansion::new(euler).pow(24).shift_up(1)
    }

    #[test]
    fn delta_against_pentagonal_oracle() {
        let d = delta(40);
        assert_eq!(d, delta_oracle(40));
        assert_eq!(d.coeff(0), &rat(0));
        assert_eq!(d.coeff(1), &rat(1));
        assert_eq!(d.coeff(2), &rat(-24));
        assert_eq!(d.coeff(3), &rat(252));
        assert_eq!(d.coeff(4), &rat(-1472));
    }

    #[test]
    fn delta_equals_eisenstein_combination() {
        let prec = 30;
        let e4 = eisenstein(4, prec).unwrap();
        let e6 = eisenstein(6, prec).unwrap();
        let lhs = &e4.pow(3) - &e6.pow(2);
        assert_eq!(lhs, delta(prec).scale(&rat(1728)));
    }

    #[test]
    fn basis_weight_12_is_delta() {
        let s = cusp_basis(12, 20).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis()[0], delta(20));
    }

    #[test]
    fn basis_weight_16_is_echelonized() {
        let s = cusp_basis(16, 20).unwrap();
        assert_eq!(s.dim(), 1);
        let expected = &eisenstein(4, 20).unwrap() * &delta(20);
        assert_eq!(s.basis()[0], expected);
        assert_eq!(s.basis()[0].coeff(1), &rat(1));
    }

    #[test]
    fn basis_weight_10_is_empty() {
        let s = cusp_basis(10, 20).unwrap();
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn basis_echelon_shape() {
        for k in [12, 16, 18, 20, 22, 24, 26, 28] {
            let s = cusp_basis(k, 40).unwrap();
            for (i, b) in s.basis().iter().enumerate() {
                assert!(b.coeff(0).is_zero());
                for j in 0..s.dim() {
                    let expected = if i == j { rat(1) } else { rat(0) };
                    assert_eq!(b.coeff(j + 1), &expected, "k={k} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn basis_rejects_low_precision() {
        assert!(matches!(
            cusp_basis(24, 2),
            Err(ModformsError::InsufficientPrecision { .. })
        ));
    }

    /// Independent coefficient-action oracle for `T_n`.
    fn hecke_oracle(f: &QExpansion, k: i64, n: u64, out_prec: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); out_prec + 1];
        for (m, slot) in out.iter_mut().enumerate() {
            for d in 1..=n {
                if n % d != 0 {
                    continue;
                }
                if m != 0 && (m as u64) % d != 0 {
                    continue;
                }
                let idx = (m as u64 * n / (d * d)) as usize;
                *slot += BigRational::from_integer(BigInt::from(d).pow((k - 1) as u32))
                    * f.coeff(idx);
            }
        }
        out
    }

    #[test]
    fn hecke_t2_delta_is_minus_24_delta() {
        let d = delta(40);
        let t2d = hecke_apply(&d, 12, 2).unwrap();
        assert_eq!(t2d, d.truncate(20).scale(&rat(-24)));
        assert_eq!(t2d.coeffs().to_vec(), hecke_oracle(&d, 12, 2, 20));
    }

    #[test]
    fn hecke_t1_is_identity() {
        let d = delta(15);
        assert_eq!(hecke_apply(&d, 12, 1).unwrap(), d);
    }

    #[test]
    fn hecke_first_coefficient_reads_a_n() {
        let f = &eisenstein(4, 60).unwrap() * &delta(60);
        for n in 1..=6u64 {
            let g = hecke_apply(&f, 16, n).unwrap();
            assert_eq!(g.coeff(1), f.coeff(n as usize), "n={n}");
        }
    }

    #[test]
    fn hecke_matrix_weight_12() {
        let m2 = hecke_matrix(12, 2, 20).unwrap();
        assert_eq!(m2.entries, RatMatrix::from_rows(vec![vec![rat(-24)]]));
        let m4 = hecke_matrix(12, 4, 20).unwrap();
        // T_4 = T_2^2 - 2^11 on weight 12: (-24)^2 - 2048 = -1472.
        assert_eq!(m4.entries, RatMatrix::from_rows(vec![vec![rat(-1472)]]));
    }

    #[test]
    fn hecke_matrix_weight_24_trace() {
        let m = hecke_matrix(24, 2, 40).unwrap();
        assert_eq!(m.entries.trace(), rat(1080));
    }

    #[test]
    fn hecke_relation_small() {
        for (k, prec) in [(12i64, 130usize), (24, 130)] {
            let space = cusp_basis(k, prec).unwrap();
            for p in [2u64, 3] {
                let tp = hecke_matrix_on(&space, p).unwrap().entries;
                let tp2 = hecke_matrix_on(&space, p * p).unwrap().entries;
                let tp3 = hecke_matrix_on(&space, p * p * p).unwrap().entries;
                let pk1 = BigRational::from_integer(BigInt::from(p).pow((k - 1) as u32));
                let rhs = tp.mul(&tp2).sub(&tp.scale(&pk1));
                assert_eq!(tp3, rhs, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn eigenforms_weight_12() {
        let forms = eigenforms(12, 40).unwrap();
        assert_eq!(forms.len(), 1);
        let f = &forms[0];
        assert!((f.eigenvalues[0].1 - (-24.0)).abs() < 1e-9);
        assert!((f.eigenvalues[1].1 - 252.0).abs() < 1e-9);
        assert!((f.eigenvalues[2].1 - 4830.0).abs() < 1e-9);
        assert!(f.residual <= EIGENFORM_RESIDUAL_TOL);
    }

    #[test]
    fn eigenforms_weight_24() {
        let forms = eigenforms(24, 130).unwrap();
        assert_eq!(forms.len(), 2);
        let sum: f64 = forms.iter().map(|f| f.eigenvalues[0].1).sum();
        assert!((sum - 1080.0).abs() < 1e-6, "trace {sum}");
        let root = 144169f64.sqrt();
        let expected = [540.0 + 12.0 * root, 540.0 - 12.0 * root];
        for (f, e) in forms.iter().zip(expected) {
            assert!((f.eigenvalues[0].1 - e).abs() <= 1e-6 * e.abs());
            assert!(f.residual <= EIGENFORM_RESIDUAL_TOL);
        }
    }

    #[test]
    fn eigenforms_weight_10_empty() {
        assert!(eigenforms(10, 40).unwrap().is_empty());
    }

    #[test]
    fn eigenform_coefficients_recover_hecke_eigenvalues() {
        // For a normalized eigenform, a_p equals the T_p eigenvalue; check it
        // numerically through the basis expansion at weight 24.
        let space = cusp_basis(24, 40).unwrap();
        let forms = eigenforms(24, 130).unwrap();
        for f in &forms {
            let a1: f64 = (0..space.dim())
                .map(|i| f.coords[i].re * rational_to_f64(space.basis()[i].coeff(1)))
                .sum();
            let a2: f64 = (0..space.dim())
                .map(|i| f.coords[i].re * rational_to_f64(space.basis()[i].coeff(2)))
                .sum();
            // a_2 / a_1 is the T_2 eigenvalue of the normalization-free line.
            assert!((a2 / a1 - f.eigenvalues[0].1).abs() <= 1e-6 * f.eigenvalues[0].1.abs());
        }
    }
}
