//! Numerical Petersson inner products on `S_k ⊗ ℂ`.
//!
//! The inner product `<f, g> = ∫ F(τ) conj(G(τ)) v^{k-2} du dv` is taken
//! over the standard fundamental domain `{|u| <= 1/2, |τ| >= 1}`, truncated
//! at `v = vmax`. The quadrature is a tensor product: Gauss-Legendre in `u`,
//! and in `v` a composite Gauss-Legendre rule over panels whose widths double
//! away from the lower boundary, where the integrand varies fastest. The
//! dropped cusp region above `vmax` is bounded analytically and folded into
//! the error estimate.
//!
//! Node values and sums are carried in double-double precision so quadrature
//! results are limited by rule truncation, not accumulation roundoff; Hecke
//! self-adjointness residuals in particular survive multiplication by
//! operators of norm ~1e10 without drowning in f64 noise. Nodes are
//! enumerated in a fixed order, so results are bit-reproducible for a given
//! configuration.

use crate::dd::{self, Dd, DdComplex};
use crate::modforms::{self, CuspSpace, ModformsError};
use crate::qexp::rational_to_f64;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeterssonError {
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("S_{weight} is zero-dimensional; nothing to integrate")]
    EmptySpace { weight: i64 },
    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Modforms(#[from] ModformsError),
}

/// Quadrature parameters. `nu`/`nv` are the per-direction node counts at the
/// base resolution; `refine` doubles both once and reports the difference.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub qprec: usize,
    pub vmax: f64,
    pub nu: usize,
    pub nv: usize,
    pub refine: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            qprec: 60,
            vmax: 8.0,
            nu: 64,
            nv: 64,
            refine: true,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), PeterssonError> {
        if !(self.vmax >= 2.0) {
            return Err(PeterssonError::InvalidConfig(format!(
                "vmax must be at least 2, got {}",
                self.vmax
            )));
        }
        if self.nu < 8 || self.nv < 8 {
            return Err(PeterssonError::InvalidConfig(format!(
                "nu and nv must be at least 8, got {} and {}",
                self.nu, self.nv
            )));
        }
        if self.qprec < 10 {
            return Err(PeterssonError::InvalidConfig(format!(
                "qprec must be at least 10, got {}",
                self.qprec
            )));
        }
        Ok(())
    }

    /// The same configuration with both grid resolutions doubled.
    pub fn doubled(&self) -> Self {
        QuadratureConfig {
            nu: self.nu * 2,
            nv: self.nv * 2,
            ..self.clone()
        }
    }
}

/// Value of one inner product with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Gram matrix of the Petersson product on the echelon basis of one weight.
#[derive(Debug, Clone)]
pub struct PeterssonGram {
    pub weight: i64,
    pub matrix: DMatrix<Complex64>,
    pub config: QuadratureConfig,
    /// Largest entrywise change under grid doubling, plus the analytic
    /// bounds for the cusp region and the series truncation.
    pub error_estimate: f64,
}

impl PeterssonGram {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Smallest eigenvalue of the Hermitized matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.matrix.clone().symmetric_eigenvalues();
        eig.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Largest relative deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        let diff = (&self.matrix - &adj).norm();
        diff / self.matrix.norm().max(1e-300)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // p = P_n(x), dp = P_n'(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Number of geometric panels in the `v` direction.
const V_PANELS: usize = 4;

/// Tensor-product nodes `(u, v, weight)` over the truncated fundamental
/// domain. For each `u` the `v` range `[sqrt(1-u^2), vmax]` is split into
/// panels of doubling width so that nodes cluster near the lower boundary.
fn build_nodes(nu: usize, nv: usize, vmax: f64) -> Vec<(f64, f64, f64)> {
    let (xu, wu) = legendre_rule(nu);
    let per_panel = (nv.div_ceil(V_PANELS)).max(2);
    let (xv, wv) = legendre_rule(per_panel);
    let mut nodes = Vec::with_capacity(nu * V_PANELS * per_panel);
    for (ui, uw) in xu.iter().zip(&wu) {
        let u = 0.5 * ui; // [-1/2, 1/2]
        let uweight = 0.5 * uw;
        let v_lo = (1.0 - u * u).sqrt();
        let total = vmax - v_lo;
        let h = total / ((1u64 << V_PANELS) - 1) as f64;
        let mut lo = v_lo;
        for p in 0..V_PANELS {
            let width = h * (1u64 << p) as f64;
            let hi = lo + width;
            for (vi, vw) in xv.iter().zip(&wv) {
                let v = 0.5 * (lo + hi) + 0.5 * width * vi;
                let w = uweight * 0.5 * width * vw;
                nodes.push((u, v, w));
            }
            lo = hi;
        }
    }
    nodes
}

/// Exact double-double image of a rational (up to the ~106-bit width).
fn rational_to_dd(r: &BigRational) -> Dd {
    let hi = rational_to_f64(r);
    let rem = r - BigRational::from_float(hi).expect("finite hi");
    Dd::new(hi, rational_to_f64(&rem))
}

/// Coefficients of a basis element, truncated for evaluation.
struct SeriesDd {
    coeffs: Vec<Dd>,
}

impl SeriesDd {
    fn from_space(space: &CuspSpace, qprec: usize) -> Vec<SeriesDd> {
        let cut = qprec.min(space.prec());
        space
            .basis()
            .iter()
            .map(|b| SeriesDd {
                coeffs: b.coeffs()[..=cut].iter().map(rational_to_dd).collect(),
            })
            .collect()
    }

    fn eval(&self, q: DdComplex) -> DdComplex {
        let mut acc = DdComplex::new(*self.coeffs.last().expect("nonempty"), Dd::ZERO);
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(q).add_re(c);
        }
        acc
    }

    /// `sum_n |a_n| e^{-2 pi (n-1) vmax}`, so that `|F(u+iv)| <= C e^{-2 pi v}`
    /// for `v >= vmax`.
    fn cusp_constant(&self, vmax: f64) -> f64 {
        let x = (-2.0 * PI * vmax).exp();
        let mut c = 0.0;
        let mut xpow = 1.0;
        for a in self.coeffs.iter().skip(1) {
            c += a.hi.abs() * xpow;
            xpow *= x;
        }
        c
    }
}

/// `∫_V^∞ v^p e^{-c v} dv`, exact by repeated integration by parts.
fn exp_poly_tail(p: usize, c: f64, v: f64) -> f64 {
    let mut sum = 0.0;
    let mut falling = 1.0; // p! / (p-i)!
    let mut vpow = v.powi(p as i32);
    let mut cpow = c;
    for i in 0..=p {
        sum += falling * vpow / cpow;
        falling *= (p - i) as f64;
        vpow /= v;
        cpow *= c;
    }
    (-c * v).exp() * sum
}

/// Raw (un-Hermitized) Gram entries at a fixed resolution, row-major,
/// accumulated in double-double precision.
fn gram_raw(
    space: &CuspSpace,
    qprec: usize,
    vmax: f64,
    nu: usize,
    nv: usize,
) -> Vec<DdComplex> {
    let dim = space.dim();
    let series = SeriesDd::from_space(space, qprec);
    let k = space.weight();
    let nodes = build_nodes(nu, nv, vmax);
    let mut sums = vec![DdComplex::ZERO; dim * dim];
    let mut values = vec![DdComplex::ZERO; dim];
    for (u, v, w) in nodes {
        let emv = dd::exp(dd::TWO_PI.mul_f64(v).neg());
        let (sin_u, cos_u) = dd::sincos(dd::TWO_PI.mul_f64(u));
        let q = DdComplex::new(cos_u.mul(emv), sin_u.mul(emv));
        for (val, s) in values.iter_mut().zip(&series) {
            *val = s.eval(q);
        }
        let vk = Dd::from_f64(v).powi((k - 2) as u32).mul_f64(w);
        for i in 0..dim {
            for j in 0..dim {
                let term = values[i].mul_conj(values[j]).scale(vk);
                sums[i * dim + j] = sums[i * dim + j].add(term);
            }
        }
    }
    sums
}

fn raw_to_matrix(raw: &[DdComplex], dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let z = raw[i * dim + j];
        Complex64::new(z.re.to_f64(), z.im.to_f64())
    })
}

/// Analytic bound for the dropped cusp region `v > vmax` plus the series
/// truncation, uniform over Gram entries.
fn tail_bounds(space: &CuspSpace, qprec: usize, vmax: f64) -> f64 {
    let series = SeriesDd::from_space(space, qprec);
    let k = space.weight();
    let cmax = series
        .iter()
        .map(|s| s.cusp_constant(vmax))
        .fold(0.0f64, f64::max);
    let cusp = cmax * cmax * exp_poly_tail((k - 2).max(0) as usize, 4.0 * PI, vmax);
    // Series truncation: every node has v >= sqrt(3)/2; the dropped terms of
    // one factor multiply the full mass of the other.
    let vmin = 0.75f64.sqrt();
    let x = (-2.0 * PI * vmin).exp();
    let mut mass = 0.0f64;
    let mut tail = 0.0f64;
    for s in &series {
        let mut m = 0.0;
        let mut xpow = x;
        for a in s.coeffs.iter().skip(1) {
            m += a.hi.abs() * xpow;
            xpow *= x;
        }
        mass = mass.max(m);
        let last = s.coeffs.last().map(|a| a.hi.abs()).unwrap_or(0.0);
        let n1 = s.coeffs.len() as f64;
        let growth = (n1 + 1.0).powi(k.max(0) as i32) / n1.powi(k.max(0) as i32);
        let first_dropped = last.max(1.0) * growth * x.powf(n1);
        tail = tail.max(first_dropped / (1.0 - x * growth).max(0.5));
    }
    let domain = vmax.powi((k - 2).max(0) as i32) * vmax;
    cusp + 2.0 * tail * mass * domain
}

/// Petersson inner product of two coordinate vectors over `space`'s basis.
/// Linear in `f`, conjugate-linear in `g`.
pub fn inner(
    space: &CuspSpace,
    f: &[Complex64],
    g: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<InnerProduct, PeterssonError> {
    cfg.validate()?;
    let dim = space.dim();
    if dim == 0 {
        return Err(PeterssonError::EmptySpace {
            weight: space.weight(),
        });
    }
    for v in [f, g] {
        if v.len() != dim {
            return Err(PeterssonError::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    let pair = |m: &DMatrix<Complex64>| -> Complex64 {
        let mut acc = Complex64::zero();
        for i in 0..dim {
            for j in 0..dim {
                acc += f[i] * m[(i, j)] * g[j].conj();
            }
        }
        acc
    };
    let coarse = raw_to_matrix(&gram_raw(space, cfg.qprec, cfg.vmax, cfg.nu, cfg.nv), dim);
    let tail = tail_bounds(space, cfg.qprec, cfg.vmax);
    let scale: f64 =
        f.iter().map(|z| z.norm()).sum::<f64>() * g.iter().map(|z| z.norm()).sum::<f64>();
    if cfg.refine {
        let fine = raw_to_matrix(
            &gram_raw(space, cfg.qprec, cfg.vmax, cfg.nu * 2, cfg.nv * 2),
            dim,
        );
        let value = pair(&fine);
        let err = (value - pair(&coarse)).norm() + tail * scale;
        Ok(InnerProduct {
            value,
            error_estimate: err,
        })
    } else {
        Ok(InnerProduct {
            value: pair(&coarse),
            error_estimate: tail * scale,
        })
    }
}

/// Hermitized Gram entries in double-double, with the grid-doubling error
/// estimate; shared by the public entry points.
fn gram_dd(
    space: &CuspSpace,
    cfg: &QuadratureConfig,
) -> Result<(Vec<DdComplex>, f64), PeterssonError> {
    cfg.validate()?;
    let dim = space.dim();
    if dim == 0 {
        return Err(PeterssonError::EmptySpace {
            weight: space.weight(),
        });
    }
    if space.prec() < cfg.qprec {
        return Err(PeterssonError::Modforms(
            ModformsError::InsufficientPrecision {
                what: "Petersson quadrature",
                needed: cfg.qprec,
                got: space.prec(),
            },
        ));
    }
    let coarse = gram_raw(space, cfg.qprec, cfg.vmax, cfg.nu, cfg.nv);
    let tail = tail_bounds(space, cfg.qprec, cfg.vmax);
    let (raw, grid_err) = if cfg.refine {
        let fine = gram_raw(space, cfg.qprec, cfg.vmax, cfg.nu * 2, cfg.nv * 2);
        let diff = fine
            .iter()
            .zip(&coarse)
            .map(|(a, b)| {
                let dr = a.re.to_f64() - b.re.to_f64();
                let di = a.im.to_f64() - b.im.to_f64();
                (dr * dr + di * di).sqrt()
            })
            .fold(0.0f64, f64::max);
        (fine, diff)
    } else {
        (coarse, 0.0)
    };
    // Hermitize: average with the conjugate transpose.
    let mut herm = vec![DdComplex::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let a = raw[i * dim + j];
            let b = raw[j * dim + i];
            herm[i * dim + j] = DdComplex::new(
                a.re.add(b.re).scale_pow2(-1),
                a.im.sub(b.im).scale_pow2(-1),
            );
        }
    }
    Ok((herm, grid_err + tail))
}

/// Gram matrix over an already built space (whose precision must cover
/// `cfg.qprec`).
pub fn gram_on(space: &CuspSpace, cfg: &QuadratureConfig) -> Result<PeterssonGram, PeterssonError> {
    let (herm, error_estimate) = gram_dd(space, cfg)?;
    Ok(PeterssonGram {
        weight: space.weight(),
        matrix: raw_to_matrix(&herm, space.dim()),
        config: cfg.clone(),
        error_estimate,
    })
}

/// Gram matrix of `S_k`, building the basis at the configured precision.
pub fn gram(k: i64, cfg: &QuadratureConfig) -> Result<PeterssonGram, PeterssonError> {
    cfg.validate()?;
    if modforms::dim_cusp(k) == 0 {
        return Err(PeterssonError::EmptySpace { weight: k });
    }
    let prec = cfg.qprec.max(modforms::dim_cusp(k) + 1);
    let space = modforms::cusp_basis_cached(k, prec)?;
    gram_on(&space, cfg)
}

/// Relative failure of `<T_n f, g> = <f, T_n g>` on the echelon basis:
/// `||T^t G - G conj(T)|| / ||G||` in the Frobenius norm. The commutator is
/// formed in double-double with the exact Hecke entries, so the result
/// reflects quadrature truncation rather than f64 noise amplified by `||T||`.
pub fn self_adjointness_residual(
    k: i64,
    n: u64,
    cfg: &QuadratureConfig,
) -> Result<f64, PeterssonError> {
    cfg.validate()?;
    let dim = modforms::dim_cusp(k);
    if dim == 0 {
        return Err(PeterssonError::EmptySpace { weight: k });
    }
    let prec = cfg.qprec.max(n as usize * (dim + 1));
    let space = modforms::cusp_basis_cached(k, prec)?;
    let (g, _) = gram_dd(&space, cfg)?;
    let t = modforms::hecke_matrix_on(&space, n)?;
    let t_dd: Vec<Dd> = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .map(|(i, j)| rational_to_dd(&t.entries[(i, j)]))
        .collect();
    // commutator C = T^t G - G conj(T); T is real.
    let mut frob2 = 0.0f64;
    let mut gnorm2 = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let mut c = DdComplex::ZERO;
            for l in 0..dim {
                let tg = g[l * dim + j].scale(t_dd[l * dim + i]);
                let gt = g[i * dim + l].scale(t_dd[l * dim + j]);
                c = c.add(tg).add(gt.scale(Dd::from_f64(-1.0)));
            }
            frob2 += c.re.to_f64().powi(2) + c.im.to_f64().powi(2);
            let ge = g[i * dim + j];
            gnorm2 += ge.re.to_f64().powi(2) + ge.im.to_f64().powi(2);
        }
    }
    Ok(frob2.sqrt() / gnorm2.sqrt().max(1e-300))
}
