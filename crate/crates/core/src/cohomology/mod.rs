//! Finite-dimensional graded-commutative cohomology rings over `ℚ`.
//!
//! A [`GradedRing`] stores Betti numbers, basis labels, and cup-product
//! structure constants. Construction always validates the ring axioms:
//! a one-dimensional degree 0 acting as the unit, graded commutativity
//! `x ∪ y = (-1)^{|x||y|} y ∪ x`, associativity on basis triples, and
//! vanishing of products above the top degree.
//!
//! Presets for the standard spaces live in [`preset`], the line-oriented
//! file format in [`io`], and hard-Lefschetz machinery in [`lefschetz`].

mod io;
mod lefschetz;
mod preset;

pub use io::{load_ring, write_ring};
pub use lefschetz::{
    hard_lefschetz_report, LefschetzInjectivityCheck, LefschetzMapCheck, LefschetzReport,
};
pub use preset::{parse_preset, preset, Preset};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::qexp::rational_to_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unit axiom violated: {message}")]
    UnitAxiom { message: String },
    #[error(
        "graded commutativity violated at ({p}:{i}, {q}:{j}): \
         product of the pair and its swap disagree with the sign (-1)^{{pq}}"
    )]
    Commutativity { p: usize, i: usize, q: usize, j: usize },
    #[error(
        "associativity violated on the triple ({p}:{i}, {q}:{j}, {r}:{l}): \
         (x∪y)∪z != x∪(y∪z)"
    )]
    Associativity {
        p: usize,
        i: usize,
        q: usize,
        j: usize,
        r: usize,
        l: usize,
    },
    #[error("degree out of range: {message}")]
    DegreeOutOfRange { message: String },
    #[error("malformed preset: {0}")]
    BadPreset(String),
    #[error("expected a class of degree 2 for omega, got degree {got}")]
    OmegaDegree { got: usize },
    #[error("hard Lefschetz needs an even top degree, got {top}")]
    OddTopDegree { top: usize },
}

/// Structure-constant key: basis element `i` of degree `p` times basis
/// element `j` of degree `q`. Both degrees are positive; unit products are
/// implicit.
type ProductKey = (usize, usize, usize, usize);

/// A graded-commutative algebra over `ℚ` given by additive bases and
/// structure constants. The model of `H^*(X; ℚ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedRing {
    name: String,
    top: usize,
    betti: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// Sparse products: key `(p, i, q, j)` maps to the coordinates of the
    /// product in degree `p + q`. Absent keys are zero.
    products: BTreeMap<ProductKey, Vec<(usize, BigRational)>>,
}

/// A homogeneous cohomology class with exact rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CohClass {
    pub degree: usize,
    pub coords: Vec<BigRational>,
}

impl CohClass {
    pub fn zero(ring: &GradedRing, degree: usize) -> CohClass {
        CohClass {
            degree,
            coords: vec![BigRational::zero(); ring.betti(degree)],
        }
    }

    /// The `idx`-th basis element of the given degree.
    pub fn basis(ring: &GradedRing, degree: usize, idx: usize) -> CohClass {
        let mut c = CohClass::zero(ring, degree);
        c.coords[idx] = BigRational::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn coords_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }
}

impl GradedRing {
    /// Build and validate a ring. `products` may contain either or both
    /// orientations of each pair; missing orientations are filled in by
    /// graded commutativity, present ones are checked against it.
    pub fn new(
        name: impl Into<String>,
        betti: Vec<usize>,
        labels: Option<Vec<Vec<String>>>,
        products: BTreeMap<ProductKey, Vec<(usize, BigRational)>>,
    ) -> Result<GradedRing, CohomologyError> {
        if betti.is_empty() {
            return Err(CohomologyError::DegreeOutOfRange {
                message: "a ring needs at least degree 0".into(),
            });
        }
        if betti[0] != 1 {
            return Err(CohomologyError::UnitAxiom {
                message: format!("b_0 must be 1, got {}", betti[0]),
            });
        }
        let top = betti.len() - 1;
        let labels = match labels {
            Some(l) => {
                if l.len() != betti.len() || l.iter().zip(&betti).any(|(v, &b)| v.len() != b) {
                    return Err(CohomologyError::DegreeOutOfRange {
                        message: "label table shape disagrees with the Betti numbers".into(),
                    });
                }
                l
            }
            None => default_labels(&betti),
        };

        // Normalize: drop zero coefficients, sort targets, bounds-check.
        let mut normalized: BTreeMap<ProductKey, Vec<(usize, BigRational)>> = BTreeMap::new();
        for ((p, i, q, j), terms) in products {
            if p == 0 || q == 0 {
                return Err(CohomologyError::UnitAxiom {
                    message: "unit products are implicit and must not be stored".into(),
                });
            }
            if p > top || q > top || i >= betti[p] || j >= betti[q] {
                return Err(CohomologyError::DegreeOutOfRange {
                    message: format!("product key ({p}:{i}, {q}:{j}) out of range"),
                });
            }
            let mut merged: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (z, c) in terms {
                if c.is_zero() {
                    continue;
                }
                if p + q > top {
                    return Err(CohomologyError::DegreeOutOfRange {
                        message: format!(
                            "product ({p}:{i}, {q}:{j}) targets degree {} above top {top}",
                            p + q
                        ),
                    });
                }
                if z >= betti[p + q] {
                    return Err(CohomologyError::DegreeOutOfRange {
                        message: format!(
                            "product ({p}:{i}, {q}:{j}) targets index {z} in degree {}",
                            p + q
                        ),
                    });
                }
                *merged.entry(z).or_insert_with(BigRational::zero) += c;
            }
            merged.retain(|_, c| !c.is_zero());
            if !merged.is_empty() {
                normalized.insert((p, i, q, j), merged.into_iter().collect());
            }
        }

        let mut ring = GradedRing {
            name: name.into(),
            top,
            betti,
            labels,
            products: normalized,
        };
        ring.symmetrize()?;
        ring.check_associativity()?;
        Ok(ring)
    }

    /// Fill in missing orientations by graded commutativity and check the
    /// ones that are present, including odd-degree squares.
    fn symmetrize(&mut self) -> Result<(), CohomologyError> {
        let keys: Vec<ProductKey> = self.products.keys().copied().collect();
        for (p, i, q, j) in keys {
            let sign = koszul_sign(p, q);
            let this = self.products.get(&(p, i, q, j)).cloned().unwrap_or_default();
            let expected: Vec<(usize, BigRational)> = this
                .iter()
                .map(|(z, c)| (*z, c * BigRational::from_integer(sign.into())))
                .collect();
            match self.products.get(&(q, j, p, i)) {
                None => {
                    if (p, i) == (q, j) {
                        // x ∪ x with the swap equal to itself: for odd p the
                        // sign forces 2 x∪x = 0, i.e. a commutativity failure
                        // whenever the stored square is nonzero.
                        if sign < 0 && !this.is_empty() {
                            return Err(CohomologyError::Commutativity { p, i, q, j });
                        }
                    } else if !expected.is_empty() {
                        self.products.insert((q, j, p, i), expected);
                    }
                }
                Some(other) => {
                    if (p, i) == (q, j) && sign < 0 && !this.is_empty() {
                        return Err(CohomologyError::Commutativity { p, i, q, j });
                    }
                    if *other != expected {
                        return Err(CohomologyError::Commutativity { p, i, q, j });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), CohomologyError> {
        for p in 1..=self.top {
            for q in 1..=self.top {
                for r in 1..=self.top {
                    if p + q + r > self.top {
                        continue;
                    }
                    for i in 0..self.betti[p] {
                        for j in 0..self.betti[q] {
                            for l in 0..self.betti[r] {
                                let xy = self.structure_vector(p, i, q, j);
                                let mut lhs = vec![BigRational::zero(); self.betti[p + q + r]];
                                for (z, c) in &xy {
                                    for (w, d) in self.structure_vector(p + q, *z, r, l) {
                                        lhs[w] += c * &d;
                                    }
                                }
                                let yz = self.structure_vector(q, j, r, l);
                                let mut rhs = vec![BigRational::zero(); self.betti[p + q + r]];
                                for (z, c) in &yz {
                                    for (w, d) in self.structure_vector(p, i, q + r, *z) {
                                        rhs[w] += c * &d;
                                    }
                                }
                                if lhs != rhs {
                                    return Err(CohomologyError::Associativity {
                                        p,
                                        i,
                                        q,
                                        j,
                                        r,
                                        l,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-run the construction-time validation; presets and loads share it.
    pub fn validate(&self) -> Result<(), CohomologyError> {
        GradedRing::new(
            self.name.clone(),
            self.betti.clone(),
            Some(self.labels.clone()),
            self.products.clone(),
        )
        .map(|_| ())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Betti number, zero outside `0..=top`.
    pub fn betti(&self, degree: usize) -> usize {
        self.betti.get(degree).copied().unwrap_or(0)
    }

    pub fn betti_numbers(&self) -> &[usize] {
        &self.betti
    }

    pub fn total_dim(&self) -> usize {
        self.betti.iter().sum()
    }

    pub fn label(&self, degree: usize, idx: usize) -> &str {
        &self.labels[degree][idx]
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        &self.labels[degree]
    }

    /// Whether `b_n = b_{top-n}` for all degrees; a diagnostic, not an axiom.
    pub fn poincare_symmetric(&self) -> bool {
        (0..=self.top).all(|n| self.betti(n) == self.betti(self.top - n))
    }

    /// Coordinates of `basis(p, i) ∪ basis(q, j)` in degree `p + q`. Unit
    /// factors act as the identity; everything above `top` is zero.
    pub fn structure_vector(&self, p: usize, i: usize, q: usize, j: usize) -> Vec<(usize, BigRational)> {
        if p == 0 {
            debug_assert_eq!(i, 0);
            return vec![(j, BigRational::one())];
        }
        if q == 0 {
            debug_assert_eq!(j, 0);
            return vec![(i, BigRational::one())];
        }
        if p + q > self.top {
            return Vec::new();
        }
        self.products.get(&(p, i, q, j)).cloned().unwrap_or_default()
    }

    /// Iterate the stored (positive-degree) products.
    pub(crate) fn stored_products(
        &self,
    ) -> impl Iterator<Item = (&ProductKey, &Vec<(usize, BigRational)>)> {
        self.products.iter()
    }

    /// Bilinear cup product of two classes.
    pub fn cup(&self, x: &CohClass, y: &CohClass) -> CohClass {
        assert!(
            x.degree <= self.top && y.degree <= self.top,
            "cup factors must have degrees within the ring"
        );
        assert_eq!(x.coords.len(), self.betti(x.degree), "x shape");
        assert_eq!(y.coords.len(), self.betti(y.degree), "y shape");
        let deg = x.degree + y.degree;
        let mut out = vec![BigRational::zero(); self.betti(deg)];
        for (i, xc) in x.coords.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (j, yc) in y.coords.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                for (z, c) in self.structure_vector(x.degree, i, y.degree, j) {
                    out[z] += xc * yc * c;
                }
            }
        }
        CohClass {
            degree: deg,
            coords: out,
        }
    }

    /// Cup product on complex coordinate vectors; the extension of scalars
    /// the topological product layer works in.
    pub fn cup_complex(
        &self,
        p: usize,
        x: &[Complex64],
        q: usize,
        y: &[Complex64],
    ) -> Vec<Complex64> {
        assert_eq!(x.len(), self.betti(p), "x shape");
        assert_eq!(y.len(), self.betti(q), "y shape");
        let mut out = vec![Complex64::zero(); self.betti(p + q)];
        for (i, xc) in x.iter().enumerate() {
            for (j, yc) in y.iter().enumerate() {
                if xc.is_zero() || yc.is_zero() {
                    continue;
                }
                for (z, c) in self.structure_vector(p, i, q, j) {
                    out[z] += xc * yc * rational_to_f64(&c);
                }
            }
        }
        out
    }
}

/// `(-1)^{pq}`.
fn koszul_sign(p: usize, q: usize) -> i32 {
    if (p * q) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn default_labels(betti: &[usize]) -> Vec<Vec<String>> {
    betti
        .iter()
        .enumerate()
        .map(|(deg, &b)| {
            (0..b)
                .map(|i| {
                    if deg == 0 {
                        "1".to_string()
                    } else {
                        format!("e{deg}_{i}")
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unit_acts_as_identity() {
        let r = preset(&parse_preset("cp(2)").unwrap()).unwrap();
        let one = CohClass::basis(&r, 0, 0);
        let h = CohClass::basis(&r, 2, 0);
        assert_eq!(r.cup(&one, &h), h);
        assert_eq!(r.cup(&h, &one), h);
    }

    #[test]
    fn cp2_square_spans_top() {
        let r = preset(&parse_preset("cp(2)").unwrap()).unwrap();
        let h = CohClass::basis(&r, 2, 0);
        let h2 = r.cup(&h, &h);
        assert_eq!(h2.degree, 4);
        assert_eq!(h2.coords, vec![rat(1)]);
        // h^3 dies above the top degree
        let h3 = r.cup(&h2, &h);
        assert_eq!(h3.degree, 6);
        assert!(h3.coords.is_empty());
    }

    #[test]
    fn sphere_square_vanishes() {
        for n in 1..=5 {
            let r = preset(&Preset::Sphere(n)).unwrap();
            let x = CohClass::basis(&r, n as usize, 0);
            assert!(r.cup(&x, &x).is_zero(), "n={n}");
        }
    }

    #[test]
    fn torus_generators_anticommute() {
        let r = preset(&Preset::Torus(2)).unwrap();
        let e1 = CohClass::basis(&r, 1, 0);
        let e2 = CohClass::basis(&r, 1, 1);
        let a = r.cup(&e1, &e2);
        let b = r.cup(&e2, &e1);
        assert_eq!(a.coords[0], -b.coords[0].clone());
        assert!(!a.is_zero());
        assert!(r.cup(&e1, &e1).is_zero());
    }

    #[test]
    fn odd_square_rejected_by_validation() {
        // b_1 = 1 with a nonzero square of the odd generator.
        let mut products = BTreeMap::new();
        products.insert((1usize, 0usize, 1usize, 0usize), vec![(0usize, rat(1))]);
        let err = GradedRing::new("bad", vec![1, 1, 1], None, products).unwrap_err();
        assert!(matches!(err, CohomologyError::Commutativity { p: 1, i: 0, q: 1, j: 0 }));
    }

    #[test]
    fn mismatched_orientations_rejected() {
        let mut products = BTreeMap::new();
        products.insert((1usize, 0usize, 1usize, 1usize), vec![(0usize, rat(1))]);
        // should be -1 by anticommutativity
        products.insert((1usize, 1usize, 1usize, 0usize), vec![(0usize, rat(1))]);
        let err = GradedRing::new("bad", vec![1, 2, 1], None, products).unwrap_err();
        assert!(matches!(err, CohomologyError::Commutativity { .. }));
    }

    #[test]
    fn associativity_violation_detected() {
        // Degree-2 generators a, b with a∪a = b∪b = A, a∪b = 0, and
        // a∪A = T but b∪A = 0: then (b∪b)∪a = T while b∪(b∪a) = 0.
        let mut products = BTreeMap::new();
        products.insert((2usize, 0usize, 2usize, 0usize), vec![(0usize, rat(1))]);
        products.insert((2usize, 1usize, 2usize, 1usize), vec![(0usize, rat(1))]);
        products.insert((2usize, 0usize, 4usize, 0usize), vec![(0usize, rat(1))]);
        let err =
            GradedRing::new("bad", vec![1, 0, 2, 0, 1, 0, 1], None, products).unwrap_err();
        assert!(matches!(err, CohomologyError::Associativity { .. }));
    }

    #[test]
    fn bad_unit_betti_rejected() {
        let err = GradedRing::new("bad", vec![2, 1], None, BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CohomologyError::UnitAxiom { .. }));
    }

    #[test]
    fn presets_pass_validation() {
        for spec in [
            "point",
            "sphere(1)",
            "sphere(4)",
            "cp(1)",
            "cp(4)",
            "torus(3)",
            "product(cp(1),cp(1))",
            "product(cp(2),cp(3))",
            "product(sphere(2),torus(2))",
            "wedge(sphere(2),sphere(4))",
            "wedge(cp(2),sphere(3))",
        ] {
            let r = preset(&parse_preset(spec).unwrap()).unwrap();
            r.validate().unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert!(r.betti(0) == 1, "{spec}");
        }
    }

    #[test]
    fn kunneth_betti_oracle() {
        // Brute-force convolution of Betti vectors.
        let a = preset(&parse_preset("cp(1)").unwrap()).unwrap();
        let b = preset(&parse_preset("cp(1)").unwrap()).unwrap();
        let p = preset(&parse_preset("product(cp(1),cp(1))").unwrap()).unwrap();
        let mut conv = vec![0usize; a.top() + b.top() + 1];
        for i in 0..=a.top() {
            for j in 0..=b.top() {
                conv[i + j] += a.betti(i) * b.betti(j);
            }
        }
        assert_eq!(p.betti_numbers(), conv.as_slice());
        assert_eq!(p.betti_numbers(), &[1, 0, 2, 0, 1]);
    }

    #[test]
    fn product_ring_koszul_sign() {
        // In T^2 x T^2 = torus(2) x torus(2), the cross generators from odd
        // degrees pick up signs; validation would fail if they were wrong.
        let r = preset(&parse_preset("product(torus(2),torus(2))").unwrap()).unwrap();
        assert!(r.poincare_symmetric());
        // (e1 x 1) ∪ (1 x e1) = -(1 x e1) ∪ (e1 x 1)
        // Find the two degree-1 basis classes.
        let x = CohClass::basis(&r, 1, 0);
        let y = CohClass::basis(&r, 1, 2);
        let xy = r.cup(&x, &y);
        let yx = r.cup(&y, &x);
        assert!(!xy.is_zero());
        let neg: Vec<BigRational> = yx.coords.iter().map(|c| -c.clone()).collect();
        assert_eq!(xy.coords, neg);
    }

    #[test]
    fn wedge_cross_products_vanish() {
        let r = preset(&parse_preset("wedge(cp(2),sphere(2))").unwrap()).unwrap();
        // Degree 2 holds h from cp(2) and x from sphere(2), in that order.
        assert_eq!(r.betti(2), 2);
        let h = CohClass::basis(&r, 2, 0);
        let x = CohClass::basis(&r, 2, 1);
        assert!(!r.cup(&h, &h).is_zero());
        assert!(r.cup(&h, &x).is_zero());
        assert!(r.cup(&x, &x).is_zero());
    }

    #[test]
    fn cup_complex_matches_rational_cup() {
        let r = preset(&parse_preset("product(cp(1),cp(1))").unwrap()).unwrap();
        let x = CohClass {
            degree: 2,
            coords: vec![rat(2), rat(-3)],
        };
        let y = CohClass {
            degree: 2,
            coords: vec![rat(1), rat(5)],
        };
        let exact = r.cup(&x, &y);
        let xc: Vec<Complex64> = x.coords_f64().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let yc: Vec<Complex64> = y.coords_f64().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let approx = r.cup_complex(2, &xc, 2, &yc);
        for (e, a) in exact.coords_f64().iter().zip(&approx) {
            assert!((e - a.re).abs() < 1e-12 && a.im == 0.0);
        }
    }
}
