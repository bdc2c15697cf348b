//! Built-in cohomology rings: point, spheres, complex projective spaces,
//! tori, and binary product/wedge combinations, with a small parser for
//! preset expressions like `product(cp(1),cp(1))`.

use super::{CohomologyError, GradedRing};
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;

/// Description of a preset space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Point,
    Sphere(u32),
    Cp(u32),
    Torus(u32),
    Product(Box<Preset>, Box<Preset>),
    Wedge(Box<Preset>, Box<Preset>),
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Preset::Point => write!(f, "point"),
            Preset::Sphere(n) => write!(f, "sphere({n})"),
            Preset::Cp(n) => write!(f, "cp({n})"),
            Preset::Torus(n) => write!(f, "torus({n})"),
            Preset::Product(a, b) => write!(f, "product({a},{b})"),
            Preset::Wedge(a, b) => write!(f, "wedge({a},{b})"),
        }
    }
}

/// Parse a preset expression: `point`, `sphere(n)`, `cp(n)`, `torus(n)`,
/// `product(A,B)`, `wedge(A,B)`; whitespace is ignored.
pub fn parse_preset(s: &str) -> Result<Preset, CohomologyError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (preset, rest) = parse_expr(&compact)?;
    if !rest.is_empty() {
        return Err(CohomologyError::BadPreset(format!(
            "trailing input {rest:?} after preset expression"
        )));
    }
    Ok(preset)
}

fn parse_expr(s: &str) -> Result<(Preset, &str), CohomologyError> {
    if let Some(rest) = s.strip_prefix("point") {
        return Ok((Preset::Point, rest));
    }
    if let Some(rest) = s.strip_prefix("pt") {
        return Ok((Preset::Point, rest));
    }
    for (head, unary) in [
        ("sphere(", Preset::Sphere as fn(u32) -> Preset),
        ("cp(", Preset::Cp as fn(u32) -> Preset),
        ("torus(", Preset::Torus as fn(u32) -> Preset),
    ] {
        if let Some(rest) = s.strip_prefix(head) {
            let close = rest.find(')').ok_or_else(|| {
                CohomologyError::BadPreset(format!("missing ')' in {s:?}"))
            })?;
            let n: u32 = rest[..close].parse().map_err(|_| {
                CohomologyError::BadPreset(format!("bad integer argument in {s:?}"))
            })?;
            return Ok((unary(n), &rest[close + 1..]));
        }
    }
    for (head, binary) in [
        ("product(", Preset::Product as fn(Box<Preset>, Box<Preset>) -> Preset),
        ("wedge(", Preset::Wedge as fn(Box<Preset>, Box<Preset>) -> Preset),
    ] {
        if let Some(rest) = s.strip_prefix(head) {
            let (a, rest) = parse_expr(rest)?;
            let rest = rest.strip_prefix(',').ok_or_else(|| {
                CohomologyError::BadPreset(format!("expected ',' in {s:?}"))
            })?;
            let (b, rest) = parse_expr(rest)?;
            let rest = rest.strip_prefix(')').ok_or_else(|| {
                CohomologyError::BadPreset(format!("expected ')' in {s:?}"))
            })?;
            return Ok((binary(Box::new(a), Box::new(b)), rest));
        }
    }
    Err(CohomologyError::BadPreset(format!(
        "unrecognized preset {s:?}"
    )))
}

/// Materialize a preset as a validated ring.
pub fn preset(spec: &Preset) -> Result<GradedRing, CohomologyError> {
    match spec {
        Preset::Point => GradedRing::new("point", vec![1], None, BTreeMap::new()),
        Preset::Sphere(n) => {
            if *n == 0 {
                return Err(CohomologyError::BadPreset(
                    "sphere(n) needs n >= 1".into(),
                ));
            }
            let n = *n as usize;
            let mut betti = vec![0; n + 1];
            betti[0] = 1;
            betti[n] = 1;
            let mut labels = vec![Vec::new(); n + 1];
            labels[0] = vec!["1".to_string()];
            labels[n] = vec!["x".to_string()];
            GradedRing::new(format!("sphere({n})"), betti, Some(labels), BTreeMap::new())
        }
        Preset::Cp(n) => {
            if *n == 0 {
                return Err(CohomologyError::BadPreset("cp(n) needs n >= 1".into()));
            }
            let n = *n as usize;
            let mut betti = vec![0; 2 * n + 1];
            let mut labels = vec![Vec::new(); 2 * n + 1];
            for i in 0..=n {
                betti[2 * i] = 1;
                labels[2 * i] = vec![match i {
                    0 => "1".to_string(),
                    1 => "h".to_string(),
                    _ => format!("h^{i}"),
                }];
            }
            let mut products = BTreeMap::new();
            for i in 1..=n {
                for j in 1..=n {
                    if i + j <= n {
                        products.insert(
                            (2 * i, 0, 2 * j, 0),
                            vec![(0usize, BigRational::one())],
                        );
                    }
                }
            }
            GradedRing::new(format!("cp({n})"), betti, Some(labels), products)
        }
        Preset::Torus(n) => {
            if *n == 0 {
                return Err(CohomologyError::BadPreset("torus(n) needs n >= 1".into()));
            }
            let n = *n as usize;
            let subsets = subsets_by_size(n);
            let betti: Vec<usize> = subsets.iter().map(|level| level.len()).collect();
            let labels: Vec<Vec<String>> = subsets
                .iter()
                .map(|level| {
                    level
                        .iter()
                        .map(|s| {
                            if s.is_empty() {
                                "1".to_string()
                            } else {
                                s.iter().map(|g| format!("e{}", g + 1)).collect::<Vec<_>>().join("")
                            }
                        })
                        .collect()
                })
                .collect();
            let mut index = std::collections::HashMap::new();
            for (deg, level) in subsets.iter().enumerate() {
                for (i, s) in level.iter().enumerate() {
                    index.insert(s.clone(), (deg, i));
                }
            }
            let mut products = BTreeMap::new();
            for (p, level_p) in subsets.iter().enumerate().skip(1) {
                for (q, level_q) in subsets.iter().enumerate().skip(1) {
                    if p + q > n {
                        continue;
                    }
                    for (i, s) in level_p.iter().enumerate() {
                        for (j, t) in level_q.iter().enumerate() {
                            if s.iter().any(|g| t.contains(g)) {
                                continue;
                            }
                            let sign = merge_sign(s, t);
                            let mut merged: Vec<usize> =
                                s.iter().chain(t.iter()).copied().collect();
                            merged.sort_unstable();
                            let (deg, z) = index[&merged];
                            debug_assert_eq!(deg, p + q);
                            products.insert(
                                (p, i, q, j),
                                vec![(z, BigRational::from_integer(sign.into()))],
                            );
                        }
                    }
                }
            }
            GradedRing::new(format!("torus({n})"), betti, Some(labels), products)
        }
        Preset::Product(a, b) => {
            let ra = preset(a)?;
            let rb = preset(b)?;
            product_ring(&ra, &rb)
        }
        Preset::Wedge(a, b) => {
            let ra = preset(a)?;
            let rb = preset(b)?;
            wedge_ring(&ra, &rb)
        }
    }
}

/// Subsets of `{0..n-1}` grouped by size, each level in lexicographic order.
fn subsets_by_size(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut levels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&g| mask & (1 << g) != 0).collect();
        levels[subset.len()].push(subset);
    }
    for level in &mut levels {
        level.sort();
    }
    levels
}

/// Sign of sorting the concatenation of two disjoint sorted tuples.
fn merge_sign(s: &[usize], t: &[usize]) -> i32 {
    let mut inversions = 0;
    for a in s {
        for b in t {
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Graded tensor product with Koszul signs.
fn product_ring(a: &GradedRing, b: &GradedRing) -> Result<GradedRing, CohomologyError> {
    let top = a.top() + b.top();
    // Basis of degree r: (p, i, j) with i in degree p of `a`, j in degree
    // r - p of `b`, ordered by (p, i, j).
    let mut bases: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); top + 1];
    for r in 0..=top {
        for p in 0..=r.min(a.top()) {
            let q = r - p;
            for i in 0..a.betti(p) {
                for j in 0..b.betti(q) {
                    bases[r].push((p, i, j));
                }
            }
        }
    }
    let betti: Vec<usize> = bases.iter().map(|l| l.len()).collect();
    let labels: Vec<Vec<String>> = bases
        .iter()
        .enumerate()
        .map(|(r, level)| {
            level
                .iter()
                .map(|&(p, i, j)| {
                    let la = a.label(p, i);
                    let lb = b.label(r - p, j);
                    match (la == "1", lb == "1") {
                        (true, true) => "1".to_string(),
                        (true, false) => lb.to_string(),
                        (false, true) => la.to_string(),
                        (false, false) => format!("{la}*{lb}"),
                    }
                })
                .collect()
        })
        .collect();
    let mut index = std::collections::HashMap::new();
    for (r, level) in bases.iter().enumerate() {
        for (idx, key) in level.iter().enumerate() {
            index.insert((r, *key), idx);
        }
    }
    let mut products = BTreeMap::new();
    for (r1, level1) in bases.iter().enumerate() {
        if r1 == 0 {
            continue;
        }
        for (r2, level2) in bases.iter().enumerate() {
            if r2 == 0 || r1 + r2 > top {
                continue;
            }
            for (i1, &(p1, a1, b1)) in level1.iter().enumerate() {
                for (i2, &(p2, a2, b2)) in level2.iter().enumerate() {
                    let q1 = r1 - p1;
                    let q2 = r2 - p2;
                    // (x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} (xx') ⊗ (yy')
                    let sign = if (q1 * p2) % 2 == 0 { 1 } else { -1 };
                    let va = a.structure_vector(p1, a1, p2, a2);
                    if va.is_empty() {
                        continue;
                    }
                    let vb = b.structure_vector(q1, b1, q2, b2);
                    if vb.is_empty() {
                        continue;
                    }
                    let mut terms = Vec::new();
                    for (za, ca) in &va {
                        for (zb, cb) in &vb {
                            let z = index[&(r1 + r2, (p1 + p2, *za, *zb))];
                            terms.push((z, ca * cb * BigRational::from_integer(sign.into())));
                        }
                    }
                    if !terms.is_empty() {
                        products.insert((r1, i1, r2, i2), terms);
                    }
                }
            }
        }
    }
    GradedRing::new(
        format!("product({},{})", a.name(), b.name()),
        betti,
        Some(labels),
        products,
    )
}

/// One-point union: shared unit, positive-degree parts summed, cross
/// products zero.
fn wedge_ring(a: &GradedRing, b: &GradedRing) -> Result<GradedRing, CohomologyError> {
    let top = a.top().max(b.top());
    let mut betti = vec![0usize; top + 1];
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); top + 1];
    betti[0] = 1;
    labels[0] = vec!["1".to_string()];
    for r in 1..=top {
        betti[r] = a.betti(r) + b.betti(r);
        let mut l = Vec::new();
        for i in 0..a.betti(r) {
            l.push(format!("a.{}", a.label(r, i)));
        }
        for j in 0..b.betti(r) {
            l.push(format!("b.{}", b.label(r, j)));
        }
        labels[r] = l;
    }
    let mut products = BTreeMap::new();
    // a-block products keep their indices; b-block indices shift by the
    // a-block size in each degree.
    for (&(p, i, q, j), terms) in a.stored_products() {
        products.insert((p, i, q, j), terms.clone());
    }
    for (&(p, i, q, j), terms) in b.stored_products() {
        let shifted: Vec<(usize, BigRational)> = terms
            .iter()
            .map(|(z, c)| (z + a.betti(p + q), c.clone()))
            .collect();
        products.insert((p, i + a.betti(p), q, j + a.betti(q)), shifted);
    }
    GradedRing::new(
        format!("wedge({},{})", a.name(), b.name()),
        betti,
        Some(labels),
        products,
    )
}
