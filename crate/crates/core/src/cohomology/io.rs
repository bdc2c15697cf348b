//! Line-oriented exact text format for rings.
//!
//! ```text
//! name cp(2)
//! top 4
//! betti 1 0 1 0 1
//! basis 0 1
//! basis 2 h
//! basis 4 h^2
//! cup 2:0 2:0 = 1*4:0
//! ```
//!
//! Coefficients are rationals in lowest terms (`p/q`, denominator omitted
//! when 1). Omitted products are zero. Unit products are implicit; explicit
//! unit lines are checked against the identity, never stored. The loader
//! fills in missing orientations by graded commutativity and validates the
//! ring axioms. The writer is byte-deterministic: fixed line order, sorted
//! product keys with only the canonical orientation (`p < q`, or `p = q`
//! and `i <= j`), reduced coefficients with an explicit leading `-`.
//! Lines starting with `#` are comments.

use super::{CohomologyError, GradedRing};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Render a rational in canonical form: lowest terms, `/q` omitted for
/// integers.
pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, CohomologyError> {
    let make_err = || CohomologyError::Parse {
        line,
        message: format!("bad rational {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| make_err())?;
            let d = BigInt::from_str(d).map_err(|_| make_err())?;
            if d.is_zero() {
                return Err(make_err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| make_err())?,
        )),
    }
}

fn parse_deg_idx(s: &str, line: usize) -> Result<(usize, usize), CohomologyError> {
    let make_err = || CohomologyError::Parse {
        line,
        message: format!("expected <degree>:<index>, got {s:?}"),
    };
    let (d, i) = s.split_once(':').ok_or_else(make_err)?;
    Ok((
        d.parse().map_err(|_| make_err())?,
        i.parse().map_err(|_| make_err())?,
    ))
}

/// Parse and validate a ring document.
pub fn load_ring(text: &str) -> Result<GradedRing, CohomologyError> {
    let mut name: Option<String> = None;
    let mut top: Option<usize> = None;
    let mut betti: Option<Vec<usize>> = None;
    let mut basis_lines: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    #[allow(clippy::type_complexity)]
    let mut cup_lines: Vec<(usize, (usize, usize, usize, usize), Vec<(usize, usize, BigRational)>)> =
        Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).ok_or_else(|| {
            CohomologyError::Parse {
                line,
                message: format!("bare keyword {trimmed:?}"),
            }
        })?;
        let rest = rest.trim();
        match keyword {
            "name" => {
                if name.replace(rest.to_string()).is_some() {
                    return Err(CohomologyError::Parse {
                        line,
                        message: "duplicate name line".into(),
                    });
                }
            }
            "top" => {
                let t = rest.parse().map_err(|_| CohomologyError::Parse {
                    line,
                    message: format!("bad top degree {rest:?}"),
                })?;
                if top.replace(t).is_some() {
                    return Err(CohomologyError::Parse {
                        line,
                        message: "duplicate top line".into(),
                    });
                }
            }
            "betti" => {
                let parsed: Result<Vec<usize>, _> =
                    rest.split_whitespace().map(|t| t.parse()).collect();
                let b = parsed.map_err(|_| CohomologyError::Parse {
                    line,
                    message: "betti line must list nonnegative integers".into(),
                })?;
                if betti.replace(b).is_some() {
                    return Err(CohomologyError::Parse {
                        line,
                        message: "duplicate betti line".into(),
                    });
                }
            }
            "basis" => {
                let mut toks = rest.split_whitespace();
                let deg: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| CohomologyError::Parse {
                        line,
                        message: "basis line needs a degree".into(),
                    })?;
                let labels: Vec<String> = toks.map(|t| t.to_string()).collect();
                if basis_lines.insert(deg, labels).is_some() {
                    return Err(CohomologyError::Parse {
                        line,
                        message: format!("duplicate basis line for degree {deg}"),
                    });
                }
            }
            "cup" => {
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| CohomologyError::Parse {
                    line,
                    message: "cup line needs '='".into(),
                })?;
                let factors: Vec<&str> = lhs.split_whitespace().collect();
                if factors.len() != 2 {
                    return Err(CohomologyError::Parse {
                        line,
                        message: "cup line needs exactly two factors".into(),
                    });
                }
                let (p, i) = parse_deg_idx(factors[0], line)?;
                let (q, j) = parse_deg_idx(factors[1], line)?;
                let rhs = rhs.trim();
                let mut terms = Vec::new();
                if rhs != "0" {
                    for term in rhs.split('+') {
                        let term = term.trim();
                        let (coef, target) =
                            term.split_once('*').ok_or_else(|| CohomologyError::Parse {
                                line,
                                message: format!("term {term:?} needs <coef>*<deg>:<idx>"),
                            })?;
                        let c = parse_rational(coef.trim(), line)?;
                        let (dz, z) = parse_deg_idx(target.trim(), line)?;
                        terms.push((dz, z, c));
                    }
                }
                cup_lines.push((line, (p, i, q, j), terms));
            }
            other => {
                return Err(CohomologyError::Parse {
                    line,
                    message: format!("unknown keyword {other:?}"),
                });
            }
        }
    }

    let betti = betti.ok_or_else(|| CohomologyError::Parse {
        line: 0,
        message: "missing betti line".into(),
    })?;
    if betti.is_empty() {
        return Err(CohomologyError::Parse {
            line: 0,
            message: "betti line must not be empty".into(),
        });
    }
    if let Some(t) = top {
        if t + 1 != betti.len() {
            return Err(CohomologyError::Parse {
                line: 0,
                message: format!("top {t} disagrees with {} betti entries", betti.len()),
            });
        }
    }
    let top = betti.len() - 1;
    if betti[0] != 1 {
        return Err(CohomologyError::UnitAxiom {
            message: format!("b_0 must be 1, got {}", betti[0]),
        });
    }

    let mut labels = super::default_labels(&betti);
    for (deg, given) in basis_lines {
        if deg > top {
            return Err(CohomologyError::Parse {
                line: 0,
                message: format!("basis line for degree {deg} above top {top}"),
            });
        }
        if given.len() != betti[deg] {
            return Err(CohomologyError::Parse {
                line: 0,
                message: format!(
                    "basis line for degree {deg} lists {} labels, expected {}",
                    given.len(),
                    betti[deg]
                ),
            });
        }
        labels[deg] = given;
    }

    let mut products: BTreeMap<(usize, usize, usize, usize), Vec<(usize, BigRational)>> =
        BTreeMap::new();
    for (line, (p, i, q, j), terms) in cup_lines {
        // Explicit unit products must restate the identity; they are
        // checked, not stored.
        if p == 0 || q == 0 {
            let expected = if p == 0 { (q, j) } else { (p, i) };
            let identity = terms.len() == 1
                && terms[0].0 == expected.0
                && terms[0].1 == expected.1
                && terms[0].2.is_one();
            if !identity {
                return Err(CohomologyError::UnitAxiom {
                    message: format!(
                        "line {line}: unit product ({p}:{i}, {q}:{j}) must be the identity"
                    ),
                });
            }
            continue;
        }
        for (dz, _, _) in &terms {
            if *dz != p + q {
                return Err(CohomologyError::Parse {
                    line,
                    message: format!(
                        "product of degrees {p} and {q} must target degree {}, got {dz}",
                        p + q
                    ),
                });
            }
        }
        let flat: Vec<(usize, BigRational)> = terms.into_iter().map(|(_, z, c)| (z, c)).collect();
        if products.insert((p, i, q, j), flat).is_some() {
            return Err(CohomologyError::Parse {
                line,
                message: format!("duplicate cup line for ({p}:{i}, {q}:{j})"),
            });
        }
    }

    GradedRing::new(
        name.unwrap_or_else(|| "ring".to_string()),
        betti,
        Some(labels),
        products,
    )
}

/// Canonical byte-deterministic rendering; `load_ring` inverts it.
pub fn write_ring(ring: &GradedRing) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", ring.name()));
    out.push_str(&format!("top {}\n", ring.top()));
    let betti: Vec<String> = ring.betti_numbers().iter().map(|b| b.to_string()).collect();
    out.push_str(&format!("betti {}\n", betti.join(" ")));
    for deg in 0..=ring.top() {
        if ring.betti(deg) > 0 {
            out.push_str(&format!("basis {deg} {}\n", ring.labels(deg).join(" ")));
        }
    }
    for (&(p, i, q, j), terms) in ring.stored_products() {
        // Only the canonical orientation; the loader restores the other.
        if p > q || (p == q && i > j) {
            continue;
        }
        let rendered: Vec<String> = terms
            .iter()
            .map(|(z, c)| format!("{}*{}:{}", format_rational(c), p + q, z))
            .collect();
        out.push_str(&format!("cup {p}:{i} {q}:{j} = {}\n", rendered.join(" + ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{preset, parse_preset, CohClass};
    use super::*;

    #[test]
    fn round_trip_cp2() {
        let r = preset(&parse_preset("cp(2)").unwrap()).unwrap();
        let text = write_ring(&r);
        let back = load_ring(&text).unwrap();
        assert_eq!(back, r);
        // and the writer is stable on the reloaded value
        assert_eq!(write_ring(&back), text);
    }

    #[test]
    fn round_trip_presets() {
        for spec in ["torus(2)", "product(cp(1),cp(1))", "wedge(sphere(2),sphere(4))"] {
            let r = preset(&parse_preset(spec).unwrap()).unwrap();
            let back = load_ring(&write_ring(&r)).unwrap();
            assert_eq!(back, r, "{spec}");
        }
    }

    #[test]
    fn loads_negative_and_fractional_coefficients() {
        let text = "name demo\ntop 2\nbetti 1 2 1\ncup 1:0 1:1 = -3/2*2:0\n";
        let r = load_ring(text).unwrap();
        let e0 = CohClass::basis(&r, 1, 0);
        let e1 = CohClass::basis(&r, 1, 1);
        let p = r.cup(&e0, &e1);
        assert_eq!(format_rational(&p.coords[0]), "-3/2");
        // the loader symmetrized the other orientation
        let q = r.cup(&e1, &e0);
        assert_eq!(format_rational(&q.coords[0]), "3/2");
    }

    #[test]
    fn odd_square_violation_reported() {
        let text = "name bad\ntop 2\nbetti 1 1 1\ncup 1:0 1:0 = 1*2:0\n";
        let err = load_ring(text).unwrap_err();
        assert!(matches!(err, CohomologyError::Commutativity { .. }), "{err}");
    }

    #[test]
    fn unit_betti_violation_reported() {
        let text = "name bad\ntop 1\nbetti 2 1\n";
        let err = load_ring(text).unwrap_err();
        assert!(matches!(err, CohomologyError::UnitAxiom { .. }));
    }

    #[test]
    fn explicit_unit_line_must_be_identity() {
        let ok = "name u\ntop 2\nbetti 1 0 1\ncup 0:0 2:0 = 1*2:0\n";
        assert!(load_ring(ok).is_ok());
        let bad = "name u\ntop 2\nbetti 1 0 1\ncup 0:0 2:0 = 2*2:0\n";
        assert!(matches!(
            load_ring(bad).unwrap_err(),
            CohomologyError::UnitAxiom { .. }
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "name x\ntop 2\nbetti 1 0 1\ncup 2:0 = 1*4:0\n";
        match load_ring(text).unwrap_err() {
            CohomologyError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn product_above_top_rejected() {
        let text = "name x\ntop 2\nbetti 1 0 1\ncup 2:0 2:0 = 1*4:0\n";
        assert!(load_ring(text).is_err());
    }
}
