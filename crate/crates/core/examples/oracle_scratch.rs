//! Scratch runner: brute-force Petersson norm oracle for weight 12.

use num_traits::ToPrimitive;
use std::f64::consts::PI;
use tcf_core::modforms;

/// Exact `\int_V^\infty v^p e^{-cv} dv` by parts.
fn int_tail(p: usize, c: f64, v: f64) -> f64 {
    let mut sum = 0.0;
    let mut fall = 1.0;
    for i in 0..=p {
        sum += fall * v.powi((p - i) as i32) / c.powi(i as i32 + 1);
        fall *= (p - i) as f64;
    }
    (-c * v).exp() * sum
}

fn oracle_norm(k: i64, qprec: usize, simpson_n: usize) -> f64 {
    let space = modforms::cusp_basis(k, qprec).unwrap();
    let a: Vec<f64> = space.basis()[0]
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap())
        .collect();

    // Part A: v in [1, infinity), u-integral over the full period picks out
    // the diagonal m = n; each term integrates exactly in v.
    let mut part_a = 0.0;
    for n in 1..=qprec {
        part_a += a[n] * a[n] * int_tail((k - 2) as usize, 4.0 * PI * n as f64, 1.0);
    }

    // Part B: v in [sqrt(3)/2, 1], u restricted to |u| in [sqrt(1-v^2), 1/2].
    // The u-integral of e^{2 pi i (m-n) u} over that set is analytic.
    // Substituting uhat = sqrt(1 - v^2) as the variable removes the
    // square-root singularity of duhat/dv at v = 1.
    let integrand_uhat = |uhat: f64| -> f64 {
        let v = (1.0 - uhat * uhat).sqrt();
        let mut s = 0.0;
        for m in 1..=qprec {
            for n in 1..=qprec {
                let amp = a[m] * a[n] * (-2.0 * PI * (m + n) as f64 * v).exp();
                if amp == 0.0 {
                    continue;
                }
                let d = m as i64 - n as i64;
                let w = if d == 0 {
                    1.0 - 2.0 * uhat
                } else {
                    -(2.0 * PI * d as f64 * uhat).sin() / (PI * d as f64)
                };
                s += amp * w;
            }
        }
        // dv = -(uhat / v) duhat; orientation flip folded in.
        s * v.powi((k - 2) as i32) * (uhat / v)
    };
    let n = simpson_n + simpson_n % 2; // even
    let h = 0.5 / n as f64;
    let mut part_b = integrand_uhat(0.0) + integrand_uhat(0.5);
    for i in 1..n {
        let coeff = if i % 2 == 1 { 4.0 } else { 2.0 };
        part_b += coeff * integrand_uhat(i as f64 * h);
    }
    part_b *= h / 3.0;

    part_a + part_b
}

fn main() {
    for (qprec, n) in [(40usize, 2000usize), (60, 4000), (80, 8000), (80, 16000)] {
        let v = oracle_norm(12, qprec, n);
        println!("qprec={qprec:3} simpson={n:6}  <Delta,Delta> = {v:.16e}");
    }
}
