//! Double-double arithmetic for the quadrature inner loops.
//!
//! A value is an unevaluated sum `hi + lo` of two f64s, giving roughly 32
//! significant digits. Products use Dekker/Veltkamp splitting, so no fused
//! multiply-add support is assumed. Just the operations the Petersson
//! quadrature needs: field ops, integer powers, `exp`, and `sin`/`cos` on
//! one period.

use std::sync::LazyLock;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134217729.0 * a; // 2^27 + 1
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        Dd::new(q1, q2).add(Dd::from_f64(q3))
    }

    /// Multiply by an exact power of two.
    #[inline]
    pub fn scale_pow2(self, e: i32) -> Dd {
        let f = (e as f64).exp2();
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn powi(self, mut e: u32) -> Dd {
        let mut result = Dd::ONE;
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(base);
            }
        }
        result
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// ln 2 to double-double precision.
const LN2: Dd = Dd {
    hi: 0.693147180559945309417232121458e0,
    lo: 2.319046813846299558e-17,
};

/// 2 pi to double-double precision.
pub(crate) const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

static INV_FACT: LazyLock<Vec<Dd>> = LazyLock::new(|| {
    let mut v = vec![Dd::ONE, Dd::ONE];
    let mut fact = Dd::ONE;
    for i in 2..=20u32 {
        fact = fact.mul_f64(i as f64); // exact up to 20! < 2^62 in dd
        v.push(Dd::ONE.div(fact));
    }
    v
});

/// `e^x` for moderate arguments (|x| up to a few hundred).
pub(crate) fn exp(x: Dd) -> Dd {
    if x.hi < -745.0 {
        return Dd::ZERO;
    }
    let m = (x.hi / std::f64::consts::LN_2).round();
    let r = x.sub(LN2.mul_f64(m)).scale_pow2(-5);
    // Taylor on |r| <= ln2/64
    let inv = &*INV_FACT;
    let mut sum = Dd::ONE.add(r);
    let mut rp = r;
    for inv_i in inv.iter().take(15).skip(2) {
        rp = rp.mul(r);
        sum = sum.add(rp.mul(*inv_i));
    }
    for _ in 0..5 {
        sum = sum.mul(sum);
    }
    sum.scale_pow2(m as i32)
}

/// `(sin t, cos t)` for |t| <= 2 pi, by Taylor on t/64 and six
/// double-angle steps.
pub(crate) fn sincos(t: Dd) -> (Dd, Dd) {
    let r = t.scale_pow2(-6);
    let r2 = r.mul(r);
    let inv = &*INV_FACT;
    // sin r = r (1 - r^2/3! + r^4/5! - ...)
    let mut s = r;
    let mut c = Dd::ONE;
    let mut rp = r; // r^(2i+1)
    let mut rq = Dd::ONE; // r^(2i)
    let mut sign = -1.0;
    for i in 1..=8u32 {
        rp = rp.mul(r2);
        rq = rq.mul(r2);
        let st = rp.mul(inv[(2 * i + 1) as usize]);
        let ct = rq.mul(inv[(2 * i) as usize]);
        if sign > 0.0 {
            s = s.add(st);
            c = c.add(ct);
        } else {
            s = s.sub(st);
            c = c.sub(ct);
        }
        sign = -sign;
    }
    for _ in 0..6 {
        let s2 = s.mul(c).scale_pow2(1);
        let c2 = c.mul(c).sub(s.mul(s));
        s = s2;
        c = c2;
    }
    (s, c)
}

/// Complex double-double value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> DdComplex {
        DdComplex { re, im }
    }

    #[inline]
    pub fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.add(rhs.re),
            im: self.im.add(rhs.im),
        }
    }

    #[inline]
    pub fn mul(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    #[inline]
    pub fn mul_conj(self, rhs: DdComplex) -> DdComplex {
        // self * conj(rhs)
        DdComplex {
            re: self.re.mul(rhs.re).add(self.im.mul(rhs.im)),
            im: self.im.mul(rhs.re).sub(self.re.mul(rhs.im)),
        }
    }

    #[inline]
    pub fn add_re(self, re: Dd) -> DdComplex {
        DdComplex {
            re: self.re.add(re),
            im: self.im,
        }
    }

    #[inline]
    pub fn scale(self, s: Dd) -> DdComplex {
        DdComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_mul_roundtrip() {
        let a = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let three_a = a.add(a).add(a);
        assert!((three_a.to_f64() - 1.0).abs() < 1e-31);
        assert!((three_a.sub(Dd::ONE).hi).abs() < 1e-31);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::new(1.7724538509055159, -7.7e-17);
        let b = Dd::new(0.3333333333333333, 1.8e-17);
        let q = a.div(b);
        let back = q.mul(b).sub(a);
        assert!(back.hi.abs() < 1e-30);
    }

    #[test]
    fn exp_against_f64_and_identities() {
        for x in [-50.0, -10.0, -5.44, -1.0, -0.1, 0.0] {
            let e = exp(Dd::from_f64(x));
            let rel = (e.to_f64() - x.exp()).abs() / x.exp();
            assert!(rel < 1e-15, "x={x} rel={rel}");
            // exp(x)^2 = exp(2x)
            let sq = e.mul(e);
            let e2 = exp(Dd::from_f64(2.0 * x));
            let d = sq.sub(e2);
            assert!(
                d.hi.abs() <= 1e-28 * e2.hi.abs().max(1e-300),
                "squaring identity at {x}"
            );
        }
    }

    #[test]
    fn exp_underflow_is_zero() {
        assert_eq!(exp(Dd::from_f64(-800.0)), Dd::ZERO);
    }

    #[test]
    fn sincos_pythagoras_and_f64_agreement() {
        for i in -8..=8 {
            let t = i as f64 * std::f64::consts::PI / 8.0;
            let (s, c) = sincos(Dd::from_f64(t));
            assert!((s.to_f64() - t.sin()).abs() < 2e-16, "sin at {t}");
            assert!((c.to_f64() - t.cos()).abs() < 2e-16, "cos at {t}");
            let one = s.mul(s).add(c.mul(c));
            assert!((one.to_f64() - 1.0).abs() < 1e-30);
            assert!(one.sub(Dd::ONE).hi.abs() < 1e-29);
        }
    }

    #[test]
    fn sincos_angle_addition_consistency() {
        // sin(a+b) computed two ways, in dd.
        let a = Dd::from_f64(0.7);
        let b = Dd::from_f64(1.9);
        let (sa, ca) = sincos(a);
        let (sb, cb) = sincos(b);
        let (sab, cab) = sincos(a.add(b));
        let s_sum = sa.mul(cb).add(ca.mul(sb));
        let c_sum = ca.mul(cb).sub(sa.mul(sb));
        assert!(sab.sub(s_sum).hi.abs() < 1e-29);
        assert!(cab.sub(c_sum).hi.abs() < 1e-29);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let v = Dd::from_f64(1.37);
        let mut acc = Dd::ONE;
        for _ in 0..22 {
            acc = acc.mul(v);
        }
        let p = v.powi(22);
        assert!(p.sub(acc).hi.abs() <= 1e-28 * acc.hi.abs());
    }

    #[test]
    fn two_pi_constant_is_consistent() {
        // hi is the nearest f64 to 2 pi; lo refines it.
        assert_eq!(TWO_PI.hi, 2.0 * std::f64::consts::PI);
        let (s, _c) = sincos(TWO_PI.scale_pow2(-1)); // sin(pi)
        assert!(s.to_f64().abs() < 1e-30, "sin(pi) = {:e}", s.to_f64());
    }
}
