//! Multiprecision scalars on top of MPFR.

use rug::ops::Pow;
use rug::Float;

use crate::field::{ComplexField, Field};
use crate::lattice::{Entry, Surd};
use crate::C64;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 16;

/// Mantissa bits for `digits` decimal digits plus guard bits.
pub fn bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
}

pub fn digits_of(prec: u32) -> u32 {
    ((prec.saturating_sub(GUARD_BITS)) as f64 / LOG2_10).floor() as u32
}

pub fn float(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// `10^e` at the given precision.
pub fn pow10(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 10).pow(e)
}

/// Lifted constants for evaluating exact matrix entries.
pub struct EntryContext {
    pub prec: u32,
    pub sqrt2: Float,
    pub u: Float,
    pub v: Float,
}

impl EntryContext {
    pub fn new(prec: u32, u: f64, v: f64) -> Self {
        EntryContext {
            prec,
            sqrt2: Float::with_val(prec, 2).sqrt(),
            u: float(prec, u),
            v: float(prec, v),
        }
    }

    pub fn surd(&self, s: Surd) -> Float {
        let mut x = Float::with_val(self.prec, &self.sqrt2 * s.b);
        x += s.a;
        x
    }

    pub fn eval(&self, e: &Entry) -> Float {
        let mut x = self.surd(e.hop);
        if !e.u.is_zero() {
            x += self.surd(e.u) * &self.u;
        }
        if !e.v.is_zero() {
            x += self.surd(e.v) * &self.v;
        }
        x
    }
}

impl Field for Float {
    fn lift(&self, x: f64) -> Self {
        Float::with_val(self.prec(), x)
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn mag(&self) -> f64 {
        self.to_f64().abs()
    }
    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64(), 0.0)
    }
    fn digits(&self) -> u32 {
        digits_of(self.prec())
    }
}

/// Complex number as a pair of MPFR floats.
#[derive(Debug, Clone, PartialEq)]
pub struct MpComplex {
    pub re: Float,
    pub im: Float,
}

impl MpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        MpComplex { re, im }
    }

    pub fn from_c64(prec: u32, z: C64) -> Self {
        MpComplex {
            re: float(prec, z.re),
            im: float(prec, z.im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// `exp(i * theta)` for real `theta`.
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        MpComplex { re: c, im: s }
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(
            self.prec(),
            self.re.mul_add_mul_ref(&self.re, &self.im, &self.im),
        )
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

impl Field for MpComplex {
    fn lift(&self, x: f64) -> Self {
        let p = self.prec();
        MpComplex {
            re: float(p, x),
            im: Float::new(p),
        }
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        MpComplex {
            re: Float::with_val(p, self.re.mul_sub_mul_ref(&o.re, &self.im, &o.im)),
            im: Float::with_val(p, self.re.mul_add_mul_ref(&o.im, &self.im, &o.re)),
        }
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.prec();
        let d = o.norm_sqr();
        let re = Float::with_val(p, self.re.mul_add_mul_ref(&o.re, &self.im, &o.im)) / &d;
        let im = Float::with_val(p, self.im.mul_sub_mul_ref(&o.re, &self.re, &o.im)) / &d;
        MpComplex { re, im }
    }
    fn neg(&self) -> Self {
        MpComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn mag(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn digits(&self) -> u32 {
        digits_of(self.prec())
    }
}

impl ComplexField for MpComplex {
    fn lift_c(&self, z: C64) -> Self {
        MpComplex::from_c64(self.prec(), z)
    }
    fn csqrt(&self) -> Self {
        let p = self.prec();
        let r = self.norm_sqr().sqrt();
        let t = (Float::with_val(p, &r + self.re.clone().abs()) / 2u32).sqrt();
        if t.is_zero() {
            return self.zero_like();
        }
        let other = Float::with_val(p, &self.im / &t) / 2u32;
        if !self.re.is_sign_negative() {
            MpComplex { re: t, im: other }
        } else if self.im.is_sign_negative() {
            MpComplex { re: -other, im: -t }
        } else {
            MpComplex { re: other, im: t }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_and_digits_roundtrip() {
        for d in [20, 40, 50, 60] {
            assert_eq!(digits_of(bits(d)), d);
        }
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let p = bits(50);
        let a = MpComplex::from_c64(p, C64::new(0.3, -1.7));
        let b = MpComplex::from_c64(p, C64::new(-2.1, 0.4));
        let c = a.mul(&b).div(&b).sub(&a);
        assert!(c.mag() < 1e-48);
    }

    #[test]
    fn square_root_branch() {
        let p = bits(40);
        for z in [
            C64::new(-4.0, 0.0),
            C64::new(3.0, -4.0),
            C64::new(-1.0, 1e-30),
        ] {
            let r = MpComplex::from_c64(p, z).csqrt();
            assert!((r.to_c64() - z.sqrt()).norm() < 1e-15);
            assert!(r.mul(&r).sub(&MpComplex::from_c64(p, z)).mag() < 1e-38);
        }
    }

    #[test]
    fn entry_eval_matches_double() {
        let ctx = EntryContext::new(bits(40), 2.0, -1.5);
        let e = Entry {
            hop: Surd { a: -0.5, b: 0.5 },
            u: Surd::ONE,
            v: Surd::int(2.0),
        };
        let want = e.eval(2.0, -1.5);
        assert!((ctx.eval(&e).to_f64() - want).abs() < 1e-15);
    }
}
