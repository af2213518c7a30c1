//! Exact coefficient fields.
//!
//! Everything symbolic is generic over [`Field`]. Two implementations ship:
//! the rationals and the Gaussian rationals `Q(i)`.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::hash::Hash;

pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Real and imaginary parts.
    fn parts(&self) -> (BigRational, BigRational);
    /// Builds `re + i im`; `None` when the field cannot hold it.
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn inv(&self) -> Self {
        Self::one().div(self)
    }

    fn is_real(&self) -> bool {
        Zero::is_zero(&self.parts().1)
    }

    fn to_c64(&self) -> Complex64 {
        let (re, im) = self.parts();
        Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
    }

    /// Rough size used for pivot selection: total bit length of the parts.
    fn height(&self) -> u64 {
        let (re, im) = self.parts();
        re.numer().bits() + re.denom().bits() + im.numer().bits() + im.denom().bits()
    }

    /// Image in `Z/p` with `i ↦ iota`; `None` when a denominator vanishes mod `p`.
    fn to_mod(&self, p: u64, iota: u64) -> Option<u64> {
        let (re, im) = self.parts();
        let a = rational_mod(&re, p)?;
        if Zero::is_zero(&im) {
            return Some(a);
        }
        let b = rational_mod(&im, p)?;
        Some((a + b * iota % p) % p)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!Zero::is_zero(o), "division by zero");
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn parts(&self) -> (BigRational, BigRational) {
        (self.clone(), Zero::zero())
    }
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self> {
        Zero::is_zero(&im).then_some(re)
    }
}

impl Field for Complex<BigRational> {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        // Skip the cross terms for real operands, which dominate in practice.
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return Complex::new(&self.re * &o.re, Zero::zero());
        }
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!Field::is_zero(o), "division by zero");
        if Zero::is_zero(&o.im) {
            return Complex::new(&self.re / &o.re, &self.im / &o.re);
        }
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), Zero::zero())
    }
    fn parts(&self) -> (BigRational, BigRational) {
        (self.re.clone(), self.im.clone())
    }
    fn from_parts(re: BigRational, im: BigRational) -> Option<Self> {
        Some(Complex::new(re, im))
    }
}

fn rational_mod(q: &BigRational, p: u64) -> Option<u64> {
    let m = BigInt::from(p);
    let n = ((q.numer() % &m) + &m) % &m;
    let d = (q.denom() % &m).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(n.to_u64()? * powmod(d, p - 2, p) % p)
}

/// `b^e mod p` for `p < 2^32`.
pub const fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Imaginary unit, when the field has one.
pub fn imag_unit<F: Field>() -> Option<F> {
    F::from_parts(Zero::zero(), One::one())
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of the first nonzero part; used to pick canonical signs.
pub fn leading_sign<F: Field>(c: &F) -> i32 {
    let (re, im) = c.parts();
    if !Zero::is_zero(&re) {
        if re.is_positive() { 1 } else { -1 }
    } else if im.is_positive() {
        1
    } else if im.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type G = Complex<BigRational>;

    #[test]
    fn conj_times_self_is_real() {
        let a = G::new(rational(3, 4), rational(-5, 7));
        let p = Field::mul(&a, &Field::conj(&a));
        assert!(Field::is_real(&p));
        assert_eq!(Field::conj(&Field::conj(&a)), a);
    }

    #[test]
    fn division_roundtrip() {
        let a = G::new(rational(1, 2), rational(2, 3));
        let b = G::new(rational(-3, 5), rational(1, 1));
        assert_eq!(Field::mul(&Field::div(&a, &b), &b), a);
    }

    #[test]
    fn rationals_reject_imaginary() {
        assert!(imag_unit::<BigRational>().is_none());
        assert!(imag_unit::<G>().is_some());
    }
}
