//! Prime field arithmetic, generic over the unsigned machine word that
//! stores residues.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{PrimInt, Unsigned};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit in the field word type")]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
}

/// Unsigned word used to hold residues. Products are widened to the next
/// larger primitive so no intermediate ever overflows.
pub trait FieldWord:
    PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
    fn mul_mod(self, rhs: Self, p: Self) -> Self;

    #[inline]
    fn add_mod(self, rhs: Self, p: Self) -> Self {
        if self >= p - rhs {
            self - (p - rhs)
        } else {
            self + rhs
        }
    }

    #[inline]
    fn sub_mod(self, rhs: Self, p: Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            self + (p - rhs)
        }
    }

    fn to_u64_lossless(self) -> u64 {
        self.to_u64().expect("field words are at most 64 bits")
    }
}

macro_rules! impl_field_word {
    ($($word:ty => $wide:ty),*) => {$(
        impl FieldWord for $word {
            #[inline]
            fn mul_mod(self, rhs: Self, p: Self) -> Self {
                ((self as $wide * rhs as $wide) % p as $wide) as $word
            }
        }
    )*};
}

impl_field_word!(u8 => u16, u16 => u32, u32 => u64, u64 => u128);

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d <= p / d {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField<W> {
    p: W,
}

impl<W: FieldWord> PrimeField<W> {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let p = W::from(p).ok_or(FieldError::ModulusTooLarge(p))?;
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> W {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.p.to_u64_lossless()
    }

    /// Element with residue `value mod p`.
    pub fn element(&self, value: u64) -> FieldElement<W> {
        let v = value % self.order();
        FieldElement {
            value: W::from(v).expect("residue fits"),
            modulus: self.p,
        }
    }

    pub fn zero(&self) -> FieldElement<W> {
        FieldElement {
            value: W::zero(),
            modulus: self.p,
        }
    }

    pub fn one(&self) -> FieldElement<W> {
        FieldElement {
            value: W::one(),
            modulus: self.p,
        }
    }

    /// All `p` elements in increasing residue order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<W>> + '_ {
        (0..self.order()).map(move |v| self.element(v))
    }

    /// Raw residue power, `0^0 = 1`.
    #[inline]
    pub fn pow_raw(&self, base: W, mut exp: u64) -> W {
        let p = self.p;
        let mut acc = W::one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(b, p);
            }
            b = b.mul_mod(b, p);
            exp >>= 1;
        }
        acc
    }
}

/// A residue together with its modulus.
///
/// The operator impls panic on mixed moduli; the `try_*` methods report it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement<W> {
    value: W,
    modulus: W,
}

impl<W: FieldWord> FieldElement<W> {
    #[inline]
    pub fn value(&self) -> W {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> W {
        self.modulus
    }

    pub fn field(&self) -> PrimeField<W> {
        PrimeField { p: self.modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.to_u64_lossless(),
                right: other.modulus.to_u64_lossless(),
            });
        }
        Ok(())
    }

    fn with(&self, value: W) -> Self {
        Self {
            value,
            modulus: self.modulus,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.value.add_mod(other.value, self.modulus)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.value.sub_mod(other.value, self.modulus)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.value.mul_mod(other.value, self.modulus)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse via `a^(p-2)`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.value.is_zero() {
            return Err(FieldError::DivisionByZero(self.modulus.to_u64_lossless()));
        }
        Ok(self.pow(self.modulus.to_u64_lossless() - 2))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, exp: u64) -> Self {
        self.with(self.field().pow_raw(self.value, exp))
    }
}

impl<W: FieldWord> Add for FieldElement<W> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("operands from the same field")
    }
}

impl<W: FieldWord> Sub for FieldElement<W> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("operands from the same field")
    }
}

impl<W: FieldWord> Mul for FieldElement<W> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("operands from the same field")
    }
}

impl<W: FieldWord> Neg for FieldElement<W> {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(W::zero().sub_mod(self.value, self.modulus))
    }
}

impl<W: FieldWord> Debug for FieldElement<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl<W: FieldWord> Display for FieldElement<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField<u32> {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn small_arithmetic() {
        let f = fp(5);
        assert_eq!((f.element(3) + f.element(4)).value(), 2);
        assert_eq!((f.element(2) * f.element(3)).value(), 1);
        assert_eq!((f.element(1) - f.element(3)).value(), 3);
        let g = fp(7);
        assert_eq!((-g.element(0)).value(), 0);
        assert_eq!((-g.element(2)).value(), 5);
    }

    #[test]
    fn inverses() {
        assert_eq!(fp(5).element(2).inv().unwrap().value(), 3);
        assert_eq!(fp(7).element(1).inv().unwrap().value(), 1);
        let f = fp(11);
        for a in f.elements().skip(1) {
            assert_eq!((a * a.inv().unwrap()).value(), 1);
        }
        assert_eq!(f.zero().inv(), Err(FieldError::DivisionByZero(11)));
    }

    #[test]
    fn powers_match_repeated_multiplication() {
        let f = fp(5);
        assert_eq!(f.element(2).pow(4).value(), 1);
        assert_eq!(f.zero().pow(0).value(), 1);
        let g = fp(13);
        for a in g.elements() {
            let mut acc = g.one();
            for e in 0..=12u64 {
                assert_eq!(a.pow(e), acc, "{a:?}^{e}");
                acc = acc * a;
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [2u64, 3, 5, 7] {
            let f: PrimeField<u8> = PrimeField::new(p).unwrap();
            let all: Vec<_> = f.elements().collect();
            for &a in &all {
                assert_eq!(a + f.zero(), a);
                assert_eq!(a * f.one(), a);
                assert!((a + -a).is_zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_composite_and_mismatch() {
        assert_eq!(PrimeField::<u32>::new(4), Err(FieldError::NotPrime(4)));
        assert_eq!(PrimeField::<u32>::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(
            PrimeField::<u8>::new(257),
            Err(FieldError::ModulusTooLarge(257))
        );
        let a = fp(5).element(1);
        let b = fp(7).element(1);
        assert_eq!(
            a.try_add(&b),
            Err(FieldError::ModulusMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn wide_modulus_does_not_overflow() {
        let p = 4_294_967_291u64; // largest 32-bit prime, so (p-1)^2 needs 128 bits
        let f: PrimeField<u64> = PrimeField::new(p).unwrap();
        let a = f.element(p - 1);
        assert_eq!((a * a).value(), 1);
        assert_eq!((a + a).value(), p - 2);
    }
}
