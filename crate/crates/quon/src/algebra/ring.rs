use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::boxfrac::BoxFraction;
use super::eval::GaussRat;
use super::poly::Poly;

/// The commutative ring operations shared by the coefficient types that
/// operator expansions and dense matrices are generic over.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;

    fn from_int(k: i64) -> Self {
        let mut acc = Self::zero();
        for _ in 0..k.unsigned_abs() {
            acc = acc.plus(&Self::one());
        }
        if k < 0 {
            acc.negate()
        } else {
            acc
        }
    }
}

macro_rules! ring_via_ops {
    ($t:ty, $zero:expr, $one:expr, $is_zero:path) => {
        impl Ring for $t {
            fn zero() -> Self {
                $zero
            }
            fn one() -> Self {
                $one
            }
            fn is_zero(&self) -> bool {
                $is_zero(self)
            }
            fn plus(&self, o: &Self) -> Self {
                self + o
            }
            fn minus(&self, o: &Self) -> Self {
                self - o
            }
            fn times(&self, o: &Self) -> Self {
                self * o
            }
            fn negate(&self) -> Self {
                -self
            }
        }
    };
}

ring_via_ops!(Poly, Poly::zero(), Poly::one(), Poly::is_zero);
ring_via_ops!(BoxFraction, BoxFraction::zero(), BoxFraction::one(), BoxFraction::is_zero);
ring_via_ops!(GaussRat, <GaussRat as Zero>::zero(), <GaussRat as One>::one(), Zero::is_zero);
ring_via_ops!(Complex<BigInt>, <Complex<BigInt> as Zero>::zero(), <Complex<BigInt> as One>::one(), Zero::is_zero);
ring_via_ops!(BigInt, <BigInt as Zero>::zero(), <BigInt as One>::one(), Zero::is_zero);
