//! Scalar abstractions.
//!
//! Every numerical routine in this crate is generic over a [`Real`] field
//! (`f32` or `f64`). Operators additionally carry a [`Scalar`] value type,
//! which is either the real field itself or `Complex<Real>`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive, Zero};

/// Real floating point field used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
    + Scalar<Real = Self>
{
    /// Converts an `f64` literal into this field.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into this field.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Lossy conversion used for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance for identities that hold exactly in exact arithmetic,
    /// scaled to the precision of the field (1e-12 for `f64`).
    #[inline]
    fn identity_tol() -> Self {
        Self::epsilon() * Self::lit(4503.6)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A [`Real`] field that the dense `nalgebra` decompositions accept.
///
/// Kept separate from [`Real`] because both `Float` and `RealField` define
/// `sqrt`, `abs`, … and would make every method call ambiguous.
pub trait LinalgReal: Real + nalgebra::RealField {}

impl<T: Real + nalgebra::RealField> LinalgReal for T {}

/// Matrix entry type: a real field or its complexification.
pub trait Scalar:
    Copy
    + PartialEq
    + Num
    + NumAssign
    + Neg<Output = Self>
    + Sum
    + Default
    + Debug
    + Send
    + Sync
    + 'static
{
    type Real: Real;

    const IS_COMPLEX: bool;

    fn from_real(r: Self::Real) -> Self;
    /// `None` when the value has a non-zero imaginary part and `Self` is real.
    fn from_complex(z: Complex<Self::Real>) -> Option<Self>;
    fn to_complex(self) -> Complex<Self::Real>;
    fn conj(self) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn norm_sqr(self) -> Self::Real;

    #[inline]
    fn modulus(self) -> Self::Real {
        self.norm_sqr().sqrt()
    }

    #[inline]
    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }
}

macro_rules! impl_real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const IS_COMPLEX: bool = false;

            #[inline]
            fn from_real(r: $t) -> Self {
                r
            }
            #[inline]
            fn from_complex(z: Complex<$t>) -> Option<Self> {
                (z.im == 0.0).then_some(z.re)
            }
            #[inline]
            fn to_complex(self) -> Complex<$t> {
                Complex::new(self, 0.0)
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
        }
    };
}

impl_real_scalar!(f32);
impl_real_scalar!(f64);

impl<T: Real> Scalar for Complex<T> {
    type Real = T;
    const IS_COMPLEX: bool = true;

    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    #[inline]
    fn from_complex(z: Complex<T>) -> Option<Self> {
        Some(z)
    }
    #[inline]
    fn to_complex(self) -> Complex<T> {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
    #[inline]
    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }
}

/// Euclidean inner product `⟨a, b⟩ = Σ conj(a_i) b_i`.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(x, y)| x.conj() * *y).sum()
}

/// Euclidean norm.
pub fn norm<S: Scalar>(v: &[S]) -> S::Real {
    v.iter().map(|x| x.norm_sqr()).sum::<S::Real>().sqrt()
}

/// Maximum modulus entry.
pub fn norm_inf<S: Scalar>(v: &[S]) -> S::Real {
    v.iter().map(|x| x.modulus()).fold(S::Real::zero(), S::Real::max)
}

/// `y += a * x`.
pub fn axpy<S: Scalar>(a: S, x: &[S], y: &mut [S]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * *xi;
    }
}
