//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All algorithms are written against [`Real`], which both `f32` and `f64`
//! implement. Complex quantities are `num_complex::Complex<T>`; nalgebra sees
//! them as `ComplexField` so dense factorizations work for either precision.
//! Tolerances quoted throughout the crate assume `f64`.

use nalgebra::RealField;
use num_complex::Complex;

/// Real scalar the library is generic over.
pub trait Real:
    RealField + Copy + num_traits::FromPrimitive + num_traits::ToPrimitive + Default
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the working scalar.
pub type Cx<T> = Complex<T>;

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts an index or count into the working scalar.
#[inline]
pub fn from_usize<T: Real>(k: usize) -> T {
    T::from_usize(k).expect("usize representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

/// Modulus without overflow in the intermediate square.
#[inline]
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    z.re.hypot(z.im)
}

/// `z^k` by repeated squaring, with `0^0 = 1`.
pub fn cpowu<T: Real>(z: Cx<T>, mut k: usize) -> Cx<T> {
    let mut base = z;
    let mut acc = cone();
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Falling factorial `k (k-1) ... (k-j+1)`; zero when `k < j`.
pub fn falling<T: Real>(k: usize, j: usize) -> T {
    if k < j {
        return T::zero();
    }
    (0..j).fold(T::one(), |acc, t| acc * from_usize::<T>(k - t))
}

pub fn factorial<T: Real>(k: usize) -> T {
    falling(k, k)
}

pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    falling::<T>(n, k) / factorial::<T>(k)
}

/// Real power `x^e` for `x >= 0`, with `0^0 = 1`.
pub fn rpow<T: Real>(x: T, e: T) -> T {
    if e == T::zero() {
        T::one()
    } else if x == T::zero() {
        T::zero()
    } else {
        x.powf(e)
    }
}

/// Maximum of a slice of reals (zero when empty).
pub fn max_of<T: Real>(it: impl IntoIterator<Item = T>) -> T {
    it.into_iter().fold(T::zero(), |a, b| a.max(b))
}
