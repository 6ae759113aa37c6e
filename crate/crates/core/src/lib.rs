//! Series-reduced leaf-labelled trees, stable rational curves with marked
//! points, and the polynomial equations of their moduli spaces, all over exact
//! integer arithmetic.
//!
//! The geometric types are generic over a [`scalar::Scalar`] integer ring;
//! projective points are stored as coprime homogeneous pairs. The aliases
//! below fix the scalar to [`BigInt`] (never overflows) or to `i128` (faster,
//! fine for small inputs).

pub mod delta;
pub mod equations;
pub mod io;
pub mod moduli;
pub mod proj;
pub mod sample;
pub mod scalar;
pub mod tree;

pub use num_bigint::BigInt;

pub type Rat = num_rational::Ratio<BigInt>;
pub type Point = proj::ProjPoint<BigInt>;
pub type Transform = proj::Mobius<BigInt>;
pub type Curve = moduli::StableCurve<BigInt>;

pub type SmallPoint = proj::ProjPoint<i128>;
pub type SmallTransform = proj::Mobius<i128>;
pub type SmallCurve = moduli::StableCurve<i128>;
