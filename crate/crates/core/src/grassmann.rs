//! The Grassmann algebra `C + εC` with `ε² = 0`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bodies smaller than this are treated as zero by [`Dual::inv`].
pub const INVERT_THRESHOLD: f64 = 1e-12;

/// An element `body + ε·soul`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub body: Complex64,
    pub soul: Complex64,
}

impl Dual {
    pub const ZERO: Dual = Dual::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    pub const ONE: Dual = Dual::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    pub const EPS: Dual = Dual::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));

    pub const fn new(body: Complex64, soul: Complex64) -> Self {
        Dual { body, soul }
    }

    pub fn real(body: f64, soul: f64) -> Self {
        Dual::new(Complex64::new(body, 0.0), Complex64::new(soul, 0.0))
    }

    pub fn from_body(body: Complex64) -> Self {
        Dual::new(body, Complex64::new(0.0, 0.0))
    }

    pub fn pure_soul(soul: Complex64) -> Self {
        Dual::new(Complex64::new(0.0, 0.0), soul)
    }

    pub fn scale(self, c: Complex64) -> Self {
        Dual::new(self.body * c, self.soul * c)
    }

    /// `1/α − ε·α′/α²`.
    pub fn inv(self) -> Result<Self> {
        if self.body.norm() < INVERT_THRESHOLD {
            return Err(Error::NonInvertible(self.body.norm()));
        }
        let b = self.body.inv();
        Ok(Dual::new(b, -self.soul * b * b))
    }

    pub fn powi(self, k: usize) -> Self {
        (0..k).fold(Dual::ONE, |acc, _| acc * self)
    }

    /// Largest of the body and soul distances.
    pub fn dist(self, other: Dual) -> f64 {
        (self.body - other.body).norm().max((self.soul - other.soul).norm())
    }

    pub fn approx_eq(self, other: Dual, tol: f64) -> bool {
        self.dist(other) <= tol
    }

    pub fn norm(self) -> f64 {
        self.body.norm().max(self.soul.norm())
    }
}

/// Soul of `γ₁⋯γₙ`, i.e. `Σᵢ So(γᵢ) Πⱼ≠ᵢ Bo(γⱼ)`, computed termwise.
pub fn soul_of_product(factors: &[Dual]) -> Complex64 {
    (0..factors.len())
        .map(|i| {
            factors
                .iter()
                .enumerate()
                .map(|(j, g)| if i == j { g.soul } else { g.body })
                .product::<Complex64>()
        })
        .sum()
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.body + o.body, self.soul + o.soul)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.body - o.body, self.soul - o.soul)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.body * o.body, self.body * o.soul + self.soul * o.body)
    }
}

impl Mul<Complex64> for Dual {
    type Output = Dual;
    fn mul(self, c: Complex64) -> Dual {
        self.scale(c)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, c: f64) -> Dual {
        Dual::new(self.body * c, self.soul * c)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.body, -self.soul)
    }
}

impl AddAssign for Dual {
    fn add_assign(&mut self, o: Dual) {
        *self = *self + o;
    }
}

impl SubAssign for Dual {
    fn sub_assign(&mut self, o: Dual) {
        *self = *self - o;
    }
}

impl MulAssign for Dual {
    fn mul_assign(&mut self, o: Dual) {
        *self = *self * o;
    }
}

impl Sum for Dual {
    fn sum<I: Iterator<Item = Dual>>(iter: I) -> Dual {
        iter.fold(Dual::ZERO, Add::add)
    }
}

impl Product for Dual {
    fn product<I: Iterator<Item = Dual>>(iter: I) -> Dual {
        iter.fold(Dual::ONE, Mul::mul)
    }
}

impl From<Complex64> for Dual {
    fn from(c: Complex64) -> Dual {
        Dual::from_body(c)
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ε({})", self.body, self.soul)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dual() -> impl Strategy<Value = Dual> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(a, b, x, y)| Dual::new(c(a, b), c(x, y)))
    }

    #[test]
    fn eps_squares_to_zero() {
        assert_eq!(Dual::EPS * Dual::EPS, Dual::ZERO);
    }

    #[test]
    fn inverse_of_tiny_body_fails() {
        assert!(matches!(Dual::real(1e-13, 1.0).inv(), Err(Error::NonInvertible(_))));
    }

    #[test]
    fn inverse_formula() {
        let a = Dual::real(2.0, 3.0);
        let inv = a.inv().unwrap();
        assert!(inv.approx_eq(Dual::real(0.5, -0.75), 1e-15));
    }

    proptest! {
        #[test]
        fn multiplication_is_associative_and_commutative(a in dual(), b in dual(), d in dual()) {
            prop_assert!(((a * b) * d).approx_eq(a * (b * d), 1e-12));
            prop_assert!((a * b).approx_eq(b * a, 1e-12));
        }

        #[test]
        fn distributive(a in dual(), b in dual(), d in dual()) {
            prop_assert!((a * (b + d)).approx_eq(a * b + a * d, 1e-12));
        }

        #[test]
        fn inverse_is_two_sided(a in dual()) {
            prop_assume!(a.body.norm() > 0.1);
            let inv = a.inv().unwrap();
            prop_assert!((a * inv).approx_eq(Dual::ONE, 1e-10));
            prop_assert!((inv * a).approx_eq(Dual::ONE, 1e-10));
        }

        #[test]
        fn soul_of_product_matches_expansion(fs in proptest::collection::vec(dual(), 0..6)) {
            let prod: Dual = fs.iter().copied().product();
            prop_assert!((soul_of_product(&fs) - prod.soul).norm() < 1e-10);
        }
    }
}
