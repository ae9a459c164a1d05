//! Exact evaluation of sums of products of doubles.
//!
//! Every finite `f64` is a dyadic rational, so sums and products of them can
//! be carried out without error and rounded once at the end. This makes the
//! factored and distributed forms of the metrics agree to the last bit and
//! makes every result independent of the order of its terms.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Exact(BigRational);

impl Exact {
    pub(crate) fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub(crate) fn of(x: f64) -> Self {
        // Callers only hand in validated, finite values.
        Exact(BigRational::from_float(x).expect("finite input"))
    }

    pub(crate) fn product(factors: &[f64]) -> Self {
        factors
            .iter()
            .fold(Exact::of(1.0), |acc, &f| acc.mul(&Exact::of(f)))
    }

    pub(crate) fn add(mut self, other: &Exact) -> Self {
        self.0 += &other.0;
        self
    }

    pub(crate) fn mul(&self, other: &Exact) -> Self {
        Exact(&self.0 * &other.0)
    }

    pub(crate) fn div_count(&self, n: usize) -> Self {
        Exact(&self.0 / BigRational::from_integer(n.into()))
    }

    /// Correctly rounded (round-half-even) conversion back to `f64`.
    pub(crate) fn round(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        self.0.to_f64().expect("bounded magnitude")
    }
}

impl std::iter::Sum for Exact {
    fn sum<I: Iterator<Item = Exact>>(iter: I) -> Self {
        iter.fold(Exact::zero(), |acc, x| acc.add(&x))
    }
}
