use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Arithmetic used by the kernel rows and the reference DP.
pub trait Weight: Num + Clone + Debug + Send + Sync + 'static {
    fn ratio(num: u64, den: u64) -> Self;
    /// Exact for every finite `f64` in the rational implementation.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Weight for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite value")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Binomial probabilities `P(Z = z)`, `Z ~ Bin(a, p)`, for `z = 0..=a`.
pub(crate) fn binomial_row<W: Weight>(a: u32, p: &W) -> Vec<W> {
    let q = W::one() - p.clone();
    let mut out = Vec::with_capacity(a as usize + 1);
    let mut coef = W::one();
    for z in 0..=a {
        if z > 0 {
            coef = coef * W::ratio((a - z + 1) as u64, z as u64);
        }
        out.push(coef.clone() * num_traits::pow(p.clone(), z as usize) * num_traits::pow(q.clone(), (a - z) as usize));
    }
    out
}
