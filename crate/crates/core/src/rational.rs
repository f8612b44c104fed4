//! Exact rational exponents. Twists, centers and complementary-series
//! parameters all live here; nothing in the crate uses floating point.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Exponent = Ratio<i64>;

pub fn rat(numer: i64, denom: i64) -> Exponent {
    Ratio::new(numer, denom)
}

pub fn int(n: i64) -> Exponent {
    Ratio::from_integer(n)
}

pub fn half() -> Exponent {
    Ratio::new(1, 2)
}

/// `p` for integers, `p/q` otherwise, with a leading `-` for negatives.
pub fn fmt_rational(r: &Exponent) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when `r` is an integer >= 0.
pub fn is_nonneg_integer(r: &Exponent) -> bool {
    r.is_integer() && !r.is_negative()
}

/// True when 0 < r < 1/2.
pub fn in_open_unit_half(r: &Exponent) -> bool {
    r.is_positive() && *r < half() && !r.is_zero()
}
