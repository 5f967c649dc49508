//! Dimension-derived constants and half-space geometry.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// A Bessel order. Every order used by this crate is an integer or a half-integer.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Order(f64);

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(invalid(format!("order must be finite and >= 0, got {value}")));
        }
        if (2.0 * value).fract() != 0.0 {
            return Err(invalid(format!("order must be an integer or half-integer, got {value}")));
        }
        Ok(Order(value))
    }

    /// ν = (n-1)/2
    pub fn nu(n: u32) -> Self {
        Order((n as f64 - 1.0) / 2.0)
    }

    /// μ = (n-3)/2, the order of the Hankel transform in dimension n-1.
    pub fn mu(n: u32) -> Self {
        Order(((n as f64) - 3.0).max(0.0) / 2.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

/// Number of zeros of `K_ν` in the cut plane, ν = (n-1)/2.
///
/// For even `n` this is the degree `n/2 - 1` of the polynomial `m_s`.
/// For odd `n` it is the even integer closest to `n/2 - 1`; since `n/2 - 1`
/// ends in `.5` there is never a tie (the distance to the two neighbouring
/// even integers is 0.5 and 1.5).
pub fn zero_count(n: u32) -> Result<usize> {
    if n < 3 {
        return Err(invalid(format!("zero_count needs n >= 3, got {n}")));
    }
    if n % 2 == 0 {
        Ok((n / 2 - 1) as usize)
    } else {
        let half = (n as f64) / 2.0 - 1.0;
        Ok(2 * ((half / 2.0).round() as usize))
    }
}

/// Constants derived from the dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub n: u32,
    pub nu: f64,
    pub s: f64,
    pub mu: f64,
    pub k_nu: usize,
}

impl SpaceParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(invalid(format!("dimension must be >= 3, got {n}")));
        }
        let nf = n as f64;
        Ok(SpaceParams { n, nu: (nf - 1.0) / 2.0, s: nf / 2.0 - 1.0, mu: (nf - 3.0) / 2.0, k_nu: zero_count(n)? })
    }

    pub fn is_even(&self) -> bool {
        self.n % 2 == 0
    }
}

/// Half-space `{x_n > a}` and a starting height `x > a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub n: u32,
    pub a: f64,
    pub x: f64,
}

impl Geometry {
    pub fn new(n: u32, a: f64, x: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("dimension must be >= 2, got {n}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("boundary height a must be positive, got {a}")));
        }
        if !(x > a) || !x.is_finite() {
            return Err(invalid(format!("start height x must exceed a = {a}, got {x}")));
        }
        Ok(Geometry { n, a, x })
    }

    pub fn lambda(&self) -> f64 {
        self.x - self.a
    }

    /// ξ = x/a
    pub fn xi(&self) -> f64 {
        self.x / self.a
    }

    pub fn params(&self) -> Result<SpaceParams> {
        SpaceParams::new(self.n)
    }

    /// The same geometry with every length multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Geometry::new(self.n, self.a * t, self.x * t)
    }
}
