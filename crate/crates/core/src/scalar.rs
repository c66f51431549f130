//! Scalar abstraction for the geometry core.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the geometry math is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + 'static
{
    /// Lossy conversion from `f64`, for constants and tolerances.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any float scalar")
    }

    /// Lossy conversion to `f64`, for formatting and reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("float scalar converts to f64")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + 'static
{
}

/// Geometric equality tolerance, in millimeters.
pub const GEOM_EPS_MM: f64 = 1e-6;

/// Rounds to `decimals` decimal places (half away from zero).
pub fn round_decimals<T: Scalar>(v: T, decimals: u32) -> T {
    let scale = T::from_f64_lossy(10f64.powi(decimals as i32));
    (v * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_decimals_snaps_to_grid() {
        assert_eq!(round_decimals(1.2345678_f64, 6), 1.234568);
        assert_eq!(round_decimals(-1.2345678_f64, 6), -1.234568);
        assert_eq!(round_decimals(1.905_f64, 6), 1.905);
        assert_eq!(round_decimals(0.1234_f32, 2), 0.12_f32);
    }
}
