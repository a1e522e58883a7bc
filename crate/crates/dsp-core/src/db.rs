use serde::{Deserialize, Serialize};

/// Display floor applied wherever a log of zero would otherwise arise.
pub const DB_FLOOR_DB: f64 = -80.0;

/// A decibel value with an exactness flag: `floored` is set when the true
/// value was `-inf` (or below the display floor) and has been clamped to
/// [`DB_FLOOR_DB`] so reports stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbValue {
    pub db: f64,
    pub floored: bool,
}

impl DbValue {
    pub fn floor() -> Self {
        Self {
            db: DB_FLOOR_DB,
            floored: true,
        }
    }

    /// `10 log10(ratio)`, floored when the ratio is zero, negative or the
    /// result falls below the display floor.
    pub fn from_ratio(ratio: f64) -> Self {
        if !(ratio > 0.0) || !ratio.is_finite() {
            return Self::floor();
        }
        Self::from_db(10.0 * ratio.log10())
    }

    /// Wrap an already-computed dB value, clamping to the display floor.
    pub fn from_db(db: f64) -> Self {
        if !db.is_finite() || db < DB_FLOOR_DB {
            Self::floor()
        } else {
            Self { db, floored: false }
        }
    }

    /// The larger of two bounds (the binding one for a lower bound).
    pub fn max(self, other: Self) -> Self {
        if self.db >= other.db {
            self
        } else {
            other
        }
    }
}
