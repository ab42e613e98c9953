use std::fmt;
use std::str::FromStr;

use super::EngineError;

/// A non-negative integer or infinity.
///
/// Ordering puts every finite value below [`Depth::Infinite`] and addition
/// saturates at infinity. [`Depth::at_least_sum`] is the comparison
/// `d ≥ h + j`, which always holds when `d` is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(u32),
    Infinite,
}

impl Depth {
    pub const ZERO: Depth = Depth::Finite(0);

    pub fn is_infinite(self) -> bool {
        matches!(self, Depth::Infinite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Depth::Finite(d) => Some(d),
            Depth::Infinite => None,
        }
    }

    pub fn saturating_add(self, other: Depth) -> Depth {
        match (self, other) {
            (Depth::Finite(a), Depth::Finite(b)) => a
                .checked_add(b)
                .map(Depth::Finite)
                .unwrap_or(Depth::Infinite),
            _ => Depth::Infinite,
        }
    }

    /// `self ≥ base + gap`, with `∞ ≥ h + j` true for every `h`, `j`.
    pub fn at_least_sum(self, base: Depth, gap: Depth) -> bool {
        self.is_infinite() || self >= base.saturating_add(gap)
    }

    /// Largest `j` with `self ≥ base + j`, or `None` when `self < base`.
    pub fn gap_above(self, base: Depth) -> Option<Depth> {
        match (self, base) {
            (Depth::Infinite, _) => Some(Depth::Infinite),
            (Depth::Finite(_), Depth::Infinite) => None,
            (Depth::Finite(a), Depth::Finite(b)) => a.checked_sub(b).map(Depth::Finite),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(d) => write!(f, "{d}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Depth {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Depth::Infinite),
            other => other
                .parse()
                .map(Depth::Finite)
                .map_err(|_| EngineError::BadDepth(s.to_string())),
        }
    }
}

/// Strength `k ∈ {1, 2, …} ∪ {∞}` of a thresholded generalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(Depth);

impl Threshold {
    pub const INFINITE: Threshold = Threshold(Depth::Infinite);

    pub fn new(depth: Depth) -> Result<Self, EngineError> {
        if depth == Depth::ZERO {
            Err(EngineError::ZeroThreshold)
        } else {
            Ok(Threshold(depth))
        }
    }

    pub fn finite(k: u32) -> Result<Self, EngineError> {
        Self::new(Depth::Finite(k))
    }

    pub fn depth(self) -> Depth {
        self.0
    }

    pub fn finite_value(self) -> Option<u32> {
        self.0.finite()
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Threshold {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Threshold::new(s.parse()?)
    }
}
