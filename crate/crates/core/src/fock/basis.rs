use serde::{Deserialize, Serialize};

use super::FockError;

/// Truncated oscillator basis `|0⟩ … |N−1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    dim: usize,
}

impl FockBasis {
    pub fn new(dim: usize) -> Result<Self, FockError> {
        if dim < 2 {
            return Err(FockError::BasisTooSmall { dim });
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Uniform Dirichlet grid on `(−L, L)` with `M` interior nodes.
///
/// Nodes are `x_k = −L + k·h` for `k = 1..=M` with `h = 2L/(M+1)`; the two
/// wall points carry the boundary condition and are not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBasis {
    half_width: f64,
    points: usize,
}

/// Largest admissible `sech²(L)`: the potential must be negligible at the walls.
pub const GRID_SUPPORT_BOUND: f64 = 2e-10;

impl GridBasis {
    pub fn new(half_width: f64, points: usize) -> Result<Self, FockError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(FockError::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if points < 16 {
            return Err(FockError::InvalidGrid(format!(
                "at least 16 interior points required, got {points}"
            )));
        }
        let sech2 = 1.0 / half_width.cosh().powi(2);
        if sech2 >= GRID_SUPPORT_BOUND {
            return Err(FockError::InvalidGrid(format!(
                "sech²(L) = {sech2:e} at L = {half_width} does not contain the potential support"
            )));
        }
        Ok(Self { half_width, points })
    }

    /// Grid with spacing as close as possible to `spacing`.
    pub fn with_spacing(half_width: f64, spacing: f64) -> Result<Self, FockError> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(FockError::InvalidGrid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        let intervals = (2.0 * half_width / spacing).round();
        if intervals < 2.0 {
            return Err(FockError::InvalidGrid(format!(
                "spacing {spacing} too coarse for half width {half_width}"
            )));
        }
        Self::new(half_width, intervals as usize - 1)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points as f64 + 1.0)
    }

    /// Interior nodes, mirrored so that `x[M−1−k] = −x[k]` exactly.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        let m = self.points;
        (0..m)
            .map(|i| {
                let j = i.min(m - 1 - i);
                let xj = if 2 * j + 1 == m { 0.0 } else { -self.half_width + (j + 1) as f64 * h };
                if j == i { xj } else { -xj }
            })
            .collect()
    }
}

/// Basis tag carried by every [`super::OperatorMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Basis {
    Fock(FockBasis),
    Grid(GridBasis),
    /// Plain `C^n` with no physical interpretation.
    Plain { dim: usize },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Fock(b) => b.dim(),
            Basis::Grid(g) => g.points(),
            Basis::Plain { dim } => *dim,
        }
    }
}

impl From<FockBasis> for Basis {
    fn from(b: FockBasis) -> Self {
        Basis::Fock(b)
    }
}

impl From<GridBasis> for Basis {
    fn from(g: GridBasis) -> Self {
        Basis::Grid(g)
    }
}
