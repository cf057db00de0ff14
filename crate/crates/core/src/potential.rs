//! Double-well groove geometry and regularized two-particle interactions.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};

/// Asymptotic extra gap between the wells far from the coupling region.
pub const ASYMPTOTIC_GAP: f64 = 2.0;

/// Two harmonic grooves whose separation narrows to `d0` at `z = 0`.
///
/// The transverse potential is the product-over-sum of the two single-well
/// parabolas, so near either minimum it follows the closer well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPotential {
    omega: f64,
    d0: f64,
    eta: f64,
}

impl ChannelPotential {
    pub fn new(omega: f64, d0: f64, eta: f64) -> Result<Self> {
        check_positive("omega", omega)?;
        check_positive("d0", d0)?;
        check_positive("eta", eta)?;
        Ok(Self { omega, d0, eta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Returns a copy with a different minimum separation.
    pub fn with_d0(&self, d0: f64) -> Result<Self> {
        Self::new(self.omega, d0, self.eta)
    }

    /// Well separation `2 + d0 - 2/cosh(z/η)`.
    pub fn separation(&self, z: f64) -> f64 {
        let u = z / self.eta;
        // 1/cosh underflows cleanly; cosh itself overflows past |u| ~ 710.
        let sech = if u.abs() > 700.0 { 0.0 } else { 1.0 / u.cosh() };
        ASYMPTOTIC_GAP + self.d0 - ASYMPTOTIC_GAP * sech
    }

    pub fn asymptotic_separation(&self) -> f64 {
        ASYMPTOTIC_GAP + self.d0
    }

    /// Center of the right well far from the coupler, `1 + d0/2`.
    pub fn asymptotic_center(&self) -> f64 {
        0.5 * self.asymptotic_separation()
    }

    /// `U(x, z)`.
    pub fn groove(&self, x: f64, z: f64) -> f64 {
        self.double_well(x, self.separation(z))
    }

    /// Transverse double well for a given separation `d`.
    pub fn double_well(&self, x: f64, d: f64) -> f64 {
        let a = (x + 0.5 * d).powi(2);
        let b = (x - 0.5 * d).powi(2);
        let denom = a + b;
        if denom == 0.0 {
            return 0.0;
        }
        0.5 * self.omega * self.omega * (a * b) / denom
    }

    /// Barrier height at the narrowest point, `ω²d0²/16`.
    pub fn barrier_height(&self) -> f64 {
        self.omega * self.omega * self.d0 * self.d0 / 16.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InteractionKind {
    Coulomb,
    LennardJones { b: f64 },
}

/// Regularized pair interaction `V(r)` evaluated at `r_ε = sqrt(r² + ε²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionPotential {
    kind: InteractionKind,
    v0: f64,
    epsilon: f64,
}

impl InteractionPotential {
    pub fn new(kind: InteractionKind, v0: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter {
                field: "epsilon",
                reason: format!("regularization length must be > 0, got {epsilon}"),
            });
        }
        if !v0.is_finite() {
            return Err(Error::InvalidParameter {
                field: "v0",
                reason: format!("must be finite, got {v0}"),
            });
        }
        if let InteractionKind::LennardJones { b } = kind {
            check_positive("b", b)?;
        }
        Ok(Self { kind, v0, epsilon })
    }

    pub fn coulomb(v0: f64, epsilon: f64) -> Result<Self> {
        Self::new(InteractionKind::Coulomb, v0, epsilon)
    }

    pub fn lennard_jones(v0: f64, epsilon: f64, b: f64) -> Result<Self> {
        Self::new(InteractionKind::LennardJones { b }, v0, epsilon)
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same shape with a different strength.
    pub fn with_v0(&self, v0: f64) -> Self {
        Self { v0, ..*self }
    }

    pub fn value(&self, r: f64) -> f64 {
        let r_eps = (r * r + self.epsilon * self.epsilon).sqrt();
        match self.kind {
            InteractionKind::Coulomb => self.v0 / r_eps,
            InteractionKind::LennardJones { b } => {
                let s6 = (b / r_eps).powi(6);
                self.v0 * (s6 * s6 - s6)
            }
        }
    }

    /// Length beyond which the interaction is considered decayed.
    pub fn range(&self) -> f64 {
        match self.kind {
            InteractionKind::Coulomb => self.epsilon,
            InteractionKind::LennardJones { b } => self.epsilon.max(b),
        }
    }
}
