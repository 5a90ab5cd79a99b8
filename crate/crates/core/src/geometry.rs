//! Node placement and large-scale path loss for the air-to-ground links.
//!
//! The UAV hovers on a horizontal circle of radius `radius` at height
//! `height`; ground nodes are fixed points. Every link through the RIS is
//! air-to-ground, so the path-loss exponent is tied to the probability of a
//! line-of-sight connection through a logistic model, and the cascaded
//! source-RIS-user gain is the product of the two hop gains.

use thiserror::Error;

use crate::User;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("path-loss exponent must be positive, got {alpha}")]
    NonPositiveExponent { alpha: f64 },
    #[error("link distance must be positive and finite, got {distance}")]
    InvalidDistance { distance: f64 },
    #[error("LoS probability must lie in [0, 1], got {value}")]
    InvalidLosProbability { value: f64 },
}

/// Point in 3-D space. `x` and `z` span the ground plane, `y` is height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Hover state of the RIS-carrying UAV.
///
/// The UAV sits above the ground point `(radius·cos(angle), radius·sin(angle))`
/// at the given height, so sweeping `angle` moves it along a horizontal
/// circle centred on the origin and sweeping `height` raises the platform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavPlacement {
    pub radius: f64,
    pub height: f64,
    pub angle: f64,
}

impl UavPlacement {
    pub fn position(&self) -> Position3 {
        Position3::new(
            self.radius * self.angle.cos(),
            self.height,
            self.radius * self.angle.sin(),
        )
    }
}

/// Placement of the serving source, the two users, and the UAV, plus the
/// distances that interfering neighbour cells are assumed to keep.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    pub uav: UavPlacement,
    pub source: Position3,
    pub user1: Position3,
    pub user2: Position3,
    /// Source-side hop length assumed for every interfering neighbour-cell
    /// cascade.
    pub neighbor_source_distance: f64,
    /// User-side hop length of the interfering cascades, taken equal for
    /// every neighbour cell.
    pub neighbor_user_distance: f64,
}

impl ScenarioGeometry {
    pub fn distance_source_uav(&self) -> f64 {
        self.uav.position().distance(&self.source)
    }

    pub fn distance_uav_user(&self, user: User) -> f64 {
        let target = match user {
            User::U1 => &self.user1,
            User::U2 => &self.user2,
        };
        self.uav.position().distance(target)
    }

    /// Cascaded large-scale gain of the source-RIS-user link,
    /// `(d_s · d_u)^(-alpha)`.
    pub fn link_gain(&self, params: &PathLossParams, user: User) -> Result<f64, GeometryError> {
        let alpha = params.path_loss_exponent()?;
        let d_s = checked_distance(self.distance_source_uav())?;
        let d_u = checked_distance(self.distance_uav_user(user))?;
        Ok((d_s * d_u).powf(-alpha))
    }

    /// Cascaded large-scale gain of a neighbour-source-RIS-user path,
    /// using the fixed neighbour distances.
    pub fn neighbor_link_gain(&self, params: &PathLossParams) -> Result<f64, GeometryError> {
        let alpha = params.path_loss_exponent()?;
        let d_sj = checked_distance(self.neighbor_source_distance)?;
        let d_j = checked_distance(self.neighbor_user_distance)?;
        Ok((d_sj * d_j).powf(-alpha))
    }
}

fn checked_distance(d: f64) -> Result<f64, GeometryError> {
    if d > 0.0 && d.is_finite() {
        Ok(d)
    } else {
        Err(GeometryError::InvalidDistance { distance: d })
    }
}

/// Probabilistic line-of-sight path-loss model.
///
/// The LoS probability follows a logistic curve in the elevation angle,
/// `P_los = 1 / (1 + env_scale · exp(-env_rate · (elevation - env_scale)))`,
/// and the path-loss exponent interpolates between a LoS-favoured and a
/// worst-case value: `alpha = exponent_slope · P_los + exponent_offset`.
/// `plos_override` bypasses the logistic model with a fixed probability,
/// which is how sensitivity studies pin `P_los` while sweeping placement.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLossParams {
    /// Weight of `P_los` in the exponent model; negative values reward LoS.
    pub exponent_slope: f64,
    /// Path-loss exponent in the fully non-LoS limit (`P_los = 0`).
    pub exponent_offset: f64,
    /// Environment scale constant of the logistic curve.
    pub env_scale: f64,
    /// Environment rate constant of the logistic curve.
    pub env_rate: f64,
    /// Elevation angle argument of the logistic curve, in radians.
    pub elevation: f64,
    /// Fixed LoS probability that bypasses the logistic model when set.
    pub plos_override: Option<f64>,
}

impl PathLossParams {
    /// LoS probability, honouring `plos_override` when present.
    pub fn los_probability(&self) -> Result<f64, GeometryError> {
        let p = match self.plos_override {
            Some(p) => p,
            None => {
                let arg = -self.env_rate * (self.elevation - self.env_scale);
                1.0 / (1.0 + self.env_scale * arg.exp())
            }
        };
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(GeometryError::InvalidLosProbability { value: p })
        }
    }

    /// Path-loss exponent `alpha`; fails if the parameter combination drives
    /// it non-positive, since `d^(-alpha)` would then grow with distance.
    pub fn path_loss_exponent(&self) -> Result<f64, GeometryError> {
        let alpha = self.exponent_slope * self.los_probability()? + self.exponent_offset;
        if alpha > 0.0 {
            Ok(alpha)
        } else {
            Err(GeometryError::NonPositiveExponent { alpha })
        }
    }
}
