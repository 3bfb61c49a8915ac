use serde::{Deserialize, Serialize};

use super::{GroupElement, GroupModel};
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::scalar::Scalar;

/// Open ball `B(center, radius)`; `center = None` means the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec<T: Scalar> {
    pub radius: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<GroupElement<T>>,
}

impl<T: Scalar> BallSpec<T> {
    pub fn new(radius: T) -> Self {
        Self { radius, center: None }
    }

    pub fn centered(center: GroupElement<T>, radius: T) -> Self {
        Self { radius, center: Some(center) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > T::zero()) || !self.radius.is_finite() {
            return Err(Error::InvalidParams(format!("ball radius must be positive and finite, got {}", self.radius)));
        }
        Ok(())
    }

    pub fn center_or_identity(&self, g: &GroupModel<T>) -> GroupElement<T> {
        self.center.clone().unwrap_or_else(|| g.identity())
    }

    pub fn contains(&self, g: &GroupModel<T>, x: &GroupElement<T>) -> bool {
        match &self.center {
            Some(c) => g.dist(c, x) < self.radius,
            None => g.norm(x) < self.radius,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallSample<T: Scalar> {
    pub elements: Vec<GroupElement<T>>,
    /// The elements are the whole ball.
    pub exhaustive: bool,
}

/// Draws `n` elements of the ball, or the whole ball when it is finite with at most
/// `n` elements.
pub fn ball_sample<T: Scalar>(g: &GroupModel<T>, ball: &BallSpec<T>, n: usize, seed: u64) -> Result<BallSample<T>> {
    ball.validate()?;
    if n == 0 {
        return Err(Error::InvalidParams("ball_sample needs n > 0".into()));
    }
    let center = ball.center_or_identity(g);
    if let Some(all) = g.enumerate_ball(&center, ball.radius, n) {
        if all.len() <= n {
            return Ok(BallSample { elements: all, exhaustive: true });
        }
    }
    let mut rng = seeded(seed);
    let elements = (0..n).map(|_| g.sample_ball(&center, ball.radius, &mut rng)).collect();
    Ok(BallSample { elements, exhaustive: false })
}
