use std::fmt;

use thiserror::Error;

/// A violated input invariant, with a message naming it.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ValidationError(pub String);

impl ValidationError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

/// Which barrier reached its pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleKind {
    Pair,
    Obstacle,
    Extended,
    Combined,
}

impl fmt::Display for PoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoleKind::Pair => "pair collision",
            PoleKind::Obstacle => "obstacle",
            PoleKind::Extended => "extended obstacle",
            PoleKind::Combined => "combined",
        })
    }
}

/// A potential was evaluated at (or inside) its singular set.
#[derive(Clone, Copy, Debug, PartialEq, Error)]
#[error("{kind} potential evaluated at its pole (denominator {denominator:e})")]
pub struct PoleError {
    pub kind: PoleKind,
    pub denominator: f64,
}
