//! Gravity-model estimation of the cross-border weight.
pub struct GravitySample;
pub struct GravityFit;
