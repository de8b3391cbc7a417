//! Geographically weighted, directed research-leadership networks.
//!
//! The pipeline goes: parse and validate publication records ([`corpus`]),
//! turn each paper into leadership flows between institutions and aggregate
//! them into a two-weight directed network ([`leadership`], using the
//! geodesic machinery in [`geo`]), estimate the cross-border weight λ from a
//! gravity model ([`gravity`]), rank institutions with ground-node random
//! walks and baseline centralities ([`ranking`]), and compare rankings
//! against impact measures ([`evaluate`]).

pub mod corpus;
pub mod evaluate;
pub mod fmt;
pub mod geo;
pub mod gravity;
pub mod leadership;
pub mod ranking;

pub use corpus::{Institution, InstitutionTable, PublicationRecord, ValidationReport};
pub use geo::{DensityGrid, GeoPoint};
pub use gravity::{GravityFit, GravitySample};
pub use leadership::{FlowEdge, LeadershipMass, LeadershipNetwork, PaperRoles};
pub use ranking::RankingResult;
