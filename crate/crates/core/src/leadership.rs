//! Leadership flow construction.
pub struct PaperRoles;
pub struct FlowEdge;
pub struct LeadershipNetwork;
pub struct LeadershipMass;
