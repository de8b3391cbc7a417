//! Ground-node ranking.
pub struct RankingResult;
