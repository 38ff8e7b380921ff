//! Net-based inscribed polytopes, their distance to the ball, facet classes
//! and inequality audits.

pub mod audit;
pub mod cap_search;
pub mod classify;
pub mod metrics;
pub mod net;

pub use audit::{
    c_hat, del_bound, improve_inscribed, lower_bound_regime, merged_hull, net_hausdorff_bound,
    net_volume_bound, surface_regime, lower_bound_audit, upper_bound_audit, AuditCheck, AuditMeta,
    AuditReport, Relation, C_HAT_LOWER, C_HAT_UPPER,
};
pub use cap_search::{heavy_cap_search, CapSearch};
pub use classify::{classify_facets, Classification, EffectiveCount, FacetClass, FacetLabel, Thresholds};
pub use metrics::{
    ball_rejection_volume, facet_gaps, hausdorff_gap, hausdorff_gap_sampled, symmetric_difference,
    SymmetricDifference,
};
pub use net::{build_qn, build_qn_with, greedy_net, Net, NetConfig, NetTarget};
