//! Independence criterion: `~`-classes, interleaved numerators and exact
//! nullspaces over the base field.

mod decide;
mod interleave;
mod spec;
mod split;

pub use decide::{
    certify_condition_ii, decide_independence, decide_independence_with, reconstruct_relation,
    relation_residual_ball, verify_relation, BranchReport, Certificate, ClassReport, DecideOptions, Mode, Relation,
    Status, Verdict,
};
pub use interleave::{build_ptilde, class_nullspace, InterleavedJson, InterleavedSeq};
pub use spec::{SeriesJson, SeriesSpec, Twist, TwistJson};
pub use split::{split_twist, split_twist_branches, Branch};
