//! Exact integer LLL and integer-relation search.

mod lll;
mod relation;

pub use lll::{gram_determinant, lll_reduce, verify_reduced, IntLattice, LllOutput};
pub use relation::{
    default_delta, falsify_over_field, falsify_over_field_with, find_integer_relation,
    find_integer_relation_with, relation_residual, required_precision, FieldRelationReport, RelationReport, GUARD_BITS,
};
