//! Construction and exhaustive verification of mixed-level orthogonal arrays
//! and large sets of orthogonal arrays.

pub mod algebraic;
pub mod array;
pub mod catalog;
pub mod combin;
pub mod compose;
pub mod diffmatrix;
pub mod error;
pub mod expand;
pub mod fixtures;
pub mod gf;
pub mod io;
pub mod plan;

pub use array::{
    brute_force_strength, lambda_of, project_columns, verify_large_set, verify_simple, verify_strength,
    verify_strength_with, LargeSet, LargeSetReport, LevelProfile, StrengthFailure, StrengthReport, SymbolMatrix,
    VerifyOptions,
};
pub use error::{Error, Result};
pub use expand::{check_resolvable_projection, expand_full_strength, expand_shift, find_resolvable_projection, ResolvableProjection};
pub use gf::{FieldElement, FieldSpec};
pub use io::{read_array, write_array, Artifact};
pub use plan::{execute_plan, plan_theorem, Claim, ConstructionPlan, Leaf, Node};
