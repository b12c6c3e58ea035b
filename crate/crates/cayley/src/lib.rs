//! Exact representation-theoretic computations on Grassmannians and the
//! Cayley Grassmannian `CG ⊂ Gr(3,7)`.

pub mod bbw;
pub mod cg;
pub mod derived;
pub mod error;
pub mod g2;
pub mod linalg;
pub mod par;
pub mod schur;
pub mod sequences;
pub mod table;
pub mod weights;

pub use bbw::{bbw_cohomology, bulk_cohomology, GrassmannianSpec};
pub use cg::{cg_cohomology, cg_ext, euler_char, CohomologyResult, E1Page, KClass, Route, CG};
pub use derived::{
    check_exceptional_collection, complex_ext, lefschetz_validate, mutate_left, mutate_right, residual_check, ExtTable,
    FormalComplex, Verdict,
};
pub use g2::{G2Forms, Orbit, LieType, Subspace};
pub use error::{BundleError, DerivedError, G2Error, WeightError};
pub use par::Exec;
pub use schur::{dualize, expand, lr_tensor, twist, BundleExpr, BundleSum, SchurBundle};
pub use weights::{gl_dimension, sort_to_dominant, DominantWeight, GradedRep, Weight};
