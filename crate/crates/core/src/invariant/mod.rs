//! Invariant-form models of symplectic nilmanifolds and their primitive
//! cohomologies.
//!
//! The complex of left-invariant forms computes the de Rham cohomology of a
//! nilmanifold, so each question about a model is a finite linear-algebra
//! problem on `Λ^*(R^{2n})`.

mod cohomology;
mod model;

pub use cohomology::{
    alpha0_check, betti_exact, cohomology, ddlambda_matrix, ddlambda_subspaces, dlambda_matrix,
    hard_lefschetz_test, lefschetz_on_cohomology, natural_map_rank, ph, ph_d, pprime,
    primitive_ddlambda_refine, report, Cohomology, CohomologyReport, DdLambdaRefinement,
    DdLambdaRow, PrimitiveRow, Subspace, DLAMBDA_ROUTE_TOL,
};
pub use model::{
    abelian, kodaira_thurston, library, nil6, product, CEModel, StructureConstant, LIBRARY_NAMES,
    MODEL_TOL,
};

#[cfg(test)]
mod tests;
