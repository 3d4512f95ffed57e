//! Desk-scale coarse geometry for finitely presented proper metric spaces.
//!
//! Asymptotic statements (coentourages, coarse covers, closeness, ends) are
//! checked on finite windows around a basepoint and reported as three-valued
//! [`logic::Verdict`]s stamped with the scale and window used. Cohomology of
//! coarse covers with constant coefficients is computed exactly over the
//! integers via Smith normal form.

pub mod spaces;
pub mod logic;
pub mod ends;
pub mod cohomology;
pub mod covers;
pub mod cli;
