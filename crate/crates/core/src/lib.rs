//! Mod-2 homology of iterated loop spaces of spheres: Dyer-Lashof algebra,
//! dual Steenrod action, Steenrod algebra on stunted projective spaces, and
//! a pass-based driver that classifies candidate spherical classes in
//! `H_*(Omega^l S^{n+l})`.

pub mod binom;
pub mod dl;
pub mod expr;
pub mod facts;
pub mod nishida;
pub mod pipeline;
pub mod loopspace;
pub mod steenrod;
pub mod tables;
