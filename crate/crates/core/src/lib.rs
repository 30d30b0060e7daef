//! Exact computation of the integral cohomology of the parabolic
//! subgroups of level-p congruence subgroups in `SL3(Z)` and `Sp4(Z)`,
//! of the mod-p Tits buildings these groups act on, and of the lower
//! bounds for Betti numbers that fall out of the equivariant long exact
//! sequence of the building.
//!
//! Everything is computed from first principles over arbitrary-precision
//! integers: no table in this crate is hardcoded, every displayed value
//! is the output of a Smith normal form, a coset enumeration, or an
//! incidence count.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] — dense integer matrices, Smith normal form, cokernels,
//!   invariant subgroups, exterior powers, and [`FinAb`], the canonical
//!   form of a finitely generated abelian group.
//! * [`orders`] — orders and indices of the mod-p images of the integral
//!   Borel/parabolic subgroups in `SL3(F_p)` and `Sp4(F_p)`.
//! * [`building`] — the mod-p Tits buildings as bipartite incidence
//!   graphs, their homology, and the orbit decomposition of the chains.
//! * [`congruence`] — explicit free generating sets for the congruence
//!   subgroup `Γ₂(p) ⊂ SL2(Z)` by Schreier's method.
//! * [`cohomology`] — `H¹` of free groups with matrix coefficients,
//!   nilmanifold groups, mapping tori, and semidirect-product assembly.
//! * [`assembly`] — the equivariant long exact sequence, its Euler
//!   characteristic check, and the Betti-number lower bounds.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the CLI
//! live in the companion `workbench` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod building;
pub mod cohomology;
pub mod congruence;
mod fp;
pub mod linalg;
pub mod orders;

pub use linalg::{FinAb, IntMatrix, SmithDecomposition};
pub use orders::{GroupKind, PrimeLevel};
