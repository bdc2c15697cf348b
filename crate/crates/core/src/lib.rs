//! Topological Petersson products on complexified topological cusp forms.
//!
//! The library computes, over a finite CW complex described by its rational
//! cohomology ring, the bilinear pairing on the associated graded of the
//! Atiyah-Hirzebruch filtration of `tcf^*(X) ⊗ ℂ`. The pairing of two
//! elements combines classical Petersson inner products of level 1 cusp
//! forms (one weight per Atiyah-Hirzebruch degree) with cup products in
//! `H^*(X; ℚ)`.
//!
//! Module map:
//! - [`qexp`]: truncated q-expansions over exact rationals, complex evaluation
//! - [`modforms`]: level 1 cusp form spaces, Miller bases, Hecke operators,
//!   numerical eigenforms
//! - [`petersson`]: numerical Petersson inner products over the SL2(Z)
//!   fundamental domain, Gram matrices, self-adjointness residuals
//! - [`cohomology`]: graded-commutative cohomology rings with explicit cup
//!   products, presets, a line-oriented file format, hard Lefschetz reports
//! - [`tpp`]: the topological Petersson product itself, radical and
//!   degeneracy analysis, the Kaehler-range nondegeneracy check, and
//!   componentwise topological Hecke operators

pub mod cohomology;
pub(crate) mod dd;
pub mod modforms;
pub mod petersson;
pub mod qexp;
pub mod ratmat;
pub mod tpp;
