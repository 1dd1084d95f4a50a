//! Exact invariants of links of suspension singularities `f(x,y) + z^n`.
//!
//! The crate computes Alexander polynomials, the Casson-Walker invariant,
//! Reidemeister-Turaev torsion, the modified Seiberg-Witten invariant `sw⁰`,
//! signatures and the geometric genus from Newton pairs, and cross-checks
//! the splicing identities between them by independent routes.

pub mod error;
pub mod exact_core;
pub mod lemma_lab;
pub mod plane_curve;
pub mod plumbing;
pub mod seifert;
pub mod splicing;
pub mod suspension;

pub use error::{Error, ErrorKind, Result};
pub use exact_core::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/plane-curves.md")]
    mod plane_curves {}
    #[doc = include_str!("../../../book/src/plumbing-graphs.md")]
    mod plumbing_graphs {}
    #[doc = include_str!("../../../book/src/brieskorn-pieces.md")]
    mod brieskorn_pieces {}
    #[doc = include_str!("../../../book/src/suspension-towers.md")]
    mod suspension_towers {}
    #[doc = include_str!("../../../book/src/splicing.md")]
    mod splicing {}
    #[doc = include_str!("../../../book/src/lemma-lab.md")]
    mod lemma_lab {}
}
