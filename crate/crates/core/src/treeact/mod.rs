//! The modular group `Z/2 * Z/3 = <a | a²> * <b | b³>` acting on its
//! Bass–Serre tree.
//!
//! Vertices are the cosets `w<a>` (degree 2) and `w<b>` (degree 3); `w<a>`
//! and `w<b>` are joined for every `w`. Nontrivial elliptic elements fix
//! exactly one vertex, and everything else translates an axis, so both
//! kinds of isometry appear in small examples.

mod classify;
mod tree;
mod word;

pub use classify::{
    classify_isometry, fixed_point_suite, required_radius, Isometry, Rule, SuiteReport, Violation,
};
pub use tree::{TreeBall, TreeVertex};
pub use word::{Factor, Letter, ModWord};
