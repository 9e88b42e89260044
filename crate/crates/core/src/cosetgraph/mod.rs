//! Coset graphs of `(G, G_[0,1/2])` for `G` in F, T, V.
//!
//! A vertex is a left coset `gH` with `H = G_[0,1/2]`, recorded as the
//! restriction `g|[0,1/2)`. Generators act on the left, so the edge labelled
//! `v` joins `gH` to `vgH`.

mod ball;
mod cache;
mod dot;
mod state;

pub use ball::{CosetBall, Edge, ExploreOptions, DEFAULT_BUDGET};
pub use cache::{cache_path, default_cache_dir, CACHE_DIR_ENV, CACHE_MAGIC, CACHE_VERSION};
pub use state::CosetState;
