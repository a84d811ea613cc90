//! Decision procedures for epimorphism and effective descent classes in the
//! free coproduct completion of a finite base, and for enriched functors.
//!
//! * [`lattice`]: finite lattices, Heyting detection, the builtin corpus.
//! * [`fam_thin`]: families `(X_i) <= Y` over a lattice, classified from the
//!   tables and checked for effective descent by enumerating descent data.
//! * [`vcat_thin`]: lattice-enriched categories and functors.
//! * [`fincat`]: explicit finite categories with search-based limits, used as
//!   an independent engine for regular epimorphisms.
//! * [`finset`]: ordinary categories (enriched in finite sets) with image
//!   factorizations, mono covers and a gluing oracle.
//! * [`cli`]: the `descent-kit` command line.

pub mod cli;
pub mod doc;
pub mod fam_thin;
pub mod fincat;
pub mod finset;
pub mod lattice;
pub mod report;
pub mod vcat_thin;

pub use fam_thin::{classify, is_effective_descent, Classification, ThinFamily, DEFAULT_BUDGET};
pub use lattice::{build_lattice, corpus, detect_heyting, FiniteLattice};
pub use report::{Report, Verdict};
