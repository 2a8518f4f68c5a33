//! Acceptance checks for `gme-core` live in `tests/acceptance.rs`.
//!
//! Run them with `cargo test -p gme-validation --test acceptance`. The binary
//! prints one line per criterion and exits non-zero if any of them fails.
