//! Holds the `acceptance` test target, which runs as a plain binary and
//! prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p qll-criteria --test acceptance
//! ```
