//! Acceptance checks for `rsdl`. The checks live in `tests/acceptance.rs`;
//! run them with `cargo test -p rsdl-suite --test acceptance`.
