//! Reusable pieces of the `cantor-rays` command-line tool: the verification
//! battery and the parameterized suite builders the verbs share, so the
//! `verify` verb and the acceptance test target run the exact same code.

pub mod checks;
