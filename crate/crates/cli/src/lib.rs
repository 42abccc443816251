//! Library side of the `optomech` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod app;
pub mod config;
pub mod error;
pub mod scenarios;
