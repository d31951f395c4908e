//! Point counting, zeta functions and supersingularity classification for
//! Hurwitz curves `X^n Y^l + Y^n Z^l + Z^n X^l = 0` and Fermat curves over
//! finite fields.

pub mod arith;
pub mod count;
pub mod curves;
pub mod field;
pub mod zeta;
pub mod criteria;
pub mod genus;
pub mod report;
