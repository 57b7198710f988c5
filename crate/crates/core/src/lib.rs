//! Elliptic divisibility sequences attached to the cubic twists
//! `U^3 + V^3 = m W^3`, studied through the Mordell curve `Y^2 = X^3 - 432 m^2`.

pub mod arith;
pub mod bounds;
pub mod curves;
pub mod divpoly;
pub mod error;
pub mod heights;
pub mod local;
pub mod points;
pub mod sequences;
pub mod tables;
pub mod thue;

pub use error::{Error, Result};
