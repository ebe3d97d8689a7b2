//! Medium-scale curvature of finitely generated groups, computed on balls of
//! concrete Cayley graphs.

pub mod asymptotics;
pub mod ball;
pub mod conjugacy;
pub mod curvature;
pub mod error;
pub mod genset;
pub mod group;
pub mod rational;

pub use ball::{enumerate_ball, norm_targeted, restrict_to_kernel, BallTable, KernelSpec};
pub use error::{CurvError, Result};
pub use group::{Element, Family, GeneratingSet, GroupSpec};
pub use rational::Rational;
