//! Exact symbolic toolkit for wave fronts evolving from an algebraic
//! hypersurface: phase functions, deformation maps, discriminants of tame
//! polynomial families and free / almost-free divisor verdicts at focal
//! points. All algebra is exact over arbitrary-precision rationals (or the
//! univariate rational-function field for directional derivatives); floating
//! point only appears in the presentation-level front sampler.

pub mod arith;
pub mod cli;
pub mod divisor;
pub mod groebner;
pub mod poly;
pub mod selftest;
pub mod wavefront;
