//! Exact computations for resource convertibility modelled by ordered commutative monoids.

pub mod channels;
pub mod cone;
pub mod dd;
pub mod farkas;
pub mod formats;
pub mod graphs;
pub mod linalg;
pub mod lp;
pub mod major;
pub mod monoid;
pub mod numsg;
pub mod rational;
pub mod rxn;

pub use monoid::{Budget, MonoidInstance, RateInterval, Slice, TriState};
pub use rational::{ExtValue, QVec, Rational};

/// A size guard, raised (never lowered) by the `REMONO_GUARD_OVERRIDE` environment variable.
pub fn guard(default: usize) -> usize {
    std::env::var("REMONO_GUARD_OVERRIDE")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(default, |g| g.max(default))
}
