//! Stack-based natural mergesorts that can run strictly in place.
//!
//! A natural mergesort finds the runs already present in its input, pushes
//! them onto a stack and lets a *merge policy* pick which neighbouring runs
//! to merge. This crate implements eight such policies and three engines to
//! drive them:
//!
//! * [`Engine::Standard`] keeps the whole run stack.
//! * [`Engine::WalkBack`] keeps only the top few runs and rediscovers deeper
//!   runs by scanning the array backwards for their first descent.
//! * [`Engine::JumpBack`] keeps only the top few runs and writes the length
//!   of every run it forgets into the run's own cells.
//!
//! ```
//! use shallowsort::{sort_by, Engine, MergeKind, Policy};
//!
//! let mut v = vec![5, 6, 7, 1, 2, 9, 8, 3, 4];
//! let metrics = sort_by(&mut v, |a, b| a < b, Policy::PowerSort, Engine::WalkBack, MergeKind::InPlaceRotation);
//! assert_eq!(v, [1, 2, 3, 4, 5, 6, 7, 8, 9]);
//! assert!(metrics.comparisons > 0);
//! ```

use std::fmt;
use std::str::FromStr;

pub mod encoding;
pub mod entropy;
pub mod jumpback;
pub mod merge;
pub mod metrics;
pub mod partition;
pub mod policy;
pub mod runs;
pub mod shallow;
pub mod standard;
pub mod verify;
pub mod walkback;

pub use encoding::{
    decode_run_length, encode_run_length, find_markers, is_pivotable, reverse_encoding, EncodingError, Lambda,
    MarkerPair, Scheme,
};
pub use entropy::run_entropy;
pub use jumpback::{prepare_long_region, sort_jumpback};
pub use merge::{merge_adjacent, plain_mergesort, MergeKind};
pub use metrics::{walkback_cost_report, MergeStep, Metrics, Recorder};
pub use partition::{partition_short_runs, PartitionOutcome};
pub use policy::{node_power, shivers_level, Policy, PolicyDecision, ProbeResult, StackView};
pub use runs::{detect_runs, scan_run_leftward, RunEntry, RunProfile, ScanOutcome};
pub use shallow::ShallowStack;
pub use standard::sort_standard;
pub use verify::verify_sorted_permutation;
pub use walkback::{collapse_walkback, sort_walkback};

/// Runs the guide's snippets as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/runs.md")]
    struct Runs;
    #[doc = include_str!("../../../book/src/policies.md")]
    struct Policies;
    #[doc = include_str!("../../../book/src/engines.md")]
    struct Engines;
    #[doc = include_str!("../../../book/src/walkback.md")]
    struct WalkBack;
    #[doc = include_str!("../../../book/src/jumpback.md")]
    struct JumpBack;
    #[doc = include_str!("../../../book/src/measuring.md")]
    struct Measuring;
}

/// How a policy's run stack is held.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Standard,
    WalkBack,
    JumpBack,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Standard, Engine::WalkBack, Engine::JumpBack];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Standard => "standard",
            Engine::WalkBack => "walkback",
            Engine::JumpBack => "jumpback",
        }
    }

    /// Sorts `v` and records counters into `rec`.
    pub fn sort_with<T, F>(self, v: &mut [T], is_less: F, policy: Policy, kind: MergeKind, rec: &mut Recorder)
    where
        T: Copy,
        F: FnMut(&T, &T) -> bool,
    {
        match self {
            Engine::Standard => sort_standard(v, is_less, policy, kind, rec),
            Engine::WalkBack => sort_walkback(v, is_less, policy, kind, rec),
            Engine::JumpBack => sort_jumpback(v, is_less, policy, kind, rec),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Engine::Standard),
            "walkback" | "walk-back" => Ok(Engine::WalkBack),
            "jumpback" | "jump-back" => Ok(Engine::JumpBack),
            _ => Err(format!(
                "unknown engine `{s}` (expected standard, walkback or jumpback)"
            )),
        }
    }
}

/// Sorts `v` by `is_less` and returns the operation counters.
pub fn sort_by<T, F>(v: &mut [T], is_less: F, policy: Policy, engine: Engine, kind: MergeKind) -> Metrics
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let mut rec = Recorder::new();
    engine.sort_with(v, is_less, policy, kind, &mut rec);
    rec.metrics
}

/// Sorts `v` in ascending order with PowerSort under the walk-back engine,
/// which is stable and needs no buffer.
pub fn sort<T: Ord + Copy>(v: &mut [T]) {
    sort_by(
        v,
        |a, b| a < b,
        Policy::PowerSort,
        Engine::WalkBack,
        MergeKind::InPlaceRotation,
    );
}
