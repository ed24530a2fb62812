//! Merge-trace comparison between engines.

use shallowsort::{prepare_long_region, Engine, MergeKind, MergeStep, Metrics, Policy, Recorder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceComparison {
    pub equal: bool,
    /// Index of the first differing merge and each engine's merge there
    /// (`None` once a trace has ended).
    pub first_divergence: Option<(usize, Option<MergeStep>, Option<MergeStep>)>,
    pub merges: (usize, usize),
}

fn trace_of(engine: Engine, input: &[i64], policy: Policy, kind: MergeKind, long_only: bool) -> Vec<MergeStep> {
    let mut v = input.to_vec();
    let mut rec = Recorder::new().with_trace();
    if long_only && engine != Engine::JumpBack {
        // Jump-back applies the policy to the long runs only; give the other
        // engine the same region.
        let long = prepare_long_region(&mut v, &mut |a: &i64, b: &i64| a < b, &mut Metrics::default());
        engine.sort_with(&mut v[..long], |a, b| a < b, policy, kind, &mut rec);
    } else {
        engine.sort_with(&mut v, |a, b| a < b, policy, kind, &mut rec);
    }
    rec.trace.unwrap_or_default()
}

/// Sorts copies of `input` with two engines and compares their merge
/// traces. When exactly one engine is jump-back, the other sorts the
/// long-run prefix that jump-back hands to the policy.
pub fn compare_traces(input: &[i64], policy: Policy, a: Engine, b: Engine, kind: MergeKind) -> TraceComparison {
    let long_only = (a == Engine::JumpBack) != (b == Engine::JumpBack);
    let ta = trace_of(a, input, policy, kind, long_only);
    let tb = trace_of(b, input, policy, kind, long_only);
    let first_divergence = (0..ta.len().max(tb.len()))
        .find(|&i| ta.get(i) != tb.get(i))
        .map(|i| (i, ta.get(i).copied(), tb.get(i).copied()));
    TraceComparison {
        equal: first_divergence.is_none(),
        first_divergence,
        merges: (ta.len(), tb.len()),
    }
}
