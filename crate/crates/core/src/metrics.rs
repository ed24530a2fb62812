//! Instrumentation shared by every engine.

/// Operation counters collected during a sort.
///
/// Every counter only ever increases while a sort is running.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Comparator invocations, including run detection and walk-back scans.
    pub comparisons: u64,
    /// Comparator invocations made inside merge kernels.
    pub merge_comparisons: u64,
    /// Element writes (into the array or into a merge buffer).
    pub moves: u64,
    /// Elements inspected while scanning backwards for a run start.
    pub walkback_steps: u64,
    /// Run lengths written into the array.
    pub encode_ops: u64,
    /// Run lengths read back from the array.
    pub decode_ops: u64,
    /// Deepest stack observed. For the shallow engines this is the number of
    /// runs whose lengths are held in memory.
    pub max_stack_depth: u64,
    /// Sum of the sizes of all runs produced by merges.
    pub merge_cost: u64,
    /// Runs pushed during the main loop.
    pub pushes: u64,
    /// Merges performed by the policy or the collapse phase.
    pub merges: u64,
}

impl Metrics {
    pub(crate) fn observe_depth(&mut self, depth: usize) {
        self.max_stack_depth = self.max_stack_depth.max(depth as u64);
    }
}

/// One merge of two adjacent runs, as recorded in a merge trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MergeStep {
    pub left_start: usize,
    pub left_len: usize,
    pub right_len: usize,
}

/// Collects metrics and, on request, the merge trace and invariant checks of
/// one sort invocation.
#[derive(Clone, Debug, Default)]
pub struct Recorder {
    pub metrics: Metrics,
    /// Policy-driven merges in execution order; `None` disables recording.
    pub trace: Option<Vec<MergeStep>>,
    /// Number of times a recomputed run power differed from the value the run
    /// was first assigned. Only the standard engine running PowerSort checks
    /// this, and only when set to `Some`.
    pub power_violations: Option<u64>,
    /// Observations where a shallow stack held more entries than its capacity.
    pub capacity_violations: u64,
    /// Length of the long-run prefix the jump-back engine sorted with the
    /// policy. Zero when it fell back to a plain mergesort.
    pub long_region_len: Option<usize>,
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn with_power_check(mut self) -> Self {
        self.power_violations = Some(0);
        self
    }

    pub(crate) fn record_merge(&mut self, step: MergeStep) {
        self.metrics.merges += 1;
        if let Some(trace) = self.trace.as_mut() {
            trace.push(step);
        }
    }

    /// Recorded trace, or an empty slice when recording was off.
    pub fn trace(&self) -> &[MergeStep] {
        self.trace.as_deref().unwrap_or(&[])
    }
}

/// Walk-back steps per unit of mandatory work, `walkback_steps / (merge_cost + n)`.
///
/// A policy is walkable when this stays bounded as `n` grows.
pub fn walkback_cost_report(metrics: &Metrics, n: usize) -> f64 {
    let denom = metrics.merge_cost + n as u64;
    if denom == 0 {
        return 0.0;
    }
    metrics.walkback_steps as f64 / denom as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_zero_without_walking() {
        let m = Metrics::default();
        assert_eq!(walkback_cost_report(&m, 100), 0.0);
        assert_eq!(walkback_cost_report(&m, 0), 0.0);
    }

    #[test]
    fn report_divides_by_merge_cost_plus_n() {
        let m = Metrics {
            walkback_steps: 30,
            merge_cost: 50,
            ..Metrics::default()
        };
        assert!((walkback_cost_report(&m, 10) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_recording_is_opt_in() {
        let mut r = Recorder::new();
        r.record_merge(MergeStep {
            left_start: 0,
            left_len: 1,
            right_len: 1,
        });
        assert!(r.trace().is_empty());
        assert_eq!(r.metrics.merges, 1);

        let mut r = Recorder::new().with_trace();
        r.record_merge(MergeStep {
            left_start: 0,
            left_len: 1,
            right_len: 1,
        });
        assert_eq!(r.trace().len(), 1);
    }
}
