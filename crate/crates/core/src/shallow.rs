//! The strictly in-place driver: a fixed window over the top runs.
//!
//! Only the topmost `k` runs of the stacked region are held in memory. A
//! deeper run is recovered on demand from the array itself, either by
//! scanning left for its first strict descent (walk-back) or by decoding a
//! length tag written into it when it left the window (jump-back).

use crate::encoding::{decode_run_length, encode_run_length, reverse_encoding, MarkerPair, Scheme};
use crate::merge::{merge_adjacent, MergeKind};
use crate::metrics::{MergeStep, Recorder};
use crate::policy::{Policy, PolicyDecision, ProbeResult, StackView};
use crate::runs::{next_run_end, scan_run_leftward, RunEntry, ScanOutcome};

pub(crate) const MAX_CAPACITY: usize = 4;

/// How runs below the window are recovered.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Recall<T> {
    WalkBack,
    JumpBack { lambda: usize, markers: MarkerPair<T> },
}

enum Located {
    Run(RunEntry),
    Exceeded,
    Missing,
}

/// Bounded window of known runs; `entries[0]` is the deepest.
#[derive(Clone, Copy, Debug)]
pub struct ShallowStack {
    entries: [RunEntry; MAX_CAPACITY],
    len: usize,
    capacity: usize,
    /// End of the stacked region, i.e. start of the next unpushed run.
    processed: usize,
}

impl ShallowStack {
    pub fn new(capacity: usize) -> Self {
        assert!((1..=MAX_CAPACITY).contains(&capacity));
        Self {
            entries: [RunEntry::default(); MAX_CAPACITY],
            len: 0,
            capacity,
            processed: 0,
        }
    }

    pub fn known(&self) -> &[RunEntry] {
        &self.entries[..self.len]
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn processed(&self) -> usize {
        self.processed
    }
}

pub(crate) struct ShallowEngine<'a, T, F> {
    v: &'a mut [T],
    is_less: &'a mut F,
    rec: &'a mut Recorder,
    kind: MergeKind,
    recall: Recall<T>,
    stack: ShallowStack,
    scratch: Vec<T>,
}

impl<'a, T, F> ShallowEngine<'a, T, F>
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    pub(crate) fn new(
        v: &'a mut [T],
        is_less: &'a mut F,
        rec: &'a mut Recorder,
        kind: MergeKind,
        recall: Recall<T>,
        capacity: usize,
    ) -> Self {
        Self {
            v,
            is_less,
            rec,
            kind,
            recall,
            stack: ShallowStack::new(capacity),
            scratch: Vec::new(),
        }
    }

    /// An engine whose main loop is already over: the region ends with the
    /// run starting at `top_start` and that is the only run it knows.
    pub(crate) fn with_top(
        v: &'a mut [T],
        is_less: &'a mut F,
        rec: &'a mut Recorder,
        kind: MergeKind,
        recall: Recall<T>,
        capacity: usize,
        top_start: usize,
    ) -> Self {
        let n = v.len();
        let mut engine = Self::new(v, is_less, rec, kind, recall, capacity);
        if top_start < n {
            engine.stack.entries[0] = RunEntry::new(top_start, n - top_start);
            engine.stack.len = 1;
        }
        engine.stack.processed = n;
        engine
    }

    /// Runs the main loop and the collapse phase. Runs of `v` must already
    /// be normalized.
    pub(crate) fn sort(&mut self, policy: Policy) {
        let n = self.v.len();
        while self.stack.processed < n {
            self.push_next();
            while let PolicyDecision::MergeAt(depth) = policy.step(self) {
                self.merge_at(depth);
            }
        }
        self.collapse();
    }

    /// Merges the top two runs until one run spans the region, recovering
    /// lengths with unbounded probes.
    pub(crate) fn collapse(&mut self) {
        while self.stack.len > 0 && self.top().start > 0 {
            self.merge_at(1);
        }
    }

    fn observe(&mut self) {
        let s = &self.stack;
        if s.len > s.capacity {
            self.rec.capacity_violations += 1;
        }
        debug_assert!(s.len <= s.capacity);
        self.rec.metrics.observe_depth(s.len);
    }

    fn push_next(&mut self) {
        let start = self.stack.processed;
        let end = next_run_end(self.v, start, self.v.len(), self.is_less, &mut self.rec.metrics);
        if self.stack.len == self.stack.capacity {
            let evicted = self.stack.entries[0];
            self.stack.entries.copy_within(1..self.stack.len, 0);
            self.stack.len -= 1;
            if let Recall::JumpBack { lambda, markers } = &self.recall {
                encode_run_length(self.v, evicted, *lambda, markers, self.is_less, &mut self.rec.metrics);
            }
        }
        self.stack.entries[self.stack.len] = RunEntry::new(start, end - start);
        self.stack.len += 1;
        self.stack.processed = end;
        self.rec.metrics.pushes += 1;
        self.observe();
    }

    /// Finds the run at `depth`. Only the target depth is bounded by
    /// `budget`; runs passed on the way are located exactly. Recovered runs
    /// directly below the window join it while there is room.
    fn locate(&mut self, depth: usize, budget: usize) -> Located {
        let s = &self.stack;
        if depth <= s.len {
            return Located::Run(s.entries[s.len - depth]);
        }
        let mut end = if s.len == 0 { s.processed } else { s.entries[0].start };
        for d in self.stack.len + 1..=depth {
            if end == 0 {
                return Located::Missing;
            }
            let level_budget = if d == depth { budget } else { usize::MAX };
            let Some((run, scheme)) = self.recover(end, level_budget) else {
                return Located::Exceeded;
            };
            if d == self.stack.len + 1 && self.stack.len < self.stack.capacity {
                self.admit_below(run, scheme);
            }
            if d == depth {
                return Located::Run(run);
            }
            end = run.start;
        }
        unreachable!()
    }

    /// The run ending at `end`, plus the scheme of its tag under jump-back.
    fn recover(&mut self, end: usize, budget: usize) -> Option<(RunEntry, Option<Scheme>)> {
        match &self.recall {
            Recall::WalkBack => match scan_run_leftward(self.v, end, budget, self.is_less, &mut self.rec.metrics) {
                ScanOutcome::Found(len) => Some((RunEntry::new(end - len, len), None)),
                ScanOutcome::Exceeded => None,
            },
            Recall::JumpBack { lambda, .. } => {
                let (len, scheme) = decode_run_length(self.v, end, *lambda, self.is_less, &mut self.rec.metrics)
                    .unwrap_or_else(|e| panic!("jump-back stack corrupted: {e}"));
                Some((RunEntry::new(end - len, len), Some(scheme)))
            }
        }
    }

    fn admit_below(&mut self, run: RunEntry, scheme: Option<Scheme>) {
        if let (Recall::JumpBack { lambda, .. }, Some(scheme)) = (&self.recall, scheme) {
            reverse_encoding(self.v, run.start, run.len, scheme, *lambda, &mut self.rec.metrics);
        }
        let s = &mut self.stack;
        s.entries.copy_within(0..s.len, 1);
        s.entries[0] = run;
        s.len += 1;
        self.observe();
    }

    /// Merges the runs at `depth + 1` and `depth`.
    fn merge_at(&mut self, depth: usize) {
        match self.locate(depth + 1, usize::MAX) {
            Located::Run(_) => {}
            _ => panic!("policy asked to merge below the bottom of the stack"),
        }
        let s = &self.stack;
        assert!(
            s.len > depth,
            "run at depth {} does not fit a window of {}",
            depth + 1,
            s.capacity
        );
        let upper_idx = s.len - depth;
        let (left, right) = (s.entries[upper_idx - 1], s.entries[upper_idx]);
        self.rec.record_merge(MergeStep {
            left_start: left.start,
            left_len: left.len,
            right_len: right.len,
        });
        let mut merged = merge_adjacent(
            self.v,
            left,
            right,
            self.kind,
            self.is_less,
            &mut self.rec.metrics,
            &mut self.scratch,
        );
        merged.aux = right.aux;
        let s = &mut self.stack;
        s.entries[upper_idx - 1] = merged;
        s.entries.copy_within(upper_idx + 1..s.len, upper_idx);
        s.len -= 1;
    }
}

impl<T, F> StackView for ShallowEngine<'_, T, F>
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    fn region_len(&self) -> usize {
        self.v.len()
    }

    fn top(&self) -> RunEntry {
        self.stack.entries[self.stack.len - 1]
    }

    fn probe(&mut self, depth: usize, budget: usize) -> Option<ProbeResult> {
        match self.locate(depth, budget) {
            Located::Run(run) => Some(ProbeResult::Known(run.len)),
            Located::Exceeded => Some(ProbeResult::ExceedsBudget),
            Located::Missing => None,
        }
    }

    fn exists(&mut self, depth: usize) -> bool {
        if depth <= 1 {
            return self.stack.len > 0;
        }
        match self.locate(depth - 1, usize::MAX) {
            Located::Run(run) => run.start > 0,
            _ => false,
        }
    }

    fn aux(&self, depth: usize) -> Option<u32> {
        let s = &self.stack;
        if depth <= s.len {
            s.entries[s.len - depth].aux
        } else {
            None
        }
    }

    fn set_aux(&mut self, depth: usize, value: u32) {
        let s = &mut self.stack;
        if depth <= s.len {
            s.entries[s.len - depth].aux = Some(value);
        }
    }
}
