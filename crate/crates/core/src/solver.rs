// SPDX-License-Identifier: Apache-2.0
//! Exact branch-and-bound over the gate selectors of a [`ConstraintModel`].
//!
//! Gates are assigned level by level. A gate choice is a type selector (or
//! the disabled pseudo-type), two input selectors and the enable flag; since
//! every downstream equation only sees the gate's output on the care
//! minterms, choices are grouped by that output vector and only the cheapest
//! choices of each vector are branched on. Once all lower levels are fixed,
//! each output gate independently takes its cheapest matching choice.
//!
//! Pruning uses the incumbent cost plus an admissible completion bound:
//!
//! * every output function not yet present as a signal needs one more
//!   non-wire gate;
//! * a costly gate nobody reads can be disabled, so such partial circuits are
//!   abandoned as soon as no remaining gate could still read them.
//!
//! With symmetry breaking on, gates inside a non-top level are kept in
//! increasing signal order, idle levels of a uniform all-previous skeleton
//! come first, adjacent independent single-gate levels are ordered, and under
//! all-previous connectivity non-output gates never copy an existing signal.
//! Each rule keeps at least one optimal circuit reachable.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::Bitvector;
use crate::circuit::{Circuit, GateInstance};
use crate::gate::{gate_cost, GateKind};
use crate::model::ConstraintModel;
use crate::topology::{Connectivity, FeedEntity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_limit: Option<Duration>,
    pub threads: usize,
    pub symmetry_breaking: bool,
    pub strategy: SearchStrategy,
    /// Only circuits of at most this cost are sought first; if none exists
    /// the search is repeated without the bound.
    pub initial_upper_bound: Option<u32>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_limit: None,
            threads: 1,
            symmetry_breaking: true,
            strategy: SearchStrategy::Deepening,
            initial_upper_bound: None,
        }
    }
}

impl SearchConfig {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }

    pub fn with_strategy(mut self, strategy: SearchStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_upper_bound(mut self, bound: u32) -> Self {
        self.initial_upper_bound = Some(bound);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    /// Repeated bounded searches with a rising cost threshold; the first
    /// circuit found is optimal.
    #[default]
    Deepening,
    /// One search that keeps improving an incumbent.
    DepthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    FeasibleBestSoFar,
    Infeasible,
    TimeoutNoSolution,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleBestSoFar => "feasible-best-so-far",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::TimeoutNoSolution => "timeout-no-solution",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub circuit: Option<Circuit>,
    pub cost: Option<u32>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// A gate whose selectors have been fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateChoice {
    pub kind: GateKind,
    pub enabled: bool,
}

/// Selector values fixed so far, one slot per gate in level-major order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    pub gates: Vec<Option<GateChoice>>,
}

/// Cost already committed by a partial assignment; never exceeds the cost
/// of any completion.
pub fn lower_bound(model: &ConstraintModel, partial: &PartialAssignment) -> u32 {
    partial
        .gates
        .iter()
        .flatten()
        .filter(|c| c.enabled)
        .map(|c| gate_cost(c.kind, model.cost_model()))
        .sum()
}

const DISABLED: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, Default)]
struct Opt {
    vec: u64,
    cost: u32,
    kind: u8,
    k1: u16,
    k2: u16,
    /// Gates read by some cheapest choice producing `vec`.
    reads: u64,
}

impl Opt {
    const fn disabled() -> Self {
        Opt {
            vec: 0,
            cost: 0,
            kind: DISABLED,
            k1: 0,
            k2: 0,
            reads: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Gate(usize),
    Fixed(u64),
}

struct Level {
    first: usize,
    width: usize,
    sources: Vec<Source>,
    /// Levels `0..=this` all have the same width.
    uniform_prefix: bool,
}

struct Problem {
    care: u64,
    targets: Vec<u64>,
    distinct_targets: Vec<u64>,
    kinds: Vec<(GateKind, u32)>,
    levels: Vec<Level>,
    gate_level: Vec<usize>,
    gate_output: Vec<Option<usize>>,
    literals: Vec<u64>,
    all_previous: bool,
    symmetry: bool,
    track_reads: bool,
    /// Cheapest way to create a signal that is not already present.
    min_new_cost: u32,
}

impl Problem {
    fn new(model: &ConstraintModel, symmetry: bool) -> Self {
        let spec = model.spec();
        let arch = model.architecture();
        let n = spec.vars();
        let care = spec.care().bits();
        let targets: Vec<u64> = spec.outputs().iter().map(|f| f.bits() & care).collect();
        let mut distinct_targets = targets.clone();
        distinct_targets.sort_unstable();
        distinct_targets.dedup();
        let kinds: Vec<(GateKind, u32)> = arch
            .gate_set
            .iter()
            .map(|&k| (k, gate_cost(k, model.cost_model())))
            .collect();
        let min_new_cost = kinds
            .iter()
            .filter(|(k, _)| *k != GateKind::Con)
            .map(|&(_, c)| c)
            .min()
            .unwrap_or(0);

        let gates: Vec<_> = arch.positions().collect();
        let mut levels = Vec::with_capacity(arch.levels());
        let mut first = 0;
        for l in 1..=arch.levels() {
            let sources = arch
                .feed_entities(l)
                .expect("validated level")
                .into_iter()
                .map(|e| match e {
                    FeedEntity::Gate(p) => Source::Gate(arch.gate_index(p).expect("validated")),
                    FeedEntity::Variable(j) => Source::Fixed(Bitvector::variable(n, j).expect("validated").bits() & care),
                    FeedEntity::One => Source::Fixed(care),
                    FeedEntity::Zero => Source::Fixed(0),
                })
                .collect();
            levels.push(Level {
                first,
                width: arch.width(l),
                sources,
                uniform_prefix: arch.widths[..l].iter().all(|&w| w == arch.widths[0]),
            });
            first += arch.width(l);
        }
        let mut literals: Vec<u64> = (1..=n)
            .map(|j| Bitvector::variable(n, j).expect("validated").bits() & care)
            .collect();
        literals.push(care);
        literals.push(0);

        Problem {
            care,
            targets,
            distinct_targets,
            kinds,
            gate_level: gates.iter().map(|p| p.level - 1).collect(),
            gate_output: gates.iter().map(|&p| arch.output_index(p)).collect(),
            levels,
            literals,
            all_previous: arch.connectivity == Connectivity::AllPrevious,
            symmetry,
            track_reads: gates.len() <= 64,
            min_new_cost,
        }
    }

    fn top(&self) -> usize {
        self.levels.len() - 1
    }

    fn gate_count(&self) -> usize {
        self.gate_level.len()
    }
}

struct Incumbent {
    cost: u32,
    choices: Vec<Opt>,
}

struct Shared {
    best: AtomicU32,
    incumbent: Mutex<Option<Incumbent>>,
    stop: AtomicBool,
    timed_out: AtomicBool,
    nodes: AtomicU64,
    deadline: Option<Instant>,
    /// Smallest bound of any subtree cut by the incumbent cost.
    pruned: AtomicU32,
    stop_on_first: bool,
}

struct Worker<'a> {
    p: &'a Problem,
    shared: &'a Shared,
    vecs: Vec<u64>,
    chosen: Vec<Opt>,
    used: u64,
    opts: Vec<Vec<Opt>>,
    ents: Vec<u64>,
    ent_reads: Vec<u64>,
    nodes: u64,
    pruned: u32,
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem, shared: &'a Shared) -> Self {
        let n = p.gate_count();
        Worker {
            p,
            shared,
            vecs: vec![0; n],
            chosen: vec![Opt::disabled(); n],
            used: 0,
            opts: (0..p.levels.len()).map(|_| Vec::new()).collect(),
            ents: Vec::new(),
            ent_reads: Vec::new(),
            nodes: 0,
            pruned: u32::MAX,
        }
    }

    #[inline]
    fn best(&self) -> u32 {
        self.shared.best.load(Ordering::Relaxed)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes & 1023 == 0 {
            self.shared.nodes.fetch_add(1024, Ordering::Relaxed);
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.timed_out.store(true, Ordering::Relaxed);
                    self.shared.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        self.shared.stop.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        self.shared.nodes.fetch_add(self.nodes & 1023, Ordering::Relaxed);
        self.shared.pruned.fetch_min(self.pruned, Ordering::Relaxed);
        self.nodes = 0;
    }

    #[inline]
    fn cut(&mut self, bound: u32) {
        self.pruned = self.pruned.min(bound);
    }

    fn load_entities(&mut self, level: usize) {
        self.ents.clear();
        self.ent_reads.clear();
        for s in &self.p.levels[level].sources {
            match *s {
                Source::Gate(i) => {
                    self.ents.push(self.vecs[i]);
                    self.ent_reads.push(if self.p.track_reads { 1 << i } else { 0 });
                }
                Source::Fixed(v) => {
                    self.ents.push(v);
                    self.ent_reads.push(0);
                }
            }
        }
    }

    /// Distinct cheapest choices for a non-top gate at `level`, ordered by
    /// cost then signal.
    fn build_options(&mut self, level: usize) {
        self.load_entities(level);
        let care = self.p.care;
        let mut out = std::mem::take(&mut self.opts[level]);
        out.clear();
        out.push(Opt::disabled());
        let k = self.ents.len();
        for (ki, &(kind, cost)) in self.p.kinds.iter().enumerate() {
            if kind.arity() == 1 {
                for a in 0..k {
                    out.push(Opt {
                        vec: kind.eval_word(self.ents[a], self.ents[a]) & care,
                        cost,
                        kind: ki as u8,
                        k1: a as u16,
                        k2: a as u16,
                        reads: self.ent_reads[a],
                    });
                }
            } else {
                for a in 0..k {
                    for b in a..k {
                        out.push(Opt {
                            vec: kind.eval_word(self.ents[a], self.ents[b]) & care,
                            cost,
                            kind: ki as u8,
                            k1: a as u16,
                            k2: b as u16,
                            reads: self.ent_reads[a] | self.ent_reads[b],
                        });
                    }
                }
            }
        }
        out.sort_by_key(|o| (o.vec, o.cost));
        let mut w = 0;
        for r in 1..out.len() {
            if out[r].vec == out[w].vec {
                if out[r].cost == out[w].cost {
                    out[w].reads |= out[r].reads;
                }
            } else {
                w += 1;
                out[w] = out[r];
            }
        }
        out.truncate(w + 1);
        if self.p.symmetry && self.p.all_previous {
            let ents = &self.ents;
            out.retain(|o| o.kind == DISABLED || !ents.contains(&o.vec));
        }
        out.sort_by_key(|o| (o.cost, o.vec));
        self.opts[level] = out;
    }

    fn level_is_idle(&self, level: usize, upto: usize) -> bool {
        let l = &self.p.levels[level];
        (l.first..upto.min(l.first + l.width)).all(|i| self.chosen[i].kind == DISABLED)
    }

    fn admissible(&self, gi: usize, level: usize, pos: usize, o: &Opt) -> bool {
        if !self.p.symmetry {
            return true;
        }
        let lv = &self.p.levels[level];
        if pos > 0 {
            let prev = self.vecs[gi - 1];
            if o.vec < prev || (o.vec == prev && o.cost > 0) {
                return false;
            }
        }
        if self.p.all_previous && level > 0 {
            if lv.uniform_prefix && pos + 1 == lv.width && o.kind == DISABLED && self.level_is_idle(level, gi) {
                let earlier_active = (0..level).any(|l| !self.level_is_idle(l, usize::MAX));
                if earlier_active {
                    return false;
                }
            }
            if self.p.track_reads && lv.width == 1 && self.p.levels[level - 1].width == 1 {
                let prev = &self.chosen[gi - 1];
                if prev.cost > 0 && o.cost > 0 && o.reads & (1 << (gi - 1)) == 0 && o.vec <= prev.vec {
                    return false;
                }
            }
        }
        true
    }

    /// Admissible bound on the cost still to be paid once gates `0..upto`
    /// are fixed, or `None` when no completion can be optimal.
    fn completion_bound(&self, upto: usize) -> Option<u32> {
        let p = self.p;
        let missing = p
            .distinct_targets
            .iter()
            .filter(|t| !p.literals.contains(t) && !self.vecs[..upto].contains(t))
            .count();
        let mut lb = missing as u32;

        if p.track_reads {
            let next_level = p.gate_level.get(upto).copied();
            if p.all_previous {
                if p.symmetry {
                    let dangling = (0..upto)
                        .filter(|&i| self.chosen[i].cost > 0 && p.gate_output[i].is_none() && self.used & (1 << i) == 0)
                        .count();
                    lb = lb.max(dangling.saturating_sub(p.targets.len()) as u32);
                }
            } else if let Some(level) = next_level {
                let lv = &p.levels[level];
                if level >= 2 && upto == lv.first {
                    let old = &p.levels[level - 2];
                    if (old.first..old.first + old.width).any(|i| self.unread_costly(i)) {
                        return None;
                    }
                }
                if level >= 1 {
                    let prev = &p.levels[level - 1];
                    let dangling = (prev.first..prev.first + prev.width).filter(|&i| self.unread_costly(i)).count();
                    let readers = if level == p.top() {
                        p.targets.len()
                    } else {
                        lv.first + lv.width - upto
                    };
                    if dangling > 2 * readers {
                        return None;
                    }
                }
            }
        }
        Some(lb * p.min_new_cost)
    }

    #[inline]
    fn unread_costly(&self, i: usize) -> bool {
        self.chosen[i].cost > 0 && self.used & (1 << i) == 0
    }

    fn dfs(&mut self, gi: usize, cost: u32) {
        let level = self.p.gate_level[gi];
        if level == self.p.top() {
            self.finish_top(cost);
            return;
        }
        let pos = gi - self.p.levels[level].first;
        if pos == 0 {
            self.build_options(level);
        }
        for oi in 0..self.opts[level].len() {
            let o = self.opts[level][oi];
            if cost + o.cost >= self.best() {
                self.cut(cost + o.cost);
                break;
            }
            if !self.admissible(gi, level, pos, &o) {
                continue;
            }
            if self.tick() {
                return;
            }
            self.vecs[gi] = o.vec;
            self.chosen[gi] = o;
            let saved = self.used;
            self.used |= o.reads;
            if let Some(lb) = self.completion_bound(gi + 1) {
                if cost + o.cost + lb < self.best() {
                    self.dfs(gi + 1, cost + o.cost);
                } else {
                    self.cut(cost + o.cost + lb);
                }
            }
            self.used = saved;
            self.vecs[gi] = 0;
            self.chosen[gi] = Opt::disabled();
        }
    }

    /// Cheapest choice at a top gate producing `target` on the care set.
    fn match_target(&self, target: u64) -> Option<Opt> {
        let care = self.p.care;
        let ents = &self.ents;
        let mut best: Option<Opt> = None;
        let mut offer = |o: Opt| match &mut best {
            Some(b) if b.cost < o.cost => {}
            Some(b) if b.cost == o.cost => b.reads |= o.reads,
            _ => best = Some(o),
        };
        if target == 0 {
            offer(Opt::disabled());
        }
        let not_t = target ^ care;
        for (ki, &(kind, cost)) in self.p.kinds.iter().enumerate() {
            let mk = |a: usize, b: usize| Opt {
                vec: target,
                cost,
                kind: ki as u8,
                k1: a as u16,
                k2: b as u16,
                reads: self.ent_reads[a] | self.ent_reads[b],
            };
            match kind {
                GateKind::Con | GateKind::Not => {
                    let want = if kind == GateKind::Con { target } else { not_t };
                    for a in 0..ents.len() {
                        if ents[a] == want {
                            offer(mk(a, a));
                        }
                    }
                }
                GateKind::Xor => {
                    for a in 0..ents.len() {
                        let want = ents[a] ^ target;
                        for b in a..ents.len() {
                            if ents[b] == want {
                                offer(mk(a, b));
                            }
                        }
                    }
                }
                _ => {
                    // AND/NAND need both inputs to cover the product,
                    // OR/NOR need both inside the sum.
                    let (product, is_and) = match kind {
                        GateKind::And => (target, true),
                        GateKind::Nand => (not_t, true),
                        GateKind::Or => (target, false),
                        _ => (not_t, false),
                    };
                    let fits = |v: u64| if is_and { v & product == product } else { v & !product == 0 };
                    let cand: Vec<usize> = (0..ents.len()).filter(|&a| fits(ents[a])).collect();
                    for (i, &a) in cand.iter().enumerate() {
                        for &b in &cand[i..] {
                            let v = if is_and { ents[a] & ents[b] } else { ents[a] | ents[b] };
                            if v == product {
                                offer(mk(a, b));
                            }
                        }
                    }
                }
            }
        }
        best
    }

    fn finish_top(&mut self, cost: u32) {
        if self.tick() {
            return;
        }
        let top = self.p.top();
        self.load_entities(top);
        let lv = &self.p.levels[top];
        let mut total = cost;
        let mut reads = self.used;
        let mut picks = [Opt::disabled(); 64];
        let width = lv.width.min(64);
        for pos in 0..width {
            let gi = lv.first + pos;
            let Some(q) = self.p.gate_output[gi] else { continue };
            let Some(o) = self.match_target(self.p.targets[q]) else { return };
            total += o.cost;
            if total >= self.best() {
                self.cut(total);
                return;
            }
            reads |= o.reads;
            picks[pos] = o;
        }
        if self.p.track_reads && (0..lv.first).any(|i| self.chosen[i].cost > 0 && reads & (1 << i) == 0) {
            return;
        }
        let mut slot = self.shared.incumbent.lock().expect("incumbent lock");
        if total < self.shared.best.load(Ordering::Relaxed) {
            let mut choices = self.chosen.clone();
            for pos in 0..width {
                choices[lv.first + pos] = picks[pos];
            }
            self.shared.best.store(total, Ordering::Relaxed);
            *slot = Some(Incumbent { cost: total, choices });
            if self.shared.stop_on_first {
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
    }
}

fn build_circuit(model: &ConstraintModel, choices: &[Opt]) -> Circuit {
    let arch = model.architecture();
    let gates = arch
        .positions()
        .zip(choices)
        .map(|(pos, o)| {
            let ents = arch.feed_entities(pos.level).expect("validated level");
            if o.kind == DISABLED {
                GateInstance::disabled(pos, arch.gate_set[0], ents[0])
            } else {
                GateInstance {
                    pos,
                    kind: arch.gate_set[o.kind as usize],
                    inputs: [ents[o.k1 as usize], ents[o.k2 as usize]],
                    enabled: true,
                }
            }
        })
        .collect();
    Circuit::new(arch.clone(), gates).expect("solver builds circuits on the model architecture")
}

struct Outcome {
    incumbent: Option<Incumbent>,
    timed_out: bool,
    nodes: u64,
    /// Lowest cost that was cut off, the next useful threshold.
    next: Option<u32>,
}

fn search(problem: &Problem, threads: usize, bound: Option<u32>, stop_on_first: bool, deadline: Option<Instant>) -> Outcome {
    let shared = Shared {
        best: AtomicU32::new(bound.map_or(u32::MAX, |b| b.saturating_add(1))),
        incumbent: Mutex::new(None),
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        deadline,
        pruned: AtomicU32::new(u32::MAX),
        stop_on_first,
    };
    if threads <= 1 || problem.levels.len() == 1 {
        let mut w = Worker::new(problem, &shared);
        w.dfs(0, 0);
        w.flush();
    } else {
        let mut root = Worker::new(problem, &shared);
        root.build_options(0);
        let roots: Vec<Opt> = root.opts[0].clone();
        let run = || {
            roots.par_iter().for_each(|&o| {
                if shared.stop.load(Ordering::Relaxed) {
                    return;
                }
                let mut w = Worker::new(problem, &shared);
                if o.cost >= w.best() {
                    w.cut(o.cost);
                } else {
                    w.build_options(0);
                    if w.admissible(0, 0, 0, &o) {
                        w.vecs[0] = o.vec;
                        w.chosen[0] = o;
                        w.used = o.reads;
                        match w.completion_bound(1) {
                            Some(lb) if o.cost + lb < w.best() => w.dfs(1, o.cost),
                            Some(lb) => w.cut(o.cost + lb),
                            None => {}
                        }
                    }
                }
                w.flush();
            })
        };
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
    let pruned = shared.pruned.load(Ordering::Relaxed);
    Outcome {
        incumbent: shared.incumbent.into_inner().expect("incumbent lock"),
        timed_out: shared.timed_out.load(Ordering::Relaxed),
        nodes: shared.nodes.load(Ordering::Relaxed),
        next: (pruned != u32::MAX).then_some(pruned),
    }
}

/// Finds a minimum-cost circuit satisfying `model`.
pub fn solve(model: &ConstraintModel, config: &SearchConfig) -> SolveResult {
    let start = Instant::now();
    let deadline = config.time_limit.map(|t| start + t);
    let problem = Problem::new(model, config.symmetry_breaking);
    let threads = config.threads.max(1);
    let ub = config.initial_upper_bound;

    let mut nodes = 0;
    let (incumbent, timed_out, proven) = match config.strategy {
        SearchStrategy::DepthFirst => {
            let mut out = search(&problem, threads, ub, false, deadline);
            nodes += out.nodes;
            if out.incumbent.is_none() && !out.timed_out && ub.is_some() {
                out = search(&problem, threads, None, false, deadline);
                nodes += out.nodes;
            }
            (out.incumbent, out.timed_out, false)
        }
        SearchStrategy::Deepening => {
            // With a starting bound the first pass minimises below it; every
            // later pass stops at its first circuit, which is optimal since
            // all cheaper circuits were ruled out by the previous pass.
            let mut threshold = ub.unwrap_or(0);
            let mut minimise = ub.is_some();
            loop {
                let out = search(&problem, threads, Some(threshold), !minimise, deadline);
                nodes += out.nodes;
                if out.incumbent.is_some() || out.timed_out {
                    break (out.incumbent, out.timed_out, !minimise);
                }
                match out.next {
                    Some(t) => threshold = t,
                    None => break (None, false, false),
                }
                minimise = false;
            }
        }
    };
    let status = match (&incumbent, timed_out) {
        (Some(_), false) => SolveStatus::Optimal,
        (Some(_), true) if proven => SolveStatus::Optimal,
        (Some(_), true) => SolveStatus::FeasibleBestSoFar,
        (None, false) => SolveStatus::Infeasible,
        (None, true) => SolveStatus::TimeoutNoSolution,
    };
    let circuit = incumbent.as_ref().map(|inc| build_circuit(model, &inc.choices));
    if let (Some(c), Some(inc)) = (&circuit, &incumbent) {
        debug_assert_eq!(c.cost(model.cost_model()), inc.cost);
    }
    SolveResult {
        status,
        cost: incumbent.map(|i| i.cost),
        circuit,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::TruthSpec;
    use crate::circuit::verify;
    use crate::gate::CostModel;
    use crate::model::encode;
    use crate::topology::Architecture;

    fn run(spec: &TruthSpec, arch: &Architecture, config: &SearchConfig) -> SolveResult {
        let model = encode(spec, arch, &CostModel::gate_count()).unwrap();
        let r = solve(&model, config);
        if let Some(c) = &r.circuit {
            let rep = verify(c, spec).unwrap();
            assert!(rep.pass, "{:?}", rep.mismatches);
            assert_eq!(Some(rep.cost), r.cost);
            let a = model.assignment_for(c).unwrap();
            assert!(model.is_satisfied(&a).unwrap());
            assert_eq!(model.objective_value(&a).unwrap(), r.cost.unwrap() as i64);
        }
        r
    }

    #[test]
    fn fig3_optimal_four() {
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        let r = run(&spec, &arch, &SearchConfig::default());
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.cost, Some(4));
    }

    #[test]
    fn single_xor() {
        let spec = TruthSpec::from_hex(2, &["6"], None).unwrap();
        let arch = Architecture::grid(2, 1, 1, &[GateKind::Xor], 1);
        let r = run(&spec, &arch, &SearchConfig::default());
        assert_eq!((r.status, r.cost), (SolveStatus::Optimal, Some(1)));
    }

    #[test]
    fn xor_without_inverters_is_infeasible_on_one_gate() {
        let spec = TruthSpec::from_hex(2, &["6"], None).unwrap();
        let arch = Architecture::grid(2, 1, 1, &[GateKind::And, GateKind::Or, GateKind::Con], 1);
        let r = run(&spec, &arch, &SearchConfig::default());
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.circuit.is_none());
    }

    #[test]
    fn zero_function_costs_nothing() {
        let spec = TruthSpec::from_hex(3, &["00"], None).unwrap();
        let arch = Architecture::grid(3, 2, 2, &GateKind::ALL, 1);
        let r = run(&spec, &arch, &SearchConfig::default());
        assert_eq!(r.cost, Some(0));
    }

    #[test]
    fn upper_bound_does_not_change_the_optimum() {
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        for ub in [2, 4, 12] {
            let r = run(&spec, &arch, &SearchConfig::default().with_upper_bound(ub));
            assert_eq!((r.status, r.cost), (SolveStatus::Optimal, Some(4)), "bound {ub}");
        }
    }

    #[test]
    fn lower_bound_counts_committed_cost() {
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        let model = encode(&spec, &arch, &CostModel::gate_count()).unwrap();
        let mut partial = PartialAssignment { gates: vec![None; 6] };
        assert_eq!(lower_bound(&model, &partial), 0);
        let and = GateChoice { kind: GateKind::And, enabled: true };
        partial.gates[0] = Some(and);
        partial.gates[1] = Some(and);
        assert!(lower_bound(&model, &partial) >= 2);
        partial.gates[2] = Some(GateChoice { kind: GateKind::Con, enabled: true });
        partial.gates[3] = Some(GateChoice { kind: GateKind::Nand, enabled: false });
        assert_eq!(lower_bound(&model, &partial), 2);
    }

    #[test]
    fn symmetry_breaking_preserves_cost() {
        let spec = TruthSpec::from_hex(3, &["e8"], None).unwrap();
        for arch in [
            Architecture::grid(3, 3, 2, &GateKind::ALL, 1),
            Architecture::chain(3, 4, &GateKind::ALL),
        ] {
            let on = run(&spec, &arch, &SearchConfig::default());
            let off = run(&spec, &arch, &SearchConfig::default().with_symmetry_breaking(false));
            assert_eq!(on.cost, off.cost);
            assert_eq!(on.status, off.status);
        }
    }

    #[test]
    fn strategies_agree() {
        let spec = TruthSpec::from_hex(3, &["e8"], None).unwrap();
        let arch = Architecture::chain(3, 6, &[GateKind::Nand]);
        let deep = run(&spec, &arch, &SearchConfig::default());
        let dfs = run(&spec, &arch, &SearchConfig::default().with_strategy(SearchStrategy::DepthFirst));
        assert_eq!((deep.status, deep.cost), (SolveStatus::Optimal, Some(6)));
        assert_eq!((dfs.status, dfs.cost), (SolveStatus::Optimal, Some(6)));
    }

    #[test]
    fn threads_do_not_change_cost() {
        let spec = TruthSpec::from_hex(3, &["6b", "2a"], None).unwrap();
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 2);
        let one = run(&spec, &arch, &SearchConfig::default());
        let four = run(&spec, &arch, &SearchConfig::default().with_threads(4));
        assert_eq!(one.cost, four.cost);
    }

    #[test]
    fn zero_time_limit_never_claims_optimality_wrongly() {
        let spec = TruthSpec::from_hex(4, &["22d5"], None).unwrap();
        let arch = Architecture::chain(4, 8, &[GateKind::Nand]);
        let r = run(&spec, &arch, &SearchConfig::default().with_time_limit(Duration::from_millis(0)));
        assert!(matches!(r.status, SolveStatus::TimeoutNoSolution | SolveStatus::FeasibleBestSoFar));
    }
}
