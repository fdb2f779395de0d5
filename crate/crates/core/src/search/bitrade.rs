//! Backtracking search for perfect bitrades.
//!
//! Every vertex carries a domain over {none, T₀, T₁}. A closed ball must meet
//! both halves equally often and at most once, so once a ball holds a T₀
//! vertex it demands exactly one T₁ vertex among its undecided members, and
//! vice versa. The search anchors the identity in T₀ (right translations are
//! automorphisms, so every bitrade has a translate of that form) and only
//! branches on demanding balls. It therefore enumerates exactly the
//! *connected* bitrades through the identity: those in which any two elements
//! are linked by a chain of shared balls.
//!
//! Alongside the ball rules, a linear propagator (see [`super::linear`])
//! assigns every vertex whose value is implied by the vertices fixed so far.

use std::collections::{BTreeMap, VecDeque};
use std::time::{Duration, Instant};

use super::linear::{Assigned, Kernel, LinearState};
use crate::code::{Bitrade, Code};
use crate::error::{Error, Result};
use crate::perm::factorial;
use crate::star::BallTable;

/// Largest degree accepted by [`enumerate_bitrades`].
pub const MAX_BITRADE_DEGREE: usize = 6;

/// Default time budget for bitrade enumeration.
pub const DEFAULT_BITRADE_BUDGET: Duration = Duration::from_secs(600);

const NONE: u8 = 1;
const ZERO: u8 = 2;
const ONE: u8 = 4;
const ANY: u8 = NONE | ZERO | ONE;

#[derive(Debug, Clone)]
pub struct BitradeSpectrum {
    pub degree: usize,
    /// Volume of each connected bitrade found, with the first one found.
    pub volumes: BTreeMap<usize, Bitrade>,
    /// Every connected bitrade with the identity in T₀, in discovery order.
    pub bitrades: Vec<Bitrade>,
    /// The search tree was exhausted within the budget.
    pub search_complete: bool,
    /// No two connected bitrades fit side by side, so every bitrade is
    /// connected and `volumes` is the full spectrum.
    pub unions_excluded: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl BitradeSpectrum {
    /// True iff the reported volumes are provably all volumes in `S_n`.
    pub fn complete(&self) -> bool {
        self.search_complete && self.unions_excluded
    }

    pub fn volume_list(&self) -> Vec<usize> {
        self.volumes.keys().copied().collect()
    }
}

/// Enumerates connected perfect bitrades of `S_n` through the identity and
/// reports their volume spectrum.
pub fn enumerate_bitrades(n: usize, budget: Option<Duration>) -> Result<BitradeSpectrum> {
    if n > MAX_BITRADE_DEGREE {
        return Err(Error::DegreeCapExceeded {
            got: n,
            cap: MAX_BITRADE_DEGREE,
        });
    }
    let start = Instant::now();
    let balls = BallTable::new(n)?;
    let kernel = Kernel::new(&balls);
    let mut search = Search::new(&balls, &kernel, budget.map(|b| start + b));
    search.run();

    let mut volumes = BTreeMap::new();
    for trade in &search.found {
        volumes
            .entry(trade.volume())
            .or_insert_with(|| trade.clone());
    }
    // Two bitrades side by side need disjoint ball neighbourhoods of T₀,
    // i.e. n·(v + w) <= n!, so v + w <= (n-1)!.
    let unions_excluded = volumes
        .keys()
        .next()
        .is_none_or(|&v| 2 * v as u64 > factorial(n - 1));
    Ok(BitradeSpectrum {
        degree: n,
        volumes,
        bitrades: search.found,
        search_complete: !search.stopped,
        unions_excluded,
        nodes: search.nodes,
        elapsed: start.elapsed(),
    })
}

struct Search<'a> {
    balls: &'a BallTable,
    deadline: Option<Instant>,
    domain: Vec<u8>,
    trail: Vec<(u32, u8)>,
    assigned: Vec<u32>,
    queue: Vec<u32>,
    linear: LinearState,
    linear_queue: Vec<u32>,
    bfs_order: Vec<u32>,
    found: Vec<Bitrade>,
    nodes: u64,
    stopped: bool,
}

impl<'a> Search<'a> {
    fn new(balls: &'a BallTable, kernel: &Kernel, deadline: Option<Instant>) -> Self {
        let count = balls.vertex_count();
        let mut bfs_order = vec![u32::MAX; count];
        let mut queue = VecDeque::from([0u32]);
        let mut next = 0u32;
        bfs_order[0] = 0;
        while let Some(v) = queue.pop_front() {
            for &u in balls.ball(v as usize) {
                if bfs_order[u as usize] == u32::MAX {
                    next += 1;
                    bfs_order[u as usize] = next;
                    queue.push_back(u);
                }
            }
        }
        Self {
            balls,
            deadline,
            domain: vec![ANY; count],
            trail: Vec::new(),
            assigned: Vec::new(),
            queue: Vec::new(),
            linear: LinearState::new(kernel, count),
            linear_queue: Vec::new(),
            bfs_order,
            found: Vec::new(),
            nodes: 0,
            stopped: false,
        }
    }

    fn run(&mut self) {
        // identity has rank 0
        if self.restrict(0, ZERO) && self.propagate() {
            self.search();
        }
    }

    fn save(&self) -> (usize, usize) {
        (self.trail.len(), self.assigned.len())
    }

    fn restore(&mut self, (trail, assigned): (usize, usize)) {
        while self.trail.len() > trail {
            let (v, old) = self.trail.pop().unwrap();
            self.domain[v as usize] = old;
        }
        self.assigned.truncate(assigned);
        self.linear.undo_to(trail);
        self.queue.clear();
        self.linear_queue.clear();
    }

    /// Intersects the domain of `v` with `mask`; false on a wipe-out.
    fn restrict(&mut self, v: u32, mask: u8) -> bool {
        let old = self.domain[v as usize];
        let new = old & mask;
        if new == old {
            return true;
        }
        if new == 0 {
            return false;
        }
        self.trail.push((v, old));
        self.domain[v as usize] = new;
        if new == ZERO || new == ONE {
            self.assigned.push(v);
        }
        if new.count_ones() == 1 {
            self.linear_queue.push(v);
        }
        self.queue.extend_from_slice(self.balls.ball(v as usize));
        true
    }

    fn propagate(&mut self) -> bool {
        loop {
            let ok = if let Some(v) = self.linear_queue.pop() {
                self.propagate_linear(v)
            } else if let Some(b) = self.queue.pop() {
                self.propagate_ball(b as usize)
            } else {
                return true;
            };
            if !ok {
                self.queue.clear();
                self.linear_queue.clear();
                return false;
            }
        }
    }

    fn propagate_linear(&mut self, v: u32) -> bool {
        let value = match self.domain[v as usize] {
            ZERO => 1,
            ONE => -1,
            _ => 0,
        };
        let tag = self.trail.len();
        match self.linear.assign(v as usize, value, tag) {
            Assigned::Conflict => false,
            Assigned::Consistent(implied) => implied.into_iter().all(|(u, val)| {
                let bit = match val {
                    1 => ZERO,
                    -1 => ONE,
                    _ => NONE,
                };
                self.restrict(u, bit)
            }),
        }
    }

    fn propagate_ball(&mut self, b: usize) -> bool {
        let balls = self.balls;
        let members = balls.ball(b);
        let (mut fixed0, mut fixed1, mut open0, mut open1) = (0, 0, 0, 0);
        for &v in members {
            match self.domain[v as usize] {
                ZERO => fixed0 += 1,
                ONE => fixed1 += 1,
                d => {
                    open0 += usize::from(d & ZERO != 0);
                    open1 += usize::from(d & ONE != 0);
                }
            }
        }
        if fixed0 > 1 || fixed1 > 1 {
            return false;
        }
        for (fixed, open, bit, other_fixed, other_open, other_bit) in [
            (fixed0, open0, ZERO, fixed1, open1, ONE),
            (fixed1, open1, ONE, fixed0, open0, ZERO),
        ] {
            if fixed == 1 {
                // no second vertex of this half in the ball
                for &v in members {
                    if self.domain[v as usize] != bit && !self.restrict(v, !bit) {
                        return false;
                    }
                }
                if other_fixed == 0 {
                    match other_open {
                        0 => return false,
                        1 => {
                            let v = members
                                .iter()
                                .copied()
                                .find(|&v| self.domain[v as usize] & other_bit != 0)
                                .unwrap();
                            if !self.restrict(v, other_bit) {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
            } else if open == 0 && other_fixed + other_open > 0 {
                // this half cannot meet the ball, so neither can the other
                for &v in members {
                    if !self.restrict(v, !other_bit) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The most constrained ball holding one half but not the other: returns
    /// the missing half and its candidates in breadth-first order.
    fn find_demand(&self) -> Option<(u8, Vec<u32>)> {
        let mut best: Option<(usize, u32, u8, usize)> = None;
        for &v in &self.assigned {
            for &b in self.balls.ball(v as usize) {
                let members = self.balls.ball(b as usize);
                let has0 = members.iter().any(|&u| self.domain[u as usize] == ZERO);
                let has1 = members.iter().any(|&u| self.domain[u as usize] == ONE);
                let missing = match (has0, has1) {
                    (true, false) => ONE,
                    (false, true) => ZERO,
                    _ => continue,
                };
                let open = members
                    .iter()
                    .filter(|&&u| self.domain[u as usize] & missing != 0)
                    .count();
                let key = (open, self.bfs_order[b as usize]);
                if best.is_none_or(|(o, ord, _, _)| key < (o, ord)) {
                    best = Some((open, key.1, missing, b as usize));
                }
            }
        }
        let (_, _, missing, b) = best?;
        let mut candidates: Vec<u32> = self
            .balls
            .ball(b)
            .iter()
            .copied()
            .filter(|&u| self.domain[u as usize] & missing != 0)
            .collect();
        candidates.sort_by_key(|&u| self.bfs_order[u as usize]);
        Some((missing, candidates))
    }

    fn search(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stopped = true;
        }
        if self.stopped {
            return;
        }
        let Some((missing, candidates)) = self.find_demand() else {
            self.record();
            return;
        };
        let outer = self.save();
        for v in candidates {
            let inner = self.save();
            if self.restrict(v, missing) && self.propagate() {
                self.search();
            }
            self.restore(inner);
            if self.stopped {
                break;
            }
            if !(self.restrict(v, !missing) && self.propagate()) {
                break;
            }
        }
        self.restore(outer);
    }

    fn record(&mut self) {
        let n = self.balls.degree();
        let half = |bit: u8| {
            let ranks = self
                .assigned
                .iter()
                .filter(|&&v| self.domain[v as usize] == bit)
                .map(|&v| v as u64);
            Code::from_ranks(n, ranks).expect("ranks come from the ball table")
        };
        let trade = Bitrade::new(half(ZERO), half(ONE)).expect("halves are disjoint and nonempty");
        // re-verified rather than trusted
        assert!(trade.verify(), "bitrade search produced an invalid bitrade");
        self.found.push(trade);
    }
}
