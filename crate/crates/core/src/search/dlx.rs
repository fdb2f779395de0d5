//! Dancing links over a 0/1 matrix: Algorithm X with the
//! fewest-remaining-rows column heuristic.
//!
//! Column choice breaks ties by lowest column index and rows are tried in the
//! order they were added, so enumeration order is fully deterministic.

use std::time::Instant;

const ROOT: usize = 0;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: usize,
    right: usize,
    up: usize,
    down: usize,
    column: usize,
    row: usize,
}

/// Stopping rules for one enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    /// Stop once this many solutions were collected.
    pub max_solutions: Option<usize>,
    /// Stop once this instant has passed.
    pub deadline: Option<Instant>,
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    /// Each solution lists the labels of its rows in ascending order.
    pub solutions: Vec<Vec<usize>>,
    /// True iff the whole search tree was explored.
    pub complete: bool,
    /// Search nodes visited.
    pub nodes: u64,
}

pub struct Dlx {
    nodes: Vec<Node>,
    sizes: Vec<usize>,
    labels: Vec<usize>,
}

impl Dlx {
    /// An empty matrix with `columns` primary columns.
    pub fn new(columns: usize) -> Self {
        let mut nodes = Vec::with_capacity(columns + 1);
        for c in 0..=columns {
            nodes.push(Node {
                left: if c == 0 { columns } else { c - 1 },
                right: if c == columns { 0 } else { c + 1 },
                up: c,
                down: c,
                column: c,
                row: usize::MAX,
            });
        }
        Self {
            nodes,
            sizes: vec![0; columns + 1],
            labels: Vec::new(),
        }
    }

    /// Appends a row covering `columns` (0-based, distinct), tagged with `label`.
    pub fn add_row(&mut self, label: usize, columns: &[usize]) {
        let row = self.labels.len();
        self.labels.push(label);
        let first = self.nodes.len();
        for (k, &c) in columns.iter().enumerate() {
            let header = c + 1;
            let idx = self.nodes.len();
            let up = self.nodes[header].up;
            self.nodes.push(Node {
                left: if k == 0 { idx } else { idx - 1 },
                right: first,
                up,
                down: header,
                column: header,
                row,
            });
            self.nodes[up].down = idx;
            self.nodes[header].up = idx;
            self.sizes[header] += 1;
            if k > 0 {
                self.nodes[idx - 1].right = idx;
                self.nodes[first].left = idx;
            }
        }
    }

    fn cover(&mut self, c: usize) {
        let Node { left, right, .. } = self.nodes[c];
        self.nodes[left].right = right;
        self.nodes[right].left = left;
        let mut i = self.nodes[c].down;
        while i != c {
            let mut j = self.nodes[i].right;
            while j != i {
                let Node {
                    up, down, column, ..
                } = self.nodes[j];
                self.nodes[up].down = down;
                self.nodes[down].up = up;
                self.sizes[column] -= 1;
                j = self.nodes[j].right;
            }
            i = self.nodes[i].down;
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.nodes[c].up;
        while i != c {
            let mut j = self.nodes[i].left;
            while j != i {
                let Node {
                    up, down, column, ..
                } = self.nodes[j];
                self.sizes[column] += 1;
                self.nodes[up].down = j;
                self.nodes[down].up = j;
                j = self.nodes[j].left;
            }
            i = self.nodes[i].up;
        }
        let Node { left, right, .. } = self.nodes[c];
        self.nodes[left].right = c;
        self.nodes[right].left = c;
    }

    fn choose_column(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut c = self.nodes[ROOT].right;
        while c != ROOT {
            if best.is_none_or(|b| self.sizes[c] < self.sizes[b]) {
                best = Some(c);
                if self.sizes[c] == 0 {
                    break;
                }
            }
            c = self.nodes[c].right;
        }
        best
    }

    /// Labels of the rows in the column the search would branch on first,
    /// in the order they would be tried. `None` when no column remains.
    pub fn first_branch(&self) -> Option<Vec<usize>> {
        let c = self.choose_column()?;
        let mut rows = Vec::new();
        let mut i = self.nodes[c].down;
        while i != c {
            rows.push(self.labels[self.nodes[i].row]);
            i = self.nodes[i].down;
        }
        Some(rows)
    }

    /// Enumerates exact covers.
    pub fn enumerate(&mut self, limits: Limits) -> Enumeration {
        let mut state = SearchState {
            limits,
            partial: Vec::new(),
            out: Enumeration {
                complete: true,
                ..Enumeration::default()
            },
            stopped: false,
        };
        self.search(&mut state);
        state.out.complete = !state.stopped;
        state.out
    }

    fn search(&mut self, state: &mut SearchState) {
        state.out.nodes += 1;
        if state.out.nodes.is_multiple_of(1024) {
            if let Some(deadline) = state.limits.deadline {
                if Instant::now() >= deadline {
                    state.stopped = true;
                    return;
                }
            }
        }
        let Some(c) = self.choose_column() else {
            let mut rows: Vec<usize> = state.partial.iter().map(|&r| self.labels[r]).collect();
            rows.sort_unstable();
            state.out.solutions.push(rows);
            if state
                .limits
                .max_solutions
                .is_some_and(|m| state.out.solutions.len() >= m)
            {
                state.stopped = true;
            }
            return;
        };
        if self.sizes[c] == 0 {
            return;
        }
        self.cover(c);
        let mut r = self.nodes[c].down;
        while r != c {
            state.partial.push(self.nodes[r].row);
            let mut j = self.nodes[r].right;
            while j != r {
                self.cover(self.nodes[j].column);
                j = self.nodes[j].right;
            }
            self.search(state);
            let mut j = self.nodes[r].left;
            while j != r {
                self.uncover(self.nodes[j].column);
                j = self.nodes[j].left;
            }
            state.partial.pop();
            if state.stopped {
                break;
            }
            r = self.nodes[r].down;
        }
        self.uncover(c);
    }
}

struct SearchState {
    limits: Limits,
    partial: Vec<usize>,
    out: Enumeration,
    stopped: bool,
}
