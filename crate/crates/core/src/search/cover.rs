//! Perfect codes of `S_n` as exact covers: one column per vertex, one row per
//! candidate codeword covering the vertices of its closed ball.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::dlx::{Dlx, Limits};
use crate::code::{Bitrade, Code};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::star::BallTable;

/// Largest degree for which a cover instance is built.
pub const MAX_COVER_DEGREE: usize = 7;

/// Largest degree accepted by [`classify_perfect_codes`].
pub const MAX_CLASSIFY_DEGREE: usize = 6;

/// Default time budget for code enumeration.
pub const DEFAULT_CODE_BUDGET: Duration = Duration::from_secs(60);

/// The tiling problem whose solutions are the perfect codes containing
/// `forced` and avoiding `forbidden`.
#[derive(Debug, Clone)]
pub struct ExactCoverInstance {
    balls: BallTable,
    forced: Code,
    forbidden: Code,
}

pub fn build_code_cover(n: usize, forced: &Code, forbidden: &Code) -> Result<ExactCoverInstance> {
    if n > MAX_COVER_DEGREE {
        return Err(Error::DegreeCapExceeded {
            got: n,
            cap: MAX_COVER_DEGREE,
        });
    }
    for c in [forced, forbidden] {
        if c.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: c.degree(),
            });
        }
    }
    if let Some(&r) = forced.intersection(forbidden)?.ranks().first() {
        return Err(Error::ConflictingConstraints(r));
    }
    Ok(ExactCoverInstance {
        balls: BallTable::new(n)?,
        forced: forced.clone(),
        forbidden: forbidden.clone(),
    })
}

impl ExactCoverInstance {
    pub fn degree(&self) -> usize {
        self.balls.degree()
    }

    pub fn column_count(&self) -> usize {
        self.balls.vertex_count()
    }

    pub fn forced(&self) -> &Code {
        &self.forced
    }

    pub fn forbidden(&self) -> &Code {
        &self.forbidden
    }

    /// The columns covered by row `r`: the closed ball of the vertex of rank `r`.
    pub fn row(&self, r: usize) -> &[u32] {
        self.balls.ball(r)
    }

    /// Removes the forced rows and everything they clash with.
    ///
    /// Returns `None` when the forced rows overlap, so no cover exists.
    fn reduced(&self, extra_forced: Option<usize>, extra_forbidden: &[usize]) -> Option<Dlx> {
        let total = self.column_count();
        let mut covered = vec![false; total];
        let forced = self
            .forced
            .ranks()
            .iter()
            .map(|&r| r as usize)
            .chain(extra_forced);
        for r in forced {
            for &c in self.row(r) {
                if std::mem::replace(&mut covered[c as usize], true) {
                    return None;
                }
            }
        }
        let mut banned = vec![false; total];
        for &r in self.forbidden.ranks() {
            banned[r as usize] = true;
        }
        for &r in extra_forbidden {
            banned[r] = true;
        }
        let mut column_of = vec![usize::MAX; total];
        let mut open = 0;
        for (v, slot) in column_of.iter_mut().enumerate() {
            if !covered[v] {
                *slot = open;
                open += 1;
            }
        }
        let mut dlx = Dlx::new(open);
        let mut cols = Vec::with_capacity(self.degree());
        for r in 0..total {
            if banned[r] || self.row(r).iter().any(|&c| covered[c as usize]) {
                continue;
            }
            cols.clear();
            cols.extend(self.row(r).iter().map(|&c| column_of[c as usize]));
            dlx.add_row(r, &cols);
        }
        Some(dlx)
    }

    fn complete_solution(&self, rows: &[usize], extra: Option<usize>) -> Code {
        let ranks = self
            .forced
            .ranks()
            .iter()
            .copied()
            .chain(rows.iter().map(|&r| r as u64))
            .chain(extra.map(|r| r as u64));
        Code::from_ranks(self.degree(), ranks).expect("rows are vertex ranks")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub limit: Option<usize>,
    pub budget: Option<Duration>,
    /// Split the first branching level across the rayon pool. Ignored when a
    /// solution limit is set, so limited runs stay deterministic.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            limit: None,
            budget: Some(DEFAULT_CODE_BUDGET),
            parallel: false,
        }
    }
}

impl SolveOptions {
    pub fn unlimited() -> Self {
        Self {
            limit: None,
            budget: None,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolutionReport {
    /// Sorted by rank list.
    pub solutions: Vec<Code>,
    /// False when the limit or the budget stopped the search.
    pub complete: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Enumerates the exact covers of `inst`.
pub fn solve_exact_cover(inst: &ExactCoverInstance, options: &SolveOptions) -> SolutionReport {
    let start = Instant::now();
    let deadline = options.budget.map(|b| start + b);
    let limits = Limits {
        max_solutions: options.limit,
        deadline,
    };
    let Some(mut dlx) = inst.reduced(None, &[]) else {
        return SolutionReport {
            solutions: Vec::new(),
            complete: true,
            nodes: 0,
            elapsed: start.elapsed(),
        };
    };

    let branch = dlx.first_branch();
    let mut report = match branch {
        Some(rows) if options.parallel && options.limit.is_none() && rows.len() > 1 => {
            let parts: Vec<_> = (0..rows.len())
                .into_par_iter()
                .map(|k| {
                    let Some(mut sub) = inst.reduced(Some(rows[k]), &rows[..k]) else {
                        return (Vec::new(), true, 0);
                    };
                    let out = sub.enumerate(limits);
                    let codes = out
                        .solutions
                        .iter()
                        .map(|s| inst.complete_solution(s, Some(rows[k])))
                        .collect::<Vec<_>>();
                    (codes, out.complete, out.nodes)
                })
                .collect();
            let mut report = SolutionReport {
                solutions: Vec::new(),
                complete: true,
                nodes: 1,
                elapsed: Duration::ZERO,
            };
            for (codes, complete, nodes) in parts {
                report.solutions.extend(codes);
                report.complete &= complete;
                report.nodes += nodes;
            }
            report
        }
        _ => {
            let out = dlx.enumerate(limits);
            SolutionReport {
                solutions: out
                    .solutions
                    .iter()
                    .map(|s| inst.complete_solution(s, None))
                    .collect(),
                complete: out.complete,
                nodes: out.nodes,
                elapsed: Duration::ZERO,
            }
        }
    };
    report.solutions.sort();
    report.elapsed = start.elapsed();
    report
}

/// One isomorphism class of perfect codes.
#[derive(Debug, Clone)]
pub struct CodeClass {
    pub canonical_form: Vec<u64>,
    /// First identity-containing solution in the class.
    pub representative: Code,
    /// Identity-containing perfect codes in the class.
    pub count: usize,
    pub is_stab1_class: bool,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub degree: usize,
    /// Ordered by canonical form.
    pub classes: Vec<CodeClass>,
    pub solutions: usize,
    pub complete: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Enumerates the perfect codes containing the identity and groups them by
/// canonical form. Every class meets such a code, since right translations
/// are automorphisms.
pub fn classify_perfect_codes(n: usize, options: &SolveOptions) -> Result<Classification> {
    if n > MAX_CLASSIFY_DEGREE {
        return Err(Error::DegreeCapExceeded {
            got: n,
            cap: MAX_CLASSIFY_DEGREE,
        });
    }
    let start = Instant::now();
    let forced = Code::from_perms(n, [Permutation::identity(n)?].iter())?;
    let inst = build_code_cover(n, &forced, &Code::from_ranks(n, [])?)?;
    let report = solve_exact_cover(&inst, options);
    let forms = report
        .solutions
        .par_iter()
        .map(Code::canonical_form)
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<CodeClass> = Vec::new();
    for (code, form) in report.solutions.iter().zip(forms) {
        match classes.iter_mut().find(|c| c.canonical_form == form) {
            Some(class) => class.count += 1,
            None => classes.push(CodeClass {
                canonical_form: form,
                representative: code.clone(),
                count: 1,
                is_stab1_class: code.stab1_class_certificate().in_class(),
            }),
        }
    }
    classes.sort_by(|a, b| a.canonical_form.cmp(&b.canonical_form));
    Ok(Classification {
        degree: n,
        classes,
        solutions: report.solutions.len(),
        complete: report.complete,
        nodes: report.nodes,
        elapsed: start.elapsed(),
    })
}

/// Result of trying to embed a bitrade into a perfect code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Embedding {
    /// `code` contains `T₀` and avoids `T₁`; `partner = (code \ T₀) ∪ T₁`.
    Embedded { code: Code, partner: Code },
    /// The search was exhaustive and found no such code.
    NotEmbeddable,
    /// The budget ran out first.
    Unknown,
}

/// Looks for a perfect code `C ⊇ T₀` with `C ∩ T₁ = ∅`.
pub fn embed_bitrade(trade: &Bitrade, budget: Option<Duration>) -> Result<Embedding> {
    if !trade.verify() {
        return Err(Error::NotABitrade);
    }
    let n = trade.degree();
    let inst = build_code_cover(n, trade.t0(), trade.t1())?;
    let report = solve_exact_cover(
        &inst,
        &SolveOptions {
            limit: Some(1),
            budget,
            parallel: false,
        },
    );
    let Some(code) = report.solutions.into_iter().next() else {
        return Ok(if report.complete {
            Embedding::NotEmbeddable
        } else {
            Embedding::Unknown
        });
    };
    let partner = trade.switch(&code)?;
    // re-verified rather than trusted
    assert!(code.is_perfect(), "solver returned a non-perfect code");
    assert!(
        partner.is_perfect(),
        "switching a verified bitrade broke perfection"
    );
    Ok(Embedding::Embedded { code, partner })
}
