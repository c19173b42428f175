//! Bounded enumeration of admissibility solutions.
//!
//! Both systems are solved cell by cell over the grid `(k, ell, m, s)`. Inside
//! a cell the count equations form a unimodular 2x2 system per marked point,
//! so each choice of the remaining unknowns determines the eigenmap counts by
//! substitution; no inner brute force is needed. The unital system admits at
//! most one solution per cell. The corrected system gets one candidate per
//! `(p, q)` pair inside the cell, so the search loops over exactly those.
//!
//! Searches refuse to start when the projected step count exceeds the work
//! limit; there is no silent truncation. Results are deterministic: workers
//! partition cells by index arithmetic and the merged output is sorted by the
//! full field tuple, so the answer does not depend on the worker count.

use std::thread;

use super::{CorrectedInstance, SearchBounds, SolveError, UnitalInstance};

/// Resource controls for [`enumerate_unital`] and [`enumerate_corrected`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Upper bound on search loop iterations before the search refuses to run.
    pub work_limit: u64,
    /// Worker thread count; 0 and 1 both mean single-threaded.
    pub threads: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            work_limit: 100_000_000,
            threads: 1,
        }
    }
}

/// Enumerates every unital solution within `bounds`, sorted by the full
/// field tuple.
pub fn enumerate_unital(
    bounds: &SearchBounds,
    opts: &EnumerateOptions,
) -> Result<Vec<UnitalInstance>, SolveError> {
    bounds.validate()?;
    let cells = grid_cells(bounds);
    if cells > u128::from(opts.work_limit) {
        return Err(SolveError::WorkLimitExceeded {
            estimated: cells.to_string(),
            limit: opts.work_limit,
        });
    }
    let mut found = run_partitioned(bounds, opts, |k, ell, m, out: &mut Vec<UnitalInstance>| {
        for s in 0..=bounds.s {
            if let Some(inst) = solve_unital_cell(k, ell, m, s, bounds) {
                let verdict = inst.verify();
                assert!(verdict.ok, "enumerated non-solution {inst:?}: {verdict:?}");
                out.push(inst);
            }
        }
    });
    found.sort_unstable_by_key(|i| (i.k, i.ell, i.m, i.s, i.a0, i.a1, i.b0, i.b1, i.p));
    Ok(found)
}

/// Enumerates every corrected solution within `bounds`, sorted by the full
/// field tuple.
pub fn enumerate_corrected(
    bounds: &SearchBounds,
    opts: &EnumerateOptions,
) -> Result<Vec<CorrectedInstance>, SolveError> {
    bounds.validate()?;
    let cells = grid_cells(bounds);
    if cells > u128::from(opts.work_limit) {
        return Err(SolveError::WorkLimitExceeded {
            estimated: cells.to_string(),
            limit: opts.work_limit,
        });
    }
    // Second tier of the estimate: walk the cells (already known to be within
    // the limit) and count the exact (p, q) loop sizes the search would run.
    let mut steps: u128 = cells;
    for k in 1..=bounds.k {
        for ell in 1..=bounds.ell {
            for m in 1..=bounds.m {
                for s in 0..=bounds.s {
                    if let Some((p_min, p_max, q_max)) = corrected_ranges(k, ell, m, s, bounds) {
                        let p_range = (p_max - p_min + 1) as u128;
                        let q_range = (q_max + 1) as u128;
                        steps = steps.saturating_add(p_range.saturating_mul(q_range));
                    }
                }
            }
        }
    }
    if steps > u128::from(opts.work_limit) {
        return Err(SolveError::WorkLimitExceeded {
            estimated: steps.to_string(),
            limit: opts.work_limit,
        });
    }
    let mut found = run_partitioned(bounds, opts, |k, ell, m, out: &mut Vec<CorrectedInstance>| {
        for s in 0..=bounds.s {
            solve_corrected_cell(k, ell, m, s, bounds, out);
        }
    });
    found.sort_unstable_by_key(|i| {
        (i.k, i.ell, i.m, i.s, i.a0, i.a1, i.b0, i.b1, i.p, i.r, i.q)
    });
    Ok(found)
}

fn grid_cells(bounds: &SearchBounds) -> u128 {
    u128::from(bounds.k)
        * u128::from(bounds.ell)
        * u128::from(bounds.m)
        * (u128::from(bounds.s) + 1)
}

/// Splits the `(k, ell, m)` index space across workers round-robin and merges
/// the per-worker results in worker order. The caller sorts afterwards, so
/// the partition never shows in the output.
fn run_partitioned<T, F>(bounds: &SearchBounds, opts: &EnumerateOptions, per_cell: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64, u64, &mut Vec<T>) + Sync,
{
    let units = bounds.k * bounds.ell * bounds.m;
    let workers = opts.threads.max(1).min(units.max(1) as usize);
    let decode = |t: u64| {
        let per_k = bounds.ell * bounds.m;
        let k = 1 + t / per_k;
        let rem = t % per_k;
        (k, 1 + rem / bounds.m, 1 + rem % bounds.m)
    };
    if workers <= 1 {
        let mut out = Vec::new();
        for t in 0..units {
            let (k, ell, m) = decode(t);
            per_cell(k, ell, m, &mut out);
        }
        return out;
    }
    let mut buckets: Vec<Vec<T>> = Vec::with_capacity(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let per_cell = &per_cell;
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut t = w as u64;
                    while t < units {
                        let (k, ell, m) = decode(t);
                        per_cell(k, ell, m, &mut out);
                        t += workers as u64;
                    }
                    out
                })
            })
            .collect();
        for handle in handles {
            buckets.push(handle.join().expect("enumeration worker panicked"));
        }
    });
    buckets.into_iter().flatten().collect()
}

/// Solves the unital system inside one grid cell. The size equation fixes p,
/// the count and multiplicity equations per marked point form a determinant-1
/// linear system fixing the counts; only nonnegativity and the optional caps
/// remain to be checked.
fn solve_unital_cell(k: u64, ell: u64, m: u64, s: u64, bounds: &SearchBounds) -> Option<UnitalInstance> {
    let (k, ell, m, s) = (i128::from(k), i128::from(ell), i128::from(m), i128::from(s));
    let kp1 = k + 1;
    let total = m * (ell + 1);
    if total % kp1 != 0 {
        return None;
    }
    let p = total / kp1;
    if !within(p, bounds.p) {
        return None;
    }
    let slack = m - s * kp1;
    if slack < 0 {
        return None;
    }
    let t0 = p - s * ell;
    let t1 = p - s * (ell + 1);
    if t0 < 0 || t1 < 0 {
        return None;
    }
    let a1 = slack * ell - k * t0;
    let a0 = kp1 * t0 - slack * ell;
    let b1 = slack * (ell + 1) - k * t1;
    let b0 = kp1 * t1 - slack * (ell + 1);
    if a0 < 0 || a1 < 0 || b0 < 0 || b1 < 0 {
        return None;
    }
    if !(within(a0, bounds.a0) && within(a1, bounds.a1) && within(b0, bounds.b0) && within(b1, bounds.b1)) {
        return None;
    }
    Some(UnitalInstance {
        k: k as u64,
        ell: ell as u64,
        m: m as u64,
        p: p as u64,
        s: s as u64,
        a0: a0 as u64,
        a1: a1 as u64,
        b0: b0 as u64,
        b1: b1 as u64,
    })
}

/// The `(p, q)` loop bounds for one corrected cell, or None when the cell is
/// empty outright. Shared by the work estimator and the search so the two
/// always agree.
fn corrected_ranges(k: u64, ell: u64, m: u64, s: u64, bounds: &SearchBounds) -> Option<(i128, i128, i128)> {
    let (k, ell, m, s) = (i128::from(k), i128::from(ell), i128::from(m), i128::from(s));
    let kp1 = k + 1;
    let slack_base = m - s * kp1;
    if slack_base < 0 {
        return None;
    }
    let total = m * (ell + 1);
    let mut p_max = total / kp1;
    if let Some(pb) = bounds.p {
        p_max = p_max.min(i128::from(pb));
    }
    // r = total - p*(k+1) decreases in p, so an r cap bounds p from below.
    let mut p_min = 1;
    if let Some(rb) = bounds.r {
        let need = total - i128::from(rb);
        if need > 0 {
            p_min = p_min.max(need.div_euclid(kp1) + i128::from(need.rem_euclid(kp1) != 0));
        }
    }
    if p_min > p_max {
        return None;
    }
    let mut q_max = slack_base;
    if let Some(qb) = bounds.q {
        q_max = q_max.min(i128::from(qb));
    }
    if q_max < 0 {
        return None;
    }
    Some((p_min, p_max, q_max))
}

fn solve_corrected_cell(
    k_raw: u64,
    ell_raw: u64,
    m_raw: u64,
    s_raw: u64,
    bounds: &SearchBounds,
    out: &mut Vec<CorrectedInstance>,
) {
    let Some((p_min, p_max, q_max)) = corrected_ranges(k_raw, ell_raw, m_raw, s_raw, bounds) else {
        return;
    };
    let (k, ell, m, s) = (
        i128::from(k_raw),
        i128::from(ell_raw),
        i128::from(m_raw),
        i128::from(s_raw),
    );
    let kp1 = k + 1;
    let total = m * (ell + 1);
    let slack_base = m - s * kp1;
    for p in p_min..=p_max {
        let r = total - p * kp1;
        let t0 = p - s * ell;
        let t1 = p - s * (ell + 1);
        if t0 < 0 || t1 < 0 {
            continue;
        }
        for q in 0..=q_max {
            let slack = slack_base - q;
            let a1 = slack * ell - k * t0;
            let a0 = kp1 * t0 - slack * ell;
            let b1 = slack * (ell + 1) - k * t1;
            let b0 = kp1 * t1 - slack * (ell + 1);
            if a0 < 0 || a1 < 0 || b0 < 0 || b1 < 0 {
                continue;
            }
            if !(within(a0, bounds.a0)
                && within(a1, bounds.a1)
                && within(b0, bounds.b0)
                && within(b1, bounds.b1))
            {
                continue;
            }
            let inst = CorrectedInstance {
                k: k_raw,
                ell: ell_raw,
                m: m_raw,
                p: p as u64,
                r: r as u64,
                s: s_raw,
                q: q as u64,
                a0: a0 as u64,
                a1: a1 as u64,
                b0: b0 as u64,
                b1: b1 as u64,
            };
            let verdict = inst.verify();
            assert!(verdict.ok, "enumerated non-solution {inst:?}: {verdict:?}");
            out.push(inst);
        }
    }
}

fn within(value: i128, cap: Option<u64>) -> bool {
    cap.map_or(true, |c| value <= i128::from(c))
}
