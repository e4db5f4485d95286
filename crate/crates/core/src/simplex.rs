//! Dense two-phase simplex over a [`Scalar`], used by the local-polytope
//! membership test.
//!
//! The programs involved are tiny (≈33 equality rows, ≈50 variables), so a
//! plain tableau with Bland's anti-cycling rule is simple, exact with
//! rational scalars, and fast enough. Not a general-purpose LP solver.

use crate::scalar::Scalar;

/// Strict-positivity threshold: exact scalars compare against zero; doubles
/// against a small pivot tolerance.
fn is_pos<S: Scalar>(x: &S) -> bool {
    if S::EXACT {
        *x > S::zero()
    } else {
        x.to_f64() > 1e-11
    }
}

fn is_neg<S: Scalar>(x: &S) -> bool {
    if S::EXACT {
        *x < S::zero()
    } else {
        x.to_f64() < -1e-11
    }
}

/// Minimizes `c · x` subject to `a x = b`, `x ≥ 0`.
///
/// Returns the optimal value and a minimizer, or `None` if the program is
/// infeasible or unbounded (the membership program is neither). `a` is
/// row-major with `b.len()` rows and `c.len()` columns.
pub(crate) fn solve_equality_form<S: Scalar>(
    a: &[Vec<S>],
    b: &[S],
    c: &[S],
) -> Option<(S, Vec<S>)> {
    let m = b.len();
    let n = c.len();
    debug_assert!(a.len() == m && a.iter().all(|row| row.len() == n));

    // Tableau columns: n structural variables, m artificials, then the RHS.
    // Rows are normalized so the RHS is nonnegative; artificials form the
    // initial basis.
    let cols = n + m + 1;
    let rhs = n + m;
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < S::zero();
        let mut row: Vec<S> = Vec::with_capacity(cols);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { S::one() } else { S::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced-cost row for phase 1 (minimize the sum of artificials): the
    // artificial basis has unit costs, so the row starts at −Σ_i tab[i].
    let mut cost: Vec<S> = vec![S::zero(); cols];
    for j in 0..cols {
        for row in tab.iter() {
            cost[j] = cost[j].clone() - row[j].clone();
        }
        // Artificial columns start with reduced cost 1 − 1 = 0.
    }
    for c_j in cost.iter_mut().take(n + m).skip(n) {
        *c_j = c_j.clone() + S::one();
    }

    pivot_to_optimum(&mut tab, &mut basis, &mut cost, rhs)?;
    let phase1 = -cost[rhs].clone();
    if is_pos(&phase1) {
        return None; // infeasible
    }

    // Drive any artificial still basic (at value zero) out of the basis, or
    // drop its row if it is redundant.
    let mut drop_rows = Vec::new();
    for i in 0..m {
        if basis[i] >= n {
            let entering = (0..n).find(|&j| is_pos(&tab[i][j]) || is_neg(&tab[i][j]));
            match entering {
                Some(j) => pivot(&mut tab, &mut basis, &mut cost, i, j),
                None => drop_rows.push(i),
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        tab.remove(i);
        basis.remove(i);
    }

    // Phase 2: rebuild the reduced-cost row for the real objective over the
    // current basis and re-optimize. The artificial columns stay in the
    // tableau but are blocked from ever entering the basis again.
    let mut cost2: Vec<S> = vec![S::zero(); cols];
    for (j, c2) in cost2.iter_mut().enumerate().take(n) {
        *c2 = c[j].clone();
    }
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n && !c[bi].is_zero() {
            let scale = c[bi].clone();
            for j in 0..cols {
                cost2[j] = cost2[j].clone() - scale.clone() * tab[i][j].clone();
            }
        }
    }
    let mut cost = cost2;
    pivot_to_optimum_blocked(&mut tab, &mut basis, &mut cost, rhs, n)?;

    let mut x = vec![S::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = tab[i][rhs].clone();
        }
    }
    let value = (0..n).fold(S::zero(), |acc, j| acc + c[j].clone() * x[j].clone());
    Some((value, x))
}

/// Bland's rule loop allowing every column to enter.
fn pivot_to_optimum<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    cost: &mut [S],
    rhs: usize,
) -> Option<()> {
    pivot_to_optimum_blocked(tab, basis, cost, rhs, rhs)
}

/// Bland's rule loop; columns at index ≥ `allowed` never enter the basis
/// (used in phase 2 to freeze the artificial columns out).
fn pivot_to_optimum_blocked<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    cost: &mut [S],
    rhs: usize,
    allowed: usize,
) -> Option<()> {
    // Generous bound; Bland's rule guarantees finite termination in exact
    // arithmetic well below it.
    for _ in 0..100_000 {
        // Entering: smallest index with negative reduced cost (Bland).
        let entering = (0..allowed).find(|&j| is_neg(&cost[j]));
        let Some(entering) = entering else {
            return Some(()); // optimal
        };
        // Leaving: minimum ratio; ties broken by smallest basis variable
        // index (Bland).
        let mut leaving: Option<usize> = None;
        for (i, row) in tab.iter().enumerate() {
            if is_pos(&row[entering]) {
                let better = match leaving {
                    None => true,
                    Some(l) => {
                        let ratio_i = row[rhs].clone() / row[entering].clone();
                        let ratio_l = tab[l][rhs].clone() / tab[l][entering].clone();
                        ratio_i < ratio_l || (ratio_i == ratio_l && basis[i] < basis[l])
                    }
                };
                if better {
                    leaving = Some(i);
                }
            }
        }
        let leaving = leaving?; // None: unbounded
        pivot(tab, basis, cost, leaving, entering);
    }
    None
}

fn pivot<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    cost: &mut [S],
    row: usize,
    col: usize,
) {
    let cols = tab[row].len();
    let pivot_val = tab[row][col].clone();
    for j in 0..cols {
        tab[row][j] = tab[row][j].clone() / pivot_val.clone();
    }
    for i in 0..tab.len() {
        if i != row && !tab[i][col].is_zero() {
            let factor = tab[i][col].clone();
            for j in 0..cols {
                let delta = factor.clone() * tab[row][j].clone();
                tab[i][j] = tab[i][j].clone() - delta;
            }
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for j in 0..cols {
            let delta = factor.clone() * tab[row][j].clone();
            cost[j] = cost[j].clone() - delta;
        }
    }
    basis[row] = col;
}
