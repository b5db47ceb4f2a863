//! Exact feasibility for small linear systems `Ax = b, x ≥ 0`.
//!
//! Phase one of the simplex method over exact rationals with Bland's
//! anti-cycling rule. Sized for the permutohedron check (at most 120
//! columns and six rows).

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;

/// Returns some `x ≥ 0` with `a·x = b`, or `None` if none exists.
///
/// `a` is given row by row; every row must have the same length.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "ragged constraint matrix");

    // Tableau over [x | artificials | rhs], rows normalized to rhs ≥ 0.
    let width = cols + rows;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(rows);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut line: Vec<Rational> =
            row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        line.extend((0..rows).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        t.push(line);
        rhs.push(if flip { -bi } else { bi.clone() });
    }
    let mut basis: Vec<usize> = (cols..width).collect();

    // Reduced costs of the phase-one objective Σ artificials.
    let mut reduced = vec![Rational::zero(); width];
    for j in 0..cols {
        reduced[j] = -t.iter().map(|line| &line[j]).sum::<Rational>();
    }
    let mut objective: Rational = rhs.iter().sum();

    loop {
        let Some(enter) = (0..width).find(|&j| reduced[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter] > Rational::zero() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so a pivot row always exists.
        let (r, _) = leave.expect("phase-one objective is bounded");

        let pivot = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &pivot;
        }
        rhs[r] = &rhs[r] / &pivot;
        for i in 0..rows {
            if i != r && !t[i][enter].is_zero() {
                let factor = t[i][enter].clone();
                for j in 0..width {
                    let delta = &factor * &t[r][j];
                    t[i][j] = &t[i][j] - &delta;
                }
                rhs[i] = &rhs[i] - &(&factor * &rhs[r]);
            }
        }
        if !reduced[enter].is_zero() {
            let factor = reduced[enter].clone();
            for j in 0..width {
                let delta = &factor * &t[r][j];
                reduced[j] = &reduced[j] - &delta;
            }
            objective = &objective + &(&factor * &rhs[r]);
        }
        basis[r] = enter;
    }

    if !objective.is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &j) in basis.iter().enumerate() {
        if j < cols {
            x[j] = rhs[i].clone();
        }
    }
    Some(x)
}
