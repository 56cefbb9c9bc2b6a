//! Exact linear-programming feasibility over the rationals: phase-1 simplex
//! with Bland's rule, used for vertex/redundancy tests in the polyhedra and
//! vertex-enumeration modules. Termination is guaranteed by Bland's rule;
//! every comparison is exact.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

/// Decides whether {x >= 0 : A x = b} is nonempty, returning a witness.
pub fn feasible_nonneg(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 {
        return Some(vec![Rat::zero(); n]);
    }

    // Tableau with artificial variables n..n+m; minimize their sum.
    // Row layout: m constraint rows then the objective row; column layout:
    // n structural + m artificial + rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row: Vec<Rat> = Vec::with_capacity(width);
        let flip = b[i].is_negative();
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    // Objective: sum of artificials, expressed in terms of non-basic columns
    // by subtracting each constraint row.
    let mut obj = vec![Rat::zero(); width];
    for row in &t {
        for j in 0..width {
            obj[j] -= &row[j];
        }
    }
    for k in 0..m {
        obj[n + k] = Rat::zero();
    }
    t.push(obj);

    let mut basis: Vec<usize> = (n..n + m).collect();
    // Dantzig rule for speed; switch to Bland's rule (guaranteed termination)
    // if the iteration count suggests cycling.
    let bland_after = 4 * (n + m) + 64;
    let mut iters = 0usize;
    loop {
        iters += 1;
        let enter = if iters <= bland_after {
            (0..n + m)
                .filter(|&j| t[m][j].is_negative())
                .min_by(|&a, &b| t[m][a].cmp(&t[m][b]))
        } else {
            (0..n + m).find(|&j| t[m][j].is_negative())
        };
        let Some(enter) = enter else {
            break;
        };
        // Ratio test, Bland tie-break on basis variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded phase-1 objective cannot happen (bounded below by 0);
            // defensive break.
            break;
        };
        pivot(&mut t, leave, enter, width);
        basis[leave] = enter;
    }

    if !t[m][width - 1].is_zero() {
        return None;
    }
    // Feasible: read off structural variables.
    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rat>], row: usize, col: usize, width: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        *x *= &inv;
    }
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let f = t[i][col].clone();
            for j in 0..width {
                let sub = &f * &t[row][j];
                t[i][j] -= sub;
            }
        }
    }
}

/// Whether `target` lies in conv(points) + cone(rays); points and rays are
/// given as columns of the combination.
pub fn in_convex_hull(points: &[&Vec<Rat>], rays: &[&Vec<Rat>], target: &[Rat]) -> bool {
    let d = target.len();
    // Rows: d coordinate equations plus the convexity row (sum of point
    // coefficients = 1; ray coefficients unconstrained in that row).
    let ncols = points.len() + rays.len();
    if ncols == 0 {
        return false;
    }
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = Vec::with_capacity(ncols);
        for p in points {
            row.push(p[i].clone());
        }
        for r in rays {
            row.push(r[i].clone());
        }
        a.push(row);
    }
    let mut conv = vec![Rat::one(); points.len()];
    conv.extend(vec![Rat::zero(); rays.len()]);
    a.push(conv);
    let mut b: Vec<Rat> = target.to_vec();
    b.push(Rat::one());
    feasible_nonneg(&a, &b).is_some()
}

/// Approximate phase-1 simplex over f64; returns a candidate solution or
/// None when the system looks infeasible (or the iteration cap is hit).
/// Only used as a prefilter; every answer is confirmed exactly.
fn feasible_nonneg_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    const EPS: f64 = 1e-9;
    let m = a.len();
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 {
        return Some(vec![0.0; n]);
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i] < 0.0;
        let s = if flip { -1.0 } else { 1.0 };
        let mut row: Vec<f64> = a[i].iter().map(|x| s * x).collect();
        for k in 0..m {
            row.push(if k == i { 1.0 } else { 0.0 });
        }
        row.push(s * b[i]);
        t.push(row);
    }
    let mut obj = vec![0.0; width];
    for row in &t {
        for j in 0..width {
            obj[j] -= row[j];
        }
    }
    for k in 0..m {
        obj[n + k] = 0.0;
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let max_iters = 50 * (n + m) + 1000;
    for _ in 0..max_iters {
        let Some(enter) = (0..n + m)
            .filter(|&j| t[m][j] < -EPS)
            .min_by(|&x, &y| t[m][x].partial_cmp(&t[m][y]).unwrap())
        else {
            // Optimal; feasible iff the artificial objective vanished.
            if t[m][width - 1].abs() > 1e-6 {
                return None;
            }
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i][width - 1];
                }
            }
            return Some(x);
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                if ratio < best - EPS {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let leave = leave?;
        let inv = 1.0 / t[leave][enter];
        for x in t[leave].iter_mut() {
            *x *= inv;
        }
        for i in 0..=m {
            if i != leave && t[i][enter].abs() > 0.0 {
                let f = t[i][enter];
                for j in 0..width {
                    t[i][j] -= f * t[leave][j];
                }
            }
        }
        basis[leave] = enter;
    }
    None
}

/// Hull membership with a float prefilter: a float solve proposes a small
/// support, a small exact solve confirms it; any disagreement falls back to
/// the full exact program, so the answer is always exact.
pub fn in_convex_hull_fast(points: &[&Vec<Rat>], rays: &[&Vec<Rat>], target: &[Rat]) -> bool {
    let d = target.len();
    let ncols = points.len() + rays.len();
    if ncols == 0 {
        return false;
    }
    let to_f = |v: &Rat| -> f64 {
        use num_traits::ToPrimitive;
        v.to_f64().unwrap_or(0.0)
    };
    let mut af: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = Vec::with_capacity(ncols);
        for p in points {
            row.push(to_f(&p[i]));
        }
        for r in rays {
            row.push(to_f(&r[i]));
        }
        af.push(row);
    }
    let mut conv = vec![1.0; points.len()];
    conv.extend(vec![0.0; rays.len()]);
    af.push(conv);
    let mut bf: Vec<f64> = target.iter().map(to_f).collect();
    bf.push(1.0);
    if let Some(x) = feasible_nonneg_f64(&af, &bf) {
        // Confirm on the proposed support with a small exact solve.
        let support: Vec<usize> = (0..ncols).filter(|&j| x[j] > 1e-7).collect();
        if support.len() <= d + 2 {
            let col = |j: usize, i: usize| -> Rat {
                if j < points.len() {
                    points[j][i].clone()
                } else {
                    rays[j - points.len()][i].clone()
                }
            };
            let mut a: Vec<Vec<Rat>> = Vec::with_capacity(d + 1);
            for i in 0..d {
                a.push(support.iter().map(|&j| col(j, i)).collect());
            }
            a.push(
                support
                    .iter()
                    .map(|&j| if j < points.len() { Rat::one() } else { Rat::zero() })
                    .collect(),
            );
            let mut b: Vec<Rat> = target.to_vec();
            b.push(Rat::one());
            if feasible_nonneg(&a, &b).is_some() {
                return true;
            }
        }
    }
    in_convex_hull(points, rays, target)
}
