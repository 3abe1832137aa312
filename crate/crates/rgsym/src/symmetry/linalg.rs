//! Exact linear algebra over the rational-function field.
//!
//! Rows are vectors of [`RatFunc`]; elimination is fraction-free in effect
//! because every entry stays a reduced rational function. Used to solve the
//! homogeneous linear systems produced by monomial splitting.

use crate::expr::poly::RatFunc;

/// Reduced row echelon form in place; returns pivot column indices.
pub fn rref(rows: &mut Vec<Vec<RatFunc>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for e in rows[r].iter_mut() {
            if !e.is_zero() {
                *e = e.mul(&inv);
            }
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let t = rows[r][j].mul(&f);
                rows[i][j] = rows[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<RatFunc>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the null space of the homogeneous system `rows * a = 0`,
/// one vector per free column, with the free coordinate set to one.
pub fn null_space(rows: &[Vec<RatFunc>], ncols: usize) -> Vec<Vec<RatFunc>> {
    let mut m: Vec<Vec<RatFunc>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols);
            r.clone()
        })
        .collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![RatFunc::zero(); ncols];
        v[free] = RatFunc::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(rows: &[Vec<RatFunc>], v: &[RatFunc]) -> bool {
    let base = rank(rows);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext) == base
}

/// Whether two row sets span the same subspace.
pub fn same_span(a: &[Vec<RatFunc>], b: &[Vec<RatFunc>]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return false;
    }
    let mut joint = a.to_vec();
    joint.extend(b.iter().cloned());
    rank(&joint) == ra
}
