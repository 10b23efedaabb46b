//! Exact rational linear algebra and the double description method.

use num_traits::{Signed, Zero};

use crate::lattice::{ExactScalar, LatticeVector};

/// Reduced row echelon form of the span of `rows`; returns nonzero rows and pivot columns.
pub(crate) fn rref(rows: &[LatticeVector], dim: usize) -> (Vec<LatticeVector>, Vec<usize>) {
    let mut m: Vec<Vec<ExactScalar>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == m.len() {
            break;
        }
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                #[allow(clippy::needless_range_loop)]
                for j in 0..dim {
                    let delta = &f * &m[r][j];
                    m[k][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m.into_iter().map(LatticeVector::new).collect(), pivots)
}

/// Basis of `{x : r·x = 0 for all rows r}`.
pub(crate) fn nullspace(rows: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    let (red, pivots) = rref(rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); dim];
            v[f] = ExactScalar::from_integer(1.into());
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            LatticeVector::new(v).primitive_direction()
        })
        .collect()
}

/// Canonical integral basis of a subspace: the primitive rows of its RREF.
pub(crate) fn canonical_basis(vectors: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    rref(vectors, dim)
        .0
        .iter()
        .map(|r| r.primitive_direction())
        .collect()
}

/// Orthogonal projection of `v` onto the complement of the span of `basis`.
pub(crate) fn project_out(v: &LatticeVector, basis: &[LatticeVector]) -> LatticeVector {
    if basis.is_empty() {
        return v.clone();
    }
    // solve Gram · c = B v, then v − Bᵀ c
    let k = basis.len();
    let mut aug: Vec<Vec<ExactScalar>> = (0..k)
        .map(|i| {
            let mut row: Vec<ExactScalar> = (0..k).map(|j| basis[i].dot(&basis[j])).collect();
            row.push(basis[i].dot(v));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k)
            .find(|&r| !aug[r][c].is_zero())
            .expect("basis is independent");
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                #[allow(clippy::needless_range_loop)]
                for j in 0..=k {
                    let delta = &f * &aug[c][j];
                    aug[r][j] -= delta;
                }
            }
        }
    }
    let mut out = v.clone();
    for (i, b) in basis.iter().enumerate() {
        out = out.add_scaled(&-aug[i][k].clone(), b);
    }
    out
}

/// Generators of `{x : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`.
#[derive(Clone, Debug)]
pub(crate) struct Generators {
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

#[derive(Clone)]
struct Ray {
    v: LatticeVector,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut Vec<u64>, k: usize) {
    if bits.len() <= k / 64 {
        bits.resize(k / 64 + 1, 0);
    }
    bits[k / 64] |= 1 << (k % 64);
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_contain(sup: &[u64], sub: &[u64]) -> bool {
    sub.iter()
        .enumerate()
        .all(|(i, s)| s & !sup.get(i).copied().unwrap_or(0) == 0)
}

pub(crate) fn h_to_v(dim: usize, ineqs: &[LatticeVector], eqs: &[LatticeVector]) -> Generators {
    let mut lineality = nullspace(eqs, dim);
    let mut rays: Vec<Ray> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(j) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lineality.remove(j);
            let mut al0 = a.dot(&l0);
            if al0.is_negative() {
                l0 = l0.neg();
                al0 = -al0;
            }
            for l in lineality.iter_mut() {
                let c = a.dot(l) / &al0;
                if !c.is_zero() {
                    *l = l.add_scaled(&-c, &l0).primitive_direction();
                }
            }
            for r in rays.iter_mut() {
                let c = a.dot(&r.v) / &al0;
                if !c.is_zero() {
                    r.v = r.v.add_scaled(&-c, &l0).primitive_direction();
                }
                bit_set(&mut r.zeros, k);
            }
            let mut zeros = Vec::new();
            for i in 0..k {
                bit_set(&mut zeros, i);
            }
            rays.push(Ray { v: l0, zeros });
            continue;
        }
        let vals: Vec<ExactScalar> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, val) in rays.iter().zip(&vals) {
            if val.is_zero() {
                let mut r = r.clone();
                bit_set(&mut r.zeros, k);
                next.push(r);
            } else if val.is_positive() {
                next.push(r.clone());
            }
        }
        for (pi, pv) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
            for (ni, nv) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                let common = bits_and(&rays[pi].zeros, &rays[ni].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(o, r)| o == pi || o == ni || !bits_contain(&r.zeros, &common));
                if !adjacent {
                    continue;
                }
                let v = rays[ni]
                    .v
                    .scale(pv)
                    .add_scaled(&-nv.clone(), &rays[pi].v)
                    .primitive_direction();
                let mut zeros = common;
                bit_set(&mut zeros, k);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }
    Generators {
        lineality,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}
