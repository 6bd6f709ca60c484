use serde::Serialize;

use crate::ring::{Elem, Ring};

/// A dense square matrix over a ring, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Matrix<E> {
    pub dim: usize,
    pub data: Vec<E>,
}

/// Sparse integer matrix entries `(row, col, value)`.
pub type Sparse = Vec<(u16, u16, i64)>;

impl<E: Clone> Matrix<E> {
    pub fn identity<R: Ring<Elem = E>>(ring: &R, dim: usize) -> Self {
        let mut data = vec![ring.zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ring.one();
        }
        Matrix { dim, data }
    }

    pub fn from_int<R: Ring<Elem = E>>(ring: &R, dim: usize, values: &[i64]) -> Self {
        Matrix {
            dim,
            data: values.iter().map(|&v| ring.from_int(v)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.dim + c]
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.dim;
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if ring.is_zero(b) {
                        continue;
                    }
                    let cell = &mut data[i * n + j];
                    *cell = ring.add(cell, &ring.mul(a, b));
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let data = (0..n * n)
            .map(|idx| self.data[(idx % n) * n + idx / n].clone())
            .collect();
        Matrix { dim: n, data }
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        let n = self.dim;
        self.data.iter().enumerate().all(|(idx, x)| {
            if idx / n == idx % n {
                ring.is_one(x)
            } else {
                ring.is_zero(x)
            }
        })
    }

    /// `self · (I + Σ_k ξ^k D_k)` for sparse integer `D_k`.
    pub fn mul_unipotent_right<R: Ring<Elem = E>>(&self, ring: &R, powers: &[Sparse], xi: &E) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        let mut xk = ring.one();
        for d in powers {
            xk = ring.mul(&xk, xi);
            if ring.is_zero(&xk) {
                break;
            }
            for &(r, c, v) in d {
                let coeff = ring.mul(&xk, &ring.from_int(v));
                let (r, c) = (r as usize, c as usize);
                for i in 0..n {
                    let src = &self.data[i * n + r];
                    if ring.is_zero(src) {
                        continue;
                    }
                    let cell = &mut out.data[i * n + c];
                    *cell = ring.add(cell, &ring.mul(src, &coeff));
                }
            }
        }
        out
    }

    /// `(I + Σ_k ξ^k D_k) · self`.
    pub fn mul_unipotent_left<R: Ring<Elem = E>>(&self, ring: &R, powers: &[Sparse], xi: &E) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        let mut xk = ring.one();
        for d in powers {
            xk = ring.mul(&xk, xi);
            if ring.is_zero(&xk) {
                break;
            }
            for &(r, c, v) in d {
                let coeff = ring.mul(&xk, &ring.from_int(v));
                let (r, c) = (r as usize, c as usize);
                for j in 0..n {
                    let src = &self.data[c * n + j];
                    if ring.is_zero(src) {
                        continue;
                    }
                    let cell = &mut out.data[r * n + j];
                    *cell = ring.add(cell, &ring.mul(&coeff, src));
                }
            }
        }
        out
    }

    /// Determinant by Bird's division-free iteration, valid over any
    /// commutative ring in `O(n^4)` ring operations.
    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        let idx: Vec<usize> = (0..self.dim).collect();
        self.minor_det(ring, &idx, &idx)
    }

    fn minor_det<R: Ring<Elem = E>>(&self, ring: &R, rows: &[usize], cols: &[usize]) -> E {
        let n = rows.len();
        if n == 0 {
            return ring.one();
        }
        let a: Vec<E> = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        // X_1 = A, X_{k+1} = mu(X_k) A, where mu keeps the strict upper
        // triangle, zeroes the lower one and puts minus the trailing
        // diagonal sums on the diagonal. det A = (-1)^{n-1} (X_n)_{00}.
        let mut x = a.clone();
        let mut mu = vec![ring.zero(); n * n];
        for _ in 1..n {
            let mut tail = ring.zero();
            for i in (0..n).rev() {
                mu[i * n + i] = ring.neg(&tail);
                tail = ring.add(&tail, &x[i * n + i]);
                for j in 0..n {
                    if j > i {
                        mu[i * n + j] = x[i * n + j].clone();
                    } else if j < i {
                        mu[i * n + j] = ring.zero();
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let mut acc = ring.zero();
                    for k in i..n {
                        let m = &mu[i * n + k];
                        if !ring.is_zero(m) {
                            acc = ring.add(&acc, &ring.mul(m, &a[k * n + j]));
                        }
                    }
                    x[i * n + j] = acc;
                }
            }
        }
        if n % 2 == 1 {
            x[0].clone()
        } else {
            ring.neg(&x[0])
        }
    }

    /// Adjugate; equals the inverse when the determinant is 1.
    pub fn adjugate<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        let n = self.dim;
        let all: Vec<usize> = (0..n).collect();
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&x| x != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&x| x != i).collect();
                let m = if n == 1 {
                    ring.one()
                } else {
                    self.minor_det(ring, &rows, &cols)
                };
                data[i * n + j] = if (i + j) % 2 == 0 { m } else { ring.neg(&m) };
            }
        }
        Matrix { dim: n, data }
    }

    pub fn map<F, T>(&self, f: F) -> Matrix<T>
    where
        F: Fn(&E) -> T,
    {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Matrix<Elem> {
    /// Entrywise image under a ring map given as a lookup table.
    pub fn reduce(&self, projection: &[Elem]) -> Matrix<Elem> {
        self.map(|e| projection[e.index()])
    }

    /// Packs the entries into 64-bit words, `bits` bits per entry.
    pub fn pack(&self, bits: u32, out: &mut Vec<u64>) {
        out.clear();
        let per_word = (64 / bits) as usize;
        for chunk in self.data.chunks(per_word) {
            let mut w = 0u64;
            for e in chunk {
                w = (w << bits) | e.0 as u64;
            }
            out.push(w);
        }
    }

    pub fn unpack(words: &[u64], dim: usize, bits: u32) -> Matrix<Elem> {
        let per_word = (64 / bits) as usize;
        let total = dim * dim;
        let mask = (1u64 << bits) - 1;
        let mut data = Vec::with_capacity(total);
        for (w_idx, &w) in words.iter().enumerate() {
            let count = per_word.min(total - w_idx * per_word);
            for k in 0..count {
                let shift = bits as usize * (count - 1 - k);
                data.push(Elem(((w >> shift) & mask) as u16));
            }
        }
        Matrix { dim, data }
    }
}

/// Dense integer matrix product, used when building representations.
pub(crate) fn int_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

pub(crate) fn int_bracket(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let ab = int_mul(a, b, n);
    let ba = int_mul(b, a, n);
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

pub(crate) fn to_sparse(a: &[i64], n: usize) -> Sparse {
    a.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(idx, &v)| ((idx / n) as u16, (idx % n) as u16, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn adjugate_inverts_unimodular_matrices() {
        let r = FiniteRing::integers_mod(7).unwrap();
        let m = Matrix::from_int(&r, 3, &[1, 2, 0, 0, 1, 3, 4, 0, 1]);
        let d = m.det(&r);
        let inv_d = r.inverse(d).unwrap();
        let adj = m.adjugate(&r).map(|x| r.mul_e(*x, inv_d));
        assert!(m.mul(&r, &adj).is_identity(&r));
    }

    fn leibniz(m: &[i64], n: usize) -> i64 {
        fn go(m: &[i64], n: usize, row: usize, used: &mut Vec<bool>, sign: i64) -> i64 {
            if row == n {
                return sign;
            }
            let mut total = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let flips = used[c + 1..].iter().filter(|&&u| u).count() as i64;
                used[c] = true;
                let s = if flips % 2 == 0 { sign } else { -sign };
                total += m[row * n + c] * go(m, n, row + 1, used, s);
                used[c] = false;
            }
            total
        }
        go(m, n, 0, &mut vec![false; n], 1)
    }

    proptest::proptest! {
        #[test]
        fn determinant_matches_permutation_sum(n in 1usize..=6, modulus in 2u64..=30, raw in proptest::collection::vec(-9i64..=9, 36)) {
            let r = FiniteRing::integers_mod(modulus).unwrap();
            let entries = &raw[..n * n];
            let m = Matrix::from_int(&r, n, entries);
            let expected = r.int(leibniz(entries, n).rem_euclid(modulus as i64));
            proptest::prop_assert_eq!(m.det(&r), expected);
        }
    }

    #[test]
    fn packing_round_trips() {
        let r = FiniteRing::integers_mod(12).unwrap();
        let m = Matrix::from_int(&r, 4, &(0..16).collect::<Vec<_>>());
        let mut words = Vec::new();
        m.pack(4, &mut words);
        assert_eq!(words.len(), 1);
        assert_eq!(Matrix::unpack(&words, 4, 4), m);
    }
}
