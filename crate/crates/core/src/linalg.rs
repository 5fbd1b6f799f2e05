//! Dense matrices and subspaces over GF(2^n).
//!
//! Vectors are plain `Vec<FieldElement>` columns. Matrices are stored
//! row-major; a matrix acts on column vectors from the left.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::field::{FieldElement, FieldSpec};

pub type Vector = Vec<FieldElement>;

pub fn zero_vector(spec: FieldSpec, dim: usize) -> Vector {
    vec![spec.zero(); dim]
}

pub fn unit_vector(spec: FieldSpec, dim: usize, i: usize) -> Vector {
    let mut v = zero_vector(spec, dim);
    v[i] = spec.one();
    v
}

pub fn vector_from_ints(spec: FieldSpec, values: &[u32]) -> crate::Result<Vector> {
    values.iter().map(|&v| spec.element(v)).collect()
}

pub fn vector_to_ints(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.value()).collect()
}

pub fn add(u: &[FieldElement], v: &[FieldElement]) -> Vector {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(&a, &b)| a + b).collect()
}

pub fn scale(c: FieldElement, v: &[FieldElement]) -> Vector {
    v.iter().map(|&x| c * x).collect()
}

/// `u + c·v`
pub fn axpy(u: &[FieldElement], c: FieldElement, v: &[FieldElement]) -> Vector {
    u.iter().zip(v).map(|(&a, &b)| a + c * b).collect()
}

pub fn dot(u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = u[0] * v[0];
    for (&a, &b) in u.iter().zip(v).skip(1) {
        acc += a * b;
    }
    acc
}

pub fn is_zero(v: &[FieldElement]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Every vector of `K^dim`, in lexicographic order of the integer encodings
/// (first coordinate most significant).
pub fn all_vectors(spec: FieldSpec, dim: usize) -> impl Iterator<Item = Vector> {
    let q = u64::from(spec.order());
    let total = q.pow(dim as u32);
    (0..total).map(move |mut k| {
        let mut v = zero_vector(spec, dim);
        for slot in v.iter_mut().rev() {
            *slot = spec.elem((k % q) as u32);
            k /= q;
        }
        v
    })
}

/// One representative per point of the projective space `P(K^dim)`: the
/// non-zero vectors whose first non-zero coordinate is one, ordered by the
/// position of that coordinate from the right and then lexicographically.
pub fn projective_points(spec: FieldSpec, dim: usize) -> impl Iterator<Item = Vector> {
    (0..dim).rev().flat_map(move |lead| {
        all_vectors(spec, dim - lead - 1).map(move |tail| {
            let mut v = zero_vector(spec, dim);
            v[lead] = spec.one();
            v[lead + 1..].copy_from_slice(&tail);
            v
        })
    })
}

/// Rank of a list of vectors.
pub fn rank(spec: FieldSpec, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(spec, vectors).rank()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    spec: FieldSpec,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_ints())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![spec.zero(); rows * cols],
            spec,
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m[(i, i)] = spec.one();
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
            spec,
        }
    }

    pub fn from_columns(spec: FieldSpec, columns: &[Vector]) -> Self {
        Self::from_rows(spec, columns).transpose()
    }

    pub fn from_ints(spec: FieldSpec, rows: &[Vec<u32>]) -> crate::Result<Self> {
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| vector_from_ints(spec, r))
            .collect::<crate::Result<_>>()?;
        if let Some(bad) = rows.iter().find(|r| r.len() != rows[0].len()) {
            return Err(crate::Error::DimMismatch {
                expected: rows[0].len(),
                got: bad.len(),
            });
        }
        Ok(Self::from_rows(spec, &rows))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_ints(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| vector_to_ints(&self.row(i)))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.spec, self.rows)
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is non-zero");
            for j in 0..m.cols {
                m[(r, j)] *= inv;
            }
            for i in 0..m.rows {
                let f = m[(i, c)];
                if i != r && !f.is_zero() {
                    for j in 0..m.cols {
                        let t = m[(r, j)];
                        m[(i, j)] += f * t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.spec, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = self.spec.one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.spec, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(self.spec, self.cols);
                v[f] = self.spec.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.spec, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.spec, self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)];
        }
        Some(x)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.spec, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

/// A linear subspace of `K^dim`, kept as a reduced row-echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    spec: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(spec: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            spec,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn span(spec: FieldSpec, ambient_dim: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(spec, ambient_dim);
        }
        let (r, pivots) = Matrix::from_rows(spec, vectors).rref();
        Subspace {
            spec,
            ambient_dim,
            basis: (0..pivots.len()).map(|i| r.row(i)).collect(),
        }
    }

    pub fn whole(spec: FieldSpec, dim: usize) -> Self {
        let basis = (0..dim).map(|i| unit_vector(spec, dim, i)).collect();
        Subspace {
            spec,
            ambient_dim: dim,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(self.spec, &rows) == self.dim()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // solve Σ a_i u_i = Σ b_j w_j
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.spec, self.ambient_dim);
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().cloned());
        let kernel = Matrix::from_columns(self.spec, &cols).kernel();
        let vectors: Vec<Vector> = kernel
            .iter()
            .map(|k| {
                let mut v = zero_vector(self.spec, self.ambient_dim);
                for (i, u) in self.basis.iter().enumerate() {
                    v = axpy(&v, k[i], u);
                }
                v
            })
            .collect();
        Self::span(self.spec, self.ambient_dim, &vectors)
    }
}

/// Indices of a maximal linearly independent prefix-greedy subset.
pub fn independent_subset(spec: FieldSpec, vectors: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        chosen.push(v.clone());
        if rank(spec, &chosen) == chosen.len() {
            idx.push(i);
        } else {
            chosen.pop();
        }
    }
    idx
}

/// Extends independent `vectors` to a basis of `K^dim` with unit vectors.
pub fn complete_basis(spec: FieldSpec, dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    let mut basis = vectors.to_vec();
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        basis.push(unit_vector(spec, dim, i));
        if rank(spec, &basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip_gf4() {
        let f = FieldSpec::gf(2);
        let m = Matrix::from_ints(f, &[vec![1, 2, 0], vec![3, 1, 1], vec![0, 2, 3]]).unwrap();
        let inv = m.inverse().expect("invertible");
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn singular_matrix_has_kernel() {
        let f = FieldSpec::gf(1);
        let m = Matrix::from_ints(f, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.inverse().is_none());
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(is_zero(&m.mul_vec(&k[0])));
    }

    #[test]
    fn invertible_2x2_counts() {
        // |GL(2, q)| = (q² - 1)(q² - q)
        for (n, want) in [(1u32, 6usize), (2, 180)] {
            let f = FieldSpec::gf(n);
            let count = all_vectors(f, 4)
                .filter(|v| {
                    Matrix::from_rows(f, &[v[..2].to_vec(), v[2..].to_vec()]).is_invertible()
                })
                .count();
            assert_eq!(count, want);
        }
    }

    #[test]
    fn subspace_equality_is_canonical() {
        let f = FieldSpec::gf(2);
        let a = vector_from_ints(f, &[1, 2, 0]).unwrap();
        let b = vector_from_ints(f, &[0, 1, 1]).unwrap();
        let s1 = Subspace::span(f, 3, &[a.clone(), b.clone()]);
        let s2 = Subspace::span(f, 3, &[add(&a, &b), b.clone()]);
        assert_eq!(s1, s2);
        assert!(s1.contains(&add(&a, &scale(f.elem(3), &b))));
        let c = unit_vector(f, 3, 0);
        let s3 = Subspace::span(f, 3, &[c.clone(), b]);
        assert_eq!(s1.intersection(&s3).dim(), 1);
    }

    #[test]
    fn solve_linear_system() {
        let f = FieldSpec::gf(3);
        let m = Matrix::from_ints(f, &[vec![1, 5], vec![3, 7]]).unwrap();
        let b = vector_from_ints(f, &[2, 4]).unwrap();
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }
}
