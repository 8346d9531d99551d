//! Dense matrices, CSR sparse matrices, and a symmetric eigensolver.
//!
//! Everything is 64-bit and row-major. The eigensolver is the classic
//! Householder tridiagonalization followed by implicit-shift QL, which is
//! exact enough for the desk-scale graphs this crate targets (n ≤ 2000 on
//! the dense path, orthogonal iteration above that).

use crate::error::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let b_row = other.row(k);
                for j in 0..other.cols {
                    out_row[j] += a * b_row[j];
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub rows: usize,
    pub cols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl Csr {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
        for &(r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of range");
            per_row[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for &(c, v) in row.iter() {
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Csr { rows, cols, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter_row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.col_idx[lo..hi]
            .iter()
            .zip(&self.values[lo..hi])
            .map(|(&c, &v)| (c, v))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.iter_row(r)
            .find(|&(cc, _)| cc == c)
            .map(|(_, v)| v)
            .unwrap_or(0.0)
    }

    /// Sparse-dense product `self * m`.
    pub fn matmul_dense(&self, m: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, m.rows,
            "spmm {}x{} * {}x{}",
            self.rows, self.cols, m.rows, m.cols
        );
        let mut out = Matrix::zeros(self.rows, m.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * m.cols..(r + 1) * m.cols];
            for (c, v) in self.iter_row(r) {
                let m_row = m.row(c);
                for j in 0..m.cols {
                    out_row[j] += v * m_row[j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Csr {
        let triplets: Vec<(usize, usize, f64)> = (0..self.rows)
            .flat_map(|r| self.iter_row(r).map(move |(c, v)| (c, r, v)))
            .collect();
        Csr::from_triplets(self.cols, self.rows, &triplets)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.iter_row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

/// Eigendecomposition of a real symmetric matrix: eigenvalues ascending,
/// eigenvectors as the columns of an orthogonal matrix.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Householder tridiagonalization + implicit-shift QL, with eigenvalues
/// sorted ascending. Errors if QL fails to converge within the iteration
/// budget.
pub fn sym_eigen(a: &Matrix) -> Result<SymEigen> {
    assert_eq!(a.rows, a.cols, "sym_eigen needs a square matrix");
    let n = a.rows;
    if n == 0 {
        return Ok(SymEigen { values: vec![], vectors: Matrix::zeros(0, 0) });
    }
    let mut v = a.clone();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;
    // tql2 returns d ascending already; keep the sort for safety.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok(SymEigen { values, vectors })
}

// Householder reduction to tridiagonal form. On exit `v` accumulates the
// orthogonal transform, `d` holds the diagonal and `e` the subdiagonal.
fn tred2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = v.rows;
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the (d, e) tridiagonal pair, accumulating the
// rotations into `v`.
fn tql2(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = v.rows;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 50 {
                    return Err(Error::Numerical(format!(
                        "eigensolver did not converge at index {l} after {iter} QL sweeps"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort ascending, carrying eigenvectors along.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for r in 0..n {
                let tmp = v[(r, i)];
                v[(r, i)] = v[(r, k)];
                v[(r, k)] = tmp;
            }
        }
    }
    Ok(())
}

/// First `k` eigenvectors (ascending eigenvalue) of a sparse symmetric
/// matrix. Dense path up to `DENSE_EIGEN_CAP` nodes, orthogonal iteration
/// beyond it.
pub fn smallest_eigenvectors(m: &Csr, k: usize) -> Result<Matrix> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    assert!(k <= n, "requested {k} eigenvectors of a {n}x{n} matrix");
    if n <= DENSE_EIGEN_CAP {
        let eig = sym_eigen(&m.to_dense())?;
        let mut out = Matrix::zeros(n, k);
        for j in 0..k {
            for i in 0..n {
                out[(i, j)] = eig.vectors[(i, j)];
            }
        }
        return Ok(out);
    }
    orthogonal_iteration_smallest(m, k)
}

pub const DENSE_EIGEN_CAP: usize = 2000;

// Orthogonal iteration on sigma*I - M: the dominant subspace of the
// shifted operator is the smallest-eigenvalue subspace of M. Used only
// above the dense cap, where full accuracy is not required (coarsening
// costs, not reported spectra).
fn orthogonal_iteration_smallest(m: &Csr, k: usize) -> Result<Matrix> {
    use rand::Rng;
    let n = m.rows;
    // Gershgorin upper bound on the spectrum.
    let mut sigma = 0.0f64;
    for r in 0..n {
        let mut row_sum = 0.0;
        let mut diag = 0.0;
        for (c, v) in m.iter_row(r) {
            if c == r {
                diag = v;
            } else {
                row_sum += v.abs();
            }
        }
        sigma = sigma.max(diag + row_sum);
    }
    let mut rng = crate::seed::rng(0x9e3779b97f4a7c15);
    let mut q = Matrix::zeros(n, k);
    for v in q.data.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    gram_schmidt(&mut q);
    let iters = 100usize;
    for _ in 0..iters {
        // y = (sigma*I - M) q
        let mq = m.matmul_dense(&q);
        for i in 0..n {
            for j in 0..k {
                let val = sigma * q[(i, j)] - mq[(i, j)];
                q[(i, j)] = val;
            }
        }
        gram_schmidt(&mut q);
    }
    // Order columns by Rayleigh quotient ascending in M.
    let mq = m.matmul_dense(&q);
    let mut rq: Vec<(f64, usize)> = (0..k)
        .map(|j| {
            let mut num = 0.0;
            for i in 0..n {
                num += q[(i, j)] * mq[(i, j)];
            }
            (num, j)
        })
        .collect();
    rq.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Matrix::zeros(n, k);
    for (new_j, &(_, old_j)) in rq.iter().enumerate() {
        for i in 0..n {
            out[(i, new_j)] = q[(i, old_j)];
        }
    }
    Ok(out)
}

fn gram_schmidt(q: &mut Matrix) {
    let (n, k) = q.shape();
    for j in 0..k {
        for prev in 0..j {
            let mut dot = 0.0;
            for i in 0..n {
                dot += q[(i, j)] * q[(i, prev)];
            }
            for i in 0..n {
                let sub = dot * q[(i, prev)];
                q[(i, j)] -= sub;
            }
        }
        let mut norm = 0.0;
        for i in 0..n {
            norm += q[(i, j)] * q[(i, j)];
        }
        let norm = norm.sqrt();
        if norm > 1e-12 {
            for i in 0..n {
                q[(i, j)] /= norm;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &Matrix, eig: &SymEigen) -> f64 {
        let n = a.rows;
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let mut av = 0.0;
                for k in 0..n {
                    av += a[(i, k)] * eig.vectors[(k, j)];
                }
                worst = worst.max((av - eig.values[j] * eig.vectors[(i, j)]).abs());
            }
        }
        worst
    }

    #[test]
    fn eigen_diag() {
        let a = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -1.0]]);
        let eig = sym_eigen(&a).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_known_2x2() {
        // [[1,-1],[-1,1]] has spectrum {0, 2}.
        let a = Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let eig = sym_eigen(&a).unwrap();
        assert!(eig.values[0].abs() < 1e-12);
        assert!((eig.values[1] - 2.0).abs() < 1e-12);
        assert!(residual(&a, &eig) < 1e-10);
    }

    #[test]
    fn eigen_path_graph_laplacian_closed_form() {
        // Path P_n Laplacian eigenvalues: 2 - 2 cos(pi k / n), k = 0..n-1.
        let n = 7;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            if i > 0 {
                a[(i, i - 1)] = -1.0;
            }
            if i + 1 < n {
                a[(i, i + 1)] = -1.0;
            }
            a[(i, i)] = match i {
                0 => 1.0,
                x if x == n - 1 => 1.0,
                _ => 2.0,
            };
        }
        let eig = sym_eigen(&a).unwrap();
        for k in 0..n {
            let expect = 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos();
            assert!(
                (eig.values[k] - expect).abs() < 1e-9,
                "k={k}: {} vs {}",
                eig.values[k],
                expect
            );
        }
        assert!(residual(&a, &eig) < 1e-9);
    }

    #[test]
    fn eigen_random_symmetric_residual_and_orthogonality() {
        use rand::Rng;
        let mut rng = crate::seed::rng(7);
        for trial in 0..20 {
            let n = 2 + (trial % 9);
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v: f64 = rng.gen_range(-2.0..2.0);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            let eig = sym_eigen(&a).unwrap();
            assert!(residual(&a, &eig) < 1e-8, "trial {trial}");
            // Orthonormality.
            for c1 in 0..n {
                for c2 in 0..n {
                    let mut dot = 0.0;
                    for r in 0..n {
                        dot += eig.vectors[(r, c1)] * eig.vectors[(r, c2)];
                    }
                    let expect = if c1 == c2 { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-9);
                }
            }
            // Ascending order.
            for k in 1..n {
                assert!(eig.values[k] >= eig.values[k - 1]);
            }
            // Trace check.
            let tr: f64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!((tr - sum).abs() < 1e-8);
        }
    }

    #[test]
    fn csr_roundtrip_and_spmm() {
        let t = vec![(0usize, 1usize, 2.0f64), (1, 0, 2.0), (1, 2, 1.0), (2, 1, 1.0)];
        let s = Csr::from_triplets(3, 3, &t);
        assert_eq!(s.nnz(), 4);
        let x = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let y = s.matmul_dense(&x);
        let dense = s.to_dense().matmul(&x);
        for i in 0..3 {
            for j in 0..2 {
                assert!((y[(i, j)] - dense[(i, j)]).abs() < 1e-12);
            }
        }
        let st = s.transpose();
        assert_eq!(st.to_dense(), s.to_dense().transpose());
    }

    #[test]
    fn csr_duplicate_triplets_are_summed() {
        let s = Csr::from_triplets(2, 2, &[(0, 1, 1.0), (0, 1, 2.5)]);
        assert_eq!(s.get(0, 1), 3.5);
        assert_eq!(s.nnz(), 1);
    }
}
