//! Row-major double-precision matrices and the matrix products used by the
//! network engine.
//!
//! The multiply kernels are written so the inner loop is a contiguous
//! multiply-accumulate over one output row; with `target-cpu=native` the
//! compiler turns that into packed FMA, which is what keeps single-threaded
//! training at full scale tolerable.

/// A dense `rows × cols` matrix of `f64`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Tensor2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "tensor dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Wrap an existing row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length must be rows * cols");
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Tensor2 {
        let mut out = Tensor2::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Glue two matrices with equal row counts side by side.
    pub fn concat_cols(&self, other: &Tensor2) -> Tensor2 {
        assert_eq!(self.rows, other.rows, "row mismatch in concat");
        let cols = self.cols + other.cols;
        let mut out = Tensor2::zeros(self.rows, cols);
        for r in 0..self.rows {
            out.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            out.row_mut(r)[self.cols..].copy_from_slice(other.row(r));
        }
        out
    }

    /// Rows `[from, to)` as a new matrix.
    pub fn slice_rows(&self, from: usize, to: usize) -> Tensor2 {
        assert!(from < to && to <= self.rows, "bad row range");
        Tensor2::from_vec(
            to - from,
            self.cols,
            self.data[from * self.cols..to * self.cols].to_vec(),
        )
    }

    /// Columns `[from, to)` as a new matrix.
    pub fn slice_cols(&self, from: usize, to: usize) -> Tensor2 {
        assert!(from < to && to <= self.cols, "bad column range");
        let mut out = Tensor2::zeros(self.rows, to - from);
        for r in 0..self.rows {
            out.row_mut(r).copy_from_slice(&self.row(r)[from..to]);
        }
        out
    }

    /// Whether every entry is a finite number.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// `A · B` for `A: m×k`, `B: k×n`.
pub fn matmul_nn(a: &Tensor2, b: &Tensor2) -> Tensor2 {
    assert_eq!(a.cols, b.rows, "inner dimension mismatch in matmul");
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut out = Tensor2::zeros(m, n);
    for i in 0..m {
        let a_row = a.row(i);
        let out_row = out.row_mut(i);
        for (p, &av) in a_row.iter().enumerate().take(k) {
            let b_row = &b.data[p * n..(p + 1) * n];
            for (o, &bv) in out_row.iter_mut().zip(b_row) {
                *o += av * bv;
            }
        }
    }
    out
}

/// `Aᵀ · B` for `A: k×m`, `B: k×n`, without materializing the transpose.
/// This is the parameter-gradient product (inputs-transposed times deltas).
pub fn matmul_tn(a: &Tensor2, b: &Tensor2) -> Tensor2 {
    assert_eq!(a.rows, b.rows, "outer dimension mismatch in transposed matmul");
    let (k, m, n) = (a.rows, a.cols, b.cols);
    let mut out = Tensor2::zeros(m, n);
    for i in 0..k {
        let a_row = a.row(i);
        let b_row = &b.data[i * n..(i + 1) * n];
        for (p, &av) in a_row.iter().enumerate() {
            let out_row = &mut out.data[p * n..(p + 1) * n];
            for (o, &bv) in out_row.iter_mut().zip(b_row) {
                *o += av * bv;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_matmul(a: &Tensor2, b: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0.0;
                for p in 0..a.cols() {
                    acc += a.get(i, p) * b.get(p, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn random_tensor(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Tensor2 {
        let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Tensor2::from_vec(rows, cols, data)
    }

    #[test]
    fn matmul_small_known() {
        let a = Tensor2::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let b = Tensor2::from_vec(2, 2, vec![5.0, 6.0, 7.0, 8.0]);
        let c = matmul_nn(&a, &b);
        assert_eq!(c.data(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn matmul_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(m, k, n) in &[(1, 1, 1), (3, 5, 7), (8, 13, 4), (16, 16, 16)] {
            let a = random_tensor(m, k, &mut rng);
            let b = random_tensor(k, n, &mut rng);
            let fast = matmul_nn(&a, &b);
            let slow = naive_matmul(&a, &b);
            for (x, y) in fast.data().iter().zip(slow.data()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transposed_matmul_matches_explicit_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_tensor(9, 4, &mut rng);
        let b = random_tensor(9, 6, &mut rng);
        let direct = matmul_tn(&a, &b);
        let via_transpose = matmul_nn(&a.transpose(), &b);
        for (x, y) in direct.data().iter().zip(via_transpose.data()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn transpose_and_concat() {
        let a = Tensor2::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let t = a.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.get(2, 1), 6.0);
        let b = Tensor2::from_vec(2, 1, vec![9.0, 10.0]);
        let c = a.concat_cols(&b);
        assert_eq!(c.cols(), 4);
        assert_eq!(c.row(1), &[4.0, 5.0, 6.0, 10.0]);
        let back = c.slice_cols(0, 3);
        assert_eq!(back.data(), a.data());
    }

    #[test]
    fn finiteness_scan() {
        let mut a = Tensor2::zeros(2, 2);
        assert!(a.all_finite());
        a.set(1, 1, f64::NAN);
        assert!(!a.all_finite());
        a.set(1, 1, f64::INFINITY);
        assert!(!a.all_finite());
    }
}
