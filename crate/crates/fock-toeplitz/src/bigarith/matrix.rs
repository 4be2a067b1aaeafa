use super::complex::BigComplex;
use super::real::BigReal;

/// Dense Hermitian matrix stored as its packed upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    upper: Vec<BigComplex>,
}

fn packed_index(dim: usize, j: usize, k: usize) -> usize {
    debug_assert!(j <= k && k < dim);
    j * (2 * dim - j + 1) / 2 + (k - j)
}

impl HermitianMatrix {
    /// Build from the upper triangle: `f(j, k)` is called once for every `j <= k`.
    /// Diagonal imaginary parts are discarded.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigComplex) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for j in 0..dim {
            for k in j..dim {
                let mut z = f(j, k);
                if j == k {
                    z.im = BigReal::zero(z.re.prec());
                }
                upper.push(z);
            }
        }
        HermitianMatrix { dim, upper }
    }

    pub fn from_real_fn(dim: usize, prec: u32, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        Self::from_upper_fn(dim, |j, k| {
            let v = f(j, k).with_prec(prec);
            BigComplex::from_real(v)
        })
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        Self::from_upper_fn(dim, |j, k| {
            if j == k {
                BigComplex::one(prec)
            } else {
                BigComplex::zero(prec)
            }
        })
    }

    pub fn diagonal(values: &[BigReal]) -> Self {
        let prec = values.iter().map(BigReal::prec).max().unwrap_or(64);
        Self::from_upper_fn(values.len(), |j, k| {
            if j == k {
                BigComplex::from_real(values[j].with_prec(prec))
            } else {
                BigComplex::zero(prec)
            }
        })
    }

    /// Build from a full square array; only the upper triangle is read.
    pub fn from_rows(rows: &[Vec<BigComplex>]) -> Self {
        Self::from_upper_fn(rows.len(), |j, k| rows[j][k].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prec(&self) -> u32 {
        self.upper.iter().map(BigComplex::prec).max().unwrap_or(64)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        HermitianMatrix { dim: self.dim, upper: self.upper.iter().map(|z| z.with_prec(prec)).collect() }
    }

    /// Entry (j, k); the lower triangle is the conjugate of the stored upper one.
    pub fn get(&self, j: usize, k: usize) -> BigComplex {
        if j <= k {
            self.upper[packed_index(self.dim, j, k)].clone()
        } else {
            self.upper[packed_index(self.dim, k, j)].conj()
        }
    }

    /// Borrow a stored entry (requires `j <= k`).
    pub fn upper(&self, j: usize, k: usize) -> &BigComplex {
        &self.upper[packed_index(self.dim, j, k)]
    }

    pub fn diag(&self, j: usize) -> &BigReal {
        &self.upper(j, j).re
    }

    pub fn is_real(&self) -> bool {
        self.upper.iter().all(BigComplex::is_real)
    }

    pub fn frobenius_norm(&self) -> BigReal {
        let prec = self.prec();
        let mut acc = BigReal::zero(prec);
        for j in 0..self.dim {
            for k in j..self.dim {
                let w = self.upper(j, k).norm_sqr();
                if j == k {
                    acc += &w;
                } else {
                    acc += &w.mul_u64(2);
                }
            }
        }
        acc.sqrt()
    }

    pub fn trace(&self) -> BigReal {
        let mut acc = BigReal::zero(self.prec());
        for j in 0..self.dim {
            acc += self.diag(j);
        }
        acc
    }

    /// Largest |entry| strictly above the diagonal.
    pub fn max_offdiag_abs(&self) -> BigReal {
        let mut best = BigReal::zero(self.prec());
        for j in 0..self.dim {
            for k in (j + 1)..self.dim {
                let a = self.upper(j, k).abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Leading principal submatrix of size `m`.
    pub fn leading(&self, m: usize) -> Self {
        assert!(m <= self.dim);
        Self::from_upper_fn(m, |j, k| self.upper(j, k).clone())
    }

    pub fn scaled(&self, k: &BigReal) -> Self {
        HermitianMatrix { dim: self.dim, upper: self.upper.iter().map(|z| z.scale(k)).collect() }
    }

    pub fn neg(&self) -> Self {
        HermitianMatrix { dim: self.dim, upper: self.upper.iter().map(|z| -z).collect() }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        HermitianMatrix {
            dim: self.dim,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        HermitianMatrix {
            dim: self.dim,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |j, k| self.get(j, k))
    }

    /// C* · M · C for a square `C`.
    pub fn congruence(&self, c: &ComplexMatrix) -> Self {
        let m = self.to_dense();
        let prod = c.adjoint().matmul(&m).matmul(c);
        HermitianMatrix::from_upper_fn(prod.rows(), |j, k| prod.get(j, k).clone())
    }
}

/// General dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl ComplexMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigComplex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for k in 0..cols {
                data.push(f(j, k));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Self::from_fn(rows, cols, |_, _| BigComplex::zero(prec))
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        Self::from_fn(dim, dim, |j, k| if j == k { BigComplex::one(prec) } else { BigComplex::zero(prec) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, k: usize) -> &BigComplex {
        &self.data[j * self.cols + k]
    }

    pub fn get_mut(&mut self, j: usize, k: usize) -> &mut BigComplex {
        &mut self.data[j * self.cols + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: BigComplex) {
        self.data[j * self.cols + k] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |j, k| self.get(k, j).conj())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let prec = self.data.first().map(BigComplex::prec).unwrap_or(64);
        Self::from_fn(self.rows, other.cols, |j, k| {
            let mut acc = BigComplex::zero(prec);
            for l in 0..self.cols {
                acc += &(self.get(j, l) * other.get(l, k));
            }
            acc
        })
    }

    pub fn column(&self, k: usize) -> Vec<BigComplex> {
        (0..self.rows).map(|j| self.get(j, k).clone()).collect()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &ComplexMatrix) -> BigReal {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let prec = self.data.first().map(BigComplex::prec).unwrap_or(64);
        let mut acc = BigReal::zero(prec);
        for (a, b) in self.data.iter().zip(&other.data) {
            acc += &(a - b).norm_sqr();
        }
        acc.sqrt()
    }

    pub fn frobenius_norm(&self) -> BigReal {
        let prec = self.data.first().map(BigComplex::prec).unwrap_or(64);
        let mut acc = BigReal::zero(prec);
        for a in &self.data {
            acc += &a.norm_sqr();
        }
        acc.sqrt()
    }
}
