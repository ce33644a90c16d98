use super::poly::Polynomial;
use crate::error::{Error, Result};

/// A square matrix of polynomials over a common ambient `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Builds a `size x size` matrix from row-major entries.
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        let mut ambient = None;
        for row in rows {
            if row.len() != size {
                return Err(Error::Structural(format!("row of length {} in a {size}x{size} matrix", row.len())));
            }
            for p in row {
                match ambient {
                    None => ambient = Some(p.n()),
                    Some(n) if n != p.n() => {
                        return Err(Error::Structural(format!("entries over n={n} and n={}", p.n())));
                    }
                    _ => {}
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { size, entries })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Result<PolyMatrix> {
        PolyMatrix::from_rows((0..size).map(|i| (0..size).map(|j| f(i, j)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.size + j]
    }

    /// Determinant by cofactor expansion along the first column.
    ///
    /// The empty matrix has determinant 1 over the supplied ambient `n`.
    pub fn determinant(&self, ambient_n: usize) -> Polynomial {
        let rows: Vec<usize> = (0..self.size).collect();
        self.minor_det(&rows, 0, ambient_n)
    }

    fn minor_det(&self, rows: &[usize], col: usize, ambient_n: usize) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::one(ambient_n);
        }
        if rows.len() == 1 {
            return self.get(rows[0], col).clone();
        }
        let mut acc = Polynomial::zero(ambient_n);
        for (pos, &r) in rows.iter().enumerate() {
            let entry = self.get(r, col);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            let term = entry * &self.minor_det(&rest, col + 1, ambient_n);
            if pos % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.size != other.size {
            return Err(Error::Structural("matrix sizes differ".into()));
        }
        let s = self.size;
        let mut rows = Vec::with_capacity(s);
        for i in 0..s {
            let mut row = Vec::with_capacity(s);
            for j in 0..s {
                let mut acc = Polynomial::zero(self.get(i, 0).n());
                for k in 0..s {
                    acc += &self.get(i, k).try_mul(other.get(k, j))?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        PolyMatrix::from_rows(rows)
    }
}

/// Determinant of a numeric rational matrix by Gaussian elimination.
pub fn rational_determinant(rows: &[Vec<super::Rational>]) -> super::Rational {
    use num_traits::{One, Zero};
    let size = rows.len();
    let mut m: Vec<Vec<super::Rational>> = rows.to_vec();
    let mut det = super::Rational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !m[r][col].is_zero()) else {
            return super::Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..size {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= &f * src;
            }
        }
    }
    det
}
