use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::laurent::LaurentPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Small dense matrix over [`LaurentPoly`], stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix {rows}x{cols} with {} entries",
                entries.len()
            )));
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        PolyMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_rationals(rows: usize, cols: usize, values: Vec<Rational>) -> Result<Self> {
        Self::new(rows, cols, values.into_iter().map(LaurentPoly::constant).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<LaurentPoly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: LaurentPoly = (0..self.cols).map(|t| self.get(i, t) * other.get(t, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> PolyMatrix {
        self.map(|e| e * c)
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<_>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn substitute(&self, assignment: &BTreeMap<String, LaurentPoly>) -> Result<PolyMatrix> {
        self.try_map(|e| e.substitute(assignment))
    }

    /// Entries as rationals, if every entry is constant.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.entries.iter().map(LaurentPoly::as_constant).collect()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries.iter().map(LaurentPoly::to_json).collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": entries})
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_product() {
        let x = LaurentPoly::var("x");
        let m = PolyMatrix::new(2, 3, (0..6).map(|i| x.pow(i - 2).unwrap()).collect()).unwrap();
        assert_eq!(PolyMatrix::identity(2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&PolyMatrix::identity(3)).unwrap(), m);
        assert!(m.mul(&m).is_err());
    }

    #[test]
    fn small_product() {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
        let a = PolyMatrix::from_rationals(2, 2, r(&[1, 2, 3, 4])).unwrap();
        let b = PolyMatrix::from_rationals(2, 1, r(&[5, 6])).unwrap();
        assert_eq!(a.mul(&b).unwrap().as_rationals().unwrap(), r(&[17, 39]));
    }

    #[test]
    fn shape_checked() {
        assert!(PolyMatrix::new(2, 2, vec![LaurentPoly::zero(); 3]).is_err());
        assert!(PolyMatrix::new(0, 2, vec![]).is_err());
    }
}
