use crate::error::{Error, Result};

/// `(nn·n² + n1·n + jj·j² + j1·j + nj·n·j + c) / den` in scaled units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    pub nn: i64,
    pub n1: i64,
    pub jj: i64,
    pub j1: i64,
    pub nj: i64,
    pub c: i64,
    pub den: i64,
}

impl QuadForm {
    /// `(a n² + b n) / den`.
    pub fn in_n(a: i64, b: i64, den: i64) -> Self {
        QuadForm { nn: a, n1: b, jj: 0, j1: 0, nj: 0, c: 0, den }
    }

    pub fn at(&self, n: i64, j: i64) -> Result<i64> {
        let num = self.nn * n * n + self.n1 * n + self.jj * j * j + self.j1 * j + self.nj * n * j + self.c;
        if self.den == 0 || num % self.den != 0 {
            return Err(Error::InvalidArgument(format!(
                "exponent {num}/{} at (n, j) = ({n}, {j}) is not a whole scaled unit",
                self.den
            )));
        }
        Ok(num / self.den)
    }
}
