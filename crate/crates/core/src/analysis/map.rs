use crate::error::Result;
use crate::matrix::{MatchMatrix, WinVector};

/// A function from match matrices to win vectors, evaluated pointwise at
/// rational matrices.
pub trait TournamentMap: Send + Sync {
    fn players(&self) -> usize;
    fn eval(&self, matrix: &MatchMatrix) -> Result<WinVector>;
    fn name(&self) -> String {
        "map".to_string()
    }
}

/// Ignores the matrix and always returns the same vector.
#[derive(Clone, Debug)]
pub struct ConstantMap(pub WinVector);

impl TournamentMap for ConstantMap {
    fn players(&self) -> usize {
        self.0.n()
    }

    fn eval(&self, _: &MatchMatrix) -> Result<WinVector> {
        Ok(self.0.clone())
    }

    fn name(&self) -> String {
        format!("constant{}", self.0)
    }
}
