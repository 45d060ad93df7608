//! JSON input documents shared by the command line and tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locfun::{LocFun, LocFunFile};
use crate::sft::TransitionMatrix;

/// `{"matrix": [[0, 1], [1, 1]]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<i64>>,
}

pub fn parse_matrix(json: &str) -> Result<TransitionMatrix> {
    let file: MatrixFile =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("matrix file: {e}")))?;
    TransitionMatrix::new(file.matrix)
}

pub fn parse_locfun(a: &TransitionMatrix, json: &str) -> Result<LocFun> {
    let file: LocFunFile =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("function file: {e}")))?;
    LocFun::from_file(a, &file)
}

/// Parses `"1,2,3"` (spaces allowed) into symbols; the empty string gives no symbols.
pub fn parse_symbols(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Invalid(format!("bad symbol {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documents() {
        let a = parse_matrix(r#"{"matrix": [[1,1],[1,0]]}"#).unwrap();
        assert_eq!(a.n(), 2);
        assert!(parse_matrix(r#"{"matrix": [[1,2],[1,0]]}"#).is_err());
        assert!(parse_matrix("[1]").is_err());
        let f = parse_locfun(&a, r#"{"depth": 1, "values": {"1": 3, "2": 4}}"#).unwrap();
        assert_eq!(f.eval(&[2]).unwrap(), 4);
        assert!(parse_locfun(&a, r#"{"depth": 1, "values": {"1": 3}}"#).is_err());
        assert_eq!(parse_symbols("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_symbols("1,x").is_err());
    }
}
