use serde_json::{json, Value};

use super::{FiniteMatrix, Matrix, MatrixError, Window};
use crate::ring::Ring;

/// `[[i, j, "element"], ...]` sorted by `(i, j)`.
pub fn triples_json<R: Ring>(m: &FiniteMatrix<R>) -> Value {
    Value::Array(
        m.iter()
            .map(|(i, j, r)| json!([i, j, m.ring().format(r)]))
            .collect(),
    )
}

/// `{"bound": n, "entries": [...]}` for the window of any matrix.
pub fn window_report_json<R: Ring>(m: &Matrix<R>, w: Window) -> Value {
    json!({
        "bound": w.bound(),
        "entries": triples_json(&m.window_of(w)),
    })
}

/// Inverse of [`triples_json`]; repeated positions are summed.
pub fn parse_triples<R: Ring>(ring: &R, value: &Value) -> Result<FiniteMatrix<R>, MatrixError> {
    let malformed = |what: &str| MatrixError::Malformed(format!("{what}: {value}"));
    let items = value.as_array().ok_or_else(|| malformed("expected an array of triples"))?;
    let mut entries = Vec::with_capacity(items.len());
    for item in items {
        let triple = item
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| malformed("expected [i, j, \"element\"]"))?;
        let index = |v: &Value| {
            v.as_u64()
                .map(|k| k as usize)
                .ok_or_else(|| malformed("indices must be natural numbers"))
        };
        let text = triple[2]
            .as_str()
            .ok_or_else(|| malformed("elements are given as strings"))?;
        let r = ring
            .parse(text)
            .map_err(|e| MatrixError::Malformed(e.to_string()))?;
        entries.push((index(&triple[0])?, index(&triple[1])?, r));
    }
    Ok(FiniteMatrix::from_entries(ring, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Operator;
    use crate::ring::{Mat2, PolyZ};

    #[test]
    fn triples_are_sorted_and_round_trip() {
        let m = Mat2::new(3).unwrap();
        let a = FiniteMatrix::from_entries(&m, [(2, 0, [1, 0, 0, 2]), (0, 5, [0, 1, 0, 0])]);
        let v = triples_json(&a);
        assert_eq!(
            v.to_string(),
            r#"[[0,5,"[[0,1],[0,0]]"],[2,0,"[[1,0],[0,2]]"]]"#
        );
        assert_eq!(parse_triples(&m, &v).unwrap(), a);
    }

    #[test]
    fn window_report_shape() {
        let s: Matrix<PolyZ> = Operator::shift(&PolyZ).into();
        let v = window_report_json(&s, Window::new(3).unwrap());
        assert_eq!(v.to_string(), r#"{"bound":3,"entries":[[1,0,"[1]"],[2,1,"[1]"]]}"#);
    }

    #[test]
    fn malformed_triples_rejected() {
        let bad = serde_json::json!([[0, -1, "[1]"]]);
        assert!(parse_triples(&PolyZ, &bad).is_err());
        assert!(parse_triples(&PolyZ, &serde_json::json!([[0, 1]])).is_err());
        assert!(parse_triples(&PolyZ, &serde_json::json!([[0, 1, "t"]])).is_err());
    }
}
