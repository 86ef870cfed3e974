use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{attributes_from_rows, GraphSignal};
use crate::error::{DidmError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
    #[serde(default)]
    attributes: Option<Vec<Vec<f64>>>,
}

/// Parses the graph JSON exchange format from a string.
pub fn parse_graph_json(text: &str) -> Result<GraphSignal> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| {
        DidmError::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let n = raw.n;
    if n == 0 {
        return Err(DidmError::parse("n", "graph must have at least one node"));
    }
    let adjacency = match (raw.adjacency, raw.edges) {
        (Some(_), Some(_)) => {
            return Err(DidmError::parse("root", "give either \"adjacency\" or \"edges\", not both"))
        }
        (None, None) => Array2::zeros((n, n)),
        (Some(rows), None) => {
            if rows.len() != n {
                return Err(DidmError::parse(
                    "adjacency",
                    format!("{} rows for n = {n}", rows.len()),
                ));
            }
            if let Some(i) = rows.iter().position(|r| r.len() != n) {
                return Err(DidmError::parse(
                    format!("adjacency[{i}]"),
                    format!("row has {} entries for n = {n}", rows[i].len()),
                ));
            }
            Array2::from_shape_vec((n, n), rows.into_iter().flatten().collect())
                .expect("shape checked above")
        }
        (None, Some(edges)) => {
            let mut a = Array2::zeros((n, n));
            for (k, [i, j]) in edges.into_iter().enumerate() {
                if i >= n || j >= n {
                    return Err(DidmError::parse(
                        format!("edges[{k}]"),
                        format!("endpoint out of range for n = {n}"),
                    ));
                }
                a[[i, j]] = 1.0;
                a[[j, i]] = 1.0;
            }
            a
        }
    };
    let attributes = attributes_from_rows(n, raw.attributes.unwrap_or_else(|| vec![Vec::new(); n]))
        .map_err(|e| DidmError::parse("attributes", e.to_string()))?;
    GraphSignal::new(adjacency, attributes)
}

/// Serializes with a dense `"adjacency"` so that weights survive exactly.
pub fn to_graph_json(g: &GraphSignal) -> String {
    let raw = GraphJson {
        n: g.node_count(),
        adjacency: Some(g.adjacency().rows().into_iter().map(|r| r.to_vec()).collect()),
        edges: None,
        attributes: Some(g.attributes().rows().into_iter().map(|r| r.to_vec()).collect()),
    };
    serde_json::to_string(&raw).expect("graph JSON serialization cannot fail")
}

pub fn load_graph_json(path: impl AsRef<Path>) -> Result<GraphSignal> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DidmError::io(path, e))?;
    parse_graph_json(&text).map_err(|e| match e {
        DidmError::Parse { location, message } => DidmError::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn save_graph_json(path: impl AsRef<Path>, g: &GraphSignal) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_graph_json(g)).map_err(|e| DidmError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edges_imply_symmetric_zero_one_adjacency() {
        let g = parse_graph_json(r#"{"n": 3, "edges": [[0, 2]], "attributes": [[1], [2], [3]]}"#)
            .unwrap();
        assert_eq!(g.adjacency()[[2, 0]], 1.0);
        assert_eq!(g.edge_count(), 1);
        let dense = parse_graph_json(
            r#"{"n": 3, "adjacency": [[0,0,1],[0,0,0],[1,0,0]], "attributes": [[1], [2], [3]]}"#,
        )
        .unwrap();
        assert_eq!(g, dense);
    }

    #[test]
    fn weight_above_one_rejected() {
        let err = parse_graph_json(r#"{"n": 2, "adjacency": [[0, 1.5], [1.5, 0]]}"#).unwrap_err();
        assert!(err.to_string().contains("adjacency[0][1]"), "{err}");
    }

    #[test]
    fn asymmetric_and_malformed_rejected() {
        assert!(parse_graph_json(r#"{"n": 2, "adjacency": [[0, 1], [0, 0]]}"#).is_err());
        let err = parse_graph_json("{\"n\": 2,\n \"adjacency\": [[0, 1], [1, 0]").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    fn arb_graph() -> impl Strategy<Value = GraphSignal> {
        (1usize..6, 0usize..3).prop_flat_map(|(n, d)| {
            (
                proptest::collection::vec(0.0f64..=1.0, n * n),
                proptest::collection::vec(-1e3f64..1e3, n * d),
            )
                .prop_map(move |(w, x)| {
                    let a = Array2::from_shape_fn((n, n), |(i, j)| w[i.min(j) * n + i.max(j)]);
                    let f = Array2::from_shape_vec((n, d), x).unwrap();
                    GraphSignal::new(a, f).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bitwise(g in arb_graph()) {
            let back = parse_graph_json(&to_graph_json(&g)).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
