//! L3G text and JSON encodings of linear 3-graphs.
//!
//! L3G layout: optional `#` comment lines, a header line `n m`, then `m` lines `a b c`
//! with `a < b < c < n` in strictly increasing lexicographic order. Lines end in LF.

use serde::{Deserialize, Serialize};

use crate::graph::{validate_linear, GraphError, LinearThreeGraph, Triple};

/// Writes the normalized form. No comments are emitted.
pub fn to_l3g(g: &LinearThreeGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for t in g.edges() {
        out.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>, GraphError> {
    line.split(' ')
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                parse_err(
                    line_no,
                    format!("expected an unsigned integer, found {tok:?}"),
                )
            })
        })
        .collect()
}

/// Parses L3G text. Errors carry 1-based line numbers.
pub fn parse_l3g(text: &str) -> Result<LinearThreeGraph, GraphError> {
    if text.contains('\r') {
        let line = text[..text.find('\r').unwrap()].matches('\n').count() + 1;
        return Err(parse_err(
            line,
            "carriage return found; L3G uses LF line endings",
        ));
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Triple> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut last_line = 0;
    for (idx, line) in body.split('\n').enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        if line.starts_with('#') {
            continue;
        }
        let nums = parse_numbers(line_no, line)?;
        match header {
            None => {
                if nums.len() != 2 {
                    return Err(parse_err(line_no, "header must be `n m`"));
                }
                header = Some((nums[0], nums[1]));
            }
            Some((n, m)) => {
                if nums.len() != 3 {
                    return Err(parse_err(line_no, "edge line must be `a b c`"));
                }
                if edges.len() == m {
                    return Err(parse_err(
                        line_no,
                        format!("more than the declared {m} edges"),
                    ));
                }
                let t = [nums[0], nums[1], nums[2]];
                if !(t[0] < t[1] && t[1] < t[2]) {
                    return Err(parse_err(line_no, "edge must satisfy a < b < c"));
                }
                if t[2] >= n {
                    return Err(parse_err(
                        line_no,
                        format!("vertex {} out of range (n = {n})", t[2]),
                    ));
                }
                if let Some(prev) = edges.last() {
                    if *prev >= t {
                        return Err(parse_err(
                            line_no,
                            "edges must be in strictly increasing lexicographic order",
                        ));
                    }
                }
                edges.push(t);
                edge_lines.push(line_no);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing `n m` header"))?;
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    validate_linear(&edges, n).map_err(|e| match e {
        GraphError::SharedPair { second, .. } | GraphError::DuplicateEdge { second, .. } => {
            parse_err(edge_lines[second], e.to_string())
        }
        GraphError::NoVertices => parse_err(1, e.to_string()),
        other => other,
    })
}

/// JSON shape: `{"n": 9, "edges": [[0,1,2], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<Triple>,
}

impl From<&LinearThreeGraph> for GraphJson {
    fn from(g: &LinearThreeGraph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().to_vec(),
        }
    }
}

impl TryFrom<GraphJson> for LinearThreeGraph {
    type Error = GraphError;

    fn try_from(value: GraphJson) -> Result<Self, Self::Error> {
        for t in &value.edges {
            if !(t[0] < t[1] && t[1] < t[2]) {
                return Err(parse_err(0, "JSON edges must be ascending triples"));
            }
        }
        if value.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(0, "JSON edge array must be strictly sorted"));
        }
        validate_linear(&value.edges, value.n)
    }
}

pub fn to_json(g: &LinearThreeGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph JSON serialization cannot fail")
}

pub fn parse_json(text: &str) -> Result<LinearThreeGraph, GraphError> {
    let raw: GraphJson =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    LinearThreeGraph::try_from(raw)
}

/// Accepts either encoding; JSON is recognized by a leading `{`.
pub fn parse_any(text: &str) -> Result<LinearThreeGraph, GraphError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_l3g(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CROWN: &str = "# the crown\n9 4\n0 1 2\n0 3 4\n1 5 6\n2 7 8\n";

    #[test]
    fn parses_and_writes_crown() {
        let g = parse_l3g(CROWN).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(to_l3g(&g), "9 4\n0 1 2\n0 3 4\n1 5 6\n2 7 8\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let unsorted = "9 2\n0 3 4\n0 1 2\n";
        assert!(matches!(
            parse_l3g(unsorted),
            Err(GraphError::Parse { line: 3, .. })
        ));
        let shared = "4 2\n0 1 2\n0 1 3\n";
        assert!(matches!(
            parse_l3g(shared),
            Err(GraphError::Parse { line: 3, .. })
        ));
        let range = "3 1\n0 1 3\n";
        assert!(matches!(
            parse_l3g(range),
            Err(GraphError::Parse { line: 2, .. })
        ));
        let count = "5 2\n0 1 2\n";
        assert!(matches!(parse_l3g(count), Err(GraphError::Parse { .. })));
        let junk = "5 x\n";
        assert!(matches!(
            parse_l3g(junk),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_l3g("3 1\r\n0 1 2\r\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_l3g("# only a comment\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            parse_l3g("3 1\n2 1 0\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn json_encoding() {
        let g = parse_l3g(CROWN).unwrap();
        let js = to_json(&g);
        assert_eq!(js, r#"{"n":9,"edges":[[0,1,2],[0,3,4],[1,5,6],[2,7,8]]}"#);
        assert_eq!(parse_json(&js).unwrap(), g);
        assert_eq!(parse_any(&js).unwrap(), g);
        assert!(parse_json(r#"{"n":9,"edges":[[0,3,4],[0,1,2]]}"#).is_err());
        assert!(parse_json(r#"{"n":9,"edges":[[1,0,2]]}"#).is_err());
    }

    #[test]
    fn empty_graph_round_trips() {
        let g = parse_l3g("5 0\n").unwrap();
        assert_eq!(to_l3g(&g), "5 0\n");
    }
}
