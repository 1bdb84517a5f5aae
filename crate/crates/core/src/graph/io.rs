//! Edge-list files.
//!
//! * CSV: one edge per line, `u,v[,w]`; `#` starts a comment line, and a
//!   comment of the form `# optimum: 12` records a MaxCut value.
//! * JSON: `{"n": 4, "edges": [[0, 1, 1.0], ...]}` with an optional
//!   `"optimum"` field carrying a recorded MaxCut value.
//!
//! Sparse or non-zero-based ids are remapped to `0..n` in ascending order;
//! the original ids are kept in [`LoadedGraph::vertex_ids`].

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Csv,
    Json,
}

impl GraphFormat {
    /// Guess from a file extension, defaulting to CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::Csv,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original id of each dense vertex, present only when remapping happened.
    pub vertex_ids: Option<Vec<u64>>,
    pub recorded_optimum: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<Vec<serde_json::Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    optimum: Option<f64>,
}

pub fn load_edge_list<R: Read>(source: R, format: GraphFormat) -> Result<Graph> {
    load_edge_list_mapped(source, format).map(|loaded| loaded.graph)
}

pub fn load_edge_list_mapped<R: Read>(source: R, format: GraphFormat) -> Result<LoadedGraph> {
    match format {
        GraphFormat::Csv => load_csv(source),
        GraphFormat::Json => load_json(source),
    }
}

fn load_csv<R: Read>(source: R) -> Result<LoadedGraph> {
    let mut raw = Vec::new();
    let mut recorded_optimum = None;
    for (index, text) in BufReader::new(source).lines().enumerate() {
        let text = text?;
        let line = index as u64 + 1;
        let trimmed = text.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("optimum:") {
                recorded_optimum = Some(
                    value
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse { line, message: format!("bad recorded optimum {value:?}: {e}") })?,
                );
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse { line, message: format!("expected `u,v[,w]`, got {} fields", fields.len()) });
        }
        let id = |k: usize| -> Result<u64> {
            fields[k]
                .parse::<u64>()
                .map_err(|e| Error::Parse { line, message: format!("bad vertex id {:?}: {e}", fields[k]) })
        };
        let weight = match fields.get(2) {
            None | Some(&"") => 1.0,
            Some(text) => {
                text.parse::<f64>().map_err(|e| Error::Parse { line, message: format!("bad weight {text:?}: {e}") })?
            }
        };
        raw.push((id(0)?, id(1)?, weight, line));
    }
    let max_id = raw.iter().map(|&(u, v, _, _)| u.max(v)).max();
    let mut used: Vec<u64> = raw.iter().flat_map(|&(u, v, _, _)| [u, v]).collect();
    used.sort_unstable();
    used.dedup();
    let contiguous = max_id.is_none_or(|m| used.len() as u64 == m + 1);
    if contiguous {
        let n = max_id.map_or(0, |m| m as usize + 1);
        let graph = Graph::from_numbered(n, raw.into_iter().map(|(u, v, w, line)| (u as usize, v as usize, w, line)))?;
        return Ok(LoadedGraph { graph, vertex_ids: None, recorded_optimum });
    }
    let index: BTreeMap<u64, usize> = used.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let graph =
        Graph::from_numbered(used.len(), raw.into_iter().map(|(u, v, w, line)| (index[&u], index[&v], w, line)))?;
    Ok(LoadedGraph { graph, vertex_ids: Some(used), recorded_optimum })
}

fn load_json<R: Read>(source: R) -> Result<LoadedGraph> {
    let file: JsonGraph = serde_json::from_reader(source)?;
    let mut triples = Vec::with_capacity(file.edges.len());
    for (i, entry) in file.edges.iter().enumerate() {
        let line = i as u64 + 1;
        let as_id = |x: &serde_json::Number| -> Result<usize> {
            x.as_u64().map(|id| id as usize).ok_or_else(|| Error::Parse { line, message: format!("bad vertex id {x}") })
        };
        let as_weight = |x: &serde_json::Number| -> Result<f64> {
            x.as_f64().ok_or_else(|| Error::Parse { line, message: format!("bad weight {x}") })
        };
        match entry.as_slice() {
            [u, v] => triples.push((as_id(u)?, as_id(v)?, 1.0, line)),
            [u, v, w] => triples.push((as_id(u)?, as_id(v)?, as_weight(w)?, line)),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("edge entry must be [u, v] or [u, v, w], got {entry:?}"),
                })
            }
        }
    }
    let graph = Graph::from_numbered(file.n, triples)?;
    Ok(LoadedGraph { graph, vertex_ids: None, recorded_optimum: file.optimum })
}

/// Write the canonical form: edges with `u < v` in lexicographic order.
pub fn save_edge_list<W: Write>(graph: &Graph, sink: W, format: GraphFormat) -> Result<()> {
    save_edge_list_with_optimum(graph, sink, format, None)
}

pub fn save_edge_list_with_optimum<W: Write>(
    graph: &Graph,
    mut sink: W,
    format: GraphFormat,
    optimum: Option<f64>,
) -> Result<()> {
    match format {
        GraphFormat::Csv => {
            if let Some(v) = optimum {
                writeln!(sink, "# optimum: {v}")?;
            }
            for e in graph.edges() {
                writeln!(sink, "{},{},{}", e.u, e.v, e.weight)?;
            }
        }
        GraphFormat::Json => {
            let file = JsonGraph {
                n: graph.n(),
                edges: graph
                    .edges()
                    .iter()
                    .map(|e| {
                        let weight = serde_json::Number::from_f64(e.weight).expect("graph weights are finite");
                        vec![(e.u as u64).into(), (e.v as u64).into(), weight]
                    })
                    .collect(),
                optimum,
            };
            serde_json::to_writer(&mut sink, &file)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_regular;

    fn csv(text: &str) -> Result<Graph> {
        load_edge_list(text.as_bytes(), GraphFormat::Csv)
    }

    #[test]
    fn single_edge() {
        let g = csv("0,1,1.0\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(g.edges()[0].weight, 1.0);
    }

    #[test]
    fn comments_blank_lines_and_default_weight() {
        let g = csv("# header\n0,1\n\n1, 2, 2.5\n# trailing\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edges()[1].weight, 2.5);
    }

    #[test]
    fn self_loop_reports_line() {
        let err = csv("0,1\n# c\n0,0,1.0\n").unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 3, vertex: 0 }), "{err}");
    }

    #[test]
    fn duplicate_reports_line() {
        let err = csv("0,1\n1,2\n1,0\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { line: 3, .. }), "{err}");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(csv("0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(csv("0,1\na,2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(csv("0,1,x\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sparse_ids_are_remapped() {
        let loaded = load_edge_list_mapped("10,30\n30,20,2\n".as_bytes(), GraphFormat::Csv).unwrap();
        assert_eq!(loaded.vertex_ids, Some(vec![10, 20, 30]));
        assert_eq!(loaded.graph.n(), 3);
        assert_eq!(loaded.graph.edge_id(0, 2), Some(0));
        assert_eq!(loaded.graph.edges()[1].weight, 2.0);
    }

    #[test]
    fn json_with_optimum() {
        let text = r#"{"n": 4, "edges": [[0, 1], [1, 2, 0.5], [2, 3, 1]], "optimum": 2.5}"#;
        let loaded = load_edge_list_mapped(text.as_bytes(), GraphFormat::Json).unwrap();
        assert_eq!(loaded.graph.m(), 3);
        assert_eq!(loaded.recorded_optimum, Some(2.5));
        let bad = r#"{"n": 2, "edges": [[0, 0, 1]]}"#;
        assert!(matches!(load_edge_list(bad.as_bytes(), GraphFormat::Json), Err(Error::SelfLoop { line: 1, .. })));
    }

    #[test]
    fn dataset_style_file_round_trip() {
        let g = generate_regular(128, 3, 11).unwrap();
        let mut buf = Vec::new();
        save_edge_list(&g, &mut buf, GraphFormat::Csv).unwrap();
        let back = load_edge_list(buf.as_slice(), GraphFormat::Csv).unwrap();
        assert_eq!(back.m(), 192);
        assert!((0..128).all(|v| back.degree(v) == 3));
        assert_eq!(back, g);
    }

    #[test]
    fn json_round_trip_keeps_isolated_vertices() {
        let g = Graph::new(5, [(3, 1, 0.75)]).unwrap();
        let mut buf = Vec::new();
        save_edge_list(&g, &mut buf, GraphFormat::Json).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "{\"n\":5,\"edges\":[[1,3,0.75]]}\n");
        assert_eq!(load_edge_list(buf.as_slice(), GraphFormat::Json).unwrap(), g);
    }

    #[test]
    fn recorded_optimum_round_trips() {
        let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        for format in [GraphFormat::Csv, GraphFormat::Json] {
            let mut buf = Vec::new();
            save_edge_list_with_optimum(&g, &mut buf, format, Some(2.0)).unwrap();
            let back = load_edge_list_mapped(buf.as_slice(), format).unwrap();
            assert_eq!(back.recorded_optimum, Some(2.0));
            assert_eq!(back.graph, g);
        }
        assert!(load_edge_list("# optimum: x\n0,1\n".as_bytes(), GraphFormat::Csv).is_err());
    }
}
