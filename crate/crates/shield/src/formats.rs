//! On-disk formats: graph JSON, transmission text, trial CSV.
//!
//! All outputs are plain text and canonical — identical inputs produce
//! byte-identical files, so runs can be diffed.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use graphshield_core::bits::BitVec;
use graphshield_core::codec::Transmission;
use graphshield_core::Graph;

use crate::error::{Error, Result};

/// Canonical JSON shape: `{"num_vertices": n, "edges": [[u, v], ...]}` with
/// `u < v` and edges sorted lexicographically.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let file = GraphFile {
        num_vertices: g.num_vertices(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("graph JSON: {e}")))?;
    Ok(Graph::from_edges(
        file.num_vertices,
        file.edges.iter().map(|e| (e[0], e[1])),
    )?)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    Ok(fs::write(path, graph_to_json(g))?)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    graph_from_json(&fs::read_to_string(path)?)
}

/// Header line `N=<blocks> K=<copies>`, then `K` lines of `N` ASCII 0/1
/// characters, one line per copy (copy-major order).
pub fn transmission_to_text(t: &Transmission) -> String {
    let n = t.num_blocks();
    let k = t.num_copies();
    let mut out = String::with_capacity((n + 1) * k + 24);
    out.push_str(&format!("N={n} K={k}\n"));
    for copy in 0..k {
        for block in 0..n {
            out.push(if t.get(block, copy) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn transmission_from_text(text: &str) -> Result<Transmission> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty transmission file".into()))?;
    let (n, k) = parse_header(header)?;
    let mut bits = BitVec::zeros(n * k);
    let mut copies = 0usize;
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        if i >= k {
            return Err(Error::Format(format!("more than K={k} copy lines")));
        }
        if line.len() != n {
            return Err(Error::Format(format!(
                "copy line {i} has {} characters, expected N={n}",
                line.len()
            )));
        }
        for (j, c) in line.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => bits.set(i * n + j, true),
                other => {
                    return Err(Error::Format(format!(
                        "copy line {i} column {j}: invalid character {:?}",
                        other as char
                    )))
                }
            }
        }
        copies += 1;
    }
    if copies != k {
        return Err(Error::Format(format!(
            "found {copies} copy lines, expected K={k}"
        )));
    }
    Ok(Transmission::new(n, k, bits)?)
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut n = None;
    let mut k = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("N=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = field.strip_prefix("K=") {
            k = v.parse::<usize>().ok();
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(Error::Format(format!(
            "bad header {header:?}, expected `N=<n> K=<k>`"
        ))),
    }
}

pub fn write_transmission(path: &Path, t: &Transmission) -> Result<()> {
    Ok(fs::write(path, transmission_to_text(t))?)
}

pub fn read_transmission(path: &Path) -> Result<Transmission> {
    transmission_from_text(&fs::read_to_string(path)?)
}

/// Ten significant digits, scientific notation; `0` stays `"0"`.
pub fn format_sig(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value:.9e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphshield_core::codec::{encode, NoiseSpec};
    use graphshield_core::graph::vectorize;
    use graphshield_core::RngSeed;

    #[test]
    fn graph_json_round_trip_is_canonical() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1)]).unwrap();
        let text = graph_to_json(&g);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(graph_to_json(&back), text, "byte-identical re-encode");
        // Normalized edge order survives the trip: (2,3) came first on input.
        let edges = back.edges();
        assert_eq!(edges, &[(0, 1), (2, 3)]);
    }

    #[test]
    fn graph_json_rejects_garbage() {
        assert!(graph_from_json("{}").is_err());
        assert!(graph_from_json("{\"num_vertices\": 3, \"edges\": [[0, 3]]}").is_err());
        assert!(graph_from_json("not json").is_err());
    }

    #[test]
    fn transmission_text_round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 4), (2, 3)]).unwrap();
        let s = vectorize(&g);
        let t = encode(&s, 4, &NoiseSpec::new(0.2).unwrap(), RngSeed::new(3, 1)).unwrap();
        let text = transmission_to_text(&t);
        assert!(text.starts_with("N=10 K=4\n"));
        let back = transmission_from_text(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn transmission_text_errors() {
        assert!(transmission_from_text("").is_err());
        assert!(transmission_from_text("N=2\n01\n").is_err());
        assert!(transmission_from_text("N=2 K=2\n01\n0\n").is_err());
        assert!(transmission_from_text("N=2 K=2\n01\n0x\n").is_err());
        assert!(transmission_from_text("N=2 K=2\n01\n").is_err());
        assert!(transmission_from_text("N=2 K=2\n01\n10\n11\n").is_err());
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.5), "5.000000000e-1");
        assert_eq!(format_sig(79.78845608028654), "7.978845608e1");
    }
}
