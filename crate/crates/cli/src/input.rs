use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use quasiwide::{edgelist, Graph, Vertex};

use crate::CliError;

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    edgelist::read_graph(BufReader::new(file)).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// `all` or a file of ids separated by whitespace or commas, `#` starts a comment.
pub fn load_ids(spec: &str, g: &Graph) -> Result<Vec<Vertex>, CliError> {
    if spec == "all" {
        return Ok(g.vertices().collect());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    let ids = parse_ids(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    for &v in &ids {
        g.check_vertex(v).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    }
    Ok(ids)
}

pub fn parse_ids(text: &str) -> Result<Vec<Vertex>, String> {
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v = tok
                .parse()
                .map_err(|_| format!("line {}: expected a vertex id, got {tok:?}", i + 1))?;
            ids.push(v);
        }
    }
    Ok(ids)
}

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("expected a..b or a,b,..., got {text:?}");
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}
