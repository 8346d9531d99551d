//! TU benchmark format ingestion.
//!
//! A TU dataset directory holds `<NAME>_A.txt` (edge list, 1-based global
//! node ids, comma separated) and `<NAME>_graph_indicator.txt` (graph id
//! per node), plus optional `<NAME>_node_labels.txt`,
//! `<NAME>_node_attributes.txt` and `<NAME>_graph_labels.txt`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Dataset, DatasetMeta, FeatureKind};
use crate::linalg::Matrix;

/// Load a TU-format dataset. Feature priority: continuous attributes win
/// over one-hot labels (both are concatenated when both files exist), and
/// the node degree is the fallback when neither file is present.
pub fn load_tu_dataset(dir: &Path) -> Result<Dataset> {
    let prefix = detect_prefix(dir)?;
    let file = |suffix: &str| dir.join(format!("{prefix}_{suffix}.txt"));

    let indicator_path = file("graph_indicator");
    let adjacency_path = file("A");
    if !indicator_path.exists() {
        return Err(Error::Ingest(format!(
            "missing mandatory file {}",
            indicator_path.display()
        )));
    }
    if !adjacency_path.exists() {
        return Err(Error::Ingest(format!(
            "missing mandatory file {}",
            adjacency_path.display()
        )));
    }

    // graph_indicator: 1-based graph id per 1-based global node.
    let indicator: Vec<usize> = read_lines(&indicator_path)?
        .iter()
        .map(|s| parse_usize(s, "graph_indicator"))
        .collect::<Result<_>>()?;
    let n_total = indicator.len();
    if n_total == 0 {
        return Err(Error::Format("graph_indicator is empty".into()));
    }
    let n_graphs = *indicator.iter().max().unwrap();
    for (i, &g) in indicator.iter().enumerate() {
        if g == 0 || g > n_graphs {
            return Err(Error::Format(format!(
                "graph_indicator line {} has graph id {}",
                i + 1,
                g
            )));
        }
    }

    // Global node id -> (graph index, local node id).
    let mut local_of: Vec<(usize, usize)> = Vec::with_capacity(n_total);
    let mut sizes = vec![0usize; n_graphs];
    for &g in &indicator {
        local_of.push((g - 1, sizes[g - 1]));
        sizes[g - 1] += 1;
    }

    // Edges: symmetrized, deduplicated, unit weight, self-loops dropped.
    let mut edge_sets: Vec<BTreeMap<(usize, usize), f64>> =
        vec![BTreeMap::new(); n_graphs];
    for (lineno, line) in read_lines(&adjacency_path)?.iter().enumerate() {
        let (a, b) = parse_pair(line, lineno + 1)?;
        if a == 0 || b == 0 || a > n_total || b > n_total {
            return Err(Error::Format(format!(
                "edge ({a},{b}) at line {} references unknown node (dataset has {n_total})",
                lineno + 1
            )));
        }
        let (ga, ua) = local_of[a - 1];
        let (gb, ub) = local_of[b - 1];
        if ga != gb {
            return Err(Error::Format(format!(
                "edge ({a},{b}) at line {} crosses graphs {} and {}",
                lineno + 1,
                ga + 1,
                gb + 1
            )));
        }
        if ua == ub {
            continue;
        }
        let key = (ua.min(ub), ua.max(ub));
        edge_sets[ga].entry(key).or_insert(1.0);
    }

    // Optional per-node files.
    let labels_path = file("node_labels");
    let node_labels: Option<Vec<i64>> = if labels_path.exists() {
        let ls = read_lines(&labels_path)?;
        if ls.len() != n_total {
            return Err(Error::Format(format!(
                "node_labels has {} lines for {} nodes",
                ls.len(),
                n_total
            )));
        }
        Some(ls.iter().map(|s| parse_i64(s, "node_labels")).collect::<Result<_>>()?)
    } else {
        None
    };
    let attrs_path = file("node_attributes");
    let node_attrs: Option<Vec<Vec<f64>>> = if attrs_path.exists() {
        let ls = read_lines(&attrs_path)?;
        if ls.len() != n_total {
            return Err(Error::Format(format!(
                "node_attributes has {} lines for {} nodes",
                ls.len(),
                n_total
            )));
        }
        let rows: Vec<Vec<f64>> = ls
            .iter()
            .map(|s| {
                s.split(',')
                    .map(|t| {
                        t.trim().parse::<f64>().map_err(|_| {
                            Error::Format(format!("bad attribute value '{t}'"))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Format("ragged node_attributes rows".into()));
        }
        Some(rows)
    } else {
        None
    };

    // Optional graph labels, remapped to dense 0-based class ids.
    let glabels_path = file("graph_labels");
    let graph_labels: Option<Vec<usize>> = if glabels_path.exists() {
        let ls = read_lines(&glabels_path)?;
        if ls.len() != n_graphs {
            return Err(Error::Format(format!(
                "graph_labels has {} lines for {} graphs",
                ls.len(),
                n_graphs
            )));
        }
        let raw: Vec<i64> = ls.iter().map(|s| parse_i64(s, "graph_labels")).collect::<Result<_>>()?;
        let mut classes: Vec<i64> = raw.clone();
        classes.sort_unstable();
        classes.dedup();
        Some(
            raw.iter()
                .map(|v| classes.binary_search(v).unwrap())
                .collect(),
        )
    } else {
        None
    };
    let num_classes = graph_labels
        .as_ref()
        .map(|ls| ls.iter().max().map(|m| m + 1).unwrap_or(0))
        .unwrap_or(0);

    // One-hot alphabet over all node labels in the dataset.
    let label_alphabet: Vec<i64> = match &node_labels {
        Some(ls) => {
            let mut a = ls.clone();
            a.sort_unstable();
            a.dedup();
            a
        }
        None => Vec::new(),
    };

    let (feature_kind, continuous_dim) = match (&node_attrs, &node_labels) {
        (Some(a), _) => (FeatureKind::Continuous, a[0].len()),
        (None, Some(_)) => (FeatureKind::OneHotLabel, 0),
        (None, None) => (FeatureKind::DegreeFallback, 0),
    };
    let feature_dim = continuous_dim
        + label_alphabet.len()
        + if feature_kind == FeatureKind::DegreeFallback { 1 } else { 0 };

    // Assemble graphs.
    let mut graphs = Vec::with_capacity(n_graphs);
    for gi in 0..n_graphs {
        let n = sizes[gi];
        if n == 0 {
            return Err(Error::Format(format!("graph {} has no nodes", gi + 1)));
        }
        let edges: Vec<(usize, usize, f64)> = edge_sets[gi]
            .iter()
            .map(|(&(u, v), &w)| (u, v, w))
            .collect();
        let mut features = Matrix::zeros(n, feature_dim);
        match feature_kind {
            FeatureKind::DegreeFallback => {
                let mut deg = vec![0.0f64; n];
                for &(u, v, w) in &edges {
                    deg[u] += w;
                    deg[v] += w;
                }
                for (u, d) in deg.iter().enumerate() {
                    features[(u, 0)] = *d;
                }
            }
            _ => {
                // Filled from the global files below.
            }
        }
        graphs.push((n, edges, features));
    }
    if let Some(attrs) = &node_attrs {
        for (global, row) in attrs.iter().enumerate() {
            let (gi, u) = local_of[global];
            for (c, v) in row.iter().enumerate() {
                graphs[gi].2[(u, c)] = *v;
            }
        }
    }
    if let Some(labels) = &node_labels {
        for (global, l) in labels.iter().enumerate() {
            let (gi, u) = local_of[global];
            let slot = continuous_dim + label_alphabet.binary_search(l).unwrap();
            graphs[gi].2[(u, slot)] = 1.0;
        }
    }

    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| prefix.clone());
    let graphs: Vec<AttributedGraph> = graphs
        .into_iter()
        .enumerate()
        .map(|(gi, (n, edges, features))| {
            let label = graph_labels.as_ref().map(|ls| ls[gi]);
            AttributedGraph::new(n, edges, features, label)
        })
        .collect::<Result<_>>()?;

    Ok(Dataset {
        graphs,
        meta: DatasetMeta {
            name,
            num_classes,
            feature_dim,
            feature_kind,
            continuous_dim,
        },
    })
}

// The file prefix is usually the dataset name; detect it from `*_A.txt`.
fn detect_prefix(dir: &Path) -> Result<String> {
    if !dir.is_dir() {
        return Err(Error::Ingest(format!("{} is not a directory", dir.display())));
    }
    let mut candidates = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(stripped) = name.strip_suffix("_A.txt") {
            candidates.push(stripped.to_string());
        }
    }
    candidates.sort();
    match candidates.len() {
        0 => Err(Error::Ingest(format!(
            "missing mandatory file {}",
            dir.join("DS_A.txt").display()
        ))),
        1 => Ok(candidates.pop().unwrap()),
        _ => Err(Error::Ingest(format!(
            "multiple *_A.txt files in {}: {candidates:?}",
            dir.display()
        ))),
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let body = fs::read_to_string(path)?;
    Ok(body
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Format(format!("bad {what} entry '{s}'")))
}

fn parse_i64(s: &str, what: &str) -> Result<i64> {
    // Some TU files write integer labels as "1.0".
    let t = s.trim();
    if let Ok(v) = t.parse::<i64>() {
        return Ok(v);
    }
    if let Ok(v) = t.parse::<f64>() {
        if v.fract() == 0.0 {
            return Ok(v as i64);
        }
    }
    Err(Error::Format(format!("bad {what} entry '{s}'")))
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split(',');
    let a = it
        .next()
        .ok_or_else(|| Error::Format(format!("edge line {lineno} is empty")))?;
    let b = it
        .next()
        .ok_or_else(|| Error::Format(format!("edge line {lineno} has one endpoint")))?;
    Ok((parse_usize(a, "edge")?, parse_usize(b, "edge")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, body: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(body.as_bytes()).unwrap();
    }

    #[test]
    fn loads_minimal_single_edge_dataset() {
        let tmp = tempfile::tempdir().unwrap();
        write_file(tmp.path(), "DS_A.txt", "1, 2\n2, 1\n");
        write_file(tmp.path(), "DS_graph_indicator.txt", "1\n1\n");
        let ds = load_tu_dataset(tmp.path()).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.graphs[0].n(), 2);
        assert_eq!(ds.graphs[0].edges().len(), 1);
        assert_eq!(ds.meta.feature_kind, FeatureKind::DegreeFallback);
        // Degree fallback: both endpoints have degree 1.
        assert_eq!(ds.graphs[0].features()[(0, 0)], 1.0);
        assert_eq!(ds.graphs[0].features()[(1, 0)], 1.0);
    }

    #[test]
    fn missing_mandatory_file_is_named() {
        let tmp = tempfile::tempdir().unwrap();
        write_file(tmp.path(), "DS_A.txt", "1, 2\n");
        let err = load_tu_dataset(tmp.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("graph_indicator"), "{msg}");
    }

    #[test]
    fn labels_are_one_hot_and_attrs_concatenated() {
        let tmp = tempfile::tempdir().unwrap();
        write_file(tmp.path(), "T_A.txt", "1, 2\n2, 1\n3, 4\n4, 3\n");
        write_file(tmp.path(), "T_graph_indicator.txt", "1\n1\n2\n2\n");
        write_file(tmp.path(), "T_node_labels.txt", "7\n3\n3\n7\n");
        write_file(tmp.path(), "T_node_attributes.txt", "0.5, 1.5\n2.5, 3.5\n4.5, 5.5\n6.5, 7.5\n");
        write_file(tmp.path(), "T_graph_labels.txt", "-1\n1\n");
        let ds = load_tu_dataset(tmp.path()).unwrap();
        assert_eq!(ds.meta.feature_kind, FeatureKind::Continuous);
        assert_eq!(ds.meta.continuous_dim, 2);
        // 2 attrs + one-hot over {3, 7}.
        assert_eq!(ds.meta.feature_dim, 4);
        let f0 = ds.graphs[0].features();
        // Node 0 has label 7 -> slot for 7 is index 3 (alphabet [3,7]).
        assert_eq!(f0[(0, 0)], 0.5);
        assert_eq!(f0[(0, 3)], 1.0);
        assert_eq!(f0[(0, 2)], 0.0);
        // Graph labels -1/1 remap to 0/1.
        assert_eq!(ds.graphs[0].label(), Some(0));
        assert_eq!(ds.graphs[1].label(), Some(1));
        assert_eq!(ds.meta.num_classes, 2);
    }

    #[test]
    fn cross_graph_edge_is_a_format_error() {
        let tmp = tempfile::tempdir().unwrap();
        write_file(tmp.path(), "DS_A.txt", "1, 3\n");
        write_file(tmp.path(), "DS_graph_indicator.txt", "1\n1\n2\n");
        assert!(load_tu_dataset(tmp.path()).is_err());
    }

    #[test]
    fn out_of_range_edge_is_a_format_error() {
        let tmp = tempfile::tempdir().unwrap();
        write_file(tmp.path(), "DS_A.txt", "1, 9\n");
        write_file(tmp.path(), "DS_graph_indicator.txt", "1\n1\n");
        assert!(load_tu_dataset(tmp.path()).is_err());
    }
}
