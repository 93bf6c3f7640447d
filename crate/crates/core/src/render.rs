//! Text, LaTeX, and JSON forms of homology tables.
//!
//! Tables are laid out with `i` increasing to the right and `j` decreasing
//! downwards. A cell shows `a, b_c` for `Z^a + (Z/c)^b`.

use serde::{Deserialize, Serialize};

use crate::chain::{maps::Theory, Flavor};
use crate::error::{Error, Result};
use crate::homology::{BigradedGroup, HomologyTable, Ring};

fn grid(t: &HomologyTable) -> Option<(Vec<i32>, Vec<i32>)> {
    let (i0, i1) = t.i_range()?;
    let (j0, j1) = t.j_range()?;
    let is = (i0..=i1).collect();
    let js = (j0..=j1).rev().step_by(2).collect();
    Some((is, js))
}

/// Plain text table.
///
/// ```
/// use oddkh::{compute_homology, parse_pd, render, Flavor, Ring};
/// let h = compute_homology(&parse_pd("PD[]").unwrap(), Flavor::Even, Ring::Q, &Default::default()).unwrap();
/// let text = render::text_table(&h);
/// assert!(text.contains(" 1 |"));
/// ```
pub fn text_table(t: &HomologyTable) -> String {
    let Some((is, js)) = grid(t) else {
        return "(zero)\n".to_string();
    };
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["j\\i".to_string()];
    header.extend(is.iter().map(i32::to_string));
    cells.push(header);
    for &j in &js {
        let mut row = vec![j.to_string()];
        for &i in &is {
            let g = t.get(i, j);
            row.push(if g.is_zero() {
                String::new()
            } else {
                g.to_string()
            });
        }
        cells.push(row);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (n, row) in cells.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
        if n == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
    }
    out
}

fn latex_cell(g: &BigradedGroup) -> String {
    if g.is_zero() {
        return String::new();
    }
    let mut parts = Vec::new();
    if g.rank > 0 {
        parts.push(g.rank.to_string());
    }
    let mut torsion = g.torsion.clone();
    torsion.dedup();
    for t in torsion {
        let c = g.torsion.iter().filter(|&&x| x == t).count();
        parts.push(format!("{c}_{{{t}}}"));
    }
    format!("${}$", parts.join(","))
}

/// A standalone `tabular` block.
pub fn latex_table(t: &HomologyTable) -> String {
    let Some((is, js)) = grid(t) else {
        return "\\begin{tabular}{c}\n0\n\\end{tabular}\n".to_string();
    };
    let mut out = format!("\\begin{{tabular}}{{r|{}}}\n", "c".repeat(is.len()));
    let header: Vec<String> = is.iter().map(i32::to_string).collect();
    out.push_str(&format!(
        "$j \\backslash i$ & {} \\\\\n\\hline\n",
        header.join(" & ")
    ));
    for &j in &js {
        let row: Vec<String> = is.iter().map(|&i| latex_cell(&t.get(i, j))).collect();
        out.push_str(&format!("{j} & {} \\\\\n", row.join(" & ")));
    }
    out.push_str("\\end{tabular}\n");
    out
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct EntryJson {
    i: i32,
    j: i32,
    rank: u64,
    torsion: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TableJson {
    schema: u32,
    name: Option<String>,
    theory: Theory,
    reduced: bool,
    ring: Ring,
    entries: Vec<EntryJson>,
}

/// JSON record `{schema, name, theory, reduced, ring, entries: [{i, j, rank, torsion}]}`.
pub fn table_to_json(t: &HomologyTable) -> String {
    let doc = TableJson {
        schema: SCHEMA_VERSION,
        name: t.name.clone(),
        theory: t.flavor.theory(),
        reduced: t.flavor.is_reduced(),
        ring: t.ring,
        entries: t
            .entries()
            .map(|((i, j), g)| EntryJson {
                i,
                j,
                rank: g.rank,
                torsion: g.torsion.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tables serialize")
}

pub fn table_from_json(text: &str) -> Result<HomologyTable> {
    let doc: TableJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("table JSON: {e}")))?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version {}",
            doc.schema
        )));
    }
    let mut t = HomologyTable::new(Flavor::new(doc.theory, doc.reduced), doc.ring, doc.name);
    for e in doc.entries {
        t.insert(
            e.i,
            e.j,
            BigradedGroup {
                rank: e.rank,
                torsion: e.torsion,
            },
        );
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> HomologyTable {
        let mut t = HomologyTable::new(Flavor::ReducedOdd, Ring::Z, Some("sample".into()));
        t.insert(0, 0, BigradedGroup::free(2));
        t.insert(
            0,
            -2,
            BigradedGroup {
                rank: 0,
                torsion: vec![3],
            },
        );
        t.insert(-1, -2, BigradedGroup::free(1));
        t
    }

    #[test]
    fn text_layout() {
        let s = text_table(&sample());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "j\\i | -1 |   0");
        assert_eq!(lines[2], "  0 |    |   2");
        assert_eq!(lines[3], " -2 |  1 | 1_3");
    }

    #[test]
    fn latex_cells() {
        let s = latex_table(&sample());
        assert!(s.contains("$1_{3}$"));
        assert!(s.starts_with("\\begin{tabular}{r|cc}"));
    }

    #[test]
    fn json_roundtrip() {
        let t = sample();
        let s = table_to_json(&t);
        assert!(s.contains("\"schema\": 1"));
        assert_eq!(table_from_json(&s).unwrap(), t);
        assert!(table_from_json("{}").is_err());
    }
}
