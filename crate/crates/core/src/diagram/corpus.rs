use super::generators::parse_generator;
use super::parse::parse_pd;
use super::PlanarDiagram;
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/corpus.tsv");

/// One named diagram from a corpus file.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: PlanarDiagram,
}

/// Parses a corpus: one `name<TAB>diagram` record per line, `#` starts a
/// comment line. The diagram is PD text or a generator spec such as
/// `pretzel 3 3 -3`.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (name, body) = line.split_once('\t').ok_or_else(|| {
            Error::Parse(format!("line {}: expected name<TAB>diagram", lineno + 1))
        })?;
        let body = body.trim();
        let starts_pd = body.starts_with("PD") || body.starts_with('X') || body.starts_with('[');
        let diagram = if starts_pd {
            parse_pd(body)
        } else {
            parse_generator(body)
        }
        .map_err(|e| Error::Parse(format!("line {} ({name}): {e}", lineno + 1)))?;
        out.push(CorpusEntry {
            name: name.trim().to_string(),
            diagram: diagram.with_name(name.trim()),
        });
    }
    Ok(out)
}

/// The corpus shipped with the crate: prime knots and links through six
/// crossings, the torus knot 8_19, and the pretzel knots 9_46 and 10_140.
pub fn bundled_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUNDLED).expect("bundled corpus is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries() {
        let c = bundled_corpus();
        let names: Vec<_> = c.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "unknot",
                "hopf",
                "trefoil_right",
                "trefoil_left",
                "figure_eight",
                "torus_2_4",
                "5_1",
                "5_2",
                "6_1",
                "6_2",
                "6_3",
                "8_19",
                "9_46",
                "10_140"
            ]
        );
        assert_eq!(c[2].diagram.writhe(), 3);
        assert_eq!(c[3].diagram.writhe(), -3);
        assert_eq!(c[4].diagram.writhe(), 0);
    }

    #[test]
    fn rejects_missing_tab() {
        assert!(parse_corpus("hopf PD[X[1,3,2,4],X[3,1,4,2]]").is_err());
    }
}
