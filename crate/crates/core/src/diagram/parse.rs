use super::PlanarDiagram;
use crate::error::{Error, Result};

/// Parses PD text.
///
/// Accepted forms:
/// - `PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]`
/// - `X[1,4,2,5]; X[3,6,4,1]; X[5,2,6,3]` (bare crossings, `;` or `,` separated)
/// - `[[1,4,2,5],[3,6,4,1],[5,2,6,3]]` (nested lists, as exported by knot tables)
/// - `PD[]` for the crossingless unknot
pub fn parse_pd(text: &str) -> Result<PlanarDiagram> {
    let crossings = parse_crossings(text)?;
    if crossings.is_empty() {
        return Ok(PlanarDiagram::unknot());
    }
    PlanarDiagram::from_crossings(crossings, 0)
}

fn parse_crossings(text: &str) -> Result<Vec<[u32; 4]>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = if let Some(rest) = s.strip_prefix("PD[") {
        rest.strip_suffix(']')
            .ok_or_else(|| Error::Parse("unterminated PD[...]".into()))?
            .to_string()
    } else if s.starts_with("[[") || s == "[]" {
        s[1..s.len() - 1].to_string()
    } else {
        s
    };

    let mut crossings = Vec::new();
    let mut rest = body.as_str();
    loop {
        rest = rest.trim_start_matches([',', ';']);
        if rest.is_empty() {
            break;
        }
        let after_head = if let Some(r) = rest.strip_prefix("X[") {
            r
        } else if let Some(r) = rest.strip_prefix('[') {
            r
        } else {
            return Err(Error::Parse(format!(
                "expected X[...] at `{}`",
                truncate(rest)
            )));
        };
        let close = after_head
            .find(']')
            .ok_or_else(|| Error::Parse("unterminated crossing".into()))?;
        let fields: Vec<&str> = after_head[..close].split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "crossing must have 4 edges, got {} in `{}`",
                fields.len(),
                &after_head[..close]
            )));
        }
        let mut x = [0u32; 4];
        for (slot, f) in fields.iter().enumerate() {
            x[slot] = f
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad edge label `{f}`")))?;
        }
        crossings.push(x);
        rest = &after_head[close + 1..];
        if !(rest.is_empty() || rest.starts_with([',', ';'])) {
            return Err(Error::Parse(format!(
                "unexpected text `{}`",
                truncate(rest)
            )));
        }
    }
    Ok(crossings)
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(24) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_all_forms() {
        let a = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        let b = parse_pd("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]").unwrap();
        let c = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        assert_eq!(a.crossings(), b.crossings());
        assert_eq!(a.crossings(), c.crossings());
        assert_eq!(parse_pd("PD[]").unwrap().crossing_count(), 0);
    }

    #[test]
    fn malformed_text() {
        for bad in [
            "PD[X[1,2,3]]",
            "PD[X[1,2,3,4]",
            "PD[Y[1,2,3,4]]",
            "PD[X[1,a,3,4]]",
            "X[1,2,3,4]]",
        ] {
            assert!(matches!(parse_pd(bad), Err(Error::Parse(_))), "{bad}");
        }
    }
}
