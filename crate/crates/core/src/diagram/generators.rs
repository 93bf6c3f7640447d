//! Diagram families: pretzel links and braid closures (torus links among them).

use super::builder::{DiagramBuilder, Port};
use super::PlanarDiagram;
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
enum Corner {
    NE,
    NW,
    SW,
    SE,
}

/// Slot of a compass corner for a crossing whose lower strand runs either
/// NE-SW or NW-SE. Slots are counterclockwise with the lower strand on 0 and 2.
fn slot(lower_ne_sw: bool, corner: Corner) -> usize {
    let ccw = match corner {
        Corner::NE => 0,
        Corner::NW => 1,
        Corner::SW => 2,
        Corner::SE => 3,
    };
    if lower_ne_sw {
        ccw
    } else {
        (ccw + 3) % 4
    }
}

/// The `(p_1, ..., p_k)` pretzel link: `k` vertical twist columns of `|p_i|`
/// half-twists joined in a ring along the top and bottom.
///
/// Chirality convention: `(3,3,-3)` is the knot whose odd reduced homology
/// lives in homological degrees `-6..=0`, and `(-1,-1,-1)` is the positive
/// (right-handed) trefoil.
pub fn gen_pretzel(twists: &[i32]) -> Result<PlanarDiagram> {
    if twists.len() < 2 {
        return Err(Error::InvalidArgument(
            "a pretzel link needs at least two columns".into(),
        ));
    }
    if twists.contains(&0) {
        return Err(Error::InvalidArgument(
            "pretzel twist counts must be nonzero".into(),
        ));
    }
    let mut b = DiagramBuilder::new();
    // (top crossing, bottom crossing, lower strand NE-SW) per column
    let mut columns = Vec::new();
    for &p in twists {
        let lower_ne_sw = p < 0;
        let first = b.add_crossing();
        let mut prev = first;
        for _ in 1..p.unsigned_abs() {
            let x = b.add_crossing();
            b.connect(
                Port::new(prev, slot(lower_ne_sw, Corner::SW)),
                Port::new(x, slot(lower_ne_sw, Corner::NW)),
            )?;
            b.connect(
                Port::new(prev, slot(lower_ne_sw, Corner::SE)),
                Port::new(x, slot(lower_ne_sw, Corner::NE)),
            )?;
            prev = x;
        }
        columns.push((first, prev, lower_ne_sw));
    }
    let k = columns.len();
    for i in 0..k {
        let (top, bottom, t) = columns[i];
        let (ntop, nbottom, nt) = columns[(i + 1) % k];
        b.connect(
            Port::new(top, slot(t, Corner::NE)),
            Port::new(ntop, slot(nt, Corner::NW)),
        )?;
        b.connect(
            Port::new(bottom, slot(t, Corner::SE)),
            Port::new(nbottom, slot(nt, Corner::SW)),
        )?;
    }
    let name: Vec<String> = twists.iter().map(|p| p.to_string()).collect();
    Ok(b.build()?.with_name(format!("pretzel({})", name.join(","))))
}

/// Closure of a braid word. Generator `i` (1-based) crosses strand positions
/// `i` and `i+1`; a positive entry is a positive crossing when all strands
/// run downward. Strands that no generator touches close up into free loops.
pub fn gen_braid_closure(word: &[i32], strands: usize) -> Result<PlanarDiagram> {
    if strands == 0 {
        return Err(Error::InvalidArgument(
            "a braid needs at least one strand".into(),
        ));
    }
    for &g in word {
        if g == 0 || g.unsigned_abs() as usize >= strands {
            return Err(Error::InvalidArgument(format!(
                "generator {g} out of range for {strands} strands"
            )));
        }
    }
    let mut b = DiagramBuilder::new();
    let mut first: Vec<Option<Port>> = vec![None; strands];
    let mut pending: Vec<Option<Port>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let lower_ne_sw = g < 0;
        let x = b.add_crossing();
        let nw = Port::new(x, slot(lower_ne_sw, Corner::NW));
        let ne = Port::new(x, slot(lower_ne_sw, Corner::NE));
        for (pos, port) in [(i, nw), (i + 1, ne)] {
            match pending[pos] {
                Some(p) => b.connect(p, port)?,
                None => first[pos] = Some(port),
            }
            b.orient_entering(port);
        }
        pending[i] = Some(Port::new(x, slot(lower_ne_sw, Corner::SW)));
        pending[i + 1] = Some(Port::new(x, slot(lower_ne_sw, Corner::SE)));
    }
    for pos in 0..strands {
        match (pending[pos], first[pos]) {
            (Some(bottom), Some(top)) => b.connect(bottom, top)?,
            _ => b.add_free_loop(),
        }
    }
    let name: Vec<String> = word.iter().map(|g| g.to_string()).collect();
    Ok(b.build()?
        .with_name(format!("braid{strands}[{}]", name.join(","))))
}

/// The `(p, q)` torus link as the closure of `(s_1 ... s_{p-1})^q` on `p`
/// strands; negative `q` uses inverse generators.
pub fn gen_torus(p: usize, q: i32) -> Result<PlanarDiagram> {
    if p < 2 || q == 0 {
        return Err(Error::InvalidArgument(
            "torus link needs p >= 2 and q != 0".into(),
        ));
    }
    let sign = q.signum();
    let word: Vec<i32> = (0..q.unsigned_abs())
        .flat_map(|_| (1..p as i32).map(move |g| sign * g))
        .collect();
    Ok(gen_braid_closure(&word, p)?.with_name(format!("torus({p},{q})")))
}

/// Parses a generator description such as `pretzel 3 3 -3`, `torus 4 -5`, or
/// `braid 3 1 1 -2` (strand count followed by the signed word).
pub fn parse_generator(spec: &str) -> Result<PlanarDiagram> {
    let mut words = spec.split_whitespace();
    let kind = words
        .next()
        .ok_or_else(|| Error::Parse("empty generator spec".into()))?;
    let nums: Vec<i32> = words
        .map(|w| {
            w.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad integer `{w}`")))
        })
        .collect::<Result<_>>()?;
    match kind {
        "pretzel" => gen_pretzel(&nums),
        "torus" => match nums.as_slice() {
            &[p, q] if p >= 0 => gen_torus(p as usize, q),
            _ => Err(Error::Parse("usage: torus <p> <q>".into())),
        },
        "braid" => match nums.split_first() {
            Some((&s, word)) if s > 0 => gen_braid_closure(word, s as usize),
            _ => Err(Error::Parse(
                "usage: braid <strands> <generators...>".into(),
            )),
        },
        other => Err(Error::Parse(format!("unknown generator `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretzel_sizes_and_components() {
        let k946 = gen_pretzel(&[3, 3, -3]).unwrap();
        assert_eq!(k946.crossing_count(), 9);
        assert_eq!(k946.component_count(), 1);
        let k10140 = gen_pretzel(&[3, 4, -3]).unwrap();
        assert_eq!(k10140.crossing_count(), 10);
        assert_eq!(k10140.component_count(), 1);
        let hopf = gen_pretzel(&[1, 1]).unwrap();
        assert_eq!(hopf.crossing_count(), 2);
        assert_eq!(hopf.component_count(), 2);
    }

    #[test]
    fn pretzel_rejects_bad_input() {
        assert!(gen_pretzel(&[3]).is_err());
        assert!(gen_pretzel(&[3, 0, 1]).is_err());
    }

    #[test]
    fn braid_closures() {
        let t = gen_braid_closure(&[1, 1, 1], 2).unwrap();
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.component_count(), 1);
        let kink = gen_braid_closure(&[1], 2).unwrap();
        assert_eq!(kink.crossing_count(), 1);
        assert_eq!(kink.component_count(), 1);
        let unlink = gen_braid_closure(&[], 3).unwrap();
        assert_eq!(unlink.crossing_count(), 0);
        assert_eq!(unlink.component_count(), 3);
        let t45 = gen_torus(4, -5).unwrap();
        assert_eq!(t45.crossing_count(), 15);
        assert_eq!(t45.writhe(), -15);
        assert_eq!(t45.component_count(), 1);
    }

    #[test]
    fn generator_specs() {
        assert_eq!(
            parse_generator("pretzel 3 3 -3").unwrap().crossing_count(),
            9
        );
        assert_eq!(parse_generator("torus 2 3").unwrap().writhe(), 3);
        assert_eq!(
            parse_generator("braid 3 1 -2 1 -2")
                .unwrap()
                .crossing_count(),
            4
        );
        assert!(parse_generator("hexagon 1").is_err());
    }
}
