use super::PlanarDiagram;
use crate::error::{Error, Result};

/// A crossing port: crossing index and slot `0..4`.
///
/// Slots run counterclockwise; slots 0 and 2 carry the lower strand and slots
/// 1 and 3 the upper strand. Which end of each strand is incoming is decided
/// when the components are traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub crossing: usize,
    pub slot: usize,
}

impl Port {
    pub fn new(crossing: usize, slot: usize) -> Self {
        Port { crossing, slot }
    }
}

/// Assembles a diagram from crossings and port-to-port arcs, then numbers the
/// edges consecutively along each component.
#[derive(Debug, Default, Clone)]
pub struct DiagramBuilder {
    links: Vec<[Option<Port>; 4]>,
    entering: Vec<Port>,
    free_loops: usize,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_crossing(&mut self) -> usize {
        self.links.push([None; 4]);
        self.links.len() - 1
    }

    pub fn add_free_loop(&mut self) {
        self.free_loops += 1;
    }

    pub fn connect(&mut self, p: Port, q: Port) -> Result<()> {
        for port in [p, q] {
            if port.crossing >= self.links.len() || port.slot >= 4 {
                return Err(Error::InvalidDiagram(format!("no such port {port:?}")));
            }
            if self.links[port.crossing][port.slot].is_some() {
                return Err(Error::InvalidDiagram(format!(
                    "port {port:?} already connected"
                )));
            }
        }
        if p == q {
            return Err(Error::InvalidDiagram(
                "cannot connect a port to itself".into(),
            ));
        }
        self.links[p.crossing][p.slot] = Some(q);
        self.links[q.crossing][q.slot] = Some(p);
        Ok(())
    }

    /// Requests that the component through `p` be oriented so that it enters
    /// its crossing at `p`.
    pub fn orient_entering(&mut self, p: Port) {
        self.entering.push(p);
    }

    pub fn build(self) -> Result<PlanarDiagram> {
        let n = self.links.len();
        if n == 0 {
            return if self.free_loops == 0 {
                Err(Error::InvalidDiagram("empty diagram".into()))
            } else {
                Ok(PlanarDiagram::unlink(self.free_loops))
            };
        }
        let mut links = vec![[Port::new(0, 0); 4]; n];
        for (x, ports) in self.links.iter().enumerate() {
            for (s, p) in ports.iter().enumerate() {
                links[x][s] = p.ok_or_else(|| {
                    Error::InvalidDiagram(format!("port ({x},{s}) left unconnected"))
                })?;
            }
        }

        // label[x][s]: label of the edge attached at port (x, s).
        let mut label = vec![[0u32; 4]; n];
        let mut arrives = vec![[false; 4]; n];
        let mut next_label = 1u32;

        let mut starts: Vec<Port> = self.entering.clone();
        for x in 0..n {
            for s in 0..4 {
                starts.push(Port::new(x, s));
            }
        }
        for start in starts {
            if label[start.crossing][start.slot] != 0 {
                continue;
            }
            let mut at = start;
            loop {
                // Arrive at `at` along a fresh edge.
                let from = links[at.crossing][at.slot];
                label[at.crossing][at.slot] = next_label;
                label[from.crossing][from.slot] = next_label;
                arrives[at.crossing][at.slot] = true;
                next_label += 1;
                let exit = Port::new(at.crossing, (at.slot + 2) % 4);
                let nxt = links[exit.crossing][exit.slot];
                if label[nxt.crossing][nxt.slot] != 0 {
                    break;
                }
                at = nxt;
            }
        }

        let mut crossings = Vec::with_capacity(n);
        let mut over_b_to_d = Vec::with_capacity(n);
        for x in 0..n {
            let l = label[x];
            if arrives[x][0] {
                crossings.push([l[0], l[1], l[2], l[3]]);
                over_b_to_d.push(arrives[x][1]);
            } else {
                crossings.push([l[2], l[3], l[0], l[1]]);
                over_b_to_d.push(arrives[x][3]);
            }
        }
        PlanarDiagram::from_oriented(crossings, over_b_to_d, self.free_loops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconnected_port_is_error() {
        let mut b = DiagramBuilder::new();
        let x = b.add_crossing();
        b.connect(Port::new(x, 0), Port::new(x, 1)).unwrap();
        assert!(b.build().is_err());
    }

    #[test]
    fn single_kink() {
        // One crossing whose lower exit feeds its upper entry: an unknot.
        let mut b = DiagramBuilder::new();
        let x = b.add_crossing();
        b.connect(Port::new(x, 2), Port::new(x, 1)).unwrap();
        b.connect(Port::new(x, 3), Port::new(x, 0)).unwrap();
        let d = b.build().unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
    }
}
