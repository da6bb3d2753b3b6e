//! Planar diagram codes.
//!
//! A crossing `[a, b, c, d]` lists its four arcs counterclockwise starting at
//! the incoming under-arc, so the under-strand runs `a → c` and the
//! over-strand joins `b` and `d`. The sign says which way the over-strand
//! runs: `+1` for `d → b`, `−1` for `b → d`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCrossing {
    pub arcs: [usize; 4],
    pub sign: i8,
}

impl PdCrossing {
    /// Slot holding the outgoing over-arc.
    fn over_out(&self) -> usize {
        if self.sign > 0 {
            1
        } else {
            3
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PdRepr", into = "PdRepr")]
pub struct PDCode {
    crossings: Vec<PdCrossing>,
    /// Arc cycles in traversal order, one per component with crossings.
    components: Vec<Vec<usize>>,
    /// Components that never cross anything.
    free_loops: usize,
}

#[derive(Serialize, Deserialize)]
struct PdRepr {
    crossings: Vec<PdCrossing>,
    #[serde(default)]
    free_loops: usize,
}

impl TryFrom<PdRepr> for PDCode {
    type Error = DiagramError;
    fn try_from(r: PdRepr) -> Result<Self, DiagramError> {
        PDCode::new(r.crossings, r.free_loops)
    }
}

impl From<PDCode> for PdRepr {
    fn from(pd: PDCode) -> PdRepr {
        PdRepr {
            crossings: pd.crossings,
            free_loops: pd.free_loops,
        }
    }
}

impl PDCode {
    pub fn unknot() -> Self {
        PDCode {
            crossings: Vec::new(),
            components: Vec::new(),
            free_loops: 1,
        }
    }

    /// Validates arc occurrences and orientation, and recovers components.
    pub fn new(crossings: Vec<PdCrossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let bad = |m: String| DiagramError::Malformed(m);
        // arc -> (crossing, slot) where it leaves / enters
        let mut tail: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut head: HashMap<usize, (usize, usize)> = HashMap::new();
        for (i, x) in crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return Err(bad(format!("crossing {i} has sign {}", x.sign)));
            }
            let out_o = x.over_out();
            for (slot, &arc) in x.arcs.iter().enumerate() {
                let outgoing = slot == 2 || slot == out_o;
                let map = if outgoing { &mut tail } else { &mut head };
                if map.insert(arc, (i, slot)).is_some() {
                    return Err(bad(format!("arc {arc} used twice in the same direction")));
                }
            }
        }
        for arc in head.keys() {
            if !tail.contains_key(arc) {
                return Err(bad(format!("arc {arc} has no start")));
            }
        }
        for arc in tail.keys() {
            if !head.contains_key(arc) {
                return Err(bad(format!("arc {arc} has no end")));
            }
        }
        let mut arcs: Vec<usize> = tail.keys().copied().collect();
        arcs.sort_unstable();
        let mut seen = HashMap::new();
        let mut components = Vec::new();
        for &start in &arcs {
            if seen.contains_key(&start) {
                continue;
            }
            let k = components.len();
            let mut cyc = Vec::new();
            let mut arc = start;
            loop {
                seen.insert(arc, k);
                cyc.push(arc);
                let (i, slot) = head[&arc];
                arc = crossings[i].arcs[(slot + 2) % 4];
                if arc == start {
                    break;
                }
                if seen.contains_key(&arc) {
                    return Err(bad(format!("arc {arc} revisited")));
                }
            }
            components.push(cyc);
        }
        Ok(PDCode {
            crossings,
            components,
            free_loops,
        })
    }

    pub fn crossings(&self) -> &[PdCrossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    fn component_of_arc(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for (k, cyc) in self.components.iter().enumerate() {
            for &a in cyc {
                m.insert(a, k);
            }
        }
        m
    }

    /// Reverses the orientation of one component.
    pub fn reverse_component(&self, k: usize) -> PDCode {
        let comp = self.component_of_arc();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let under = comp[&x.arcs[0]] == k;
                let over = comp[&x.arcs[1]] == k;
                let arcs = if under {
                    [x.arcs[2], x.arcs[3], x.arcs[0], x.arcs[1]]
                } else {
                    x.arcs
                };
                let sign = if under != over { -x.sign } else { x.sign };
                PdCrossing { arcs, sign }
            })
            .collect();
        let mut components = self.components.clone();
        components[k].reverse();
        PDCode {
            crossings,
            components,
            free_loops: self.free_loops,
        }
    }

    /// Planar mirror image: every crossing switches.
    pub fn mirror(&self) -> PDCode {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                // the old over-strand becomes the under-strand
                let [a, b, c, d] = x.arcs;
                let arcs = if x.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
                PdCrossing { arcs, sign: -x.sign }
            })
            .collect();
        PDCode {
            crossings,
            components: self.components.clone(),
            free_loops: self.free_loops,
        }
    }

    /// Each component's crossings as `(crossing, is_over)` in traversal order.
    pub fn gauss_sequences(&self) -> Vec<Vec<(usize, bool)>> {
        let mut head: HashMap<usize, (usize, usize)> = HashMap::new();
        for (i, x) in self.crossings.iter().enumerate() {
            let out_o = x.over_out();
            for (slot, &arc) in x.arcs.iter().enumerate() {
                if !(slot == 2 || slot == out_o) {
                    head.insert(arc, (i, slot));
                }
            }
        }
        self.components
            .iter()
            .map(|cyc| {
                cyc.iter()
                    .map(|a| {
                        let (i, slot) = head[a];
                        (i, slot % 2 == 1)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("PD serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(s).map_err(|e| DiagramError::Malformed(e.to_string()))
    }
}
