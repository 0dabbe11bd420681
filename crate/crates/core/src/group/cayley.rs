use std::collections::{HashMap, HashSet};

use super::{Group, GroupElement, GroupError};

/// A finite generating set, recorded together with whether it is closed
/// under inversion and whether it contains the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    group: Group,
    elements: Vec<GroupElement>,
    symmetric: bool,
    has_identity: bool,
}

impl GeneratingSet {
    pub fn new(group: Group, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self, GroupError> {
        let mut elements: Vec<GroupElement> = elements.into_iter().collect();
        for g in &elements {
            if !group.contains(g) {
                return Err(GroupError::Mismatch { group, element: g.to_string() });
            }
        }
        elements.sort();
        elements.dedup();
        let set: HashSet<&GroupElement> = elements.iter().collect();
        let symmetric = elements.iter().all(|g| set.contains(&group.inverse_unchecked(g)));
        let has_identity = set.contains(&group.identity());
        Ok(GeneratingSet { group, elements, symmetric, has_identity })
    }

    pub fn standard(group: Group) -> Self {
        Self::new(group, group.standard_generators()).expect("standard generators belong to the group")
    }

    pub fn symmetric_closure(&self) -> Self {
        let inverses = self.elements.iter().map(|g| self.group.inverse_unchecked(g));
        Self::new(self.group, self.elements.iter().cloned().chain(inverses).collect::<Vec<_>>()).unwrap()
    }

    pub fn with_identity(&self) -> Self {
        Self::new(self.group, self.elements.iter().cloned().chain([self.group.identity()]).collect::<Vec<_>>()).unwrap()
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn has_identity(&self) -> bool {
        self.has_identity
    }

    fn require_symmetric(&self) -> Result<(), GroupError> {
        if self.symmetric {
            Ok(())
        } else {
            Err(GroupError::NotSymmetric)
        }
    }

    fn step(&self, frontier: &[GroupElement], seen: &mut HashMap<GroupElement, usize>, depth: usize) -> Vec<GroupElement> {
        let mut next = Vec::new();
        for x in frontier {
            for s in &self.elements {
                let y = self.group.op_unchecked(x, s);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), depth);
                    next.push(y);
                }
            }
        }
        next
    }

    /// Word length `|g|_S`: the Cayley-graph distance from the identity,
    /// by bidirectional breadth-first search.
    pub fn word_length(&self, g: &GroupElement, radius_cap: usize) -> Result<usize, GroupError> {
        self.require_symmetric()?;
        if !self.group.contains(g) {
            return Err(GroupError::Mismatch { group: self.group, element: g.to_string() });
        }
        let e = self.group.identity();
        if *g == e {
            return Ok(0);
        }
        let mut fwd: HashMap<GroupElement, usize> = HashMap::from([(e.clone(), 0)]);
        let mut bwd: HashMap<GroupElement, usize> = HashMap::from([(g.clone(), 0)]);
        let (mut ff, mut bf) = (vec![e], vec![g.clone()]);
        let (mut df, mut db) = (0usize, 0usize);
        while df + db < radius_cap && !(ff.is_empty() && bf.is_empty()) {
            // Grow the smaller frontier by one full layer.
            let forward = !ff.is_empty() && (bf.is_empty() || ff.len() <= bf.len());
            let (frontier, seen, other, depth) = if forward {
                df += 1;
                (&mut ff, &mut fwd, &bwd, df)
            } else {
                db += 1;
                (&mut bf, &mut bwd, &fwd, db)
            };
            *frontier = self.step(frontier, seen, depth);
            let best = frontier.iter().filter_map(|x| other.get(x).map(|d| d + depth)).min();
            if let Some(d) = best {
                return Ok(d);
            }
        }
        Err(GroupError::BeyondRadius { element: g.to_string(), cap: radius_cap })
    }

    /// All elements within word distance `r` of the identity, with their
    /// distances, ordered by distance then canonical encoding.
    pub fn ball(&self, r: usize) -> Vec<(GroupElement, usize)> {
        let e = self.group.identity();
        let mut seen: HashMap<GroupElement, usize> = HashMap::from([(e.clone(), 0)]);
        let mut frontier = vec![e];
        for depth in 1..=r {
            frontier = self.step(&frontier, &mut seen, depth);
            if frontier.is_empty() {
                break;
            }
        }
        let mut out: Vec<(GroupElement, usize)> = seen.into_iter().collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}
