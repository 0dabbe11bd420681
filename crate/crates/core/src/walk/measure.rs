use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::weight::{parse_rational, Mode, Weight};
use super::WalkError;
use crate::group::{GeneratingSet, Group, GroupElement};

/// A finitely supported function on a group.
pub type GroupFunction<W> = BTreeMap<GroupElement, W>;

/// Outer-support chunk handed to one convolution worker. Fixed so the merge
/// order, and hence every float sum, does not depend on the thread count.
const CHUNK: usize = 2048;

/// Allowed float drift of total mass (kept mass plus pruned deficit).
pub const MASS_DRIFT_LIMIT: f64 = 1e-9;

/// A finitely supported probability measure on a discrete group.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<W> {
    group: Group,
    atoms: GroupFunction<W>,
    symmetric: bool,
    deficit: f64,
}

impl<W: Weight> Measure<W> {
    /// Builds a probability measure, merging repeated atoms. Total mass must
    /// be 1 exactly (rational mode) or within `1e-12` (float mode).
    pub fn new(group: Group, atoms: impl IntoIterator<Item = (GroupElement, W)>) -> Result<Self, WalkError> {
        let mut map: GroupFunction<W> = BTreeMap::new();
        for (g, w) in atoms {
            if !group.contains(&g) {
                return Err(WalkError::Group(crate::group::GroupError::Mismatch { group, element: g.to_string() }));
            }
            if !(w > W::zero()) {
                return Err(WalkError::InvalidMeasure(format!("non-positive weight {} at {g}", w.render())));
            }
            let slot = map.entry(g).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        if map.is_empty() {
            return Err(WalkError::InvalidMeasure("empty support".into()));
        }
        let m = Self::from_parts(group, map, 0.0);
        let total = m.mass();
        let ok = match W::MODE {
            Mode::Exact => total == W::one(),
            Mode::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(WalkError::InvalidMeasure(format!("total mass {} is not 1", total.render())));
        }
        Ok(m)
    }

    fn from_parts(group: Group, atoms: GroupFunction<W>, deficit: f64) -> Self {
        let symmetric = atoms.iter().all(|(g, w)| atoms.get(&group.inverse_unchecked(g)) == Some(w));
        Measure { group, atoms, symmetric, deficit }
    }

    pub fn dirac(group: Group, g: GroupElement) -> Result<Self, WalkError> {
        Self::new(group, [(g, W::one())])
    }

    /// Uniform probability on a finite set (duplicates ignored).
    pub fn uniform(group: Group, elements: &[GroupElement]) -> Result<Self, WalkError> {
        let mut elements = elements.to_vec();
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(WalkError::InvalidMeasure("empty support".into()));
        }
        let w = W::from_ratio(&BigRational::new(1.into(), elements.len().into()));
        Self::new(group, elements.into_iter().map(|g| (g, w.clone())))
    }

    /// The simple random walk: uniform on the standard generators.
    pub fn srw(group: Group) -> Self {
        Self::uniform(group, &group.standard_generators()).expect("standard generators")
    }

    /// `p·δ_e + (1−p)·srw`.
    pub fn lazy(group: Group, p: &BigRational) -> Result<Self, WalkError> {
        if *p < BigRational::zero() || *p >= BigRational::one() {
            return Err(WalkError::InvalidMeasure(format!("laziness {p} outside [0, 1)")));
        }
        let gens = group.standard_generators();
        let rest = (BigRational::one() - p) / BigRational::from_integer(gens.len().into());
        let mut atoms: Vec<(GroupElement, W)> = gens.into_iter().map(|g| (g, W::from_ratio(&rest))).collect();
        if !p.is_zero() {
            atoms.push((group.identity(), W::from_ratio(p)));
        }
        Self::new(group, atoms)
    }

    /// Uniform on the word ball of radius `r` for the standard generators.
    pub fn uniform_ball(group: Group, r: usize) -> Result<Self, WalkError> {
        let ball: Vec<GroupElement> = GeneratingSet::standard(group).ball(r).into_iter().map(|(g, _)| g).collect();
        Self::uniform(group, &ball)
    }

    /// Reads `<element> <weight>` lines; `#` starts a comment.
    pub fn from_file(group: Group, path: &Path) -> Result<Self, WalkError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WalkError::InvalidMeasure(format!("{}: {e}", path.display())))?;
        let mut atoms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (elem, weight) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| WalkError::InvalidMeasure(format!("line {}: expected `<element> <weight>`", lineno + 1)))?;
            let w = parse_rational(weight)
                .ok_or_else(|| WalkError::InvalidMeasure(format!("line {}: bad weight `{weight}`", lineno + 1)))?;
            atoms.push((group.parse_element(elem.trim())?, W::from_ratio(&w)));
        }
        Self::new(group, atoms)
    }

    /// Parses the compact measure syntax: `srw`, `lazy:p`, `uniform-ball:r`,
    /// `custom:@file`.
    pub fn from_spec(group: Group, spec: &str) -> Result<Self, WalkError> {
        let bad = || WalkError::InvalidMeasure(format!("unknown measure spec `{spec}`"));
        match spec.split_once(':') {
            None if spec == "srw" => Ok(Self::srw(group)),
            Some(("lazy", p)) => Self::lazy(group, &parse_rational(p).ok_or_else(bad)?),
            Some(("uniform-ball", r)) => Self::uniform_ball(group, r.parse().map_err(|_| bad())?),
            Some(("custom", path)) => Self::from_file(group, Path::new(path.strip_prefix('@').ok_or_else(bad)?)),
            _ => Err(bad()),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn mode(&self) -> Mode {
        W::MODE
    }

    pub fn atoms(&self) -> &GroupFunction<W> {
        &self.atoms
    }

    pub fn get(&self, g: &GroupElement) -> W {
        self.atoms.get(g).cloned().unwrap_or_else(W::zero)
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Mass removed by float pruning so far.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    /// Converts weights to another arithmetic mode.
    pub fn convert<V: Weight>(&self) -> Measure<V> {
        let atoms = self.atoms.iter().map(|(g, w)| (g.clone(), V::from_f64(w.to_f64()))).collect();
        Measure { group: self.group, atoms, symmetric: self.symmetric, deficit: self.deficit }
    }

    /// Stable 64-bit fingerprint of the support and weights.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.group.to_string().as_bytes());
        for (g, w) in &self.atoms {
            eat(&g.canonical_bytes());
            eat(w.render().as_bytes());
        }
        format!("{h:016x}")
    }

    pub(crate) fn require_symmetric(&self) -> Result<(), WalkError> {
        if self.symmetric {
            Ok(())
        } else {
            Err(WalkError::NotSymmetric)
        }
    }

    /// `(μ*ν)(x) = Σ_y μ(xy⁻¹) ν(y)`.
    pub fn convolve(&self, other: &Measure<W>) -> Result<Measure<W>, WalkError> {
        if self.group != other.group {
            return Err(WalkError::GroupMismatch(self.group, other.group));
        }
        let atoms = convolve_maps(self.group, &self.atoms, &other.atoms);
        self.finish(atoms, self.deficit + other.deficit)
    }

    /// Float-mode pruning and the mass-drift guard.
    fn finish(&self, mut atoms: GroupFunction<W>, mut deficit: f64) -> Result<Measure<W>, WalkError> {
        if W::MODE == Mode::Float {
            atoms.retain(|_, w| {
                if w.negligible() {
                    deficit += w.to_f64();
                    false
                } else {
                    true
                }
            });
            let kept: f64 = atoms.values().map(|w| w.to_f64()).sum();
            if (kept + deficit - 1.0).abs() > MASS_DRIFT_LIMIT {
                return Err(WalkError::MassDrift(kept + deficit - 1.0));
            }
        }
        Ok(Measure::from_parts(self.group, atoms, deficit))
    }
}

/// Sparse convolution `Σ_{a,b} f(a) g(b) δ_{ab}`, parallel over chunks of the
/// left support with an in-order merge.
pub(crate) fn convolve_maps<W: Weight>(group: Group, f: &GroupFunction<W>, g: &GroupFunction<W>) -> GroupFunction<W> {
    let left: Vec<(&GroupElement, &W)> = f.iter().collect();
    let right: Vec<(&GroupElement, &W)> = g.iter().collect();
    let partials: Vec<HashMap<GroupElement, W>> = left
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc: HashMap<GroupElement, W> = HashMap::with_capacity(chunk.len() * right.len());
            for &(a, wa) in chunk {
                for &(b, wb) in &right {
                    let w = wa.clone() * wb.clone();
                    match acc.entry(group.op_unchecked(a, b)) {
                        std::collections::hash_map::Entry::Occupied(mut e) => {
                            let v = e.get_mut();
                            *v = v.clone() + w;
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(w);
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut partials = partials.into_iter();
    let mut total = partials.next().unwrap_or_default();
    for part in partials {
        for (k, w) in part {
            match total.entry(k) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let v = e.get_mut();
                    *v = v.clone() + w;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(w);
                }
            }
        }
    }
    total.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

/// `(R_μ f)(x) = Σ_y f(xy⁻¹) μ(y)`, i.e. `f * μ`.
pub fn right_convolve<W: Weight>(f: &GroupFunction<W>, mu: &Measure<W>) -> GroupFunction<W> {
    convolve_maps(mu.group(), f, mu.atoms())
}

/// `Σ_x f(x) g(x)`.
pub fn inner<W: Weight>(f: &GroupFunction<W>, g: &GroupFunction<W>) -> W {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    small
        .iter()
        .filter_map(|(x, a)| large.get(x).map(|b| a.clone() * b.clone()))
        .fold(W::zero(), |acc, v| acc + v)
}
