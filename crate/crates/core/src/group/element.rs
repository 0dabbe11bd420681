use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::GroupError;

/// Descriptor of one of the discrete test groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Group {
    /// The free abelian group `Z^d`.
    Zd { d: usize },
    /// The free group on `k` letters.
    Free { k: usize },
    /// The wreath product `Z/qZ ≀ Z`.
    Lamplighter { q: u32 },
}

/// Lamplighter element: finitely many lit lamps plus a cursor position.
///
/// Lamps are kept sorted by position and hold nonzero residues mod `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampConfig {
    lamps: Vec<(i64, u32)>,
    cursor: i64,
}

impl LampConfig {
    pub fn new(lamps: impl IntoIterator<Item = (i64, u32)>, cursor: i64, q: u32) -> Self {
        let mut acc: Vec<(i64, u32)> = Vec::new();
        let mut raw: Vec<(i64, u32)> = lamps.into_iter().collect();
        raw.sort_by_key(|&(p, _)| p);
        for (p, v) in raw {
            match acc.last_mut() {
                Some((lp, lv)) if *lp == p => *lv = (*lv + v) % q,
                _ => acc.push((p, v % q)),
            }
        }
        acc.retain(|&(_, v)| v != 0);
        LampConfig { lamps: acc, cursor }
    }

    pub fn lamps(&self) -> &[(i64, u32)] {
        &self.lamps
    }

    pub fn cursor(&self) -> i64 {
        self.cursor
    }
}

/// Canonical element encodings: equal encodings exactly when the group
/// elements are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Zd(Vec<i64>),
    /// Freely reduced word; letter `i` or `-i` for generator `i >= 1` or its inverse.
    Free(Vec<i32>),
    Lamplighter(LampConfig),
}

impl GroupElement {
    /// Dimension-tagged byte serialization used as a stable hashing key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            GroupElement::Zd(v) => {
                out.push(0);
                out.extend((v.len() as u64).to_le_bytes());
                v.iter().for_each(|x| out.extend(x.to_le_bytes()));
            }
            GroupElement::Free(w) => {
                out.push(1);
                out.extend((w.len() as u64).to_le_bytes());
                w.iter().for_each(|x| out.extend(x.to_le_bytes()));
            }
            GroupElement::Lamplighter(c) => {
                out.push(2);
                out.extend(c.cursor.to_le_bytes());
                out.extend((c.lamps.len() as u64).to_le_bytes());
                for (p, v) in &c.lamps {
                    out.extend(p.to_le_bytes());
                    out.extend(v.to_le_bytes());
                }
            }
        }
        out
    }
}

impl Group {
    pub fn identity(&self) -> GroupElement {
        match *self {
            Group::Zd { d } => GroupElement::Zd(vec![0; d]),
            Group::Free { .. } => GroupElement::Free(Vec::new()),
            Group::Lamplighter { .. } => GroupElement::Lamplighter(LampConfig { lamps: Vec::new(), cursor: 0 }),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (Group::Zd { d }, GroupElement::Zd(v)) => v.len() == *d,
            (Group::Free { k }, GroupElement::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *k)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (Group::Lamplighter { q }, GroupElement::Lamplighter(c)) => {
                c.lamps.iter().all(|&(_, v)| v != 0 && v < *q) && c.lamps.windows(2).all(|p| p[0].0 < p[1].0)
            }
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::Mismatch { group: *self, element: format!("{g:?}") })
        }
    }

    /// Group law `g * h`.
    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.op_unchecked(g, h))
    }

    pub(crate) fn op_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (self, g, h) {
            (_, GroupElement::Zd(a), GroupElement::Zd(b)) => {
                GroupElement::Zd(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (_, GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut w = a.clone();
                for &l in b {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                GroupElement::Free(w)
            }
            (Group::Lamplighter { q }, GroupElement::Lamplighter(a), GroupElement::Lamplighter(b)) => {
                // Lamps of `h` are read relative to the cursor of `g`.
                let shifted = b.lamps.iter().map(|&(p, v)| (p + a.cursor, v));
                let mut lamps = Vec::with_capacity(a.lamps.len() + b.lamps.len());
                let (mut i, mut it) = (0, shifted.peekable());
                loop {
                    match (a.lamps.get(i), it.peek()) {
                        (Some(&(pa, va)), Some(&(pb, vb))) => {
                            if pa < pb {
                                lamps.push((pa, va));
                                i += 1;
                            } else if pb < pa {
                                lamps.push((pb, vb));
                                it.next();
                            } else {
                                let v = (va + vb) % q;
                                if v != 0 {
                                    lamps.push((pa, v));
                                }
                                i += 1;
                                it.next();
                            }
                        }
                        (Some(&x), None) => {
                            lamps.push(x);
                            i += 1;
                        }
                        (None, Some(&y)) => {
                            lamps.push(y);
                            it.next();
                        }
                        (None, None) => break,
                    }
                }
                GroupElement::Lamplighter(LampConfig { lamps, cursor: a.cursor + b.cursor })
            }
            _ => unreachable!("operands checked against the group"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(self.inverse_unchecked(g))
    }

    pub(crate) fn inverse_unchecked(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (_, GroupElement::Zd(v)) => GroupElement::Zd(v.iter().map(|x| -x).collect()),
            (_, GroupElement::Free(w)) => GroupElement::Free(w.iter().rev().map(|l| -l).collect()),
            (Group::Lamplighter { q }, GroupElement::Lamplighter(c)) => GroupElement::Lamplighter(LampConfig {
                lamps: c.lamps.iter().map(|&(p, v)| (p - c.cursor, (q - v) % q)).collect(),
                cursor: -c.cursor,
            }),
            _ => unreachable!("operand checked against the group"),
        }
    }

    /// Standard symmetric generators: `±e_i`, the letters and their inverses,
    /// or `t^{±1}` and `s^{±1}` (a single `s` when `q = 2`).
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        match *self {
            Group::Zd { d } => (0..d)
                .flat_map(|i| {
                    [1, -1].map(|s| {
                        let mut v = vec![0; d];
                        v[i] = s;
                        GroupElement::Zd(v)
                    })
                })
                .collect(),
            Group::Free { k } => (1..=k as i32).flat_map(|i| [GroupElement::Free(vec![i]), GroupElement::Free(vec![-i])]).collect(),
            Group::Lamplighter { q } => {
                let mut g = vec![self.lamp_shift(1), self.lamp_shift(-1), self.lamp_toggle(1)];
                if q > 2 {
                    g.push(self.lamp_toggle(q - 1));
                }
                g
            }
        }
    }

    /// Lamplighter cursor move `t^k`.
    pub fn lamp_shift(&self, k: i64) -> GroupElement {
        GroupElement::Lamplighter(LampConfig { lamps: Vec::new(), cursor: k })
    }

    /// Lamplighter switch adding `v` to the lamp under the cursor.
    pub fn lamp_toggle(&self, v: u32) -> GroupElement {
        let q = match self {
            Group::Lamplighter { q } => *q,
            _ => panic!("lamp_toggle on a non-lamplighter group"),
        };
        GroupElement::Lamplighter(LampConfig::new([(0, v)], 0, q))
    }

    /// Parses an element literal: `(1,-2)` in `Z^d`; letters `a..z` with
    /// capitals as inverses (`e` alone is the identity) in free groups;
    /// `[pos:val,...]@cursor` in lamplighters.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let s = s.trim();
        let bad = || GroupError::ElementSyntax { group: *self, input: s.to_string() };
        let g = match *self {
            Group::Zd { .. } => {
                let body = s.trim_start_matches('(').trim_end_matches(')');
                let v = body
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                GroupElement::Zd(v)
            }
            Group::Free { .. } => {
                if s == "e" {
                    return Ok(self.identity());
                }
                let mut w = Vec::new();
                for c in s.chars() {
                    let l = match c {
                        'a'..='z' => (c as u8 - b'a') as i32 + 1,
                        'A'..='Z' => -((c as u8 - b'A') as i32 + 1),
                        _ => return Err(bad()),
                    };
                    w.push(l);
                }
                self.op_unchecked(&self.identity(), &GroupElement::Free(w))
            }
            Group::Lamplighter { q } => {
                let (lamps, cursor) = s.split_once('@').ok_or_else(bad)?;
                let cursor = cursor.trim().parse::<i64>().map_err(|_| bad())?;
                let body = lamps.trim().strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
                let mut entries = Vec::new();
                for item in body.split(',').filter(|x| !x.trim().is_empty()) {
                    let (p, v) = item.split_once(':').ok_or_else(bad)?;
                    entries.push((p.trim().parse::<i64>().map_err(|_| bad())?, v.trim().parse::<u32>().map_err(|_| bad())?));
                }
                GroupElement::Lamplighter(LampConfig::new(entries, cursor, q))
            }
        };
        // Free words are reduced above; anything else that fails here is malformed.
        self.check(&g).map_err(|_| bad())?;
        Ok(g)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Zd { d } => write!(f, "z:{d}"),
            Group::Free { k } => write!(f, "free:{k}"),
            Group::Lamplighter { q } => write!(f, "lamplighter:{q}"),
        }
    }
}

impl FromStr for Group {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::UnknownGroup(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let n: u32 = arg.parse().map_err(|_| bad())?;
        match kind {
            "z" if n >= 1 => Ok(Group::Zd { d: n as usize }),
            "free" if (1..=26).contains(&n) => Ok(Group::Free { k: n as usize }),
            "lamplighter" if n >= 2 => Ok(Group::Lamplighter { q: n }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Zd(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Free(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Free(w) => {
                for &l in w {
                    let c = if l > 0 { b'a' + (l - 1) as u8 } else { b'A' + (-l - 1) as u8 };
                    write!(f, "{}", c as char)?;
                }
                Ok(())
            }
            GroupElement::Lamplighter(c) => {
                let parts: Vec<String> = c.lamps.iter().map(|(p, v)| format!("{p}:{v}")).collect();
                write!(f, "[{}]@{}", parts.join(","), c.cursor)
            }
        }
    }
}
