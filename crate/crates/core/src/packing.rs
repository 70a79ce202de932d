//! 3-Set Packing over families of 2- and 3-element subsets.
//!
//! Two backends: an exact branch-and-bound and the classical swap-based
//! local search. Each backend carries a guarantee `beta` with
//! `|packing| >= beta * optimum`, which feeds the ratio analysis of the
//! half-dense solver.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest universe representable by the packing bitmasks.
pub const MAX_UNIVERSE: usize = 128;

/// Default universe limit of the exact backend.
pub const DEFAULT_EXACT_LIMIT: usize = 24;

type Mask = u128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance {
    universe_size: usize,
    family: Vec<Vec<usize>>,
    masks: Vec<Mask>,
}

#[derive(Serialize, Deserialize)]
struct PackingJson {
    universe: usize,
    family: Vec<Vec<usize>>,
}

impl Serialize for PackingInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PackingJson {
            universe: self.universe_size,
            family: self.family.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PackingInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PackingJson::deserialize(d)?;
        PackingInstance::new(raw.universe, raw.family).map_err(serde::de::Error::custom)
    }
}

impl PackingInstance {
    /// Members are sorted and checked (size 2 or 3, inside the universe);
    /// repeated members are dropped, keeping the first occurrence.
    pub fn new(universe_size: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        if universe_size > MAX_UNIVERSE {
            return Err(Error::SizeLimit(format!(
                "packing universe {universe_size} exceeds {MAX_UNIVERSE}"
            )));
        }
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(family.len());
        let mut masks = Vec::with_capacity(family.len());
        for mut member in family {
            member.sort_unstable();
            member.dedup();
            if !(2..=3).contains(&member.len()) {
                return Err(Error::Input(format!(
                    "family member {member:?} must have 2 or 3 distinct elements"
                )));
            }
            if let Some(&x) = member.iter().find(|&&x| x >= universe_size) {
                return Err(Error::Input(format!(
                    "element {x} outside universe 0..{universe_size}"
                )));
            }
            if seen.insert(member.clone()) {
                masks.push(member.iter().fold(0, |m: Mask, &x| m | 1 << x));
                kept.push(member);
            }
        }
        Ok(PackingInstance {
            universe_size,
            family: kept,
            masks,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn member(&self, idx: usize) -> &[usize] {
        &self.family[idx]
    }

    /// Whether `chosen` names valid, pairwise disjoint members.
    pub fn is_packing(&self, chosen: &[usize]) -> bool {
        let mut used: Mask = 0;
        for &c in chosen {
            match self.masks.get(c) {
                Some(&m) if m & used == 0 => used |= m,
                _ => return false,
            }
        }
        true
    }
}

/// Indices of chosen family members, ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub chosen: Vec<usize>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

/// Maximum packing with the default universe limit.
pub fn solve_packing_exact(p: &PackingInstance) -> Result<Packing> {
    solve_packing_exact_with_limit(p, DEFAULT_EXACT_LIMIT)
}

/// Maximum packing; among maxima, the lexicographically smallest index list.
pub fn solve_packing_exact_with_limit(p: &PackingInstance, max_universe: usize) -> Result<Packing> {
    if p.universe_size > max_universe {
        return Err(Error::SizeLimit(format!(
            "exact packing handles universes up to {max_universe}, got {}; use the local search backend",
            p.universe_size
        )));
    }
    let m = p.masks.len();
    let mut suffix_union = vec![0 as Mask; m + 1];
    for i in (0..m).rev() {
        suffix_union[i] = suffix_union[i + 1] | p.masks[i];
    }

    struct Search<'a> {
        masks: &'a [Mask],
        suffix_union: &'a [Mask],
        chosen: Vec<usize>,
        best: Vec<usize>,
    }

    impl Search<'_> {
        // Include-first DFS visits equal-size packings in lexicographic order,
        // so the first packing of the maximum size found is the smallest one.
        fn run(&mut self, idx: usize, used: Mask) {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            if idx == self.masks.len() {
                return;
            }
            let free = (self.suffix_union[idx] & !used).count_ones() as usize;
            if self.chosen.len() + free / 2 <= self.best.len() {
                return;
            }
            let mask = self.masks[idx];
            if mask & used == 0 {
                self.chosen.push(idx);
                self.run(idx + 1, used | mask);
                self.chosen.pop();
            }
            self.run(idx + 1, used);
        }
    }

    let greedy = greedy_packing(p);
    let mut search = Search {
        masks: &p.masks,
        suffix_union: &suffix_union,
        chosen: Vec::new(),
        best: greedy,
    };
    search.run(0, 0);
    Ok(Packing { chosen: search.best })
}

/// Maximal packing taking members in family order.
fn greedy_packing(p: &PackingInstance) -> Vec<usize> {
    let mut used: Mask = 0;
    let mut chosen = Vec::new();
    for (i, &m) in p.masks.iter().enumerate() {
        if m & used == 0 {
            used |= m;
            chosen.push(i);
        }
    }
    chosen
}

/// Local search from the greedy maximal packing.
///
/// An improving move removes `r <= swap_size` chosen members and inserts
/// `r + 1` new pairwise disjoint members. Moves are tried with `r`
/// ascending and removal sets in lexicographic order; the first improving
/// move is applied and the scan restarts, until none exists.
pub fn solve_packing_local_search(p: &PackingInstance, swap_size: usize) -> Result<Packing> {
    solve_packing_local_search_from(p, swap_size, greedy_packing(p))
}

/// Local search from a caller-chosen starting packing.
pub fn solve_packing_local_search_from(
    p: &PackingInstance,
    swap_size: usize,
    start: Vec<usize>,
) -> Result<Packing> {
    if swap_size == 0 {
        return Err(Error::Input("swap size must be at least 1".into()));
    }
    let mut chosen = start;
    chosen.sort_unstable();
    if !p.is_packing(&chosen) {
        return Err(Error::Input("starting packing is not disjoint".into()));
    }
    while let Some(next) = improving_move(p, &chosen, swap_size) {
        chosen = next;
    }
    Ok(Packing { chosen })
}

fn improving_move(p: &PackingInstance, chosen: &[usize], swap_size: usize) -> Option<Vec<usize>> {
    let in_packing: HashSet<usize> = chosen.iter().copied().collect();
    for r in 0..=swap_size.min(chosen.len()) {
        let mut removal = Vec::with_capacity(r);
        let mut found = None;
        for_each_combination(chosen.len(), r, &mut removal, &mut |rem| {
            let kept_mask = chosen
                .iter()
                .enumerate()
                .filter(|(pos, _)| !rem.contains(pos))
                .fold(0 as Mask, |m, (_, &c)| m | p.masks[c]);
            let candidates: Vec<usize> = (0..p.masks.len())
                .filter(|c| !in_packing.contains(c) && p.masks[*c] & kept_mask == 0)
                .collect();
            let mut pick = Vec::with_capacity(r + 1);
            if pick_disjoint(&p.masks, &candidates, 0, 0, r + 1, &mut pick) {
                let mut next: Vec<usize> = chosen
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| !rem.contains(pos))
                    .map(|(_, &c)| c)
                    .chain(pick)
                    .collect();
                next.sort_unstable();
                found = Some(next);
                return true;
            }
            false
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Calls `visit` on each `r`-subset of `0..n` in lexicographic order until it returns true.
fn for_each_combination(
    n: usize,
    r: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if current.len() == r {
        return visit(current);
    }
    let start = current.last().map_or(0, |&x| x + 1);
    for i in start..n {
        if n - i < r - current.len() {
            break;
        }
        current.push(i);
        if for_each_combination(n, r, current, visit) {
            return true;
        }
        current.pop();
    }
    false
}

fn pick_disjoint(
    masks: &[Mask],
    candidates: &[usize],
    from: usize,
    used: Mask,
    need: usize,
    pick: &mut Vec<usize>,
) -> bool {
    if pick.len() == need {
        return true;
    }
    for pos in from..candidates.len() {
        let c = candidates[pos];
        if masks[c] & used == 0 {
            pick.push(c);
            if pick_disjoint(masks, candidates, pos + 1, used | masks[c], need, pick) {
                return true;
            }
            pick.pop();
        }
    }
    false
}

/// Which packing subroutine the half-dense solver uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingBackend {
    Exact,
    LocalSearch { swap_size: usize },
}

impl PackingBackend {
    pub fn solve(&self, p: &PackingInstance) -> Result<Packing> {
        match *self {
            PackingBackend::Exact => solve_packing_exact(p),
            PackingBackend::LocalSearch { swap_size } => solve_packing_local_search(p, swap_size),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PackingBackend::Exact => "exact",
            PackingBackend::LocalSearch { .. } => "local",
        }
    }
}

impl fmt::Display for PackingBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackingBackend::Exact => write!(f, "exact"),
            PackingBackend::LocalSearch { swap_size } => write!(f, "local-s{swap_size}"),
        }
    }
}

impl FromStr for PackingBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PackingBackend::Exact),
            "local" => Ok(PackingBackend::LocalSearch { swap_size: 2 }),
            _ => match s.strip_prefix("local-s").map(str::parse) {
                Some(Ok(swap_size)) => Ok(PackingBackend::LocalSearch { swap_size }),
                _ => Err(Error::Input(format!("unknown packing backend {s:?}"))),
            },
        }
    }
}

/// Guarantee `beta` of a backend: `|packing| >= beta * optimum`.
///
/// Swap size 1 yields at least a maximal packing (1/3). Any swap size of 2
/// or more admits every one-for-two exchange, which gives 1/2 for sets of
/// size at most 3. Larger swaps do better in the limit, but the table keeps
/// the bounds that hold for every fixed swap size.
pub fn packing_guarantee(backend: PackingBackend) -> Rational {
    match backend {
        PackingBackend::Exact => Rational::from_integer(1),
        PackingBackend::LocalSearch { swap_size: 0 | 1 } => Rational::new(1, 3),
        PackingBackend::LocalSearch { .. } => Rational::new(1, 2),
    }
}

/// Guarantee `(3 - epsilon) / 4` of a `(4/3 + epsilon)`-style subroutine.
pub fn assumed_subroutine_guarantee(epsilon: Rational) -> Rational {
    (Rational::from_integer(3) - epsilon) / Rational::from_integer(4)
}
