//! Independence oracles for uniform, partition and transversal matroids and
//! the basis-exchange bijection between two bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serialized description of a matroid; also the on-disk `{kind, payload}` form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum MatroidKind {
    /// Independent iff `|S| ≤ capacity`.
    Uniform { n: usize, capacity: usize },
    /// Item `u` lies in block `block_of[u]`; block `b` admits at most
    /// `caps[b]` items (`None` = unbounded).
    Partition {
        block_of: Vec<usize>,
        caps: Vec<Option<usize>>,
    },
    /// Independent iff `S` has a system of distinct representatives in `sets`.
    Transversal { n: usize, sets: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatroidKind", into = "MatroidKind")]
pub struct Matroid {
    kind: MatroidKind,
    /// Transversal only: indices of the sets containing each item.
    containing: Vec<Vec<usize>>,
}

impl TryFrom<MatroidKind> for Matroid {
    type Error = Error;

    fn try_from(kind: MatroidKind) -> Result<Self> {
        match &kind {
            MatroidKind::Uniform { .. } => {}
            MatroidKind::Partition { block_of, caps } => {
                if let Some((u, &b)) = block_of.iter().enumerate().find(|(_, &b)| b >= caps.len()) {
                    return Err(Error::invalid(format!(
                        "item {u} assigned to block {b}, but only {} blocks exist",
                        caps.len()
                    )));
                }
            }
            MatroidKind::Transversal { n, sets } => {
                let mut containing = vec![Vec::new(); *n];
                for (i, set) in sets.iter().enumerate() {
                    for &u in set {
                        if u >= *n {
                            return Err(Error::invalid(format!("set {i} contains unknown item {u}")));
                        }
                        if !containing[u].contains(&i) {
                            containing[u].push(i);
                        }
                    }
                }
                return Ok(Self { kind, containing });
            }
        }
        Ok(Self {
            kind,
            containing: Vec::new(),
        })
    }
}

impl From<Matroid> for MatroidKind {
    fn from(m: Matroid) -> Self {
        m.kind
    }
}

impl Matroid {
    pub fn uniform(n: usize, capacity: usize) -> Self {
        Self {
            kind: MatroidKind::Uniform { n, capacity },
            containing: Vec::new(),
        }
    }

    pub fn partition(block_of: Vec<usize>, caps: Vec<Option<usize>>) -> Result<Self> {
        MatroidKind::Partition { block_of, caps }.try_into()
    }

    pub fn transversal(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        MatroidKind::Transversal { n, sets }.try_into()
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    /// Universe size.
    pub fn n(&self) -> usize {
        match &self.kind {
            MatroidKind::Uniform { n, .. } | MatroidKind::Transversal { n, .. } => *n,
            MatroidKind::Partition { block_of, .. } => block_of.len(),
        }
    }

    pub fn is_independent(&self, items: &[usize]) -> Result<bool> {
        self.check_items(items)?;
        Ok(self.independent(items))
    }

    /// Independence test without input validation.
    pub(crate) fn independent(&self, items: &[usize]) -> bool {
        match &self.kind {
            MatroidKind::Uniform { capacity, .. } => items.len() <= *capacity,
            MatroidKind::Partition { block_of, caps } => {
                let mut counts = vec![0usize; caps.len()];
                items.iter().all(|&u| {
                    let b = block_of[u];
                    counts[b] += 1;
                    caps[b].is_none_or(|c| counts[b] <= c)
                })
            }
            MatroidKind::Transversal { sets, .. } => {
                let mut owner = vec![None; sets.len()];
                items.iter().enumerate().all(|(i, _)| {
                    let mut seen = vec![false; sets.len()];
                    self.augment(items, i, &mut owner, &mut seen)
                })
            }
        }
    }

    /// `S + u` independent, assuming `S` is.
    pub(crate) fn can_add(&self, items: &[usize], u: usize) -> bool {
        match &self.kind {
            MatroidKind::Uniform { capacity, .. } => items.len() < *capacity,
            MatroidKind::Partition { block_of, caps } => {
                let b = block_of[u];
                caps[b].is_none_or(|c| items.iter().filter(|&&v| block_of[v] == b).count() < c)
            }
            MatroidKind::Transversal { .. } => {
                let mut with = items.to_vec();
                with.push(u);
                self.independent(&with)
            }
        }
    }

    /// `S − out + inn` independent, assuming `S` is.
    pub(crate) fn can_swap(&self, items: &[usize], out: usize, inn: usize) -> bool {
        match &self.kind {
            MatroidKind::Uniform { .. } => true,
            MatroidKind::Partition { block_of, caps } => {
                let b = block_of[inn];
                if block_of[out] == b {
                    return true;
                }
                caps[b].is_none_or(|c| items.iter().filter(|&&v| block_of[v] == b).count() < c)
            }
            MatroidKind::Transversal { .. } => {
                let swapped: Vec<usize> = items.iter().map(|&v| if v == out { inn } else { v }).collect();
                self.independent(&swapped)
            }
        }
    }

    /// Size of every basis.
    pub fn rank(&self) -> usize {
        match &self.kind {
            MatroidKind::Uniform { n, capacity } => (*n).min(*capacity),
            MatroidKind::Partition { block_of, caps } => {
                let mut sizes = vec![0usize; caps.len()];
                for &b in block_of {
                    sizes[b] += 1;
                }
                sizes
                    .iter()
                    .zip(caps)
                    .map(|(&s, c)| c.map_or(s, |c| c.min(s)))
                    .sum()
            }
            MatroidKind::Transversal { n, sets } => {
                let items: Vec<usize> = (0..*n).collect();
                let mut owner = vec![None; sets.len()];
                (0..*n)
                    .filter(|&i| {
                        let mut seen = vec![false; sets.len()];
                        self.augment(&items, i, &mut owner, &mut seen)
                    })
                    .count()
            }
        }
    }

    /// Greedily extends an independent set to a basis, trying items in
    /// `preference` order and then any remaining items by ascending id.
    pub fn extend_to_basis(&self, items: &[usize], preference: &[usize]) -> Result<Vec<usize>> {
        if !self.is_independent(items)? {
            return Err(Error::invalid("cannot extend a dependent set"));
        }
        let n = self.n();
        let mut basis = items.to_vec();
        let mut tried = vec![false; n];
        for &u in items {
            tried[u] = true;
        }
        let rest: Vec<usize> = (0..n).collect();
        for &u in preference.iter().chain(&rest) {
            if u >= n || std::mem::replace(&mut tried[u], true) {
                continue;
            }
            if self.can_add(&basis, u) {
                basis.push(u);
            }
        }
        Ok(basis)
    }

    /// A bijection `g: S−O → O−S` with `S − b + g(b)` independent for every
    /// `b`, found as a perfect matching in the feasible-exchange graph.
    pub fn exchange_bijection(&self, s: &[usize], o: &[usize]) -> Result<ExchangeMap> {
        let rank = self.rank();
        for (name, set) in [("S", s), ("O", o)] {
            if set.len() != rank || !self.is_independent(set)? {
                return Err(Error::invalid(format!("{name} is not a basis")));
            }
        }
        let out: Vec<usize> = s.iter().copied().filter(|u| !o.contains(u)).collect();
        let inn: Vec<usize> = o.iter().copied().filter(|u| !s.contains(u)).collect();
        let feasible: Vec<Vec<usize>> = out
            .iter()
            .map(|&b| (0..inn.len()).filter(|&j| self.can_swap(s, b, inn[j])).collect())
            .collect();

        // Kuhn's augmenting paths from each removed item.
        let mut matched_to: Vec<Option<usize>> = vec![None; inn.len()];
        fn try_match(i: usize, adj: &[Vec<usize>], seen: &mut [bool], matched_to: &mut [Option<usize>]) -> bool {
            for &j in &adj[i] {
                if !std::mem::replace(&mut seen[j], true)
                    && matched_to[j].is_none_or(|k| try_match(k, adj, seen, matched_to))
                {
                    matched_to[j] = Some(i);
                    return true;
                }
            }
            false
        }
        for i in 0..out.len() {
            let mut seen = vec![false; inn.len()];
            if !try_match(i, &feasible, &mut seen, &mut matched_to) {
                return Err(Error::Internal(format!(
                    "no exchange partner for item {} (independence oracle inconsistent)",
                    out[i]
                )));
            }
        }
        let mut pairs = vec![(0, 0); out.len()];
        for (j, i) in matched_to.iter().enumerate() {
            let i = i.expect("perfect matching");
            pairs[i] = (out[i], inn[j]);
        }
        Ok(ExchangeMap { pairs })
    }

    fn check_items(&self, items: &[usize]) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &u in items {
            if u >= n {
                return Err(Error::invalid(format!("unknown item {u} (n = {n})")));
            }
            if std::mem::replace(&mut seen[u], true) {
                return Err(Error::invalid(format!("item {u} listed twice")));
            }
        }
        Ok(())
    }

    /// Augmenting path for `items[i]` over the transversal collection.
    fn augment(&self, items: &[usize], i: usize, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &set in &self.containing[items[i]] {
            if std::mem::replace(&mut seen[set], true) {
                continue;
            }
            if owner[set].is_none_or(|k| self.augment(items, k, owner, seen)) {
                owner[set] = Some(i);
                return true;
            }
        }
        false
    }
}

/// Pairs `(b, g(b))` of an exchange bijection, in the order of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExchangeMap {
    pairs: Vec<(usize, usize)>,
}

impl ExchangeMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks bijectivity and that every `S − b + g(b)` is independent.
    pub fn verify(&self, m: &Matroid, s: &[usize], o: &[usize]) -> bool {
        let out: Vec<usize> = s.iter().copied().filter(|u| !o.contains(u)).collect();
        let mut inn: Vec<usize> = o.iter().copied().filter(|u| !s.contains(u)).collect();
        let mut from: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        let mut to: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        let mut out_sorted = out;
        out_sorted.sort_unstable();
        inn.sort_unstable();
        from.sort_unstable();
        to.sort_unstable();
        from == out_sorted
            && to == inn
            && self.pairs.iter().all(|&(b, c)| {
                let swapped: Vec<usize> = s.iter().map(|&v| if v == b { c } else { v }).collect();
                m.independent(&swapped)
            })
    }
}
