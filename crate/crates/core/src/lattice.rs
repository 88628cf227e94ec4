//! Set-partition algebra and learning spaces.
//!
//! A [`Partition`] of the domain doubles as a learning-space node: its model
//! contains every hypothesis constant on each block, and the model's VC
//! dimension equals the number of blocks. The node order used throughout is
//! model inclusion: `p <= q` iff `q` refines `p` (every block of `q` sits
//! inside a block of `p`), so the coarsest partition is the least node.
//!
//! Partitions are stored as restricted-growth strings: entry `i` is the index
//! of the block containing point `i`, blocks numbered by first occurrence.
//! That encoding is canonical (blocks ordered by least element, elements in
//! domain order), so derived equality and ordering are canonical too.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::domain::FiniteDomain;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    rgs: Vec<u8>,
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .into_iter()
            .map(|b| {
                b.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "Partition({})", blocks.join("|"))
    }
}

impl Partition {
    /// The single-block partition (least node, VC dimension 1).
    pub fn coarsest(n_points: usize) -> Self {
        assert!(n_points >= 1 && n_points <= u8::MAX as usize);
        Self {
            rgs: vec![0; n_points],
        }
    }

    /// The all-singletons partition (greatest node, VC dimension `n`).
    pub fn singletons(n_points: usize) -> Self {
        assert!(n_points >= 1 && n_points <= u8::MAX as usize);
        Self {
            rgs: (0..n_points as u8).collect(),
        }
    }

    /// Canonicalizes an arbitrary block-index assignment by first occurrence.
    pub fn from_assignment(assignment: &[u8]) -> Self {
        assert!(!assignment.is_empty() && assignment.len() <= u8::MAX as usize);
        let mut relabel: BTreeMap<u8, u8> = BTreeMap::new();
        let mut next = 0u8;
        let rgs = assignment
            .iter()
            .map(|&a| {
                *relabel.entry(a).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Self { rgs }
    }

    /// Builds from explicit blocks, which must cover `0..n_points` exactly once.
    pub fn from_blocks(blocks: &[Vec<usize>], n_points: usize) -> Result<Self> {
        let mut assignment = vec![u8::MAX; n_points];
        let mut covered = 0usize;
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            for &p in block {
                if p >= n_points {
                    return Err(Error::InvalidInput(format!(
                        "point {p} outside domain of {n_points}"
                    )));
                }
                if assignment[p] != u8::MAX {
                    return Err(Error::InvalidInput(format!("point {p} in two blocks")));
                }
                assignment[p] = b as u8;
                covered += 1;
            }
        }
        if covered != n_points {
            return Err(Error::InvalidInput("blocks do not cover the domain".into()));
        }
        Ok(Self::from_assignment(&assignment))
    }

    pub fn n_points(&self) -> usize {
        self.rgs.len()
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.rgs[point] as usize
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (p, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(p);
        }
        blocks
    }

    fn check_same_domain(&self, other: &Partition) -> Result<()> {
        if self.n_points() != other.n_points() {
            return Err(Error::DomainMismatch {
                left: self.n_points(),
                right: other.n_points(),
            });
        }
        Ok(())
    }

    /// Model inclusion: true iff `other` refines `self`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        self.check_same_domain(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.n_points(), other.n_points());
        // Each block of `other` must map into a single block of `self`.
        let mut image = vec![u8::MAX; other.block_count()];
        for (p, &ob) in other.rgs.iter().enumerate() {
            let sb = self.rgs[p];
            if image[ob as usize] == u8::MAX {
                image[ob as usize] = sb;
            } else if image[ob as usize] != sb {
                return false;
            }
        }
        true
    }

    /// Finest common coarsening (greatest node below both).
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_same_domain(other)?;
        let n = self.n_points();
        // Union-find over points: connect points sharing a block in either.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for part in [self, other] {
            let mut first_of_block: BTreeMap<u8, usize> = BTreeMap::new();
            for (p, &b) in part.rgs.iter().enumerate() {
                if let Some(&f) = first_of_block.get(&b) {
                    let (ra, rb) = (find(&mut parent, f), find(&mut parent, p));
                    if ra != rb {
                        parent[rb] = ra;
                    }
                } else {
                    first_of_block.insert(b, p);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|p| find(&mut parent, p)).collect();
        let mut ids: BTreeMap<usize, u8> = BTreeMap::new();
        let mut next = 0u8;
        let assignment: Vec<u8> = roots
            .iter()
            .map(|&r| {
                *ids.entry(r).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Ok(Partition::from_assignment(&assignment))
    }

    /// Coarsest common refinement (least node above both).
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_same_domain(other)?;
        let mut ids: BTreeMap<(u8, u8), u8> = BTreeMap::new();
        let mut next = 0u8;
        let assignment: Vec<u8> = self
            .rgs
            .iter()
            .zip(&other.rgs)
            .map(|(&a, &b)| {
                *ids.entry((a, b)).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Ok(Partition::from_assignment(&assignment))
    }

    /// Canonical text form: blocks joined by `|`, point labels by `,`.
    pub fn encode(&self, domain: &FiniteDomain) -> String {
        assert_eq!(self.n_points(), domain.len());
        self.blocks()
            .into_iter()
            .map(|b| {
                b.iter()
                    .map(|&p| domain.label(p).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses the canonical text form against a domain.
    pub fn parse(encoding: &str, domain: &FiniteDomain) -> Result<Partition> {
        let bad = |reason: String| Error::BadEncoding {
            encoding: encoding.to_string(),
            reason,
        };
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for block in encoding.split('|') {
            let mut points = Vec::new();
            for label in block.split(',') {
                let label = label.trim();
                let p = domain
                    .index_of(label)
                    .ok_or_else(|| bad(format!("unknown point {label:?}")))?;
                points.push(p);
            }
            blocks.push(points);
        }
        Partition::from_blocks(&blocks, domain.len()).map_err(|e| bad(e.to_string()))
    }

    /// All partitions covering `self`: split one block into two.
    fn covers_up(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for (b, block) in self.blocks().into_iter().enumerate() {
            let s = block.len();
            if s < 2 {
                continue;
            }
            // The moved-out part never contains block[0], so each unordered
            // split appears exactly once.
            for mask in 1u32..(1 << (s - 1)) {
                let mut assignment = self.rgs.clone();
                let new_block = self.block_count() as u8;
                for (bit, &p) in block[1..].iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        assignment[p] = new_block;
                    }
                }
                let _ = b;
                out.push(Partition::from_assignment(&assignment));
            }
        }
        out.sort();
        out
    }

    /// All partitions covered by `self`: merge two blocks.
    fn covers_down(&self) -> Vec<Partition> {
        let k = self.block_count();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let assignment: Vec<u8> = self
                    .rgs
                    .iter()
                    .map(|&b| if b as usize == j { i as u8 } else { b })
                    .collect();
                out.push(Partition::from_assignment(&assignment));
            }
        }
        out.sort();
        out
    }
}

/// Lazy enumeration of all partitions of `n` points in canonical
/// (restricted-growth lexicographic) order.
pub struct PartitionIter {
    next: Option<Vec<u8>>,
}

impl PartitionIter {
    pub fn new(n_points: usize) -> Self {
        assert!(n_points >= 1 && n_points <= u8::MAX as usize);
        Self {
            next: Some(vec![0; n_points]),
        }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        let mut rgs = current.clone();
        let mut advanced = false;
        for i in (1..rgs.len()).rev() {
            let prefix_max = *rgs[..i].iter().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                rgs[i + 1..].fill(0);
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(rgs);
        }
        Some(Partition { rgs: current })
    }
}

/// A subset of features, 1-indexed within `1..=d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeatureSet(pub BTreeSet<usize>);

impl FeatureSet {
    pub fn empty() -> Self {
        FeatureSet(BTreeSet::new())
    }
}

impl FromIterator<usize> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        FeatureSet(iter.into_iter().collect())
    }
}

/// Partition of the domain into classes that agree on the selected features.
///
/// The empty set collapses everything into one block.
pub fn feature_set_to_partition(domain: &FiniteDomain, set: &FeatureSet) -> Result<Partition> {
    let rows = domain.features().ok_or(Error::MissingFeatures)?;
    let width = rows[0].len();
    for &f in &set.0 {
        if f == 0 || f > width {
            return Err(Error::FeatureOutOfRange { index: f, width });
        }
    }
    let mut ids: BTreeMap<Vec<bool>, u8> = BTreeMap::new();
    let mut next = 0u8;
    let assignment: Vec<u8> = rows
        .iter()
        .map(|row| {
            let key: Vec<bool> = set.0.iter().map(|&f| row[f - 1]).collect();
            *ids.entry(key).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect();
    Ok(Partition::from_assignment(&assignment))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// A finite poset of partition nodes with on-the-fly Hasse neighborhoods.
///
/// The full partition lattice is never materialized; neighbors are generated
/// by splitting and merging blocks. Restricted variants resolve their Hasse
/// covers by walking the base lattice.
#[derive(Clone)]
pub struct LearningSpace {
    n_points: usize,
    kind: SpaceKind,
}

#[derive(Clone)]
enum SpaceKind {
    FullPartition,
    Feature { nodes: Arc<BTreeSet<Partition>> },
    Restricted {
        base: Arc<LearningSpace>,
        predicate: Arc<dyn Fn(&Partition) -> bool + Send + Sync>,
    },
}

impl std::fmt::Debug for LearningSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            SpaceKind::FullPartition => write!(f, "LearningSpace::FullPartition({})", self.n_points),
            SpaceKind::Feature { nodes } => {
                write!(f, "LearningSpace::Feature({} nodes)", nodes.len())
            }
            SpaceKind::Restricted { base, .. } => {
                write!(f, "LearningSpace::Restricted(base = {base:?})")
            }
        }
    }
}

impl LearningSpace {
    /// The full partition lattice of the domain: Bell(`n`) nodes.
    pub fn full_partition_lattice(domain: &FiniteDomain) -> Self {
        Self {
            n_points: domain.len(),
            kind: SpaceKind::FullPartition,
        }
    }

    /// The feature-selection lattice: one node per distinct partition induced
    /// by a feature subset. Requires feature vectors on the domain.
    pub fn feature_lattice(domain: &FiniteDomain) -> Result<Self> {
        let width = domain.feature_width().ok_or(Error::MissingFeatures)?;
        if width > 16 {
            return Err(Error::InvalidInput(format!(
                "feature lattice over {width} features is not enumerable here"
            )));
        }
        let mut nodes = BTreeSet::new();
        for mask in 0u32..(1 << width) {
            let set = FeatureSet::from_iter((1..=width).filter(|f| mask >> (f - 1) & 1 == 1));
            nodes.insert(feature_set_to_partition(domain, &set)?);
        }
        Ok(Self {
            n_points: domain.len(),
            kind: SpaceKind::Feature {
                nodes: Arc::new(nodes),
            },
        })
    }

    /// Keeps only the base nodes satisfying the predicate.
    ///
    /// Every node is still a partition, so strict model inclusion still
    /// strictly increases the block count (the VC grading survives any
    /// restriction; tied-VC edges cannot arise).
    pub fn restricted(
        base: LearningSpace,
        predicate: impl Fn(&Partition) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            n_points: base.n_points,
            kind: SpaceKind::Restricted {
                base: Arc::new(base),
                predicate: Arc::new(predicate),
            },
        }
    }

    /// Nodes of the full lattice with VC dimension at most `max_vc`.
    pub fn vc_restricted(domain: &FiniteDomain, max_vc: usize) -> Self {
        Self::restricted(Self::full_partition_lattice(domain), move |p| {
            p.block_count() <= max_vc
        })
    }

    /// Restriction to an explicit node set.
    pub fn from_nodes(domain: &FiniteDomain, nodes: Vec<Partition>) -> Self {
        let set: BTreeSet<Partition> = nodes.into_iter().collect();
        Self::restricted(Self::full_partition_lattice(domain), move |p| {
            set.contains(p)
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn contains(&self, node: &Partition) -> bool {
        if node.n_points() != self.n_points {
            return false;
        }
        match &self.kind {
            SpaceKind::FullPartition => true,
            SpaceKind::Feature { nodes } => nodes.contains(node),
            SpaceKind::Restricted { base, predicate } => {
                base.contains(node) && predicate(node)
            }
        }
    }

    fn ensure_member(&self, node: &Partition) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::NodeOutsideSpace(format!("{node:?}")))
        }
    }

    /// VC dimension of the node's model: its number of blocks.
    pub fn vc_dim(&self, node: &Partition) -> usize {
        node.block_count()
    }

    /// Yields every node exactly once, in canonical order.
    pub fn enumerate(&self) -> Box<dyn Iterator<Item = Partition> + '_> {
        match &self.kind {
            SpaceKind::FullPartition => Box::new(PartitionIter::new(self.n_points)),
            SpaceKind::Feature { nodes } => Box::new(nodes.iter().cloned()),
            SpaceKind::Restricted { base, predicate } => {
                let predicate = predicate.clone();
                Box::new(base.enumerate().filter(move |p| predicate(p)))
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.enumerate().count()
    }

    /// Immediate Hasse neighbors of a member node, in canonical order.
    pub fn neighbors(&self, node: &Partition, direction: Direction) -> Result<Vec<Partition>> {
        self.ensure_member(node)?;
        Ok(self.neighbors_unchecked(node, direction))
    }

    pub fn up_neighbors(&self, node: &Partition) -> Result<Vec<Partition>> {
        self.neighbors(node, Direction::Up)
    }

    pub fn down_neighbors(&self, node: &Partition) -> Result<Vec<Partition>> {
        self.neighbors(node, Direction::Down)
    }

    pub(crate) fn neighbors_unchecked(&self, node: &Partition, direction: Direction) -> Vec<Partition> {
        match &self.kind {
            SpaceKind::FullPartition => match direction {
                Direction::Up => node.covers_up(),
                Direction::Down => node.covers_down(),
            },
            SpaceKind::Feature { nodes } => {
                // Minimal strictly-above (or maximal strictly-below) members.
                let comparable: Vec<&Partition> = nodes
                    .iter()
                    .filter(|q| {
                        *q != node
                            && match direction {
                                Direction::Up => node.leq_unchecked(q),
                                Direction::Down => q.leq_unchecked(node),
                            }
                    })
                    .collect();
                comparable
                    .iter()
                    .filter(|q| {
                        !comparable.iter().any(|r| {
                            *r != **q
                                && match direction {
                                    Direction::Up => r.leq_unchecked(q),
                                    Direction::Down => q.leq_unchecked(r),
                                }
                        })
                    })
                    .map(|q| (*q).clone())
                    .collect()
            }
            SpaceKind::Restricted { base, predicate } => {
                // Walk base covers outward, stopping at predicate members,
                // then drop non-extremal survivors.
                let mut found: BTreeSet<Partition> = BTreeSet::new();
                let mut seen: BTreeSet<Partition> = BTreeSet::new();
                let mut frontier = VecDeque::from([node.clone()]);
                while let Some(q) = frontier.pop_front() {
                    for r in base.neighbors_unchecked(&q, direction) {
                        if seen.insert(r.clone()) {
                            if predicate(&r) {
                                found.insert(r);
                            } else {
                                frontier.push_back(r);
                            }
                        }
                    }
                }
                let all: Vec<Partition> = found.into_iter().collect();
                all.iter()
                    .filter(|q| {
                        !all.iter().any(|r| {
                            r != *q
                                && match direction {
                                    Direction::Up => r.leq_unchecked(q),
                                    Direction::Down => q.leq_unchecked(r),
                                }
                        })
                    })
                    .cloned()
                    .collect()
            }
        }
    }

    /// Shortest path length in the undirected Hasse graph, `None` when the
    /// nodes lie in disconnected components of a restricted space.
    pub fn hasse_distance(&self, from: &Partition, to: &Partition) -> Result<Option<usize>> {
        self.ensure_member(from)?;
        self.ensure_member(to)?;
        if from == to {
            return Ok(Some(0));
        }
        let mut visited: BTreeSet<Partition> = BTreeSet::from([from.clone()]);
        let mut frontier = vec![from.clone()];
        let mut dist = 0usize;
        while !frontier.is_empty() {
            dist += 1;
            let mut next = Vec::new();
            for node in frontier {
                for dir in [Direction::Up, Direction::Down] {
                    for q in self.neighbors_unchecked(&node, dir) {
                        if q == *to {
                            return Ok(Some(dist));
                        }
                        if visited.insert(q.clone()) {
                            next.push(q);
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(None)
    }
}
