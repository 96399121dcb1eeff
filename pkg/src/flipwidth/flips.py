"""Flip algebra: partitions, k-flips, definable flips, and ordered cut-flips."""

from .errors import GenerationError, LimitExceeded, SchemaError
from .graphs import Graph, INF, bits, mask_of

# Default exhaustive-enumeration limits: largest n allowed per width k.
# Configuration, not constants: every enumerating function takes max_n.
# Width 1 only ever yields the graph and its complement, so it is bounded
# by the interchange format, not by enumeration cost.
FLIP_ENUM_MAX_N = {1: 62, 2: 12, 3: 8}
FLIP_ENUM_MAX_N_DEFAULT = 7
DEFINABLE_MAX_K = 3


def flip_enum_limit(k):
    return FLIP_ENUM_MAX_N.get(k, FLIP_ENUM_MAX_N_DEFAULT)


class Partition:
    """Vertex partition in canonical restricted-growth form."""

    __slots__ = ("blocks", "size")

    def __init__(self, blocks):
        blocks = tuple(blocks)
        relabel = {}
        canon = []
        for b in blocks:
            if b not in relabel:
                relabel[b] = len(relabel)
            canon.append(relabel[b])
        self.blocks = tuple(canon)
        self.size = len(relabel)

    def block_masks(self):
        masks = [0] * self.size
        for v, b in enumerate(self.blocks):
            masks[b] |= 1 << v
        return masks

    def block_of(self, v):
        return self.blocks[v]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"Partition({list(self.blocks)})"


class FlipSpec:
    """A partition plus flipped block pairs; (i,i) flips within a block."""

    __slots__ = ("partition", "pairs")

    def __init__(self, partition, pairs):
        norm = set()
        for i, j in pairs:
            if not (0 <= i < partition.size and 0 <= j < partition.size):
                raise GenerationError(f"flip pair ({i},{j}) references a missing block")
            norm.add((min(i, j), max(i, j)))
        self.partition = partition
        self.pairs = frozenset(norm)

    def to_json(self):
        return {"blocks": list(self.partition.blocks),
                "pairs": sorted(list(p) for p in self.pairs)}

    @classmethod
    def from_json(cls, obj):
        try:
            blocks = obj["blocks"]
            pairs = [tuple(p) for p in obj["pairs"]]
        except (KeyError, TypeError) as e:
            raise SchemaError(f"flip spec JSON missing field: {e}") from None
        return cls(Partition(blocks), pairs)

    def __eq__(self, other):
        return (isinstance(other, FlipSpec) and self.partition == other.partition
                and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.partition, self.pairs))

    def __repr__(self):
        return f"FlipSpec({self.partition!r}, pairs={sorted(self.pairs)})"


def identity_flip(n):
    return FlipSpec(Partition([0] * n), [])


class CutFlip:
    """Ordered-graph move: an edge flip plus a cut set S of size <= k."""

    __slots__ = ("flip", "cut")

    def __init__(self, flip, cut):
        self.flip = flip
        self.cut = frozenset(cut)

    def to_json(self):
        obj = self.flip.to_json()
        obj["cut"] = sorted(self.cut)
        return obj

    @classmethod
    def from_json(cls, obj):
        if "cut" not in obj:
            raise SchemaError("cut-flip JSON needs a 'cut' field")
        return cls(FlipSpec.from_json(obj), obj["cut"])

    def __eq__(self, other):
        return isinstance(other, CutFlip) and self.flip == other.flip and self.cut == other.cut

    def __hash__(self):
        return hash((self.flip, self.cut))


def flip_masks(base, spec):
    """Adjacency bitmasks of the flipped graph (no materialized Graph)."""
    blocks = spec.partition.blocks
    if len(blocks) != base.n:
        raise GenerationError("flip partition does not cover the vertex set")
    bm = spec.partition.block_masks()
    toggle = [0] * spec.partition.size
    for i, j in spec.pairs:
        toggle[i] |= bm[j]
        toggle[j] |= bm[i]
    return [(base.adj[v] ^ toggle[blocks[v]]) & ~(1 << v) for v in range(base.n)]


def apply_flip(g, spec):
    return Graph.from_masks(flip_masks(g, spec))


class FlippedGraph:
    """Lazy view of apply_flip(base, spec)."""

    __slots__ = ("base", "spec", "_toggle")

    def __init__(self, base, spec):
        self.base = base
        self.spec = spec
        bm = spec.partition.block_masks()
        toggle = [0] * spec.partition.size
        for i, j in spec.pairs:
            toggle[i] |= bm[j]
            toggle[j] |= bm[i]
        self._toggle = tuple(toggle)

    def adjacency(self, u, v):
        if u == v:
            return False
        flipped = (self._toggle[self.spec.partition.blocks[u]] >> v) & 1
        return bool(((self.base.adj[u] >> v) & 1) ^ flipped)


def flipped_adjacency(fg, u, v):
    return fg.adjacency(u, v)


# ---------------------------------------------------------------------------
# enumeration


def rgs_partitions(n, kmax):
    """Set partitions of 0..n-1 into <= kmax blocks, in restricted-growth
    lexicographic order."""
    if n == 0:
        yield Partition([])
        return
    blocks = [0] * n

    def rec(i, used):
        if i == n:
            yield Partition(blocks)
            return
        top = min(used, kmax - 1)
        for b in range(top + 1):
            blocks[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(1, 1)


def block_pairs(b):
    return [(i, j) for i in range(b) for j in range(i, b)]


def count_raw_flips(n, k):
    """Raw (partition, pair-subset) count before dedup."""
    total = 0
    for b in range(1, min(k, n) + 1):
        total += _stirling(n, b) * (1 << (b * (b + 1) // 2))
    return total


def _stirling(n, k):
    # S(n, k) via the standard recurrence S(n,k) = S(n-1,k-1) + k*S(n-1,k)
    if k == 0:
        return 1 if n == 0 else 0
    row = [1] + [0] * k
    for _ in range(n):
        row = [0] + [row[j - 1] + j * row[j] for j in range(1, k + 1)]
    return row[k]


def enumerate_k_flips(g, k, max_n=None, dedup=True):
    """Stream every <= k-flip of g as FlipSpec, identity first.

    Partitions in restricted-growth lexicographic order, pair subsets in
    binary counting order; deduplicated by resulting edge set (64-bit
    fingerprint, collisions resolved by full comparison).
    """
    if k < 1:
        raise GenerationError("flip width must be >= 1")
    limit = flip_enum_limit(k) if max_n is None else max_n
    if g.n > limit:
        raise LimitExceeded(
            f"enumerate_k_flips: n={g.n} exceeds the configured bound {limit} for k={k}")
    seen = {}
    for part in rgs_partitions(g.n, k):
        pairs = block_pairs(part.size)
        bm = part.block_masks()
        for sub in range(1 << len(pairs)):
            spec = FlipSpec(part, [pairs[t] for t in range(len(pairs)) if (sub >> t) & 1])
            if not dedup:
                yield spec
                continue
            fp = _edge_fingerprint(g, part, bm, spec)
            bucket = seen.setdefault(fp, [])
            masks = tuple(flip_masks(g, spec))
            if masks in bucket:
                continue
            bucket.append(masks)
            yield spec


def _edge_fingerprint(g, part, bm, spec):
    h = 0xCBF29CE484222325
    for row in flip_masks(g, spec):
        h ^= row
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def compose_flips(g, first, second):
    """Single FlipSpec over the common refinement equivalent to applying
    first then second."""
    blocks = [(first.partition.blocks[v], second.partition.blocks[v]) for v in range(g.n)]
    labels = {}
    canon = []
    for b in blocks:
        if b not in labels:
            labels[b] = len(labels)
        canon.append(labels[b])
    part = Partition(canon)
    rep = {}
    for v, b in enumerate(canon):
        rep.setdefault(b, v)
    pairs = []
    for i in range(part.size):
        for j in range(i, part.size):
            u, v = rep[i], rep[j]
            f1 = (min(first.partition.blocks[u], first.partition.blocks[v]),
                  max(first.partition.blocks[u], first.partition.blocks[v])) in first.pairs
            f2 = (min(second.partition.blocks[u], second.partition.blocks[v]),
                  max(second.partition.blocks[u], second.partition.blocks[v])) in second.pairs
            if f1 ^ f2:
                pairs.append((i, j))
    return FlipSpec(part, pairs)


# ---------------------------------------------------------------------------
# S-types and definable flips


def s_types(g, s_set, split_s_singletons=False):
    """Partition of V by the equivalence v ~ u iff N(v) ∩ S = N(u) ∩ S.

    With split_s_singletons, vertices of S additionally become singleton
    blocks (the K_{t,t} complexity-bound variant).
    """
    smask = mask_of(s_set)
    keys = {}
    canon = []
    for v in range(g.n):
        if split_s_singletons and (smask >> v) & 1:
            key = ("s", v)
        else:
            key = g.adj[v] & smask
        if key not in keys:
            keys[key] = len(keys)
        canon.append(keys[key])
    return Partition(canon)


def enumerate_definable_flips(g, k, max_k=None, dedup=True):
    """Stream (S, FlipSpec) pairs over all S with |S| <= k, deduplicated by
    resulting edge set."""
    limit = DEFINABLE_MAX_K if max_k is None else max_k
    if k > limit:
        raise LimitExceeded(f"enumerate_definable_flips: k={k} exceeds bound {limit}")
    seen = {}
    for smask in _subsets_up_to(g.n, k):
        s_set = tuple(bits(smask))
        part = s_types(g, s_set)
        pairs = block_pairs(part.size)
        for sub in range(1 << len(pairs)):
            spec = FlipSpec(part, [pairs[t] for t in range(len(pairs)) if (sub >> t) & 1])
            if dedup:
                masks = tuple(flip_masks(g, spec))
                if masks in seen:
                    continue
                seen[masks] = True
            yield s_set, spec


def _subsets_up_to(n, k):
    """Subset masks of 0..n-1 with popcount <= k: by size, then numerically."""
    import itertools
    for size in range(min(k, n) + 1):
        masks = sorted(mask_of(c) for c in itertools.combinations(range(n), size))
        yield from masks


# ---------------------------------------------------------------------------
# ordered cut-flips


def order_classes(n, cut):
    """Equivalence classes of ~_S: singletons for S, maximal S-free runs."""
    classes = []
    cur = 0
    for v in range(n):
        if v in cut:
            if cur:
                classes.append(cur)
                cur = 0
            classes.append(1 << v)
        else:
            cur |= 1 << v
    if cur:
        classes.append(cur)
    return classes


def cut_flip_weighted(og, cf):
    """(weight0, weight1) adjacency masks of the cut-flip's weighted graph."""
    g = og.graph
    w1 = flip_masks(g, cf.flip)
    classes = order_classes(g.n, cf.cut)
    w0 = [0] * g.n
    for cls in classes:
        for v in bits(cls):
            w0[v] = cls & ~(1 << v)
    return w0, w1


def cut_flip_ball_mask(og, cf, v, r):
    """0/1-weighted ball from v: weight-0 edges are ~_S, weight-1 are E'."""
    w0, w1 = cut_flip_weighted(og, cf)
    return _weighted_ball(w0, w1, v, r)


def _weighted_ball(w0, w1, v, r):
    cur = _zero_closure(w0, 1 << v)
    steps = 0
    while True:
        if r is not INF and steps >= r:
            break
        nxt = cur
        m = cur
        while m:
            low = m & -m
            nxt |= w1[low.bit_length() - 1]
            m ^= low
        nxt = _zero_closure(w0, nxt)
        if nxt == cur:
            break
        cur = nxt
        steps += 1
    return cur


def _zero_closure(w0, mask):
    while True:
        nxt = mask
        m = mask
        while m:
            low = m & -m
            nxt |= w0[low.bit_length() - 1]
            m ^= low
        if nxt == mask:
            return mask
        mask = nxt


def cut_flip_ball(og, cf, v, r):
    """Weighted ball as a set, plus whether v is isolated in the weighted graph."""
    w0, w1 = cut_flip_weighted(og, cf)
    isolated = w0[v] == 0 and w1[v] == 0
    return set(bits(_weighted_ball(w0, w1, v, r))), isolated


def cut_flip_isolated_mask(og, cf):
    w0, w1 = cut_flip_weighted(og, cf)
    iso = 0
    for v in range(og.n):
        if w0[v] == 0 and w1[v] == 0:
            iso |= 1 << v
    return iso


CUT_FLIP_WORK_LIMIT = 500_000


def enumerate_cut_flips(og, k, max_n=None):
    """Stream k-cut-flips: every <= k edge flip crossed with every |S| <= k.

    The default limit admits any n whose raw (flip, cut) count stays small;
    otherwise the per-width vertex bounds of enumerate_k_flips apply.
    """
    g = og.graph
    cuts = list(_subsets_up_to(g.n, k))
    if max_n is None:
        work = count_raw_flips(g.n, k) * len(cuts)
        if work <= CUT_FLIP_WORK_LIMIT:
            max_n = g.n
    for spec in enumerate_k_flips(g, k, max_n=max_n):
        for cmask in cuts:
            yield CutFlip(spec, bits_set(cmask))


def bits_set(mask):
    return frozenset(bits(mask))
