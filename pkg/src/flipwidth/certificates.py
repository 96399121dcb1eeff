"""Verification of the duality objects (hideouts, rich divisions, orders,
well-linked sets) and conversion of certificates into executable strategies."""

import itertools
import random
from collections import namedtuple

from .errors import (CertificateInvalid, GenerationError, LimitExceeded,
                     SchemaError)
from .flips import (FlipSpec, Partition, block_pairs, enumerate_k_flips,
                    flip_masks)
from .graphs import INF, ball_mask, bits, exact_subdivision, mask_of, popcount
from .params import well_linked_check

RICH_DIVISION_MAX_PARTS = 12
RICH_DIVISION_MAX_K = 3
COPS_HIDEOUT_MAX_K = 3
HIDEOUT_SEARCH_MAX_N = 8


class FlipHideout(namedtuple("FlipHideout", "u r k d")):
    """Vertex set letting the runner elude width-k flippers at radius r:
    every k-flip leaves at most d members with a small (<= d) trace of U
    in their radius-r ball."""

    def to_json(self):
        return {"kind": "flip_hideout", "U": sorted(self.u),
                "r": "inf" if self.r is INF else self.r, "k": self.k, "d": self.d}

    @classmethod
    def from_json(cls, obj):
        try:
            r = obj["r"]
            return cls(frozenset(obj["U"]), INF if r == "inf" else int(r),
                       int(obj["k"]), int(obj["d"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"flip hideout JSON: {e}") from None


class CopsHideout(namedtuple("CopsHideout", "u r k")):
    def to_json(self):
        return {"kind": "cops_hideout", "U": sorted(self.u), "r": self.r, "k": self.k}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(frozenset(obj["U"]), int(obj["r"]), int(obj["k"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"cops hideout JSON: {e}") from None


class RichDivision(namedtuple("RichDivision", "left right k")):
    """Interval partitions (lists of (lo, hi) inclusive ranges) of an
    ordered graph plus the richness parameter."""

    def to_json(self):
        return {"kind": "rich_division", "L": [list(iv) for iv in self.left],
                "R": [list(iv) for iv in self.right], "k": self.k}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(tuple(tuple(iv) for iv in obj["L"]),
                       tuple(tuple(iv) for iv in obj["R"]), int(obj["k"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"rich division JSON: {e}") from None


class WellLinkedCert(namedtuple("WellLinkedCert", "u k")):
    def to_json(self):
        return {"kind": "well_linked", "U": sorted(self.u), "k": self.k}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(frozenset(obj["U"]), int(obj["k"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"well linked JSON: {e}") from None


class OrderCert(namedtuple("OrderCert", "order r k")):
    """Total order witnessing the no-announcement cop bound (condition 3)."""

    def to_json(self):
        return {"kind": "order", "order": list(self.order), "r": self.r, "k": self.k}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(tuple(obj["order"]), int(obj["r"]), int(obj["k"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"order certificate JSON: {e}") from None


def certificate_from_json(obj):
    kinds = {"flip_hideout": FlipHideout, "cops_hideout": CopsHideout,
             "rich_division": RichDivision, "well_linked": WellLinkedCert,
             "order": OrderCert}
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("certificate JSON needs a 'kind' tag")
    kind = obj["kind"]
    if kind == "contraction_sequence":
        raise SchemaError("contraction sequences are loaded with the graph size")
    if kind not in kinds:
        raise SchemaError(f"unknown certificate kind {kind!r}")
    return kinds[kind].from_json(obj)


# ---------------------------------------------------------------------------
# flip hideouts

HideoutReport = namedtuple("HideoutReport", "valid mode refutation")


def hideout_violation(g, cert, masks):
    """Number of U-members whose radius-r ball meets U in <= d points."""
    umask = mask_of(cert.u)
    weak = 0
    for v in cert.u:
        if popcount(ball_mask(masks, v, cert.r) & umask) <= cert.d:
            weak += 1
    return weak


def verify_flip_hideout_report(g, cert, mode="exhaustive", seed=0, trials=10000,
                               max_n=None):
    if len(cert.u) <= cert.d:
        raise GenerationError(
            f"hideout precondition violated: |U|={len(cert.u)} must exceed d={cert.d}")
    if mode == "exhaustive":
        for spec in enumerate_k_flips(g, cert.k, max_n=max_n):
            masks = flip_masks(g, spec)
            if hideout_violation(g, cert, masks) > cert.d:
                return HideoutReport(False, "exhaustive", spec)
        return HideoutReport(True, "exhaustive", None)
    if mode == "sampled":
        rng = random.Random(seed)
        for _ in range(trials):
            spec = _random_flip(g.n, cert.k, rng)
            masks = flip_masks(g, spec)
            if hideout_violation(g, cert, masks) > cert.d:
                return HideoutReport(False, "sampled", spec)
        return HideoutReport(True, "sampled", None)
    raise GenerationError(f"unknown verification mode {mode!r}")


def verify_flip_hideout(g, cert, mode="exhaustive", **kw):
    return verify_flip_hideout_report(g, cert, mode, **kw).valid


def _random_flip(n, k, rng):
    blocks = [rng.randrange(k) for _ in range(n)]
    part = Partition(blocks)
    pairs = block_pairs(part.size)
    chosen = [p for p in pairs if rng.random() < 0.5]
    return FlipSpec(part, chosen)


class HideoutRunner:
    """Runner policy from a flip hideout: always move to the smallest-index
    member of U whose radius-r ball holds more than d members of U."""

    side = "evader"

    def __init__(self, g, cert):
        self.g = g
        self.cert = cert
        self.umask = mask_of(cert.u)

    def start(self):
        return None

    def initial(self, state):
        masks = self.g.adj
        for v in sorted(self.cert.u):
            if popcount(ball_mask(masks, v, self.cert.r) & self.umask) > self.cert.d:
                return v, state
        raise CertificateInvalid(
            "hideout has no safe initial vertex in the base graph", None)

    def respond(self, state, move, legal):
        masks = flip_masks(self.g, move)
        for v in legal:
            if not (self.umask >> v) & 1:
                continue
            if popcount(ball_mask(masks, v, self.cert.r) & self.umask) > self.cert.d:
                return v, state
        raise CertificateInvalid(
            f"no qualifying hideout vertex against flip {move.to_json()}", move)


def hideout_runner_strategy(g, cert):
    return HideoutRunner(g, cert)


def find_hideout_small(g, r, k, d, max_n=None):
    """Smallest U (by size, then lexicographically) that verifies as an
    (r,k,d)-hideout, or None."""
    limit = HIDEOUT_SEARCH_MAX_N if max_n is None else max_n
    if g.n > limit:
        raise LimitExceeded(f"find_hideout_small: n={g.n} exceeds bound {limit}")
    all_masks = [flip_masks(g, spec) for spec in enumerate_k_flips(g, k, max_n=max_n)]
    for size in range(d + 1, g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            cert = FlipHideout(frozenset(combo), r, k, d)
            if all(hideout_violation(g, cert, masks) <= d for masks in all_masks):
                return cert
    return None


# ---------------------------------------------------------------------------
# cops hideouts and orders


def verify_cops_hideout(g, cert, max_k=None):
    """Every v in U keeps a <= r escape path to U-v after deleting any < k
    vertices other than v."""
    limit = COPS_HIDEOUT_MAX_K if max_k is None else max_k
    if cert.k > limit:
        raise LimitExceeded(f"verify_cops_hideout: k={cert.k} exceeds bound {limit}")
    umask = mask_of(cert.u)
    if popcount(umask) < 2:
        return False
    others = list(range(g.n))
    for v in cert.u:
        candidates = [w for w in others if w != v]
        for size in range(cert.k):
            for a_set in itertools.combinations(candidates, size):
                amask = mask_of(a_set)
                masks = [g.adj[u] & ~amask for u in range(g.n)]
                reach = ball_mask(masks, v, cert.r)
                if reach & umask & ~(1 << v) == 0:
                    return False
    return True


def order_cert_check(g, order, r, k, max_k=None):
    """Condition-3 order check: each v admits < k deletions (avoiding v)
    cutting all <= r paths to earlier vertices."""
    limit = COPS_HIDEOUT_MAX_K if max_k is None else max_k
    if k > limit:
        raise LimitExceeded(f"order_cert_check: k={k} exceeds bound {limit}")
    placed = 0
    for v in order:
        ok = False
        candidates = [w for w in range(g.n) if w != v]
        for size in range(k):
            for a_set in itertools.combinations(candidates, size):
                amask = mask_of(a_set)
                masks = [g.adj[u] & ~amask for u in range(g.n)]
                if ball_mask(masks, v, r) & placed & ~amask == 0:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
        placed |= 1 << v
    return True


def greedy_copprime_order(g, r, k):
    """Constructive side of the no-hideout equivalence: peel vertices that
    admit a cutting set; returns an order or None when a hideout blocks it."""
    remaining = set(range(g.n))
    suffix = []
    while remaining:
        found = None
        for v in sorted(remaining):
            candidates = [w for w in range(g.n) if w != v]
            for size in range(k):
                for a_set in itertools.combinations(candidates, size):
                    amask = mask_of(a_set)
                    masks = [g.adj[u] & ~amask for u in range(g.n)]
                    reach = ball_mask(masks, v, r)
                    rest = mask_of(remaining) & ~(1 << v) & ~amask
                    if reach & rest == 0:
                        found = v
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return None
        suffix.append(found)
        remaining.discard(found)
    return tuple(reversed(suffix))


# ---------------------------------------------------------------------------
# order-driven cop strategy and admissibility robber


class OrderCops:
    """Cops on v plus the earlier vertices weakly 2r-reachable from v; the
    robber is forced upward in the order.

    Per round the least order-position over any path the robber could have
    taken is asserted to strictly increase, which is what forces the win.
    """

    side = "pursuer"

    def __init__(self, g, order, r):
        self.g = g
        self.order = tuple(order)
        self.r = r
        self.pos_of = {v: i for i, v in enumerate(self.order)}

    def start(self):
        # (prev cop mask, prev robber position, grounded mask during the
        #  robber's last move, last path-minimum order position)
        return (0, None, 0, -1)

    def _weakly_reachable_before(self, v):
        placed = 0
        out = 0
        for w in self.order:
            if w == v:
                break
            reach = ball_mask(tuple(row & ~placed for row in self.g.adj), w, 2 * self.r)
            if (reach >> v) & 1:
                out |= 1 << w
            placed |= 1 << w
        return out

    def _path_min(self, a, b, blocked):
        """Least order position over vertices on some a-b path of length
        <= r avoiding blocked."""
        masks = [row & ~blocked for row in self.g.adj]
        fwd = [None] * self.g.n
        cur = {a}
        fwd[a] = 0
        for dist in range(1, self.r + 1):
            cur = {w for u in cur for w in bits(masks[u])
                   if fwd[w] is None or fwd[w] > dist}
            for w in cur:
                if fwd[w] is None:
                    fwd[w] = dist
        bwd = [None] * self.g.n
        cur = {b}
        bwd[b] = 0
        for dist in range(1, self.r + 1):
            cur = {w for u in cur for w in bits(masks[u])
                   if bwd[w] is None or bwd[w] > dist}
            for w in cur:
                if bwd[w] is None:
                    bwd[w] = dist
        best = None
        for w in range(self.g.n):
            if fwd[w] is not None and bwd[w] is not None and fwd[w] + bwd[w] <= self.r:
                p = self.pos_of[w]
                best = p if best is None else min(best, p)
        return best

    def move(self, state, position):
        prev_mask, prev_pos, grounded, last_min = state
        if prev_pos is not None:
            m = self._path_min(prev_pos, position, grounded)
            assert m is not None and m > last_min, \
                "order-cop invariant broken: path minimum did not increase"
            last_min = m
        s2 = self._weakly_reachable_before(position) | (1 << position)
        return frozenset(bits(s2)), (s2, position, prev_mask & s2, last_min)


def order_cop_strategy(g, order, r):
    return OrderCops(g, order, r)


class AdmissibilityRobber:
    """Robber that never leaves U: valid when U witnesses adm_r >= width."""

    side = "evader"

    def __init__(self, g, u_set, r):
        self.g = g
        self.umask = mask_of(u_set)

    def start(self):
        return None

    def initial(self, state):
        if self.umask == 0:
            raise CertificateInvalid("empty admissibility witness", None)
        return (self.umask & -self.umask).bit_length() - 1, state

    def respond(self, state, move, legal):
        smask = mask_of(move)
        for u in legal:
            if (self.umask >> u) & 1 and not (smask >> u) & 1:
                return u, state
        raise CertificateInvalid(
            f"admissibility witness trapped by cops {sorted(move)}", move)


def adm_robber_strategy(g, u_set, r):
    return AdmissibilityRobber(g, u_set, r)


# ---------------------------------------------------------------------------
# rich divisions


def _intervals_cover(intervals, n):
    spans = sorted(intervals)
    if not spans or spans[0][0] != 0 or spans[-1][1] != n - 1:
        return False
    for (a, b), (c, d) in zip(spans, spans[1:]):
        if b + 1 != c or b < a:
            return False
    return all(b >= a for a, b in spans)


def _interval_mask(iv):
    lo, hi = iv
    return ((1 << (hi + 1)) - 1) & ~((1 << lo) - 1)


def verify_rich_division(og, cert, max_parts=None, max_k=None):
    """Exact richness check: every part of one side against every k-subset
    of the other side's parts."""
    g = og.graph
    n = g.n
    parts_limit = RICH_DIVISION_MAX_PARTS if max_parts is None else max_parts
    k_limit = RICH_DIVISION_MAX_K if max_k is None else max_k
    if len(cert.left) > parts_limit or len(cert.right) > parts_limit:
        raise LimitExceeded("verify_rich_division: too many intervals")
    if cert.k > k_limit:
        raise LimitExceeded(f"verify_rich_division: k={cert.k} exceeds bound {k_limit}")
    if not _intervals_cover(cert.left, n) or not _intervals_cover(cert.right, n):
        return False
    if cert.k < 1:
        return False
    # each side needs more intervals than the parameter, so that a width-k
    # cut set can always be dodged (rules out degenerate single-interval
    # divisions)
    if len(cert.left) <= cert.k or len(cert.right) <= cert.k:
        return False
    full = (1 << n) - 1

    def rich(side, other):
        for iv in side:
            amask = _interval_mask(iv)
            for chosen in itertools.combinations(other, min(cert.k, len(other))):
                bmask = 0
                for b in chosen:
                    bmask |= _interval_mask(b)
                rest = full & ~bmask
                traces = {g.adj[a] & rest for a in bits(amask)}
                if len(traces) < cert.k:
                    return False
        return True

    return rich(cert.left, cert.right) and rich(cert.right, cert.left)


class RichDivisionRunner:
    """Ordered-game runner from a rich division: alternate sides, always
    landing in a part that avoids the announced cut set (L first)."""

    side = "evader"

    def __init__(self, og, cert):
        self.og = og
        self.cert = cert

    def start(self):
        return 0    # number of picks made

    def initial(self, state):
        raise AssertionError("ordered game has no pre-flip pick")

    def respond(self, state, move, legal):
        cut = move.cut
        side = self.cert.left if state % 2 == 0 else self.cert.right
        safe = 0
        for lo, hi in side:
            if not any(lo <= s <= hi for s in cut):
                safe |= _interval_mask((lo, hi))
        for u in legal:
            if (safe >> u) & 1:
                return u, state + 1
        raise CertificateInvalid(
            f"rich-division runner cornered by cut {sorted(cut)}", move)


def rich_division_runner_strategy(og, cert):
    return RichDivisionRunner(og, cert)


def pattern_rich_division(og, n):
    """The canonical n/2-rich division of a generated s-pattern of order n^2:
    n intervals each holding n A-vertices, and n holding n B-vertices."""
    if n % 2 == 1:
        raise GenerationError("pattern divisions need even order parameter n")
    total = og.graph.n
    if total != 2 * n * n:
        raise GenerationError(
            f"graph has {total} vertices, not the 2*n^2={2*n*n} of a pattern layout")
    nn = n * n
    left = [(i * n, (i + 1) * n - 1) for i in range(n - 1)]
    left.append(((n - 1) * n, total - 1))
    right = [(0, nn + n - 1)]
    right.extend((nn + j * n, nn + (j + 1) * n - 1) for j in range(1, n))
    return RichDivision(tuple(left), tuple(right), n // 2)


# ---------------------------------------------------------------------------
# packaged hideouts


def subdivision_hideout(base, r, k):
    """Principal vertices of the exact (r-1)-subdivision of base form an
    (r,k,k)-hideout when the base has minimum degree >= 2rk and r >= 2."""
    if r < 2:
        raise GenerationError(f"subdivision hideouts need game radius r >= 2, got {r}")
    min_deg = min((base.degree(v) for v in range(base.n)), default=0)
    if min_deg < 2 * r * k:
        raise GenerationError(
            f"base minimum degree {min_deg} is below the required 2rk={2 * r * k}")
    _, principal = exact_subdivision(base, r - 1)
    return FlipHideout(frozenset(principal), r, k, k)


def well_linked_to_hideout(g, u_set, k, **kw):
    """A well-linked set larger than 3k is an (inf,k,k)-hideout."""
    u_set = frozenset(u_set)
    if len(u_set) <= 3 * k:
        raise GenerationError(f"|U|={len(u_set)} must exceed 3k={3 * k}")
    if not well_linked_check(g, u_set, **kw):
        raise GenerationError("U is not well-linked")
    return FlipHideout(u_set, INF, k, k)
