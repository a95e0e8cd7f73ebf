"""Shift spaces: SFTs, sofic presentations, entropy, mixing and index sets.

A shift of finite type is encoded by a k x k 0/1 transition matrix M over the
symbol alphabet {0, ..., k-1}: the word ab is admissible iff M[a][b] = 1.
Entropy is ln of the Perron root of M; the mixing gap is the smallest p with
M^p entrywise positive and realises the constant specification gap of a
mixing SFT.  Transitive-but-not-mixing shifts decompose into N cyclic classes,
and the index sets record which classes a target sequence hits at which
residues mod N - the data that decides whether intersected shrinking target
sets can be nonempty at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rates import (
    Arithmetic,
    AllTimes,
    Explicit,
    ShiftTarget,
    SymbolSequence,
    TimeSet,
)


class SymbolicError(ValueError):
    pass


class EmptyShiftError(SymbolicError):
    pass


class NotMixingError(SymbolicError):
    pass


class ReducibleShiftError(SymbolicError):
    def __init__(self, msg: str, components: tuple[tuple[int, ...], ...]):
        super().__init__(msg)
        self.components = components


class UndecidableTargetError(SymbolicError):
    """Raised when 'infinitely many i' cannot be decided from the input."""


@dataclass(frozen=True)
class ShiftOfFiniteType:
    """Vertex shift on {0..k-1} with 0/1 transition matrix; one- or two-sided."""

    transition: tuple[tuple[int, ...], ...]
    sided: str = "one"

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.transition)
        object.__setattr__(self, "transition", rows)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise SymbolicError("transition must be a nonempty square matrix")
        if any(v not in (0, 1) for row in rows for v in row):
            raise SymbolicError("transition entries must be 0 or 1")
        if all(v == 0 for row in rows for v in row):
            raise EmptyShiftError("zero transition matrix presents the empty shift")
        for a in range(k):
            if not any(rows[a]):
                raise SymbolicError(f"symbol {a} has no successor (all-zero row)")
            if not any(rows[b][a] for b in range(k)):
                raise SymbolicError(f"symbol {a} has no predecessor (all-zero column)")
        if self.sided not in ("one", "two"):
            raise SymbolicError("sided must be 'one' or 'two'")

    @property
    def alphabet_size(self) -> int:
        return len(self.transition)

    def allows(self, a: int, b: int) -> bool:
        return self.transition[a][b] == 1

    def word_admissible(self, word: Sequence[int]) -> bool:
        k = self.alphabet_size
        if any(not (0 <= c < k) for c in word):
            return False
        return all(self.allows(a, b) for a, b in zip(word, word[1:]))

    def sequence_admissible(self, z: SymbolSequence) -> bool:
        """Admissibility of an eventually periodic one-sided stream."""
        probe = z.prefix(len(z.head) + 2 * len(z.cycle) + 1)
        return self.word_admissible(probe)


def full_shift(k: int, sided: str = "one") -> ShiftOfFiniteType:
    return ShiftOfFiniteType(tuple(tuple(1 for _ in range(k)) for _ in range(k)), sided)


def golden_mean_shift(sided: str = "one") -> ShiftOfFiniteType:
    """Binary shift forbidding the word 11."""
    return ShiftOfFiniteType(((1, 1), (1, 0)), sided)


# ---------------------------------------------------------------------------
# Graph structure
# ---------------------------------------------------------------------------


def strongly_connected_components(
    matrix: Sequence[Sequence[int]],
) -> tuple[tuple[int, ...], ...]:
    """Kosaraju SCCs of the directed graph with edge a->b iff matrix[a][b] > 0."""
    k = len(matrix)
    succ = [[b for b in range(k) if matrix[a][b]] for a in range(k)]
    pred = [[b for b in range(k) if matrix[b][a]] for a in range(k)]

    seen = [False] * k
    order: list[int] = []
    for root in range(k):
        if seen[root]:
            continue
        stack = [(root, iter(succ[root]))]
        seen[root] = True
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                order.append(node)
                stack.pop()

    comp = [-1] * k
    comps: list[tuple[int, ...]] = []
    for root in reversed(order):
        if comp[root] >= 0:
            continue
        members = [root]
        comp[root] = len(comps)
        stack2 = [root]
        while stack2:
            node = stack2.pop()
            for nxt in pred[node]:
                if comp[nxt] < 0:
                    comp[nxt] = len(comps)
                    members.append(nxt)
                    stack2.append(nxt)
        comps.append(tuple(sorted(members)))
    return tuple(comps)


def is_irreducible(x: ShiftOfFiniteType) -> bool:
    return len(strongly_connected_components(x.transition)) == 1


@dataclass(frozen=True)
class PeriodDecomposition:
    """Cyclic structure: N classes, every edge steps class c -> c+1 mod N."""

    period: int
    class_of: tuple[int, ...]

    def component(self, c: int) -> tuple[int, ...]:
        return tuple(i for i, cls in enumerate(self.class_of) if cls == c)


def digraph_period(matrix: Sequence[Sequence[int]]) -> PeriodDecomposition:
    """Cyclic structure of any strongly connected digraph (entries > 0 = edge).

    N = gcd of all cycle lengths; classes by BFS level differences mod N.
    """
    comps = strongly_connected_components(matrix)
    if len(comps) > 1:
        raise ReducibleShiftError(
            f"transition graph is reducible ({len(comps)} strongly connected "
            f"components: {comps})",
            comps,
        )
    k = len(matrix)
    level = [-1] * k
    level[0] = 0
    queue = [0]
    g = 0
    edges = []
    while queue:
        a = queue.pop()
        for b in range(k):
            if matrix[a][b]:
                edges.append((a, b))
                if level[b] < 0:
                    level[b] = level[a] + 1
                    queue.append(b)
    for a, b in edges:
        g = math.gcd(g, level[a] + 1 - level[b])
    n = g if g > 0 else 1
    classes = tuple(level[a] % n for a in range(k))
    return PeriodDecomposition(period=n, class_of=classes)


def period_decomposition(x: ShiftOfFiniteType) -> PeriodDecomposition:
    return digraph_period(x.transition)


_WIELANDT = lambda k: (k - 1) * (k - 1) + 1


def mixing_gap(x: ShiftOfFiniteType) -> int:
    """Smallest p >= 1 with M^p entrywise positive (primitivity index)."""
    d = period_decomposition(x)  # raises ReducibleShiftError when reducible
    if d.period > 1:
        raise NotMixingError(
            f"shift is periodic with period {d.period}; "
            "use period_decomposition instead"
        )
    k = x.alphabet_size
    m = np.array(x.transition, dtype=bool)
    power = m.copy()
    for p in range(1, _WIELANDT(k) + 1):
        if power.all():
            return p
        power = (power.astype(np.uint8) @ m.astype(np.uint8)) > 0
    raise NotMixingError("matrix is not primitive")  # unreachable for N == 1


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------


def perron_root(matrix: Sequence[Sequence[int]], tol: float = 1e-12) -> float:
    """Perron root of a nonnegative matrix.

    Power iteration runs on M + I (primitive whenever M is irreducible, same
    Perron eigenvector, root shifted by exactly 1) with a Rayleigh-quotient
    stopping rule; characteristic-polynomial fallback for k <= 4.
    """
    m = np.asarray(matrix, dtype=float)
    k = m.shape[0]
    if not m.any():
        raise EmptyShiftError("zero matrix has no Perron root")
    shifted = m + np.eye(k)
    v = np.ones(k) / math.sqrt(k)
    root = 0.0
    for _ in range(100_000):
        w = shifted @ v
        nw = np.linalg.norm(w)
        v_next = w / nw
        new_root = float(v_next @ (shifted @ v_next))
        if abs(new_root - root) <= tol * max(1.0, abs(new_root)):
            return new_root - 1.0
        root = new_root
        v = v_next
    if k <= 4:
        coeffs = np.poly(m)
        roots = np.roots(coeffs)
        return float(max(abs(roots)))
    raise SymbolicError("Perron iteration failed to converge")


def sft_entropy(x: ShiftOfFiniteType) -> float:
    """ln of the Perron root; on reducible shifts, of the dominant component."""
    comps = strongly_connected_components(x.transition)
    if len(comps) == 1:
        return math.log(perron_root(x.transition))
    best = 0.0
    for comp in comps:
        sub = [[x.transition[a][b] for b in comp] for a in comp]
        if not any(any(row) for row in sub):
            continue
        best = max(best, perron_root(sub))
    if best <= 0.0:
        raise EmptyShiftError("no component carries a cycle")
    return math.log(best)


def count_words(x: ShiftOfFiniteType, n: int) -> int:
    """Exact number of admissible n-words: sum of the entries of M^(n-1)."""
    if n < 1:
        raise SymbolicError("word length must be >= 1")
    k = x.alphabet_size
    if n == 1:
        return k
    power = _int_matrix_power(x.transition, n - 1)
    return sum(sum(row) for row in power)


def _int_matmul(a, b, k):
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k)]
        for i in range(k)
    ]


def _int_matrix_power(matrix: Sequence[Sequence[int]], e: int):
    """Exact big-integer matrix power by binary exponentiation."""
    k = len(matrix)
    result = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    base = [list(row) for row in matrix]
    while e > 0:
        if e & 1:
            result = _int_matmul(result, base, k)
        e >>= 1
        if e:
            base = _int_matmul(base, base, k)
    return result


def log_count_words(x: ShiftOfFiniteType, n: int) -> float:
    """ln(count_words(n)) for lengths far beyond exact-integer practicality.

    Normalized float matrix powering; the accumulated relative error is of
    order (number of squarings) * machine epsilon, i.e. negligible next to
    the O(1/n) terms any consumer divides out.
    """
    if n < 1:
        raise SymbolicError("word length must be >= 1")
    if n <= 4096:
        return math.log(count_words(x, n))
    k = x.alphabet_size
    e = n - 1
    base = np.array(x.transition, dtype=float)
    s = base.max()
    base /= s
    log_base = math.log(s)  # base * exp(log_base) == M^(2^j)
    result = np.eye(k)
    log_result = 0.0
    while e > 0:
        if e & 1:
            result = result @ base
            log_result += log_base
            s = result.max()
            result /= s
            log_result += math.log(s)
        e >>= 1
        if e:
            base = base @ base
            log_base *= 2.0
            s = base.max()
            base /= s
            log_base += math.log(s)
    return log_result + math.log(result.sum())


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexSet:
    """Pairs (I1, I2): target hits class I1 at times = I2 mod N, infinitely often."""

    period: int
    pairs: frozenset[tuple[int, int]]

    @property
    def diffs(self) -> frozenset[int]:
        return frozenset((i1 - i2) % self.period for i1, i2 in self.pairs)


def _target_class(z: SymbolSequence, d: PeriodDecomposition) -> int:
    return d.class_of[z.symbol(0)]


def index_set(
    z: ShiftTarget, s: TimeSet, d: PeriodDecomposition
) -> IndexSet:
    """All (I1, I2) realised infinitely often by (z, S) against the N classes.

    Decidable because the target schedule is eventually periodic and the time
    set is arithmetic (possibly after an explicit finite prefix): the pair at
    time t depends only on t mod lcm(schedule period, N) once t clears the
    schedule preperiod, so one full cycle of the tail enumerates every pair
    that recurs.
    """
    if isinstance(s, Explicit) and s.tail is None:
        raise UndecidableTargetError(
            "bounded time set: no pair occurs infinitely often"
        )
    if isinstance(s, AllTimes):
        tail = Arithmetic(0, 1)
    elif isinstance(s, Arithmetic):
        tail = s
    else:
        assert isinstance(s, Explicit) and s.tail is not None
        tail = s.tail

    n = d.period
    sched = math.lcm(z.schedule_period, n)
    window = sched // math.gcd(tail.step, sched)
    start_k = 0
    if tail.offset < z.schedule_preperiod:
        start_k = -((tail.offset - z.schedule_preperiod) // tail.step)

    pairs = set()
    for k in range(start_k, start_k + window):
        t = tail.offset + k * tail.step
        pairs.add((_target_class(z.target(t), d), t % n))
    if not pairs:
        raise UndecidableTargetError("empty pair set on an unbounded time set")
    return IndexSet(period=n, pairs=frozenset(pairs))


def indices_intersect(sets: Iterable[IndexSet]) -> int | None:
    """An element of the intersection of the difference sets, or None."""
    sets = list(sets)
    if not sets:
        raise SymbolicError("need at least one index set")
    n = sets[0].period
    if any(s.period != n for s in sets):
        raise SymbolicError("index sets disagree on the period N")
    common = set(sets[0].diffs)
    for s in sets[1:]:
        common &= s.diffs
    return min(common) if common else None


# ---------------------------------------------------------------------------
# Sofic shifts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SoficPresentation:
    """Labeled graph presentation; must be right-resolving at ingestion."""

    states: int
    edges: tuple[tuple[int, int, str], ...]
    sided: str = "one"

    def __post_init__(self) -> None:
        if self.states < 1:
            raise SymbolicError("need at least one state")
        edges = tuple((int(a), int(b), str(lbl)) for a, b, lbl in self.edges)
        object.__setattr__(self, "edges", edges)
        seen: set[tuple[int, str]] = set()
        out_deg = [0] * self.states
        for a, b, lbl in edges:
            if not (0 <= a < self.states and 0 <= b < self.states):
                raise SymbolicError(f"edge ({a},{b},{lbl!r}) leaves the state range")
            if (a, lbl) in seen:
                raise SymbolicError(
                    f"not right-resolving: state {a} has two outgoing "
                    f"edges labeled {lbl!r}"
                )
            seen.add((a, lbl))
            out_deg[a] += 1
        for st, deg in enumerate(out_deg):
            if deg == 0:
                raise SymbolicError(f"state {st} has no outgoing edge")
        if self.sided not in ("one", "two"):
            raise SymbolicError("sided must be 'one' or 'two'")

    def adjacency(self) -> list[list[int]]:
        m = [[0] * self.states for _ in range(self.states)]
        for a, b, _ in self.edges:
            m[a][b] += 1
        return m

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({lbl for _, _, lbl in self.edges}))


def sofic_entropy(p: SoficPresentation) -> float:
    """ln Perron root of the presentation graph's adjacency matrix."""
    return math.log(perron_root(p.adjacency()))


def sft_as_sofic(x: ShiftOfFiniteType) -> SoficPresentation:
    """Identity labeling: states = symbols, the edge a->b is labeled by b."""
    edges = tuple(
        (a, b, str(b))
        for a in range(x.alphabet_size)
        for b in range(x.alphabet_size)
        if x.transition[a][b]
    )
    return SoficPresentation(states=x.alphabet_size, edges=edges, sided=x.sided)


def count_sofic_words(p: SoficPresentation, n: int) -> int:
    """Exact number of distinct admissible n-words of the sofic language.

    Test oracle: powers of the deterministic subset automaton reached from
    the full state set (right-resolving input makes each label a partial map
    on subsets, so distinct words correspond to distinct automaton paths).
    """
    if n < 0:
        raise SymbolicError("word length must be >= 0")
    step: dict[frozenset[int], dict[str, frozenset[int]]] = {}
    trans: dict[tuple[int, str], int] = {(a, lbl): b for a, b, lbl in p.edges}

    def successors(ss: frozenset[int]) -> dict[str, frozenset[int]]:
        if ss not in step:
            by_label: dict[str, set[int]] = {}
            for st in ss:
                for lbl in p.labels:
                    nxt = trans.get((st, lbl))
                    if nxt is not None:
                        by_label.setdefault(lbl, set()).add(nxt)
            step[ss] = {lbl: frozenset(v) for lbl, v in by_label.items()}
        return step[ss]

    counts: dict[frozenset[int], int] = {frozenset(range(p.states)): 1}
    for _ in range(n):
        nxt_counts: dict[frozenset[int], int] = {}
        for ss, c in counts.items():
            for tgt in successors(ss).values():
                nxt_counts[tgt] = nxt_counts.get(tgt, 0) + c
        counts = nxt_counts
    return sum(counts.values())
