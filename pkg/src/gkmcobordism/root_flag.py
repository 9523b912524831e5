"""Root systems in Bourbaki epsilon-coordinates, Weyl groups, and flag curves.

Types A, B, C, F4 and G2 are supported.  Weyl groups are enumerated
explicitly as the orbit of a strictly dominant anchor vector, which makes
coset enumeration and curve adjacency exhaustive and exact.  Invariant
curves in G/P_I connect fixed-point cosets swapped by a reflection; each
curve carries the reflection root, the weight difference of its endpoints,
and its degree over the one-dimensional Schubert classes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .coeff_series import QQ, as_rational

Vector = tuple


def vec(values) -> Vector:
    return tuple(as_rational(v) for v in values)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(q, a: Vector) -> Vector:
    q = as_rational(q)
    return tuple(q * x for x in a)


def inner(a: Vector, b: Vector) -> QQ:
    return sum((x * y for x, y in zip(a, b)), start=QQ(0))


def pairing(alpha: Vector, lam: Vector) -> QQ:
    """The coroot pairing 2(alpha, lam)/(alpha, alpha)."""
    norm = inner(alpha, alpha)
    if not norm:
        raise ValueError("pairing requires a nonzero root")
    return 2 * inner(alpha, lam) / norm


def reflect(alpha: Vector, v: Vector) -> Vector:
    return vsub(v, vscale(pairing(alpha, v), alpha))


def direction(v: Vector) -> tuple:
    """Canonical primitive integer direction of a nonzero rational vector."""
    from math import gcd

    denom = 1
    for c in v:
        d = int(c.denominator)
        denom = denom * d // gcd(denom, d)
    ints = [int(c * denom) for c in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("the zero vector has no direction")
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def solve_linear(matrix, rhs):
    """Exact Gaussian elimination; `matrix` is a list of rows over rationals."""
    n = len(matrix)
    m = len(matrix[0])
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for c in range(m):
        pivot_row = next((i for i in range(r, n) if aug[i][c]), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        scale = aug[r][c]
        aug[r] = [x / scale for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if aug[i][m]:
            raise ValueError("inconsistent linear system")
    solution = [QQ(0)] * m
    for row, c in enumerate(pivots):
        solution[c] = aug[row][m]
    return solution


def _simple_roots(letter: str, rank: int):
    e = lambda i, dim: tuple(QQ(1) if j == i else QQ(0) for j in range(dim))
    if letter == "A":
        dim = rank + 1
        return [vsub(e(i, dim), e(i + 1, dim)) for i in range(rank)], dim
    if letter == "B":
        if rank < 2:
            raise ValueError("type B needs rank >= 2")
        roots = [vsub(e(i, rank), e(i + 1, rank)) for i in range(rank - 1)]
        roots.append(e(rank - 1, rank))
        return roots, rank
    if letter == "C":
        if rank < 2:
            raise ValueError("type C needs rank >= 2")
        roots = [vsub(e(i, rank), e(i + 1, rank)) for i in range(rank - 1)]
        roots.append(vscale(2, e(rank - 1, rank)))
        return roots, rank
    if letter == "F":
        if rank != 4:
            raise ValueError("type F has rank 4")
        h = QQ(1, 2)
        return [
            vsub(e(1, 4), e(2, 4)),
            vsub(e(2, 4), e(3, 4)),
            e(3, 4),
            (h, -h, -h, -h),
        ], 4
    if letter == "G":
        if rank != 2:
            raise ValueError("type G has rank 2")
        return [vec((1, -1, 0)), vec((-2, 1, 1))], 3
    raise ValueError(f"unsupported Cartan type {letter!r}")


def _positive_roots(letter: str, rank: int, dim: int):
    e = lambda i: tuple(QQ(1) if j == i else QQ(0) for j in range(dim))
    out = []
    if letter == "A":
        for i in range(dim):
            for j in range(i + 1, dim):
                out.append(vsub(e(i), e(j)))
    elif letter in ("B", "C"):
        for i in range(rank):
            for j in range(i + 1, rank):
                out.append(vsub(e(i), e(j)))
                out.append(vadd(e(i), e(j)))
        for i in range(rank):
            out.append(e(i) if letter == "B" else vscale(2, e(i)))
    elif letter == "F":
        for i in range(4):
            out.append(e(i))
            for j in range(i + 1, 4):
                out.append(vsub(e(i), e(j)))
                out.append(vadd(e(i), e(j)))
        h = QQ(1, 2)
        for s2 in (1, -1):
            for s3 in (1, -1):
                for s4 in (1, -1):
                    out.append((h, s2 * h, s3 * h, s4 * h))
    elif letter == "G":
        a1, a2 = vec((1, -1, 0)), vec((-2, 1, 1))
        out = [
            a1,
            a2,
            vadd(a1, a2),
            vadd(vscale(2, a1), a2),
            vadd(vscale(3, a1), a2),
            vadd(vscale(3, a1), vscale(2, a2)),
        ]
    else:
        raise ValueError(f"unsupported Cartan type {letter!r}")
    return out


@dataclass(frozen=True)
class RootSystem:
    letter: str
    rank: int
    dim: int
    simple_roots: tuple
    positive_roots: tuple
    fundamental_weights: tuple

    @property
    def label(self) -> str:
        return f"{self.letter}{self.rank}"

    def cartan_matrix(self):
        return [
            [pairing(a, b) for b in self.simple_roots] for a in self.simple_roots
        ]

    def weyl_vector(self) -> Vector:
        out = self.fundamental_weights[0]
        for w in self.fundamental_weights[1:]:
            out = vadd(out, w)
        return out

    def simple_root(self, i: int) -> Vector:
        """Bourbaki-numbered simple root, i in 1..rank."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"simple root index {i} out of range for {self.label}")
        return self.simple_roots[i - 1]

    def fundamental_weight(self, i: int) -> Vector:
        if not 1 <= i <= self.rank:
            raise ValueError(f"fundamental weight index {i} out of range for {self.label}")
        return self.fundamental_weights[i - 1]

    def positive_root_in_direction(self, v: Vector):
        """The positive root proportional to v, or None."""
        d = direction(v)
        return self._direction_table().get(d)

    def _direction_table(self):
        table = getattr(self, "_dir_table", None)
        if table is None:
            table = {direction(r): r for r in self.positive_roots}
            object.__setattr__(self, "_dir_table", table)
        return table

    def positive_root_set(self) -> frozenset:
        cached = getattr(self, "_pos_set", None)
        if cached is None:
            cached = frozenset(self.positive_roots)
            object.__setattr__(self, "_pos_set", cached)
        return cached

    def decompose_in_simple_roots(self, root: Vector):
        """Coefficients n_i with root = sum n_i alpha_i."""
        matrix = [
            [self.simple_roots[j][i] for j in range(self.rank)] for i in range(self.dim)
        ]
        return solve_linear(matrix, list(root))

    def parabolic_positive_roots(self, parabolic) -> set:
        """Positive roots supported on the simple roots in `parabolic` (1-based)."""
        inside = set()
        for r in self.positive_roots:
            coeffs = self.decompose_in_simple_roots(r)
            if all(not c for i, c in enumerate(coeffs, start=1) if i not in parabolic):
                inside.add(r)
        return inside


def root_system(label: str) -> RootSystem:
    """Build a root system from a label like "G2", "C2", "B3", "F4", "A3"."""
    letter = label[0].upper()
    try:
        rank = int(label[1:])
    except ValueError as exc:
        raise ValueError(f"cannot parse Cartan type {label!r}") from exc
    simple, dim = _simple_roots(letter, rank)
    positive = _positive_roots(letter, rank, dim)
    # Fundamental weights inside the root span: omega_i = sum_k c_k alpha_k with
    # pairing(alpha_j, omega_i) = delta_ij; the Cartan-type matrix is invertible.
    matrix = [
        [pairing(simple[j], simple[k]) for k in range(rank)] for j in range(rank)
    ]
    weights = []
    for i in range(rank):
        rhs = [QQ(1) if j == i else QQ(0) for j in range(rank)]
        coeffs = solve_linear(matrix, rhs)
        w = (QQ(0),) * dim
        for c, a in zip(coeffs, simple):
            w = vadd(w, vscale(c, a))
        weights.append(w)
    return RootSystem(
        letter=letter,
        rank=rank,
        dim=dim,
        simple_roots=tuple(simple),
        positive_roots=tuple(positive),
        fundamental_weights=tuple(weights),
    )


@dataclass(frozen=True)
class Coset:
    """A coset of W/W_I: shortest word and its action on the defining weight."""

    word: tuple  # composition of simple reflections, leftmost applied last
    anchor: Vector  # word applied to the coset's defining dominant weight

    @property
    def length(self) -> int:
        return len(self.word)

    def name(self, prefix: str) -> str:
        return f"{prefix}({''.join(str(i) for i in self.word)})"


class WeylGroup:
    """The Weyl group of a root system, enumerated exhaustively."""

    def __init__(self, system: RootSystem):
        self.system = system
        self._elements = self._orbit(system.weyl_vector())

    @property
    def order(self) -> int:
        return len(self._elements)

    def elements(self):
        return list(self._elements)

    def apply_word(self, word, v: Vector) -> Vector:
        for i in reversed(word):
            v = reflect(self.system.simple_root(i), v)
        return v

    def apply_inverse_word(self, word, v: Vector) -> Vector:
        for i in word:
            v = reflect(self.system.simple_root(i), v)
        return v

    def coset_weight(self, parabolic) -> Vector:
        """The dominant weight whose stabilizer is exactly W_I."""
        outside = [i for i in range(1, self.system.rank + 1) if i not in parabolic]
        if not outside:
            raise ValueError("the full parabolic leaves a single coset; no defining weight")
        w = self.system.fundamental_weight(outside[0])
        for i in outside[1:]:
            w = vadd(w, self.system.fundamental_weight(i))
        return w

    def cosets(self, parabolic) -> list:
        """Shortest representatives of W/W_I for I given by 1-based indices."""
        parabolic = frozenset(parabolic)
        for i in parabolic:
            if not 1 <= i <= self.system.rank:
                raise ValueError(f"parabolic index {i} out of range")
        if len(parabolic) == self.system.rank:
            return [Coset((), self.system.weyl_vector())]
        seed = self.coset_weight(parabolic)
        return self._orbit(seed)

    def _orbit(self, seed: Vector):
        """BFS over simple reflections; words are shortest, built by left action."""
        start = Coset((), seed)
        seen = {seed: start}
        queue = deque([start])
        out = [start]
        while queue:
            current = queue.popleft()
            for i in range(1, self.system.rank + 1):
                image = reflect(self.system.simple_root(i), current.anchor)
                if image not in seen:
                    nxt = Coset((i,) + current.word, image)
                    seen[image] = nxt
                    queue.append(nxt)
                    out.append(nxt)
        return out


@dataclass(frozen=True)
class FlagCurve:
    """An invariant curve in G/P_I between the fixed points of two cosets."""

    u: Coset
    v: Coset
    root: Vector  # positive root of the connecting reflection
    weight: Vector  # difference of the endpoint weights; a multiple of root
    degree: dict  # Schubert-class coefficients, keyed by simple index

    @property
    def total_degree(self) -> QQ:
        return sum(self.degree.values(), start=QQ(0))


def curve_degree(system: RootSystem, alpha: Vector, parabolic) -> dict:
    """Degree of the curve attached to a positive root, over sigma(s_beta).

    The coefficient on the class of the curve for simple root beta outside
    the parabolic is n_{alpha,beta} (beta,beta)/(alpha,alpha).
    """
    parabolic = frozenset(parabolic)
    coeffs = system.decompose_in_simple_roots(alpha)
    outside = [i for i in range(1, system.rank + 1) if i not in parabolic]
    if all(not coeffs[i - 1] for i in outside):
        raise ValueError("root lies in the parabolic subsystem; no curve degree")
    norm = inner(alpha, alpha)
    out = {}
    for i in outside:
        n = coeffs[i - 1]
        if n:
            beta = system.simple_root(i)
            out[i] = n * inner(beta, beta) / norm
    return out


def enumerate_fixed_points(system: RootSystem, parabolic) -> list:
    return WeylGroup(system).cosets(parabolic)


def enumerate_curves(system: RootSystem, parabolic, group: WeylGroup | None = None) -> list:
    """All invariant curves of G/P_I with roots, weights and degrees."""
    group = group or WeylGroup(system)
    cosets = group.cosets(parabolic)
    out = []
    for a in range(len(cosets)):
        for b in range(a + 1, len(cosets)):
            u, v = cosets[a], cosets[b]
            delta = vsub(u.anchor, v.anchor)
            gamma = system.positive_root_in_direction(delta)
            if gamma is None:
                continue
            if vscale(pairing(gamma, u.anchor), gamma) != delta:
                continue
            base = group.apply_inverse_word(u.word, gamma)
            if base not in system.positive_root_set():
                base = vscale(-1, base)
                if base not in system.positive_root_set():
                    raise ValueError("reflection vector is not a root")
            degree = curve_degree(system, base, parabolic)
            out.append(FlagCurve(u=u, v=v, root=gamma, weight=delta, degree=degree))
    return out
