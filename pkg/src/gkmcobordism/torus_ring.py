"""The equivariant coefficient ring of a torus and its localization.

A character is a rational vector in the chosen character-lattice basis; its
equivariant first Chern class is the series e(sum_i chi_i l(t_i)), which makes
chern an FGL homomorphism from characters into the series ring.  Divisibility
by a Chern class (and by its square) is decided by solving chern(chi) = 0 for
a pivot variable, which is exact because the linear part always has a unit
pivot coefficient.  LocalizedElement models fractions with Chern-class
denominators; clearing denominators is iterated exact division.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .coeff_series import (
    QQ,
    LazardCoefficient,
    TruncatedSeries,
    as_rational,
    compose_univariate,
    series_inverse,
)
from .fgl import FormalGroupLaw


@dataclass(frozen=True)
class Character:
    """A rational vector in the character lattice basis."""

    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(as_rational(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Character":
        return Character(tuple(-a for a in self.coords))

    def scale(self, q) -> "Character":
        q = as_rational(q)
        return Character(tuple(q * a for a in self.coords))

    def _check(self, other: "Character"):
        if self.rank != other.rank:
            raise ValueError("character rank mismatch")

    def primitive_direction(self) -> tuple:
        """Canonical integer direction of the line through the character.

        Denominators are cleared, the gcd divided out, and the sign fixed so
        the first nonzero entry is positive; zero characters are rejected.
        """
        if self.is_zero():
            raise ValueError("the zero character has no direction")
        denom_lcm = 1
        for c in self.coords:
            d = int(c.denominator)
            denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
        ints = [int(c * denom_lcm) for c in self.coords]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        ints = [v // g for v in ints]
        for v in ints:
            if v:
                if v < 0:
                    ints = [-x for x in ints]
                break
        return tuple(ints)

    def proportional_to(self, other: "Character") -> bool:
        if self.is_zero() or other.is_zero():
            return False
        return self.primitive_direction() == other.primitive_direction()

    def to_json_obj(self) -> list:
        return [str(c) for c in self.coords]

    @classmethod
    def from_json_obj(cls, obj) -> "Character":
        return cls(tuple(as_rational(c) for c in obj))

    def render(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def pair(covector, character: Character) -> QQ:
    """Euclidean pairing of a rational covector with a character."""
    return sum(
        (as_rational(a) * b for a, b in zip(covector, character.coords)),
        start=QQ(0),
    )


@dataclass
class RemainderReport:
    """Outcome of reducing a series modulo a Chern class power.

    components[0] is the series evaluated on the zero locus of the Chern
    class; for power 2, components[1] is the pivot-derivative there.  The
    verdict is certified through order - power.
    """

    character: Character
    power: int
    pivot: int
    components: list
    certified_order: int

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero_through(self.certified_order) for c in self.components)

    def to_json_obj(self) -> dict:
        return {
            "character": self.character.to_json_obj(),
            "power": self.power,
            "pivot": self.pivot + 1,
            "certified_order": self.certified_order,
            "is_zero": self.is_zero,
            "components": [c.truncated(self.certified_order).to_json_obj() for c in self.components],
        }


@dataclass(frozen=True)
class LocalizedElement:
    """A fraction: series numerator over a product of Chern classes.

    The denominator is a multiset of nonzero characters, each standing for
    one Chern-class factor.
    """

    numerator: TruncatedSeries
    denominator: tuple

    def __init__(self, numerator: TruncatedSeries, denominator=()):
        den = tuple(sorted(denominator, key=lambda ch: ch.coords))
        for ch in den:
            if ch.is_zero():
                raise ValueError("zero character in a localized denominator")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", den)

    def __neg__(self) -> "LocalizedElement":
        return LocalizedElement(-self.numerator, self.denominator)

    def to_json_obj(self) -> dict:
        return {
            "num": self.numerator.to_json_obj(),
            "den": [ch.to_json_obj() for ch in self.denominator],
        }

    @classmethod
    def from_json_obj(cls, obj) -> "LocalizedElement":
        return cls(
            TruncatedSeries.from_json_obj(obj["num"]),
            tuple(Character.from_json_obj(ch) for ch in obj["den"]),
        )


@dataclass
class ClearResult:
    """Result of clearing denominators: a series, or the obstructing factor."""

    series: TruncatedSeries | None
    certified_order: int
    obstruction: tuple | None = None  # (Character, RemainderReport)

    @property
    def ok(self) -> bool:
        return self.series is not None


def _den_multiset(chars) -> dict:
    out: dict = {}
    for ch in chars:
        out[ch.coords] = out.get(ch.coords, 0) + 1
    return out


class TorusRing:
    """S(T)_Q at a fixed rank and truncation order, tied to a group law."""

    def __init__(self, law: FormalGroupLaw, rank: int):
        if rank < 1:
            raise ValueError("torus rank must be >= 1")
        self.law = law
        self.rank = rank
        self._chern: dict = {}
        self._rho: dict = {}
        self._pivots: dict = {}
        self._units: dict = {}

    @property
    def order(self) -> int:
        return self.law.order

    # -- ring elements -----------------------------------------------------

    def zero(self) -> TruncatedSeries:
        return TruncatedSeries.zero(self.rank, self.order)

    def one(self) -> TruncatedSeries:
        return TruncatedSeries.one(self.rank, self.order)

    def constant(self, coeff) -> TruncatedSeries:
        return TruncatedSeries.constant(coeff, self.rank, self.order)

    def variable(self, index: int) -> TruncatedSeries:
        return TruncatedSeries.variable(index, self.rank, self.order)

    def _char(self, chi) -> Character:
        if not isinstance(chi, Character):
            chi = Character(chi)
        if chi.rank != self.rank:
            raise ValueError("character rank does not match the ring rank")
        return chi

    def chern(self, chi) -> TruncatedSeries:
        """The equivariant first Chern class of a character: e(sum chi_i l(t_i))."""
        chi = self._char(chi)
        cached = self._chern.get(chi.coords)
        if cached is None:
            if chi.is_zero():
                cached = self.zero()
            else:
                log = self.law.log_series(self.order)
                arg_terms: dict = {}
                for i, c in enumerate(chi.coords):
                    if not c:
                        continue
                    for (k,), coeff in log.terms.items():
                        key = tuple(k if j == i else 0 for j in range(self.rank))
                        arg_terms[key] = coeff.scale(c)
                arg = TruncatedSeries(self.rank, self.order, arg_terms)
                cached = compose_univariate(self.law.exp_series(self.order), arg)
            self._chern[chi.coords] = cached
        return cached

    def chern_product(self, chars) -> TruncatedSeries:
        acc = self.one()
        for ch in chars:
            acc = acc * self.chern(ch)
        return acc

    def rho_factor(self, n: int, m: int, chi) -> TruncatedSeries:
        """rho_{n/m} applied to the Chern class of a character (cached)."""
        chi = self._char(chi)
        key = (n, m, chi.coords)
        cached = self._rho.get(key)
        if cached is None:
            cached = self.law.rho(n, m, self.chern(chi))
            self._rho[key] = cached
        return cached

    def augment(self, f: TruncatedSeries) -> LazardCoefficient:
        """Base change to the coefficient ring: set every t_i to zero."""
        return f.constant_term()

    # -- the zero locus of a Chern class -------------------------------------

    def _pivot_phi(self, chi: Character):
        """Pivot index j and the series phi with chern(chi)(t_j = phi) = 0.

        phi depends only on the line through chi, so the cache is keyed by
        the primitive direction.
        """
        line = chi.primitive_direction()
        cached = self._pivots.get(line)
        if cached is None:
            pivot = next(i for i, c in enumerate(line) if c)
            primitive = Character(line)
            u = self.chern(primitive)
            c = QQ(line[pivot])
            scale = -1 / c
            phi = TruncatedSeries(
                self.rank,
                self.order,
                {
                    tuple(1 if j == i else 0 for j in range(self.rank)): LazardCoefficient.rational(
                        scale * v
                    )
                    for i, v in enumerate(line)
                    if v and i != pivot
                },
            )
            for _ in range(self.order - 1):
                phi = phi + u.substitute(pivot, phi).scale(scale)
            cached = (pivot, phi)
            self._pivots[line] = cached
        return cached

    def _shear_unit_inverse(self, chi: Character):
        """1 / (chern(chi)(t_j -> t_j + phi) / t_j), cached per character."""
        cached = self._units.get(chi.coords)
        if cached is None:
            pivot, phi = self._pivot_phi(chi)
            shear = self.variable(pivot) + phi
            w = self.chern(chi).substitute(pivot, shear).divide_by_variable(pivot)
            cached = series_inverse(w)
            self._units[chi.coords] = cached
        return cached

    def reduce_mod(self, f: TruncatedSeries, chi, power: int = 1) -> RemainderReport:
        """Reduce f modulo chern(chi)^power with an exact certificate.

        For power 1 the report holds f on the zero locus t_j = phi; for power
        2 additionally the t_j-derivative there.  f lies in the ideal iff all
        components vanish through the certified order (order - power).
        """
        chi = self._char(chi)
        if chi.is_zero():
            raise ValueError("cannot reduce modulo the zero character")
        if power not in (1, 2):
            raise ValueError("only first and second powers are supported")
        if f.rank != self.rank:
            raise ValueError("series rank does not match the ring rank")
        pivot, phi = self._pivot_phi(chi)
        components = [f.substitute(pivot, phi)]
        if power == 2:
            components.append(f.partial(pivot).substitute(pivot, phi))
        return RemainderReport(
            character=chi,
            power=power,
            pivot=pivot,
            components=components,
            certified_order=f.order - power,
        )

    def divide_exact(self, f: TruncatedSeries, chi) -> tuple:
        """Divide f by chern(chi) exactly.

        Returns (quotient, None) with the quotient one order lower, or
        (None, report) when f is not divisible; the report is the full
        remainder on the zero locus.
        """
        chi = self._char(chi)
        if chi.is_zero():
            raise ValueError("cannot divide by the zero character")
        pivot, phi = self._pivot_phi(chi)
        shear = TruncatedSeries.variable(pivot, self.rank, f.order) + phi.truncated(f.order)
        sheared = f.substitute(pivot, shear)
        pieces = sheared.split_by_variable(pivot)
        stuck = pieces.get(0)
        if stuck is not None and not stuck.is_zero():
            report = RemainderReport(
                character=chi,
                power=1,
                pivot=pivot,
                components=[f.substitute(pivot, phi.truncated(f.order))],
                certified_order=f.order - 1,
            )
            return None, report
        h = TruncatedSeries(
            self.rank,
            f.order,
            {k: c for k, c in sheared.terms.items() if k[pivot] > 0},
        ).divide_by_variable(pivot)
        unit_inv = self._shear_unit_inverse(chi).truncated(h.order)
        q_sheared = h * unit_inv
        unshear = TruncatedSeries.variable(pivot, self.rank, q_sheared.order) - phi.truncated(
            q_sheared.order
        )
        return q_sheared.substitute(pivot, unshear), None

    def clear_denominators(self, elem: LocalizedElement) -> ClearResult:
        """Iterated exact division of the numerator by the denominator factors."""
        series = elem.numerator
        for ch in elem.denominator:
            quotient, report = self.divide_exact(series, ch)
            if quotient is None:
                return ClearResult(None, series.order - 1, obstruction=(ch, report))
            series = quotient
        return ClearResult(series, series.order)

    # -- localized arithmetic ---------------------------------------------------

    def loc_from_series(self, f: TruncatedSeries) -> LocalizedElement:
        return LocalizedElement(f, ())

    def loc_mul(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        return LocalizedElement(a.numerator * b.numerator, a.denominator + b.denominator)

    def loc_scale(self, a: LocalizedElement, f: TruncatedSeries) -> LocalizedElement:
        return LocalizedElement(a.numerator * f, a.denominator)

    def loc_add(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        da, db = _den_multiset(a.denominator), _den_multiset(b.denominator)
        lcm: dict = dict(da)
        for coords, mult in db.items():
            if lcm.get(coords, 0) < mult:
                lcm[coords] = mult
        def complement(own):
            out = []
            for coords, mult in lcm.items():
                extra = mult - own.get(coords, 0)
                out.extend([Character(coords)] * extra)
            return out

        num = a.numerator * self.chern_product(complement(da)) + b.numerator * self.chern_product(
            complement(db)
        )
        den = []
        for coords, mult in lcm.items():
            den.extend([Character(coords)] * mult)
        return LocalizedElement(num, tuple(den))

    def loc_sub(self, a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
        return self.loc_add(a, -b)

    def loc_eq(self, a: LocalizedElement, b: LocalizedElement) -> bool:
        """Cross-multiplied equality of the stored truncations.

        Exact through the stored order minus the total number of denominator
        factors; extend the working order by that count for full certainty.
        """
        left = a.numerator * self.chern_product(b.denominator)
        right = b.numerator * self.chern_product(a.denominator)
        return (left - right).is_zero()

    # -- lattice rescaling ---------------------------------------------------

    def rescale_characters(self, f: TruncatedSeries, factors, inverse: bool = False) -> TruncatedSeries:
        """Substitute t_i -> [a_i] t_i (or [1/a_i] t_i with inverse=True)."""
        factors = list(factors)
        if len(factors) != self.rank:
            raise ValueError("need one positive factor per variable")
        out = f
        for i, a in enumerate(factors):
            a = as_rational(a)
            if a <= 0:
                raise ValueError("rescaling factors must be positive")
            if inverse:
                a = 1 / a
            if a == 1:
                continue
            g = self.law._scaled_exp_log(a, out.order)
            out = out.substitute(i, TruncatedSeries(
                self.rank,
                out.order,
                {
                    tuple(k if j == i else 0 for j in range(self.rank)): c
                    for (k,), c in g.terms.items()
                },
            ))
        return out
