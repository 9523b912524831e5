"""Equivariant multiplicities at nondegenerate fixed points.

A smooth point contributes the inverse of the product of Chern classes of
the negated tangent weights; the class of a smooth invariant subvariety is
the product over its normal weights at each of its fixed points.  At a
singular point, the multiplicity is the sum of the fiber points' smooth
multiplicities in a resolution, and the pullback of the class is that sum
times the point class of the ambient space.

Weight data is supplied declaratively (JSON files); the weights of the odd
symplectic Grassmannian IG(2,5) ship with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .coeff_series import TruncatedSeries
from .torus_ring import Character, ClearResult, LocalizedElement, TorusRing

TAGS = ("tangent", "normal", "fiber")


@dataclass
class TangentData:
    """A multiset of characters per point, tagged by what the weights describe."""

    weights: dict
    tag: str = "tangent"
    dimension: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown weight tag {self.tag!r}; expected one of {TAGS}")
        self.weights = {
            point: tuple(ch if isinstance(ch, Character) else Character(ch) for ch in chars)
            for point, chars in self.weights.items()
        }
        self.validate()

    def validate(self):
        for point, chars in self.weights.items():
            for ch in chars:
                if ch.is_zero():
                    raise ValueError(f"degenerate fixed point {point}: zero weight present")
            if self.dimension is not None and len(chars) != self.dimension:
                raise ValueError(
                    f"point {point} carries {len(chars)} weights, expected {self.dimension}"
                )

    def points(self):
        return sorted(self.weights)

    def at(self, point: str):
        if point not in self.weights:
            raise KeyError(f"no weight data at point {point!r}")
        return self.weights[point]

    def to_json_obj(self) -> dict:
        return {
            "kind": self.tag,
            "dimension": self.dimension,
            "weights": {
                p: [ch.to_json_obj() for ch in chars] for p, chars in sorted(self.weights.items())
            },
        }

    @classmethod
    def from_json_obj(cls, obj) -> "TangentData":
        return cls(
            weights={
                p: tuple(Character.from_json_obj(c) for c in chars)
                for p, chars in obj["weights"].items()
            },
            tag=obj.get("kind", "tangent"),
            dimension=obj.get("dimension"),
        )


def smooth_multiplicity(ring: TorusRing, weights) -> LocalizedElement:
    """1 over the product of Chern classes of the negated weights."""
    chars = tuple(ch if isinstance(ch, Character) else Character(ch) for ch in weights)
    for ch in chars:
        if ch.is_zero():
            raise ValueError("smooth multiplicity requires nonzero weights")
    return LocalizedElement(ring.one(), tuple(-ch for ch in chars))


def point_class(ring: TorusRing, point: str, ambient: TangentData) -> dict:
    """The restriction tuple of a fixed point's class: a Chern product at the
    point itself, zero at every other point of the ambient data."""
    chars = ambient.at(point)
    out = {p: ring.zero() for p in ambient.weights}
    out[point] = ring.chern_product([-ch for ch in chars])
    return out


def subvariety_class(ring: TorusRing, normal: TangentData, all_points=None) -> dict:
    """The restriction tuple of a smooth invariant subvariety from its normal
    weights; zero at points not on the subvariety."""
    if normal.tag != "normal":
        raise ValueError("subvariety classes need weight data tagged 'normal'")
    out = {}
    for point, chars in normal.weights.items():
        out[point] = ring.chern_product([-ch for ch in chars])
    for point in all_points or ():
        out.setdefault(point, ring.zero())
    return out


def fiber_multiplicity(ring: TorusRing, fiber: TangentData) -> LocalizedElement:
    """Sum of the smooth multiplicities over the fiber points of a resolution."""
    total = None
    for point in fiber.points():
        term = smooth_multiplicity(ring, fiber.at(point))
        total = term if total is None else ring.loc_add(total, term)
    if total is None:
        raise ValueError("fiber weight data is empty")
    return total


@dataclass
class PullbackResult:
    terms: list  # one cancelled fraction per fiber point
    localized: LocalizedElement  # the terms over their common denominator
    cleared: ClearResult

    @property
    def series(self) -> TruncatedSeries | None:
        return self.cleared.series


def singular_class_pullback(
    ring: TorusRing, point: str, ambient: TangentData, fiber: TangentData
) -> PullbackResult:
    """Pullback of a resolved class at a singular point: the fiber sum times
    the ambient point class, with denominators cleared when possible.

    Each fiber point contributes one fraction; Chern factors shared between
    the ambient point class and a term's denominator are cancelled exactly,
    which keeps the common denominator small.
    """
    ambient_chars = [-ch for ch in ambient.at(point)]
    terms = []
    for fiber_point in fiber.points():
        den = [-ch for ch in fiber.at(fiber_point)]
        num = list(ambient_chars)
        remaining = []
        for ch in den:
            try:
                num.remove(ch)
            except ValueError:
                remaining.append(ch)
        terms.append(LocalizedElement(ring.chern_product(num), tuple(remaining)))
    total = terms[0]
    for term in terms[1:]:
        total = ring.loc_add(total, term)
    return PullbackResult(terms, total, ring.clear_denominators(total))


# -- bundled weight data -------------------------------------------------------


def _load_data(name: str) -> dict:
    with resources.files("gkmcobordism.data").joinpath(name).open("r") as fh:
        return json.load(fh)


def load_ig25_tangent() -> TangentData:
    """Tangent weights at the eight fixed points of IG(2,5)."""
    return TangentData.from_json_obj(_load_data("ig25_tangent.json"))


def load_ig25_subvarieties() -> dict:
    """Normal-weight data of the smooth filtration subvarieties of IG(2,5)."""
    obj = _load_data("ig25_subvarieties.json")
    return {
        name: TangentData.from_json_obj(sub) for name, sub in sorted(obj["subvarieties"].items())
    }


def load_ig25_resolution(name: str) -> tuple:
    """Fiber weights of a resolution over its singular point: (point, data)."""
    if name not in ("x4tilde", "x4tilde_star"):
        raise ValueError("available resolutions: x4tilde, x4tilde_star")
    obj = _load_data(f"ig25_{name}.json")
    return obj["singular_point"], TangentData.from_json_obj(obj)
