"""GKM data of smooth projective horospherical varieties of Picard number one.

Such a variety (outside the homogeneous case) is determined by a triple from
Pasquier's classification: a group together with the two maximal parabolics of
its closed orbits.  The builder computes the difference character chi of the
two defining weights, scans the positive roots for a multiple of chi to find
the surface components of the codimension-one fixed loci, and assembles the
full datum: the invariant curves of both closed orbits, the lines joining
them, and one surface component per Weyl translate.

The surface kind is known for the families the classification pins down
(none for family 1, a projective plane for family 3, the third Hirzebruch
surface for family 5); family 4 finds a surface whose Hirzebruch index has
no established rule and therefore needs an explicit override.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gkm_model import GkmDatum, GkmEdge, GkmValidationError, SurfaceComponent
from .root_flag import (
    RootSystem,
    WeylGroup,
    direction,
    enumerate_curves,
    inner,
    pairing,
    reflect,
    root_system,
    vsub,
)
from .torus_ring import Character


class UnresolvedSurfaceKindError(ValueError):
    """A surface component exists but its kind is not determined by the family."""


@dataclass(frozen=True)
class PasquierTriple:
    """One entry of the classification: family number plus its parameters."""

    family: int
    n: int | None = None
    m: int | None = None

    def validate(self):
        if self.family == 1:
            if self.n is None or self.n < 3:
                raise ValueError("family 1 requires n >= 3")
        elif self.family == 2:
            pass
        elif self.family == 3:
            if self.n is None or self.m is None or self.n < 2 or not 2 <= self.m <= self.n:
                raise ValueError("family 3 requires n >= 2 and 2 <= m <= n")
        elif self.family in (4, 5):
            pass
        else:
            raise ValueError(f"unknown family {self.family}")

    def group(self) -> RootSystem:
        self.validate()
        if self.family == 1:
            return root_system(f"B{self.n}")
        if self.family == 2:
            return root_system("B3")
        if self.family == 3:
            return root_system(f"C{self.n}")
        if self.family == 4:
            return root_system("F4")
        return root_system("G2")

    def weight_indices(self) -> tuple:
        """Bourbaki indices (iY, iZ) of the defining fundamental weights."""
        self.validate()
        if self.family == 1:
            return self.n - 1, self.n
        if self.family == 2:
            return 1, 3
        if self.family == 3:
            return self.m, self.m - 1
        if self.family == 4:
            return 2, 3
        return 1, 2

    def describe(self) -> str:
        rs = self.group()
        iy, iz = self.weight_indices()
        return f"({rs.label}, P(omega_{iy}), P(omega_{iz}))"


def chi(triple: PasquierTriple) -> Character:
    """The difference omega_Y - omega_Z in epsilon-coordinates."""
    rs = triple.group()
    iy, iz = triple.weight_indices()
    return Character(vsub(rs.fundamental_weight(iy), rs.fundamental_weight(iz)))


# Surface kinds established by the classification; families 2 and 4 are not
# covered (family 2 turns out to have no surface at all, family 4 has one of
# unknown Hirzebruch index).
_KIND_TABLE = {
    3: ("P2", "V0V1", None),
    5: ("Fn", None, 3),
}


@dataclass
class SurfaceScan:
    """What the root scan found: the root along chi, pairings, and the kind."""

    chi: Character
    root: Character | None
    pairings: tuple | None
    fixed_points: int | None
    kind: str  # "none" | "P2" | "Fn" | "unresolved"
    n: int | None = None
    model: str | None = None

    def to_json_obj(self) -> dict:
        return {
            "chi": self.chi.to_json_obj(),
            "root": self.root.to_json_obj() if self.root else None,
            "pairings": [str(p) for p in self.pairings] if self.pairings else None,
            "fixed_points": self.fixed_points,
            "kind": self.kind,
            "n": self.n,
            "model": self.model,
        }


def surface_scan(triple: PasquierTriple) -> SurfaceScan:
    """Scan the positive roots for a rational multiple of chi."""
    rs = triple.group()
    iy, iz = triple.weight_indices()
    difference = chi(triple)
    root = rs.positive_root_in_direction(difference.coords)
    if root is None:
        return SurfaceScan(chi=difference, root=None, pairings=None, fixed_points=None, kind="none")
    a = pairing(root, rs.fundamental_weight(iy))
    b = pairing(root, rs.fundamental_weight(iz))
    count = (2 if a else 1) + (2 if b else 1)
    kind, model, n = "unresolved", None, None
    if triple.family in _KIND_TABLE:
        kind, model, n = _KIND_TABLE[triple.family]
    return SurfaceScan(
        chi=difference,
        root=Character(root),
        pairings=(a, b),
        fixed_points=count,
        kind=kind,
        n=n,
        model=model,
    )


def _parse_force_kind(text: str) -> tuple:
    text = text.strip().lower()
    if text in ("p2:v0v1", "p2-v0v1"):
        return "P2", "V0V1", None
    if text in ("p2:v2", "p2-v2"):
        return "P2", "V2", None
    if text == "f0":
        return "F0", None, None
    if text.startswith("fn:"):
        n = int(text.split(":", 1)[1])
        if n < 1:
            raise ValueError("Hirzebruch index must be >= 1")
        return "Fn", None, n
    raise ValueError(f"cannot parse surface kind {text!r}; use p2:v0v1, p2:v2, f0 or fn:<k>")


def _family3_point_name(anchor, n: int, kernel: bool) -> str:
    """Isotropic-subset name of a fixed point of the odd symplectic Grassmannian."""
    indices = []
    for i, c in enumerate(anchor):
        if c == 1:
            indices.append(i + 1)
        elif c == -1:
            indices.append(2 * n + 1 - i)
        elif c:
            raise ValueError("unexpected fixed-point weight in family 3")
    if kernel:
        indices.append(n + 1)
    indices.sort()
    if 2 * n + 1 <= 9:
        return "x" + "".join(str(i) for i in indices)
    return "x" + "_".join(str(i) for i in indices)


def _point_tables(triple: PasquierTriple, rs: RootSystem, group: WeylGroup):
    """Name maps anchor -> point name for both closed orbits, plus weights."""
    iy, iz = triple.weight_indices()
    parabolic_y = frozenset(i for i in range(1, rs.rank + 1) if i != iy)
    parabolic_z = frozenset(i for i in range(1, rs.rank + 1) if i != iz)
    cosets_y = group.cosets(parabolic_y)
    cosets_z = group.cosets(parabolic_z)

    def namer(prefix, use_kernel):
        if triple.family == 3:
            return lambda c: _family3_point_name(c.anchor, triple.n, use_kernel)
        return lambda c: c.name(prefix)

    name_y = namer("y", False)
    name_z = namer("z", True)
    y_names = {c.anchor: name_y(c) for c in cosets_y}
    z_names = {c.anchor: name_z(c) for c in cosets_z}
    weights = {name: anchor for anchor, name in y_names.items()}
    weights.update({name: anchor for anchor, name in z_names.items()})
    return cosets_y, cosets_z, y_names, z_names, weights


def point_weights(triple: PasquierTriple) -> dict:
    """The ambient weight of every fixed point, keyed by the builder's names.

    These are the weights of the projective embedding spanned by the two
    defining representations; the tuple point -> chern(weight) is the
    restriction of the hyperplane class and satisfies every congruence of
    the built datum.
    """
    triple.validate()
    rs = triple.group()
    group = WeylGroup(rs)
    _, _, _, _, weights = _point_tables(triple, rs, group)
    return {name: Character(anchor) for name, anchor in weights.items()}


def build_gkm(triple: PasquierTriple, force_kind: str | None = None) -> GkmDatum:
    """Assemble the full GKM datum of a classification triple.

    Raises UnresolvedSurfaceKindError when a surface component exists but the
    family does not determine its kind and no override was supplied.
    """
    triple.validate()
    rs = triple.group()
    iy, iz = triple.weight_indices()
    omega_y, omega_z = rs.fundamental_weight(iy), rs.fundamental_weight(iz)
    lam = rs.weyl_vector()
    group = WeylGroup(rs)
    parabolic_y = frozenset(i for i in range(1, rs.rank + 1) if i != iy)
    parabolic_z = frozenset(i for i in range(1, rs.rank + 1) if i != iz)
    parabolic_joint = parabolic_y & parabolic_z

    cosets_y, cosets_z, y_names, z_names, weights = _point_tables(triple, rs, group)

    def lam_value(anchor):
        return inner(lam, anchor)

    # Surface components, one per Weyl translate of the root along chi.
    scan = surface_scan(triple)
    surfaces = []
    if scan.root is not None:
        kind, model, index_n = scan.kind, scan.model, scan.n
        if force_kind is not None:
            kind, model, index_n = _parse_force_kind(force_kind)
        if kind == "unresolved":
            raise UnresolvedSurfaceKindError(
                f"{triple.describe()} has a surface component with curve degrees "
                f"{tuple(str(p) for p in scan.pairings)}, but no established rule gives its "
                "Hirzebruch index; pass an explicit kind override to emit it"
            )
        root0 = scan.root.coords
        a, b = scan.pairings
        seen_components = {}
        for w in group.elements():
            names = []
            ya = group.apply_word(w.word, omega_y)
            names.append(y_names[ya])
            if a:
                names.append(y_names[group.apply_word(w.word, reflect(root0, omega_y))])
            za = group.apply_word(w.word, omega_z)
            names.append(z_names[za])
            if b:
                names.append(z_names[group.apply_word(w.word, reflect(root0, omega_z))])
            key = frozenset(names)
            if key in seen_components:
                continue
            alpha_dir = direction(group.apply_word(w.word, root0))
            alpha = Character(rs.positive_root_in_direction(alpha_dir))
            ordered = sorted(set(names), key=lambda p: lam_value(weights[p]), reverse=True)
            values = [lam_value(weights[p]) for p in ordered]
            if len(set(values)) != len(values):
                raise GkmValidationError(
                    "ordering covector does not separate the surface points"
                )
            expected = 3 if kind == "P2" else 4
            if len(ordered) != expected:
                raise GkmValidationError(
                    f"surface component has {len(ordered)} points but kind {kind} needs {expected}"
                )
            seen_components[key] = SurfaceComponent(
                kind=kind, points=tuple(ordered), alpha=alpha, n=index_n, model=model
            )
        surfaces = [seen_components[k] for k in sorted(seen_components, key=sorted)]

    # Edges: curves of the two closed orbits plus the joining lines, with the
    # curves absorbed by a surface dropped (their congruences come from the
    # surface's chains).
    surface_members = [(set(s.points), s.alpha) for s in surfaces]

    def absorbed(pa, pb, weight: Character) -> bool:
        for points, alpha in surface_members:
            if pa in points and pb in points and weight.proportional_to(alpha):
                return True
        return False

    edges = {}

    def add_edge(pa, pb, weight: Character):
        if absorbed(pa, pb, weight):
            return
        a_, b_ = sorted((pa, pb))
        key = (a_, b_, weight.primitive_direction())
        if key not in edges:
            edges[key] = GkmEdge(a_, b_, weight)

    for cosets, names in ((cosets_y, y_names), (cosets_z, z_names)):
        parabolic = parabolic_y if names is y_names else parabolic_z
        for curve in enumerate_curves(rs, parabolic, group):
            add_edge(
                names[curve.u.anchor],
                names[curve.v.anchor],
                Character(curve.root),
            )

    for w in group.cosets(parabolic_joint):
        ya = group.apply_word(w.word, omega_y)
        za = group.apply_word(w.word, omega_z)
        line_weight = Character(group.apply_word(w.word, chi(triple).coords))
        value = inner(lam, line_weight.coords)
        if not value:
            raise GkmValidationError("ordering covector does not orient a joining line")
        if value < 0:
            line_weight = -line_weight
        add_edge(y_names[ya], z_names[za], line_weight)

    points = sorted(weights)
    datum = GkmDatum(
        rank=rs.dim,
        points=tuple(points),
        edges=tuple(edges[k] for k in sorted(edges)),
        surfaces=tuple(surfaces),
        ordering=tuple(lam),
    )
    datum.validate()
    return datum
