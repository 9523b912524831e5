"""The universal formal group law engine over the rationalized Lazard ring.

Everything is driven by the logarithm l(u) = u + sum_k mk u^(k+1) and its
compositional inverse e: the group sum is e(l(u) + l(v)), integer multiples
are e(n*l(u)), rational divisions e(l(u)/m), and the degree-zero correction
operator rho_{n/m} u = [n]([1/m]u) / u comes out as a univariate series in u.

Specializations assign rationals to the mk: the additive law sets all mk = 0,
the multiplicative law with parameter b sets mk = b^k/(k+1), which collapses
F(u, v) to u + v - b*u*v.
"""

from __future__ import annotations

from .coeff_series import (
    QQ,
    LazardCoefficient,
    TruncatedSeries,
    as_rational,
    compose_univariate,
    compositional_inverse,
)


class FormalGroupLaw:
    """A formal group law truncated at a fixed t-order, optionally specialized.

    Immutable after construction; all caches are filled on demand and never
    invalidated, so instances are safe to share across threads.
    """

    def __init__(self, order: int, assignment: dict | None = None, label: str = "universal"):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        self.order = order
        self.label = label
        if assignment is not None:
            assignment = {int(k): as_rational(v) for k, v in assignment.items()}
            missing = [k for k in range(1, order) if k not in assignment]
            if missing:
                raise ValueError(
                    f"incomplete assignment: m{missing[0]} is undefined below the truncation order"
                )
        self.assignment = assignment
        self._logs: dict = {}
        self._exps: dict = {}
        self._univariate: dict = {}
        self._pair_tables: dict = {}

    # -- factories ----------------------------------------------------------

    @classmethod
    def universal(cls, order: int) -> "FormalGroupLaw":
        return cls(order)

    @classmethod
    def additive(cls, order: int) -> "FormalGroupLaw":
        return cls(order, {k: QQ(0) for k in range(1, order)}, label="additive")

    @classmethod
    def multiplicative(cls, beta, order: int) -> "FormalGroupLaw":
        beta = as_rational(beta)
        assignment = {k: beta**k / (k + 1) for k in range(1, order)}
        return cls(order, assignment, label=f"multiplicative:{beta}")

    @classmethod
    def with_assignment(cls, order: int, assignment: dict) -> "FormalGroupLaw":
        return cls(order, assignment, label="custom")

    def specialize(self, spec) -> "FormalGroupLaw":
        """Return the law with every mk evaluated at a rational.

        spec is "additive", ("multiplicative", beta), or a full {k: rational}.
        """
        if spec == "additive":
            return FormalGroupLaw.additive(self.order)
        if isinstance(spec, tuple) and spec and spec[0] == "multiplicative":
            return FormalGroupLaw.multiplicative(spec[1], self.order)
        if isinstance(spec, dict):
            return FormalGroupLaw.with_assignment(self.order, spec)
        raise ValueError(f"unknown specialization {spec!r}")

    # -- log and exp ----------------------------------------------------------

    def _m(self, k: int) -> LazardCoefficient:
        if self.assignment is None:
            return LazardCoefficient.generator(k)
        return LazardCoefficient.rational(self.assignment.get(k, QQ(0)))

    def log_series(self, order: int | None = None) -> TruncatedSeries:
        """l(u) = u + m1 u^2 + m2 u^3 + ... truncated at the requested order."""
        order = self.order if order is None else order
        cached = self._logs.get(order)
        if cached is None:
            terms = {(1,): LazardCoefficient.one()}
            for k in range(1, order):
                c = self._m(k)
                if not c.is_zero():
                    terms[(k + 1,)] = c
            cached = TruncatedSeries(1, order, terms)
            self._logs[order] = cached
        return cached

    def exp_series(self, order: int | None = None) -> TruncatedSeries:
        order = self.order if order is None else order
        cached = self._exps.get(order)
        if cached is None:
            cached = compositional_inverse(self.log_series(order))
            self._exps[order] = cached
        return cached

    # -- univariate building blocks -------------------------------------------

    def _scaled_exp_log(self, scale, order: int) -> TruncatedSeries:
        """e(scale * l(x)) as a univariate series."""
        return compose_univariate(
            self.exp_series(order), self.log_series(order).scale(scale)
        )

    def multiple_series(self, n: int, order: int | None = None) -> TruncatedSeries:
        """[n]x as a univariate series."""
        order = self.order if order is None else order
        key = ("multiple", n, order)
        cached = self._univariate.get(key)
        if cached is None:
            if n == 0:
                cached = TruncatedSeries.zero(1, order)
            else:
                cached = self._scaled_exp_log(QQ(n), order)
            self._univariate[key] = cached
        return cached

    def divide_series(self, m: int, order: int | None = None) -> TruncatedSeries:
        """[1/m]x as a univariate series."""
        if m < 1:
            raise ValueError("division index must be a positive integer")
        order = self.order if order is None else order
        key = ("divide", m, order)
        cached = self._univariate.get(key)
        if cached is None:
            cached = self._scaled_exp_log(QQ(1, m), order)
            self._univariate[key] = cached
        return cached

    def rho_series(self, n: int, m: int, order: int | None = None) -> TruncatedSeries:
        """rho_{n/m} x = [n]([1/m]x)/x as a univariate series of degree zero."""
        if n == 0:
            raise ValueError("rho requires a nonzero numerator")
        if m < 1:
            raise ValueError("rho requires a positive denominator")
        order = self.order if order is None else order
        key = ("rho", n, m, order)
        cached = self._univariate.get(key)
        if cached is None:
            # [n]([1/m]x) = e((n/m) l(x)) is divisible by x; build one order
            # higher so the shifted quotient is exact through `order`.
            g = self._scaled_exp_log(QQ(n, m), order + 1)
            terms = {(k - 1,): c for (k,), c in g.terms.items()}
            cached = TruncatedSeries(1, order, terms)
            self._univariate[key] = cached
        return cached

    # -- operations on series ---------------------------------------------------

    @staticmethod
    def _require_no_constant(*series: TruncatedSeries):
        for s in series:
            if not s.constant_term().is_zero():
                raise ValueError("formal group law arguments must have zero constant term")

    def pair_table(self, order: int | None = None) -> TruncatedSeries:
        """F(u, v) expanded on two fresh variables."""
        order = self.order if order is None else order
        cached = self._pair_tables.get(order)
        if cached is None:
            u = TruncatedSeries.variable(0, 2, order)
            v = TruncatedSeries.variable(1, 2, order)
            lu = compose_univariate(self.log_series(order), u)
            lv = compose_univariate(self.log_series(order), v)
            cached = compose_univariate(self.exp_series(order), lu + lv)
            self._pair_tables[order] = cached
        return cached

    def a_coefficient(self, i: int, j: int) -> LazardCoefficient:
        """The coefficient of u^i v^j in F(u, v)."""
        if i < 0 or j < 0 or i + j > self.order:
            raise ValueError("coefficient indices out of the truncation range")
        return self.pair_table().coefficient((i, j))

    def _sum_via_table(self, mono: TruncatedSeries, other: TruncatedSeries) -> TruncatedSeries:
        """F(mono, other) where mono is a single monomial: Horner over the pair table."""
        order = min(mono.order, other.order)
        table = self.pair_table(order).split_by_variable(1)
        top = max(table)
        acc = TruncatedSeries.zero(mono.rank, order)
        for j in range(top, -1, -1):
            acc = acc * other
            row = table.get(j)
            if row is None:
                continue
            # row = sum_i a_ij u^i: substitute the monomial for u.
            for (i, _), c in row.terms.items():
                acc = acc + (mono**i).scale(c).truncated(order)
        return acc

    def sum(self, u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
        """u +_F v = e(l(u) + l(v))."""
        u._check_rank(v)
        self._require_no_constant(u, v)
        if u.is_zero():
            return v
        if v.is_zero():
            return u
        if len(u.terms) == 1:
            return self._sum_via_table(u, v)
        if len(v.terms) == 1:
            return self._sum_via_table(v, u)
        order = min(u.order, v.order)
        lu = compose_univariate(self.log_series(order), u)
        lv = compose_univariate(self.log_series(order), v)
        return compose_univariate(self.exp_series(order), lu + lv)

    def inverse(self, u: TruncatedSeries) -> TruncatedSeries:
        """[-1]u = e(-l(u)), the power-series inverse for the group law."""
        self._require_no_constant(u)
        return compose_univariate(self.multiple_series(-1, u.order), u)

    def multiple(self, n: int, u: TruncatedSeries) -> TruncatedSeries:
        """[n]u = e(n l(u)) for any integer n."""
        self._require_no_constant(u)
        if n == 0:
            return TruncatedSeries.zero(u.rank, u.order)
        return compose_univariate(self.multiple_series(n, u.order), u)

    def divide(self, m: int, u: TruncatedSeries) -> TruncatedSeries:
        """[1/m]u, the unique series with [m]([1/m]u) = u."""
        self._require_no_constant(u)
        if m < 1:
            raise ValueError("division index must be a positive integer")
        return compose_univariate(self.divide_series(m, u.order), u)

    def rho(self, n: int, m: int, u: TruncatedSeries) -> TruncatedSeries:
        """The exact quotient [n]([1/m]u)/u for u of t-order exactly one.

        The quotient is computed as a univariate series in u, so the division
        is exact by construction; inputs whose lowest term is not of t-order
        one are rejected.
        """
        if u.t_order() != 1:
            raise ValueError("rho requires an input of t-order exactly 1")
        return compose_univariate(self.rho_series(n, m, u.order), u)

    def divisor_combination(self, z0: TruncatedSeries, zinf: TruncatedSeries) -> TruncatedSeries:
        """F(z0, [-1]zinf): the class attached to a section's zeros and poles."""
        self._require_no_constant(z0, zinf)
        return self.sum(z0, self.inverse(zinf))

    def __repr__(self) -> str:
        return f"FormalGroupLaw(order={self.order}, law={self.label})"
