"""Exact graded power series over the rationalized Lazard coefficient ring.

Coefficients live in Q[m1, m2, ...] where mk is the degree-(-k) logarithm
generator.  Series live in Q[m.][[t1, ..., tr]] and are truncated at a fixed
total degree in the t-variables only; the m-parts are exact polynomials.
All arithmetic is exact rational (gmpy2 when installed, stdlib fractions
otherwise); no floating point anywhere.
"""

from __future__ import annotations

from functools import lru_cache

try:  # exact rationals: gmpy2 when available, stdlib fractions otherwise
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

# A monomial in the m-generators: sorted tuple of (k, exponent), k >= 1.
MKey = tuple
# A t-monomial: tuple of non-negative exponents, one per variable.
TKey = tuple

_MONE = ()  # the empty m-monomial (the rational 1)


def as_rational(value) -> QQ:
    """Coerce ints, strings like '3/4' and Fraction-alikes to mpq."""
    if isinstance(value, type(QQ(0))):
        return value
    if isinstance(value, (int, str)):
        return QQ(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def m_degree(mkey: MKey) -> int:
    """Cohomological degree of an m-monomial: mk has degree -k."""
    return -sum(k * e for k, e in mkey)


@lru_cache(maxsize=1 << 20)
def _mmul(a: MKey, b: MKey) -> MKey:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for k, e in b:
        merged[k] = merged.get(k, 0) + e
    return tuple(sorted(merged.items()))


def _accumulate_product(bucket: dict, ca: dict, cb: dict):
    """bucket += ca * cb, all three as raw m-monomial dicts (mutates bucket)."""
    for ma, qa in ca.items():
        for mb, qb in cb.items():
            m = _mmul(ma, mb)
            q = qa * qb
            cur = bucket.get(m)
            if cur is None:
                bucket[m] = q
            else:
                cur = cur + q
                if cur:
                    bucket[m] = cur
                else:
                    del bucket[m]


class LazardCoefficient:
    """A sparse polynomial in the logarithm generators m1, m2, ... over Q.

    Zero coefficients are never stored; all rationals are kept exact.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = terms or {}

    @classmethod
    def zero(cls) -> "LazardCoefficient":
        return cls({})

    @classmethod
    def rational(cls, q) -> "LazardCoefficient":
        q = as_rational(q)
        return cls({_MONE: q} if q else {})

    @classmethod
    def one(cls) -> "LazardCoefficient":
        return cls.rational(1)

    @classmethod
    def generator(cls, k: int, exponent: int = 1, scale=1) -> "LazardCoefficient":
        """The monomial scale * mk^exponent."""
        if k < 1 or exponent < 0:
            raise ValueError("m-generator index must be >= 1 and exponent >= 0")
        scale = as_rational(scale)
        if not scale:
            return cls.zero()
        if exponent == 0:
            return cls.rational(scale)
        return cls({((k, exponent),): scale})

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _MONE in self.terms)

    def rational_value(self) -> QQ:
        if not self.terms:
            return QQ(0)
        if self.is_rational():
            return self.terms[_MONE]
        raise ValueError("coefficient is not a pure rational")

    def degrees(self) -> set:
        return {m_degree(m) for m in self.terms}

    def __eq__(self, other) -> bool:
        if isinstance(other, LazardCoefficient):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def __neg__(self) -> "LazardCoefficient":
        return LazardCoefficient({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "LazardCoefficient":
        if not isinstance(other, LazardCoefficient):
            other = LazardCoefficient.rational(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return LazardCoefficient(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LazardCoefficient":
        if not isinstance(other, LazardCoefficient):
            other = LazardCoefficient.rational(other)
        return self + (-other)

    def __mul__(self, other) -> "LazardCoefficient":
        if not isinstance(other, LazardCoefficient):
            return self.scale(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mmul(ma, mb)
                c = ca * cb
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return LazardCoefficient(out)

    def __rmul__(self, other) -> "LazardCoefficient":
        return self.scale(other)

    def scale(self, q) -> "LazardCoefficient":
        q = as_rational(q)
        if not q:
            return LazardCoefficient.zero()
        return LazardCoefficient({m: c * q for m, c in self.terms.items()})

    def evaluate(self, assignment) -> QQ:
        """Evaluate with mk -> assignment[k]; assignment maps int k to rationals."""
        total = QQ(0)
        for m, c in self.terms.items():
            v = c
            for k, e in m:
                v = v * (as_rational(assignment[k]) ** e)
            total += v
        return total

    def specialize(self, assignment) -> "LazardCoefficient":
        return LazardCoefficient.rational(self.evaluate(assignment))

    def max_generator(self) -> int:
        """Largest mk index appearing (0 if the coefficient is rational)."""
        best = 0
        for m in self.terms:
            for k, _ in m:
                if k > best:
                    best = k
        return best

    def sorted_terms(self):
        return sorted(self.terms.items())

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            if c == -1 and m:
                head = "-"
            elif c == 1 and m:
                head = ""
            else:
                head = str(c)
                if m:
                    head += "*"
            for k, e in m:
                factors.append(f"m{k}" + (f"^{e}" if e > 1 else ""))
            parts.append(head + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"LazardCoefficient({self.render()})"

    def to_json_terms(self) -> list:
        return [[[list(ke) for ke in m], str(c)] for m, c in self.sorted_terms()]


def _clean_insert(out: dict, key, coeff: LazardCoefficient):
    cur = out.get(key)
    if cur is None:
        if not coeff.is_zero():
            out[key] = coeff
    else:
        cur = cur + coeff
        if cur.is_zero():
            del out[key]
        else:
            out[key] = cur


class TruncatedSeries:
    """A power series in t1..tr over Q[m.], truncated at total t-degree `order`.

    Immutable by convention: no method mutates `terms` after construction.
    """

    __slots__ = ("rank", "order", "terms")

    def __init__(self, rank: int, order: int, terms: dict | None = None):
        if rank < 1:
            raise ValueError("variable count must be >= 1")
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        self.rank = rank
        self.order = order
        self.terms = terms or {}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, rank: int, order: int) -> "TruncatedSeries":
        return cls(rank, order)

    @classmethod
    def constant(cls, coeff, rank: int, order: int) -> "TruncatedSeries":
        if not isinstance(coeff, LazardCoefficient):
            coeff = LazardCoefficient.rational(coeff)
        if coeff.is_zero():
            return cls(rank, order)
        return cls(rank, order, {(0,) * rank: coeff})

    @classmethod
    def one(cls, rank: int, order: int) -> "TruncatedSeries":
        return cls.constant(1, rank, order)

    @classmethod
    def variable(cls, index: int, rank: int, order: int) -> "TruncatedSeries":
        """The series t_{index+1} (0-based index)."""
        if not 0 <= index < rank:
            raise ValueError("variable index out of range")
        if order < 1:
            return cls(rank, order)
        key = tuple(1 if i == index else 0 for i in range(rank))
        return cls(rank, order, {key: LazardCoefficient.one()})

    @classmethod
    def monomial(cls, exponents, coeff, rank: int, order: int) -> "TruncatedSeries":
        exponents = tuple(exponents)
        if len(exponents) != rank:
            raise ValueError("exponent tuple length must equal the variable count")
        if not isinstance(coeff, LazardCoefficient):
            coeff = LazardCoefficient.rational(coeff)
        if coeff.is_zero() or sum(exponents) > order:
            return cls(rank, order)
        return cls(rank, order, {exponents: coeff})

    # -- basic queries -----------------------------------------------------

    def coefficient(self, exponents) -> LazardCoefficient:
        return self.terms.get(tuple(exponents), LazardCoefficient.zero())

    def constant_term(self) -> LazardCoefficient:
        return self.coefficient((0,) * self.rank)

    def is_zero(self) -> bool:
        return not self.terms

    def is_zero_through(self, order: int) -> bool:
        return all(sum(k) > order for k in self.terms)

    def t_order(self):
        """Minimal total t-degree of a stored term, or None for the zero series."""
        if not self.terms:
            return None
        return min(sum(k) for k in self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return (
                self.rank == other.rank
                and self.order == other.order
                and self.terms == other.terms
            )
        return NotImplemented

    __hash__ = None

    def agrees_through(self, other: "TruncatedSeries", order: int) -> bool:
        if self.rank != other.rank:
            return False
        return (self - other.truncated(self.order)).is_zero_through(order)

    # -- arithmetic ---------------------------------------------------------

    def _check_rank(self, other: "TruncatedSeries"):
        if self.rank != other.rank:
            raise ValueError(
                f"variable-count mismatch: {self.rank} vs {other.rank}"
            )

    def truncated(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return TruncatedSeries(self.rank, min(order, self.order), dict(self.terms))
        return TruncatedSeries(
            self.rank, order, {k: c for k, c in self.terms.items() if sum(k) <= order}
        )

    def at_order(self, order: int) -> "TruncatedSeries":
        """Re-declare the truncation order.

        Raising the order asserts that the dropped tail is genuinely zero;
        that is the caller's responsibility (e.g. for exact polynomials).
        """
        if order <= self.order:
            return self.truncated(order)
        return TruncatedSeries(self.rank, order, dict(self.terms))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.rank, self.order, {k: -c for k, c in self.terms.items()}
        )

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.rank, self.order)
        self._check_rank(other)
        order = min(self.order, other.order)
        out = {k: c for k, c in self.terms.items() if sum(k) <= order}
        for k, c in other.terms.items():
            if sum(k) <= order:
                _clean_insert(out, k, c)
        return TruncatedSeries(self.rank, order, out)

    __radd__ = __add__

    def __sub__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.rank, self.order)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_rank(other)
        order = min(self.order, other.order)
        a = sorted((sum(k), k, c.terms) for k, c in self.terms.items())
        b = sorted((sum(k), k, c.terms) for k, c in other.terms.items())
        buckets: dict = {}
        for da, ka, ca in a:
            if da > order:
                break
            for db, kb, cb in b:
                if da + db > order:
                    break
                key = tuple(x + y for x, y in zip(ka, kb))
                bucket = buckets.get(key)
                if bucket is None:
                    bucket = buckets[key] = {}
                _accumulate_product(bucket, ca, cb)
        out = {
            k: LazardCoefficient(bucket) for k, bucket in buckets.items() if bucket
        }
        return TruncatedSeries(self.rank, order, out)

    def __rmul__(self, other) -> "TruncatedSeries":
        return self.scale(other)

    def scale(self, coeff) -> "TruncatedSeries":
        if not isinstance(coeff, LazardCoefficient):
            coeff = LazardCoefficient.rational(coeff)
        if coeff.is_zero():
            return TruncatedSeries(self.rank, self.order)
        out = {}
        for k, c in self.terms.items():
            _clean_insert(out, k, c * coeff)
        return TruncatedSeries(self.rank, self.order, out)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("negative powers are not defined for series")
        result = TruncatedSeries.one(self.rank, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and substitution ------------------------------------------

    def partial(self, index: int) -> "TruncatedSeries":
        """Partial derivative in t_{index+1}; exact through order-1."""
        out = {}
        for k, c in self.terms.items():
            e = k[index]
            if e == 0:
                continue
            key = k[:index] + (e - 1,) + k[index + 1 :]
            _clean_insert(out, key, c.scale(e))
        return TruncatedSeries(self.rank, max(self.order - 1, 0), out)

    def split_by_variable(self, index: int):
        """Write the series as sum_k t_index^k * C_k with C_k free of t_index."""
        pieces = {}
        for k, c in self.terms.items():
            e = k[index]
            rest = k[:index] + (0,) + k[index + 1 :]
            pieces.setdefault(e, {})[rest] = c
        return {
            e: TruncatedSeries(self.rank, self.order, terms)
            for e, terms in pieces.items()
        }

    def substitute(self, index: int, replacement: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute t_{index+1} -> replacement (Horner in the chosen variable)."""
        self._check_rank(replacement)
        order = min(self.order, replacement.order)
        pieces = self.split_by_variable(index)
        if not pieces:
            return TruncatedSeries(self.rank, order)
        top = max(pieces)
        acc = TruncatedSeries.zero(self.rank, order)
        for e in range(top, -1, -1):
            acc = acc * replacement
            piece = pieces.get(e)
            if piece is not None:
                acc = acc + piece.truncated(order)
        return acc

    def divide_by_variable(self, index: int) -> "TruncatedSeries":
        """Exact division by t_{index+1}; every term must contain the variable."""
        out = {}
        for k, c in self.terms.items():
            if k[index] == 0:
                raise ValueError("series is not divisible by the chosen variable")
            key = k[:index] + (k[index] - 1,) + k[index + 1 :]
            out[key] = c
        return TruncatedSeries(self.rank, max(self.order - 1, 0), out)

    def specialize(self, assignment) -> "TruncatedSeries":
        """Evaluate every mk at a rational; keeps the t-structure."""
        out = {}
        for k, c in self.terms.items():
            _clean_insert(out, k, c.specialize(assignment))
        return TruncatedSeries(self.rank, self.order, out)

    # -- serialization and rendering ------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json_obj(self) -> dict:
        terms = []
        for k, c in self.sorted_terms():
            for m, q in c.sorted_terms():
                terms.append(
                    {
                        "t_exponents": list(k),
                        "m_exponents": [list(ke) for ke in m],
                        "coeff": str(q),
                    }
                )
        return {"vars": self.rank, "order": self.order, "terms": terms}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TruncatedSeries":
        rank, order = int(obj["vars"]), int(obj["order"])
        out = {}
        for term in obj["terms"]:
            key = tuple(int(e) for e in term["t_exponents"])
            if len(key) != rank:
                raise ValueError("t-exponent length does not match the variable count")
            if any(e < 0 for e in key):
                raise ValueError("t-exponents must be non-negative")
            if sum(key) > order:
                raise ValueError("a stored t-monomial exceeds the truncation order")
            m = tuple(sorted((int(k), int(e)) for k, e in term["m_exponents"]))
            if any(k < 1 or e < 1 for k, e in m):
                raise ValueError("malformed m-monomial")
            coeff = LazardCoefficient({m: as_rational(term["coeff"])} if term["coeff"] != "0" else {})
            _clean_insert(out, key, coeff)
        return cls(rank, order, out)

    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = ("u",) if self.rank == 1 else tuple(f"t{i+1}" for i in range(self.rank))
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            mono = "*".join(
                f"{names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(k)
                if e
            )
            cstr = c.render()
            if not mono:
                parts.append(cstr)
            elif cstr == "1":
                parts.append(mono)
            elif cstr == "-1":
                parts.append("-" + mono)
            elif len(c.terms) > 1:
                parts.append(f"({cstr})*{mono}")
            else:
                parts.append(f"{cstr}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.render()} + O(deg {self.order + 1}))"


def compose_univariate(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g) for univariate f and any series g with zero constant term."""
    if f.rank != 1:
        raise ValueError("outer series must be univariate")
    if not g.constant_term().is_zero():
        raise ValueError("inner series must have zero constant term")
    order = min(f.order, g.order)
    acc = TruncatedSeries.zero(g.rank, order)
    for k in range(order, -1, -1):
        acc = acc * g
        c = f.coefficient((k,))
        if not c.is_zero():
            acc = acc + TruncatedSeries.constant(c, g.rank, order)
    return acc


def compositional_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """The series e with e(f(u)) = u = f(e(u)) up to the truncation order.

    Requires f = c1*u + O(u^2) with c1 a nonzero rational; solved degree by
    degree from the defect of e(f(u)).
    """
    if f.rank != 1:
        raise ValueError("compositional inverse is defined for univariate series")
    if not f.constant_term().is_zero():
        raise ValueError("series must have zero constant term")
    c1 = f.coefficient((1,))
    if c1.is_zero() or not c1.is_rational():
        raise ValueError("series must have an invertible rational linear term")
    c1 = c1.rational_value()
    order = f.order
    inv_coeffs = {1: LazardCoefficient.rational(1 / c1)}
    for n in range(2, order + 1):
        partial = TruncatedSeries(
            1, n, {(k,): c for k, c in inv_coeffs.items() if k <= n}
        )
        defect = compose_univariate(partial, f.truncated(n)).coefficient((n,))
        if not defect.is_zero():
            inv_coeffs[n] = defect.scale(-(QQ(1) / c1**n))
    terms = {(k,): c for k, c in inv_coeffs.items() if not c.is_zero()}
    return TruncatedSeries(1, order, terms)


def series_inverse(w: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero rational constant term."""
    c = w.constant_term()
    if c.is_zero() or not c.is_rational():
        raise ValueError("series must have an invertible rational constant term")
    c = c.rational_value()
    rest = TruncatedSeries.one(w.rank, w.order) - w.scale(QQ(1) / c)
    acc = TruncatedSeries.one(w.rank, w.order)
    for _ in range(w.order):
        acc = acc * rest + TruncatedSeries.one(w.rank, w.order)
    return acc.scale(QQ(1) / c)


def product(series_list, rank: int, order: int) -> TruncatedSeries:
    acc = TruncatedSeries.one(rank, order)
    for s in series_list:
        acc = acc * s
    return acc
