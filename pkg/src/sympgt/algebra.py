"""Exact scalar arithmetic, multivariate Laurent polynomials and q-series.

Scalars are ``fractions.Fraction`` in exact mode or Python floats/complex in
numeric mode.  Everything downstream (characters, branching polynomials,
generators) is built on the types defined here.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[Fraction, int, float, complex]

INF = math.inf


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (Fraction, int))


@dataclass(frozen=True)
class QSeriesCtx:
    """Carries the deformation parameter q and the truncation depth used for
    infinite Pochhammer products in numeric mode."""
    q: Scalar
    truncation: int = 60

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if not self.exact and not abs(self.q) < 1:
            raise ValueError("numeric mode requires |q| < 1")

    @property
    def exact(self) -> bool:
        return is_exact(self.q)


def q_pochhammer(ctx: QSeriesCtx, x: Scalar, k) -> Scalar:
    """(x;q)_k = prod_{j=0}^{k-1} (1 - x q^j); k may be math.inf in numeric
    mode, in which case the product is truncated at ctx.truncation factors."""
    q = ctx.q
    if k == INF:
        if ctx.exact:
            raise ValueError("infinite q-Pochhammer is unsupported in exact mode")
        k = ctx.truncation
    if k < 0 or k != int(k):
        raise ValueError("q-Pochhammer order must be a nonnegative integer or inf")
    result: Scalar = Fraction(1) if ctx.exact and is_exact(x) else 1.0
    qj: Scalar = 1 if ctx.exact else 1.0
    for _ in range(int(k)):
        result *= 1 - x * qj
        qj *= q
    return result


def q_factorial(ctx: QSeriesCtx, n: int) -> Scalar:
    return q_pochhammer(ctx, ctx.q, n) / (1 - ctx.q) ** n


def q_binomial(ctx: QSeriesCtx, n: int, k: int) -> Scalar:
    """Gaussian binomial (q;q)_n / ((q;q)_k (q;q)_{n-k})."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"q-binomial requires 0 <= k <= n, got n={n}, k={k}")
    # Product form binom(n,k)_q = prod_{j=1}^{k} (1-q^{n-k+j})/(1-q^j).
    q = ctx.q
    num: Scalar = Fraction(1) if ctx.exact else 1.0
    den: Scalar = num
    for j in range(1, k + 1):
        num *= 1 - q ** (n - k + j)
        den *= 1 - q ** j
    return num / den


_VAR_RE = re.compile(r"^a(\d+)\^(-?\d+)$")


class LaurentPoly:
    """Multivariate Laurent polynomial in variables a1..an with scalar
    coefficients keyed by integer exponent vectors."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Scalar] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if c != 0:
                    t = tuple(int(e) for e in exps)
                    clean[t] = clean.get(t, 0) + c if t in clean else c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "LaurentPoly":
        return LaurentPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, c: Scalar) -> "LaurentPoly":
        return LaurentPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def one(nvars: int) -> "LaurentPoly":
        return LaurentPoly.constant(nvars, Fraction(1))

    @staticmethod
    def variable(nvars: int, i: int, power: int = 1) -> "LaurentPoly":
        """The monomial a_i^power (1-based index i)."""
        exps = [0] * nvars
        exps[i - 1] = power
        return LaurentPoly(nvars, {tuple(exps): Fraction(1)})

    @staticmethod
    def monomial(exps: Sequence[int], c: Scalar = Fraction(1)) -> "LaurentPoly":
        return LaurentPoly(len(exps), {tuple(exps): c})

    # -- ring operations ---------------------------------------------------
    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.nvars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.nvars,
                               {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("use explicit monomials for negative powers")
        result = LaurentPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == LaurentPoly.constant(self.nvars, other).terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------
    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), Fraction(0))

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        total: Scalar = 0
        for exps, c in self.terms.items():
            val = c
            for a, e in zip(point, exps):
                if e:
                    val *= a ** e
            total = total + val
        return total

    def substitute_inverse(self, i: int) -> "LaurentPoly":
        """Replace a_i by a_i^{-1} (1-based index)."""
        terms = {}
        for exps, c in self.terms.items():
            e = list(exps)
            e[i - 1] = -e[i - 1]
            terms[tuple(e)] = c
        return LaurentPoly(self.nvars, terms)

    def permute_variables(self, perm: Sequence[int]) -> "LaurentPoly":
        """Apply a_i -> a_{perm[i]} where perm is a 0-based permutation."""
        terms = {}
        for exps, c in self.terms.items():
            e = [0] * self.nvars
            for i, p in enumerate(perm):
                e[p] = exps[i]
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return LaurentPoly(self.nvars, terms)

    def map_coefficients(self, fn) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    # -- canonical text form -------------------------------------------------
    def canonical(self) -> str:
        """Serialize as `c * a1^e1 ... an^en + ...` with exact `p/q` rationals,
        terms in descending lexicographic exponent order."""
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            cs = str(Fraction(c)) if is_exact(c) else repr(c)
            vars_part = " ".join(f"a{i + 1}^{e}" for i, e in enumerate(exps) if e)
            pieces.append(f"{cs} * {vars_part}" if vars_part else cs)
        return " + ".join(pieces)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.canonical()!r})"

    @staticmethod
    def parse(text: str, nvars: int) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return LaurentPoly.zero(nvars)
        terms = {}
        for piece in text.split(" + "):
            parts = piece.split(" * ")
            coeff = Fraction(parts[0])
            exps = [0] * nvars
            if len(parts) > 1:
                for tok in parts[1].split():
                    m = _VAR_RE.match(tok)
                    if not m:
                        raise ValueError(f"bad monomial token {tok!r}")
                    i, e = int(m.group(1)), int(m.group(2))
                    if not 1 <= i <= nvars:
                        raise ValueError(f"variable index {i} out of range")
                    exps[i - 1] += e
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + coeff
        return LaurentPoly(nvars, terms)


def q_hermite(ctx: QSeriesCtx, l: int) -> LaurentPoly:
    """Continuous q-Hermite polynomial H_l(a|q) = sum_m binom(l,m)_q a^{2m-l}
    as a one-variable Laurent polynomial."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    terms = {}
    for m in range(l + 1):
        terms[(2 * m - l,)] = q_binomial(ctx, l, m)
    return LaurentPoly(1, terms)


def expanding_bracket(ctx: QSeriesCtx, x: Scalar, t0: Scalar, r: int) -> Scalar:
    """<x;t0>_{q,r} = prod_{l=1}^{r} (x + x^{-1} - t0 q^{l-1} - t0^{-1} q^{-(l-1)})."""
    if t0 == 0:
        raise ValueError("t0 must be nonzero")
    q = ctx.q
    result: Scalar = Fraction(1) if (ctx.exact and is_exact(x) and is_exact(t0)) else 1.0
    for l in range(1, r + 1):
        result *= x + 1 / _f(x) - t0 * q ** (l - 1) - (1 / _f(t0)) * q ** (-(l - 1))
    return result


def _f(x: Scalar) -> Scalar:
    # Promote ints to Fraction so 1/x stays exact.
    return Fraction(x) if isinstance(x, int) else x


def basic_hypergeometric_3phi2(ctx: QSeriesCtx, numerators: Sequence[Scalar],
                               denominators: Sequence[Scalar], z: Scalar,
                               max_terms: int | None = None) -> Scalar:
    """3phi2 series sum_k (a1,a2,a3;q)_k / ((b1,b2;q)_k (q;q)_k) z^k.

    The series must terminate (some numerator q-Pochhammer hits zero) unless
    max_terms is supplied."""
    if len(numerators) != 3 or len(denominators) != 2:
        raise ValueError("3phi2 takes three numerator and two denominator parameters")
    q = ctx.q
    total: Scalar = 0
    term: Scalar = Fraction(1) if ctx.exact else 1.0
    k = 0
    while True:
        total = total + term
        # Multiply the k-th factor ratio to move from term k to term k+1.
        num = 1
        for aa in numerators:
            num *= 1 - aa * q ** k
        den = 1 - q ** (k + 1)
        for bb in denominators:
            den *= 1 - bb * q ** k
        if den == 0:
            raise ZeroDivisionError("3phi2 denominator parameter hit a pole")
        term = term * num * z / den
        k += 1
        if term == 0:
            return total
        if max_terms is not None and k >= max_terms:
            return total
        if max_terms is None and k > 10000:
            raise ValueError("non-terminating 3phi2 without truncation depth")


def big_q_hermite(ctx: QSeriesCtx, l: int, t0: Scalar, x: Scalar,
                  method: str = "phi") -> Scalar:
    """Continuous big q-Hermite polynomial H_l(x;t0|q), evaluated at the
    Laurent point x.  Two routes:

    - "phi":       t0^{-l} 3phi2(q^{-l}, t0 x, t0/x ; 0, 0 | q; q)
    - "expansion": t0^{-l} sum_r binom(l,r)_q t0^r q^{r^2-lr} <x;t0>_{q,r}
    """
    if t0 == 0:
        raise ValueError("t0 must be nonzero")
    if x == 0:
        raise ValueError("x must be nonzero")
    if l < 0:
        raise ValueError("degree must be nonnegative")
    q, t0, x = ctx.q, _f(t0), _f(x)
    if method == "phi":
        series = basic_hypergeometric_3phi2(
            ctx, [_f(q) ** (-l), t0 * x, t0 / x], [0, 0], q, max_terms=l + 1)
        return t0 ** (-l) * series
    if method == "expansion":
        total: Scalar = 0
        for r in range(l + 1):
            total = total + (q_binomial(ctx, l, r) * t0 ** r
                             * q ** (r * r - l * r)
                             * expanding_bracket(ctx, x, t0, r))
        return t0 ** (-l) * total
    raise ValueError(f"unknown method {method!r}")
