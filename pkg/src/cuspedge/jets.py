"""Truncated Taylor jets in one and two variables.

A jet stores normalized Taylor coefficients ``c = d^k f / k!`` (or
``c_ij = d_u^i d_v^j f / (i! j!)``) of a function at an implicit base point,
truncated at total degree ``order``.  All arithmetic is exact truncated power
series arithmetic, so derivatives extracted from a jet carry only floating
round-off, never discretisation error.

Bivariate coefficients are stored in a flat vector ordered by total degree::

    index(i, j) = d (d + 1) / 2 + j,   d = i + j

so truncating to a lower order is a prefix slice.
"""

from __future__ import annotations

import functools
import math
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AxisVanishingError,
    EvalDomainError,
    JetBaseMismatch,
    JetError,
    JetOrderError,
)

TAU_AXIS = 1e-9


# -- index bookkeeping --------------------------------------------------------


def _size2(order: int) -> int:
    return (order + 1) * (order + 2) // 2


def _idx(i: int, j: int) -> int:
    d = i + j
    return d * (d + 1) // 2 + j


@functools.lru_cache(maxsize=None)
def _exponents(order: int) -> tuple[np.ndarray, np.ndarray]:
    ii, jj = [], []
    for d in range(order + 1):
        for j in range(d + 1):
            ii.append(d - j)
            jj.append(j)
    return np.array(ii), np.array(jj)


@functools.lru_cache(maxsize=None)
def _product_table(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ii, jj = _exponents(order)
    n = len(ii)
    p, q = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    p, q = p.ravel(), q.ravel()
    ri, rj = ii[p] + ii[q], jj[p] + jj[q]
    keep = ri + rj <= order
    p, q = p[keep], q[keep]
    r = (ri[keep] + rj[keep]) * (ri[keep] + rj[keep] + 1) // 2 + rj[keep]
    return p, q, r


@functools.lru_cache(maxsize=None)
def _derivative_table(order: int, di: int, dj: int):
    """Source indices and integer factors for d_u^di d_v^dj of an order jet."""
    new = order - di - dj
    ii, jj = _exponents(new)
    src = (ii + di + jj + dj) * (ii + di + jj + dj + 1) // 2 + jj + dj
    fac = np.ones(len(ii))
    for k in range(di):
        fac = fac * (ii + di - k)
    for k in range(dj):
        fac = fac * (jj + dj - k)
    return src, fac


# -- univariate Taylor coefficients of elementary functions ------------------


def _binomial_series(x0: float, p: float, n: int) -> np.ndarray:
    out = np.empty(n + 1)
    out[0] = x0 ** p
    coef = 1.0
    for k in range(1, n + 1):
        coef *= (p - k + 1) / k
        out[k] = coef * x0 ** (p - k)
    return out


def taylor_coefficients(name: str, x0: float, n: int, param: float | None = None) -> np.ndarray:
    """Normalized Taylor coefficients of ``name`` about ``x0`` up to degree ``n``."""
    k = np.arange(n + 1)
    fact = np.array([math.factorial(int(i)) for i in k], dtype=float)
    if name == "sin":
        cyc = np.array([math.sin(x0), math.cos(x0), -math.sin(x0), -math.cos(x0)])
        return cyc[k % 4] / fact
    if name == "cos":
        cyc = np.array([math.cos(x0), -math.sin(x0), -math.cos(x0), math.sin(x0)])
        return cyc[k % 4] / fact
    if name == "exp":
        out = math.exp(x0) / fact
        out[0] = math.exp(x0)
        return out
    if name == "log":
        if x0 <= 0.0:
            raise EvalDomainError(f"log of non-positive value {x0!r}")
        out = np.empty(n + 1)
        out[0] = math.log(x0)
        for i in range(1, n + 1):
            out[i] = (-1.0) ** (i + 1) / (i * x0 ** i)
        return out
    if name == "sqrt":
        if x0 < 0.0 or (x0 == 0.0 and n > 0):
            raise EvalDomainError(f"sqrt of non-positive value {x0!r}")
        out = _binomial_series(x0, 0.5, n) if n > 0 else np.empty(1)
        out[0] = math.sqrt(x0)
        return out
    if name == "pow_const":
        if x0 <= 0.0:
            raise EvalDomainError(f"non-integer power of non-positive value {x0!r}")
        return _binomial_series(x0, float(param), n)
    if name == "recip":
        if x0 == 0.0:
            raise EvalDomainError("division by a jet with zero constant term")
        out = np.empty(n + 1)
        for i in range(n + 1):
            out[i] = (-1.0) ** i / x0 ** (i + 1)
        return out
    if name == "atan":
        out = np.empty(n + 1)
        out[0] = math.atan(x0)
        if n > 0:
            y = Jet1.variable(0.0, n - 1)
            r = 1.0 / (1.0 + (x0 + y) * (x0 + y))
            out[1:] = r.coeffs / np.arange(1, n + 1)
        return out
    if name == "tan":
        y = Jet1.variable(x0, n)
        t = apply("sin", y) / apply("cos", y)
        out = t.coeffs.copy()
        out[0] = math.tan(x0)
        return out
    if name == "abs":
        if x0 == 0.0 and n > 0:
            raise EvalDomainError("abs is not differentiable at 0")
        out = np.zeros(n + 1)
        out[0] = abs(x0)
        if n > 0:
            out[1] = math.copysign(1.0, x0)
        return out
    raise ValueError(f"unknown jet function {name!r}")


def apply(name: str, a: "Jet", param: float | None = None) -> "Jet":
    """Compose the univariate series of ``name`` with the jet ``a``."""
    g = taylor_coefficients(name, a.value, a.order, param)
    return a._compose_series(g)


# -- jets ---------------------------------------------------------------------


class Jet:
    """Shared arithmetic for :class:`Jet1` and :class:`Jet2`."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.order = int(order)
        if self.coeffs.shape != (self._size(self.order),):
            raise JetOrderError(
                f"expected {self._size(self.order)} coefficients for order {order}, "
                f"got shape {self.coeffs.shape}"
            )

    # subclass hooks
    @staticmethod
    def _size(order: int) -> int:
        raise NotImplementedError

    def _mul_coeffs(self, a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def truncate(self, order: int):
        if order > self.order:
            raise JetOrderError(f"cannot raise order {self.order} to {order}")
        if order == self.order:
            return self
        return type(self)(self.coeffs[: self._size(order)], order)

    def constant_like(self, value: float):
        c = np.zeros(self._size(self.order))
        c[0] = value
        return type(self)(c, self.order)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if type(other) is not type(self):
                raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
            m = min(self.order, other.order)
            return self.coeffs[: self._size(m)], other.coeffs[: self._size(m)], m
        if isinstance(other, (int, float, np.floating, np.integer)):
            b = np.zeros(self._size(self.order))
            b[0] = float(other)
            return self.coeffs, b, self.order
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, m = co
        return type(self)(a + b, m)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, m = co
        return type(self)(a - b, m)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, m = co
        return type(self)(b - a, m)

    def __neg__(self):
        return type(self)(-self.coeffs, self.order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return type(self)(self.coeffs * float(other), self.order)
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, m = co
        return type(self)(self._mul_coeffs(a, b, m), m)

    __rmul__ = __mul__

    def reciprocal(self):
        r = apply("recip", self)
        r.coeffs[0] = 1.0 / self.value
        return r

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            if other == 0:
                raise EvalDomainError("division by zero")
            return type(self)(self.coeffs / float(other), self.order)
        if not isinstance(other, Jet):
            return NotImplemented
        if other.value == 0.0:
            raise EvalDomainError("division by a jet with zero constant term")
        q = self * other.reciprocal()
        q.coeffs[0] = self.value / other.value
        return q

    def __rtruediv__(self, other):
        if not isinstance(other, (int, float, np.floating, np.integer)):
            return NotImplemented
        if self.value == 0.0:
            raise EvalDomainError("division by a jet with zero constant term")
        q = self.reciprocal() * float(other)
        q.coeffs[0] = float(other) / self.value
        return q

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)) or (isinstance(n, float) and n.is_integer()):
            return int_power(self, int(n))
        return apply("pow_const", self, float(n))

    def _compose_series(self, g: np.ndarray):
        """Horner evaluation of ``sum g_k (self - value)^k``."""
        d = self - self.value
        r = self.constant_like(g[-1])
        for gk in g[-2::-1]:
            r = r * d + gk
        return r

    def allclose(self, other, atol: float = 0.0, rtol: float = 1e-12) -> bool:
        a, b, _ = self._coerce(other)
        return bool(np.allclose(a, b, atol=atol, rtol=rtol))


def int_power(x, n: int):
    """Binary exponentiation shared by floats and jets so both round alike."""
    if n < 0:
        return 1.0 / int_power(x, -n)
    if n == 0:
        return x * 0.0 + 1.0
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


class Jet1(Jet):
    """Univariate truncated Taylor series."""

    __slots__ = ()

    @staticmethod
    def _size(order: int) -> int:
        return order + 1

    def _mul_coeffs(self, a, b, order):
        return np.convolve(a, b)[: order + 1]

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet1":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, value: float, order: int) -> "Jet1":
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c, order)

    def coef(self, k: int) -> float:
        if k > self.order:
            raise JetOrderError(f"coefficient {k} beyond order {self.order}")
        return float(self.coeffs[k])

    def partial(self, k: int) -> float:
        """k-th derivative value at the base point."""
        return math.factorial(k) * self.coef(k)

    def deriv(self, k: int = 1) -> "Jet1":
        if k > self.order:
            raise JetOrderError(f"derivative {k} of an order-{self.order} jet")
        c = self.coeffs
        for _ in range(k):
            c = c[1:] * np.arange(1, len(c))
        return Jet1(c, self.order - k)

    def integrate(self, c0: float = 0.0) -> "Jet1":
        c = np.empty(self.order + 2)
        c[0] = c0
        c[1:] = self.coeffs / np.arange(1, self.order + 2)
        return Jet1(c, self.order + 1)

    def divide_by_t(self, tol: float = TAU_AXIS) -> "Jet1":
        if abs(self.coeffs[0]) > tol:
            raise AxisVanishingError(abs(self.coeffs[0]), tol)
        if self.order == 0:
            raise JetOrderError("cannot divide an order-0 jet by t")
        return Jet1(self.coeffs[1:], self.order - 1)

    def evaluate(self, dt: float) -> float:
        return float(np.polyval(self.coeffs[::-1], dt))

    def compose(self, p: "Jet") -> "Jet":
        """``self(p)`` for an inner jet ``p`` with zero constant term."""
        if abs(p.value) > 0.0:
            raise JetBaseMismatch("inner jet must have zero constant term")
        r = p.constant_like(self.coeffs[-1]).truncate(min(p.order, self.order)) \
            if p.order > self.order else p.constant_like(self.coeffs[-1])
        for ck in self.coeffs[-2::-1]:
            r = r * p + ck
        return r

    def __repr__(self):
        return f"Jet1(order={self.order}, coeffs={np.array2string(self.coeffs, precision=6)})"


class Jet2(Jet):
    """Bivariate truncated Taylor series in (u, v)."""

    __slots__ = ()

    @staticmethod
    def _size(order: int) -> int:
        return _size2(order)

    def _mul_coeffs(self, a, b, order):
        p, q, r = _product_table(order)
        return np.bincount(r, weights=a[p] * b[q], minlength=_size2(order))

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet2":
        c = np.zeros(_size2(order))
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, which: int, value: float, order: int) -> "Jet2":
        """The coordinate ``u`` (which=0) or ``v`` (which=1) about ``value``."""
        c = np.zeros(_size2(order))
        c[0] = value
        if order >= 1:
            c[_idx(1, 0) if which == 0 else _idx(0, 1)] = 1.0
        return cls(c, order)

    @classmethod
    def from_dict(cls, terms: dict[tuple[int, int], float], order: int) -> "Jet2":
        c = np.zeros(_size2(order))
        for (i, j), val in terms.items():
            if i + j <= order:
                c[_idx(i, j)] = val
        return cls(c, order)

    def coef(self, i: int, j: int) -> float:
        if i + j > self.order:
            raise JetOrderError(f"coefficient ({i},{j}) beyond order {self.order}")
        return float(self.coeffs[_idx(i, j)])

    def partial(self, i: int, j: int) -> float:
        """Value of d_u^i d_v^j at the base point."""
        return math.factorial(i) * math.factorial(j) * self.coef(i, j)

    def deriv(self, di: int = 0, dj: int = 0) -> "Jet2":
        if di + dj > self.order:
            raise JetOrderError(f"derivative ({di},{dj}) of an order-{self.order} jet")
        if di == dj == 0:
            return self
        src, fac = _derivative_table(self.order, di, dj)
        return Jet2(self.coeffs[src] * fac, self.order - di - dj)

    def axis(self) -> Jet1:
        """Restriction to the v = 0 axis as a jet in u."""
        return Jet1(self.coeffs[[_idx(i, 0) for i in range(self.order + 1)]], self.order)

    def transversal(self) -> Jet1:
        """Restriction to the u = 0 line as a jet in v."""
        return Jet1(self.coeffs[[_idx(0, j) for j in range(self.order + 1)]], self.order)

    def divide_by_v(self, tol: float = TAU_AXIS) -> "Jet2":
        if self.order == 0:
            raise JetOrderError("cannot divide an order-0 jet by v")
        axis = np.abs(self.coeffs[[_idx(i, 0) for i in range(self.order + 1)]])
        worst = float(axis.max())
        if worst > tol:
            raise AxisVanishingError(worst, tol)
        ii, jj = _exponents(self.order - 1)
        src = (ii + jj + 1) * (ii + jj + 2) // 2 + jj + 1
        return Jet2(self.coeffs[src], self.order - 1)

    def evaluate(self, du: float, dv: float) -> float:
        ii, jj = _exponents(self.order)
        return float(np.sum(self.coeffs * du ** ii * dv ** jj))

    def compose(self, p: Jet, q: Jet) -> Jet:
        """``self(p, q)`` for inner jets with zero constant terms.

        The inner jets may be :class:`Jet1` (a curve) or :class:`Jet2` (a
        change of chart).  The result has the inner jets' class and order
        ``min(self.order, p.order, q.order)``.
        """
        if p.value != 0.0 or q.value != 0.0:
            raise JetBaseMismatch("inner jets must have zero constant term")
        m = min(self.order, p.order, q.order)
        p, q = p.truncate(m), q.truncate(m)
        qpow = [q.constant_like(1.0)]
        for _ in range(m):
            qpow.append(qpow[-1] * q)
        qstack = np.stack([x.coeffs for x in qpow])
        # inner polynomials g_i(q) = sum_j c_ij q^j, then Horner in p
        rows = []
        for i in range(m + 1):
            w = np.array([self.coeffs[_idx(i, j)] for j in range(m - i + 1)])
            rows.append(type(p)(w @ qstack[: m - i + 1], m))
        r = rows[m]
        for i in range(m - 1, -1, -1):
            r = r * p + rows[i]
        return r

    def __repr__(self):
        return f"Jet2(order={self.order}, value={self.value:.6g})"


# -- vectors of jets ---------------------------------------------------------


class JetVec3:
    """Three jets sharing a base point: the jet of an R^3-valued map."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: Jet, y: Jet, z: Jet):
        m = min(x.order, y.order, z.order)
        self.x, self.y, self.z = x.truncate(m), y.truncate(m), z.truncate(m)

    @classmethod
    def constant(cls, vec: Sequence[float], like: Jet) -> "JetVec3":
        return cls(*(like.constant_like(float(c)) for c in vec))

    @property
    def components(self) -> tuple[Jet, Jet, Jet]:
        return (self.x, self.y, self.z)

    @property
    def order(self) -> int:
        return self.x.order

    @property
    def value(self) -> np.ndarray:
        return np.array([self.x.value, self.y.value, self.z.value])

    def map(self, fn: Callable[[Jet], Jet]) -> "JetVec3":
        return JetVec3(fn(self.x), fn(self.y), fn(self.z))

    def truncate(self, order: int) -> "JetVec3":
        return self.map(lambda c: c.truncate(order))

    def deriv(self, *args) -> "JetVec3":
        return self.map(lambda c: c.deriv(*args))

    def axis(self) -> "JetVec3":
        return self.map(lambda c: c.axis())

    def transversal(self) -> "JetVec3":
        return self.map(lambda c: c.transversal())

    def partial(self, *args) -> np.ndarray:
        return np.array([c.partial(*args) for c in self.components])

    def coef(self, *args) -> np.ndarray:
        return np.array([c.coef(*args) for c in self.components])

    def compose(self, *inner) -> "JetVec3":
        return self.map(lambda c: c.compose(*inner))

    def divide_by_v(self, tol: float = TAU_AXIS) -> "JetVec3":
        return divide_by_v(self, tol)

    def evaluate(self, *offset) -> np.ndarray:
        return np.array([c.evaluate(*offset) for c in self.components])

    def __add__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "JetVec3") -> "JetVec3":
        return JetVec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "JetVec3":
        return JetVec3(-self.x, -self.y, -self.z)

    def __mul__(self, s) -> "JetVec3":
        return JetVec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "JetVec3":
        return JetVec3(self.x / s, self.y / s, self.z / s)

    def __repr__(self):
        return f"JetVec3(order={self.order}, value={self.value})"


def dot(a: JetVec3, b: JetVec3) -> Jet:
    return a.x * b.x + a.y * b.y + a.z * b.z


def cross(a: JetVec3, b: JetVec3) -> JetVec3:
    return JetVec3(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )


def det3(a: JetVec3, b: JetVec3, c: JetVec3) -> Jet:
    return dot(a, cross(b, c))


def norm(a: JetVec3) -> Jet:
    sq = dot(a, a)
    if sq.value <= 0.0:
        raise EvalDomainError("norm of a vector jet vanishing at the base point")
    return apply("sqrt", sq)


def normalize(a: JetVec3) -> JetVec3:
    return a / norm(a)


def divide_by_v(F: JetVec3, tol: float = TAU_AXIS) -> JetVec3:
    """Jet of ``h`` with ``F = v h``, for an ``F`` vanishing on the v = 0 axis."""
    worst = 0.0
    out = []
    for comp in F.components:
        try:
            out.append(comp.divide_by_v(tol))
        except AxisVanishingError as exc:
            worst = max(worst, exc.max_coefficient)
    if worst:
        raise AxisVanishingError(worst, tol)
    return JetVec3(*out)


def plug_curve(F: Jet2, U: Jet1, V: Jet1, base: tuple[float, float], tol: float = 1e-12) -> Jet1:
    """Jet of ``t -> F(U(t), V(t))`` where ``F`` is expanded about ``base``."""
    if abs(U.value - base[0]) > tol * max(1.0, abs(base[0])) or \
            abs(V.value - base[1]) > tol * max(1.0, abs(base[1])):
        raise JetBaseMismatch(
            f"curve passes through ({U.value}, {V.value}), jet base is {base}"
        )
    return F.compose(U - U.value, V - V.value)


def lift(a: Jet1, order: int, which: int = 0) -> Jet2:
    """View a jet in one variable as a bivariate jet in ``u`` (which=0) or ``v``.

    Missing high-order coefficients are zero, which is only correct when the
    caller multiplies the result by a factor that pushes them past ``order``.
    """
    c = np.zeros(_size2(order))
    for k in range(min(a.order, order) + 1):
        c[_idx(k, 0) if which == 0 else _idx(0, k)] = a.coeffs[k]
    return Jet2(c, order)


def partial(F: Jet2, i: int, j: int) -> float:
    return F.partial(i, j)


def check_same_order(*jets: Jet) -> int:
    orders = {j.order for j in jets}
    if len(orders) != 1:
        raise JetError(f"mixed jet orders {sorted(orders)}")
    return orders.pop()
