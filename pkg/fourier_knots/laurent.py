"""
Integer Laurent polynomials in one variable ``t``, and determinants of
matrices whose entries are ordinary integer polynomials in ``t``.

Two determinant routes:

- ``bareiss_determinant``: fraction-free elimination over ZZ[t] (sympy
  ``DomainMatrix``). Exact, fine for small matrices.
- ``modular_determinant``: evaluate at integer points modulo word-sized
  primes, eliminate in batches with numpy, interpolate, and lift the
  coefficients with the Chinese remainder theorem. Used for diagrams with
  hundreds of crossings.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np
import sympy
from sympy.ntheory.modular import crt
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")


class LaurentPolynomial:
    """Immutable sum of ``c * t**e`` with integer ``c`` and integer ``e``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Optional[Mapping[int, int]] = None):
        coeffs: Dict[int, int] = {}
        for exp, coeff in (coefficients or {}).items():
            if int(coeff) != coeff:
                raise ValueError(f"coefficient of t^{exp} is not an integer: {coeff!r}")
            if coeff:
                coeffs[int(exp)] = int(coeff)
        self._coeffs = dict(sorted(coeffs.items()))

    # ── construction ────────────────────────────────────────────────────

    @classmethod
    def constant(cls, c: int) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: int, exp: int) -> "LaurentPolynomial":
        return cls({exp: c})

    @classmethod
    def from_sympy(cls, expr, t: sympy.Symbol = T) -> "LaurentPolynomial":
        """Convert an expanded sympy sum of integer multiples of powers of ``t``."""
        coeffs: Dict[int, int] = {}
        for term, coeff in sympy.expand(expr).as_coefficients_dict().items():
            if term == 1:
                exp = 0
            elif term == t:
                exp = 1
            elif term.is_Pow and term.base == t and term.exp.is_Integer:
                exp = int(term.exp)
            else:
                raise ValueError(f"not a Laurent monomial in {t}: {term}")
            if not coeff.is_Integer:
                raise ValueError(f"non-integer coefficient {coeff} for {term}")
            coeffs[exp] = coeffs.get(exp, 0) + int(coeff)
        return cls(coeffs)

    # ── accessors ───────────────────────────────────────────────────────

    @property
    def coefficients(self) -> Dict[int, int]:
        """Exponent -> coefficient, ascending exponents, zeros never stored."""
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_exponent(self) -> int:
        return next(iter(self._coeffs)) if self._coeffs else 0

    @property
    def max_exponent(self) -> int:
        return next(reversed(self._coeffs)) if self._coeffs else 0

    def coefficient(self, exp: int) -> int:
        return self._coeffs.get(exp, 0)

    def evaluate(self, x: Union[int, Fraction]) -> Union[int, Fraction]:
        """Exact value at a rational point."""
        x = Fraction(x)
        total = sum((Fraction(c) * x ** e for e, c in self._coeffs.items()), Fraction(0))
        return int(total) if total.denominator == 1 else total

    def to_sympy(self, t: sympy.Symbol = T):
        return sympy.Add(*(c * t ** e for e, c in self._coeffs.items()))

    # ── arithmetic ──────────────────────────────────────────────────────

    def _lift(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: Dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        # Constants hash like the ints they compare equal to.
        if not self._coeffs:
            return hash(0)
        if list(self._coeffs) == [0]:
            return hash(self._coeffs[0])
        return hash(tuple(self._coeffs.items()))

    # ── normal forms ────────────────────────────────────────────────────

    def shifted(self, k: int) -> "LaurentPolynomial":
        """Multiply by t^k."""
        return LaurentPolynomial({e + k: c for e, c in self._coeffs.items()})

    def normalized(self) -> "LaurentPolynomial":
        """Representative up to units +-t^k: exponents centred on zero and
        positive value at t = 1 (positive top coefficient when that is 0)."""
        if self.is_zero():
            return self
        p = self.shifted(-((self.min_exponent + self.max_exponent) // 2))
        at_one = p.evaluate(1)
        if at_one < 0 or (at_one == 0 and p.coefficient(p.max_exponent) < 0):
            p = -p
        return p

    def is_palindromic(self) -> bool:
        return all(self._coeffs.get(-e) == c for e, c in self._coeffs.items())

    # ── text ────────────────────────────────────────────────────────────

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts: List[str] = []
        for e, c in sorted(self._coeffs.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "t" if e == 1 else f"t^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self._coeffs!r})"

    def to_record(self) -> str:
        """``exp:coeff`` pairs, ascending exponents, comma separated."""
        return ",".join(f"{e}:{c}" for e, c in self._coeffs.items())

    @classmethod
    def from_record(cls, text: str) -> "LaurentPolynomial":
        coeffs = {}
        for pair in filter(None, (p.strip() for p in text.split(","))):
            e, _, c = pair.partition(":")
            coeffs[int(e)] = int(c)
        return cls(coeffs)


ONE = LaurentPolynomial.constant(1)
TVAR = LaurentPolynomial.monomial(1, 1)

PolyMatrix = Sequence[Sequence[LaurentPolynomial]]


def _check_polynomial_entries(matrix: PolyMatrix) -> int:
    m = len(matrix)
    for row in matrix:
        if len(row) != m:
            raise ValueError("determinant needs a square matrix")
        for entry in row:
            if not entry.is_zero() and entry.min_exponent < 0:
                raise ValueError("matrix entries must be ordinary polynomials in t")
    return m


# ---------------------------------------------------------------------------
# Fraction-free elimination over ZZ[t]
# ---------------------------------------------------------------------------

def bareiss_determinant(matrix: PolyMatrix) -> LaurentPolynomial:
    m = _check_polynomial_entries(matrix)
    if m == 0:
        return ONE
    ring = ZZ.poly_ring(T)
    sym = sympy.Matrix(m, m, lambda i, j: matrix[i][j].to_sympy())
    det = DomainMatrix.from_Matrix(sym, domain=ring).det()
    return LaurentPolynomial.from_sympy(ring.to_sympy(det))


# ---------------------------------------------------------------------------
# Modular evaluation / interpolation / CRT
# ---------------------------------------------------------------------------

# Entries stay below 2**31 so products fit in int64.
PRIME_CEILING = 2 ** 31
# Consecutive unchanged CRT reconstructions needed before an early stop.
STABLE_ROUNDS = 2


def _inverse_mod(x: np.ndarray, p: int) -> np.ndarray:
    """x^(p-2) mod p elementwise (0 maps to 0)."""
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def det_mod_p_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a batch (B, m, m) of matrices with entries in [0, p)."""
    a = np.array(mats, dtype=np.int64)
    batch, m, _ = a.shape
    det = np.ones(batch, dtype=np.int64)
    rows = np.arange(batch)
    for k in range(m):
        nonzero = a[:, k:, k] != 0
        pivot_row = k + np.argmax(nonzero, axis=1)
        swap = pivot_row != k
        if np.any(swap):
            idx, src = rows[swap], pivot_row[swap]
            top = a[idx, k, :].copy()
            a[idx, k, :] = a[idx, src, :]
            a[idx, src, :] = top
            det[idx] = (p - det[idx]) % p
        pivot = a[:, k, k]
        det = det * pivot % p
        if k + 1 == m:
            break
        factors = a[:, k + 1:, k] * _inverse_mod(pivot, p)[:, None] % p
        update = factors[:, :, None] * a[:, None, k, k:] % p
        a[:, k + 1:, k:] = (a[:, k + 1:, k:] - update) % p
    return det


def _interpolate_mod_p(xs: Sequence[int], ys: Sequence[int], p: int) -> List[int]:
    """Monomial coefficients (ascending) of the interpolating polynomial mod p."""
    n = len(xs)
    coef = [int(y) % p for y in ys]
    # Divided differences in place.
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    # Newton form -> monomial form, Horner style.
    poly = [0] * n
    poly[0] = coef[n - 1]
    for k in range(n - 2, -1, -1):
        shifted = [0] + poly[:-1]
        poly = [(shifted[i] - xs[k] * poly[i]) % p for i in range(n)]
        poly[0] = (poly[0] + coef[k]) % p
    return poly


def _coefficient_bound(matrix: PolyMatrix) -> int:
    """Upper bound on |coefficient| of the determinant (product of row 1-norms)."""
    bound = 1
    for row in matrix:
        bound *= max(1, sum(abs(c) for e in row for c in e.coefficients.values()))
    return bound


def _primes_below(ceiling: int) -> Iterable[int]:
    p = ceiling
    while True:
        p = int(sympy.prevprime(p))
        yield p


def modular_determinant(matrix: PolyMatrix, require_unit_at_one: bool = True) -> LaurentPolynomial:
    """Determinant by evaluation/interpolation modulo primes plus CRT.

    Returns exactly once the modulus exceeds twice the coefficient bound.
    It may stop earlier, once the reconstruction has stayed unchanged for
    ``STABLE_ROUNDS`` further primes (and, when ``require_unit_at_one``, is
    +-1 at t = 1). That early stop is probabilistic: a wrong answer needs
    every one of those primes to divide the error, each below 2**31.
    """
    m = _check_polynomial_entries(matrix)
    if m == 0:
        return ONE
    degree = max((e.max_exponent for row in matrix for e in row if not e.is_zero()), default=0)
    npoints = degree * m + 1
    xs = list(range(1, npoints + 1))
    bound = _coefficient_bound(matrix)

    # Dense coefficient tensor: entry (i, j) = sum_k C[k, i, j] t^k
    tensor = np.zeros((degree + 1, m, m), dtype=object)
    for i, row in enumerate(matrix):
        for j, entry in enumerate(row):
            for e, c in entry.coefficients.items():
                tensor[e, i, j] = c

    residues: List[List[int]] = []
    moduli: List[int] = []
    previous: Optional[LaurentPolynomial] = None
    unchanged = 0
    for p in _primes_below(PRIME_CEILING):
        if p <= npoints:
            raise ArithmeticError("ran out of usable primes")
        c = np.array((tensor % p).tolist(), dtype=np.int64).reshape(degree + 1, m, m)
        x = np.array(xs, dtype=np.int64) % p
        mats = np.zeros((npoints, m, m), dtype=np.int64)
        power = np.ones(npoints, dtype=np.int64)
        for k in range(degree + 1):
            mats = (mats + power[:, None, None] * c[k][None, :, :] % p) % p
            power = power * x % p
        values = det_mod_p_batch(mats, p)
        residues.append(_interpolate_mod_p(xs, [int(v) for v in values], p))
        moduli.append(p)

        modulus = 1
        for q in moduli:
            modulus *= q
        coeffs = {}
        for k in range(npoints):
            value, _ = crt(moduli, [r[k] for r in residues])
            value = int(value)
            if value > modulus // 2:
                value -= modulus
            coeffs[k] = value
        candidate = LaurentPolynomial(coeffs)
        logger.debug(f"modular determinant: m={m} primes={len(moduli)} candidate={candidate}")

        if modulus > 2 * bound:
            return candidate
        unchanged = unchanged + 1 if candidate == previous else 0
        if unchanged >= STABLE_ROUNDS and (not require_unit_at_one or abs(candidate.evaluate(1)) == 1):
            return candidate
        previous = candidate
