"""Signed-power polynomials, weighted dilations, and generalized spheres.

The basic object is a finite sum of terms

    c * prod_i |x_i|^(p_i) * sgn(x_i)^(s_i)

with rational exponents p_i >= 0 and boolean sign flags s_i.  Ordinary
monomials embed through x^(a/b) = |x|^(a/b) * sgn(x)^(a mod 2) for odd b,
so every term is continuous on all of R^n and parity and weighted
homogeneity become exact, term-by-term questions instead of numerical
ones.  A sign flag is only allowed on a variable with a positive
exponent; that keeps bare sgn(x) factors (discontinuous at 0) out of the
representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

# Fixed default so every report and certificate is reproducible run to run.
DEFAULT_SEED = 170453

TWO_PI = 2.0 * math.pi


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"
    NEITHER = "neither"


def _as_fraction(p) -> Fraction:
    """Coerce an exponent spec (int, Fraction, (num, den) pair) to Fraction."""
    if isinstance(p, Fraction):
        frac = p
    elif isinstance(p, int):
        frac = Fraction(p)
    elif isinstance(p, tuple) and len(p) == 2:
        frac = Fraction(int(p[0]), int(p[1]))
    elif isinstance(p, float) and p.is_integer():
        frac = Fraction(int(p))
    else:
        raise TypeError(f"exponent must be int, Fraction, or (num, den) pair, got {p!r}")
    if frac < 0:
        raise ValueError(f"exponents must be nonnegative, got {frac}")
    return frac


@dataclass(frozen=True)
class Dilation:
    """Anisotropic scaling x -> (eps^r1 x_1, ..., eps^rn x_n), weights r_i >= 1.

    The matching generalized sphere is {x : sum_i |x_i|^(l/r_i) = 1} with
    l > 0 (default 2, which makes the standard weights give the Euclidean
    circle for n = 2).
    """

    weights: tuple[float, ...]
    l: float = 2.0

    def __post_init__(self):
        ws = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "l", float(self.l))
        if not ws:
            raise ValueError("a dilation needs at least one weight")
        if any(not math.isfinite(w) or w < 1.0 for w in ws):
            raise ValueError(f"dilation weights must be finite and >= 1, got {ws}")
        if not (math.isfinite(self.l) and self.l > 0):
            raise ValueError(f"sphere exponent l must be positive, got {self.l}")

    @classmethod
    def standard(cls, n: int, l: float = 2.0) -> "Dilation":
        return cls((1.0,) * n, l)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def is_standard(self) -> bool:
        return all(w == 1.0 for w in self.weights)

    def scale(self, eps, x):
        """Apply the dilation: component i is scaled by eps^(r_i)."""
        x = np.asarray(x, dtype=float)
        eps = np.asarray(eps, dtype=float)
        r = np.array(self.weights)
        return (eps[..., None] ** r) * x

    def radius(self, x) -> np.ndarray:
        """sum_i |x_i|^(l/r_i), the quantity that equals 1 on the sphere."""
        x = np.asarray(x, dtype=float)
        r = np.array(self.weights)
        return np.sum(np.abs(x) ** (self.l / r), axis=-1)

    def project(self, x) -> np.ndarray:
        """Radial projection along dilation orbits onto the sphere."""
        x = np.asarray(x, dtype=float)
        rad = self.radius(x)
        if np.any(rad <= 0):
            raise ValueError("cannot project a zero vector onto the sphere")
        eps = rad ** (-1.0 / self.l)
        return self.scale(eps, x)

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "l": self.l}


# A term is keyed by its exponent tuple and sign-flag tuple; the value is
# the coefficient.  Keys are canonical, so equal-key terms always merge.
TermKey = tuple[tuple[Fraction, ...], tuple[bool, ...]]


class GeneralizedPolynomial:
    """Sparse sum of signed-power terms c * prod |x_i|^p_i * sgn(x_i)^s_i."""

    __slots__ = ("n", "terms", "_compiled")

    def __init__(self, n: int, terms: dict[TermKey, float] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = int(n)
        merged: dict[TermKey, float] = {}
        for key, coeff in (terms or {}).items():
            powers, signed = key
            if len(powers) != self.n or len(signed) != self.n:
                raise ValueError(f"term arity {len(powers)} does not match n={self.n}")
            for p, s in zip(powers, signed):
                if s and p == 0:
                    raise ValueError("sign flag requires a positive exponent")
            merged[key] = merged.get(key, 0.0) + float(coeff)
        cmax = max((abs(c) for c in merged.values()), default=0.0)
        cutoff = 1e-15 * max(1.0, cmax)
        self.terms = {k: c for k, c in merged.items() if abs(c) > cutoff}
        self._compiled = None

    # ---------------------------------------------------------------- build

    @classmethod
    def from_terms(cls, n: int, terms: Iterable) -> "GeneralizedPolynomial":
        """Build from (coeff, powers) or (coeff, powers, signed) entries.

        Each power may be an int, a Fraction, or a (num, den) pair with odd
        den.  When `signed` is omitted the usual monomial convention applies:
        the sign flag is num mod 2, i.e. x^(a/b) means |x|^(a/b) sgn(x)^(a mod 2).
        """
        data: dict[TermKey, float] = {}
        for entry in terms:
            if len(entry) == 2:
                coeff, powers = entry
                signed = None
            else:
                coeff, powers, signed = entry
            fr = tuple(_as_fraction(p) for p in powers)
            if len(fr) != n:
                raise ValueError(f"expected {n} exponents, got {len(fr)}")
            if signed is None:
                sg = tuple(p > 0 and p.numerator % 2 == 1 for p in fr)
            else:
                sg = tuple(bool(s) for s in signed)
            key = (fr, sg)
            data[key] = data.get(key, 0.0) + float(coeff)
        return cls(n, data)

    @classmethod
    def zero(cls, n: int) -> "GeneralizedPolynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value: float) -> "GeneralizedPolynomial":
        key = ((Fraction(0),) * n, (False,) * n)
        return cls(n, {key: float(value)})

    @classmethod
    def from_json_terms(cls, n: int, data: Sequence[dict]) -> "GeneralizedPolynomial":
        """Parse the list-of-terms JSON form.

        Each term is {"coeff": number, "powers": [{"num": int, "den": odd int}, ...]}
        with an optional "abs": [bool, ...] forcing |x_i| factors (no sign flag).
        """
        entries = []
        for i, term in enumerate(data):
            if not isinstance(term, dict) or "coeff" not in term or "powers" not in term:
                raise ValueError(f"term {i}: expected keys 'coeff' and 'powers'")
            powers = term["powers"]
            if len(powers) != n:
                raise ValueError(f"term {i}: expected {n} powers, got {len(powers)}")
            fr = []
            for j, p in enumerate(powers):
                num, den = int(p["num"]), int(p.get("den", 1))
                if den <= 0 or den % 2 == 0:
                    raise ValueError(f"term {i}, variable {j}: denominator must be odd and positive")
                if num < 0:
                    raise ValueError(f"term {i}, variable {j}: exponents must be nonnegative")
                fr.append(Fraction(num, den))
            absflags = term.get("abs")
            signed = []
            for j, p in enumerate(fr):
                s = p > 0 and p.numerator % 2 == 1
                if absflags is not None and absflags[j]:
                    s = False
                signed.append(s)
            entries.append((float(term["coeff"]), tuple(fr), tuple(signed)))
        return cls.from_terms(n, entries)

    def to_json_terms(self) -> list[dict]:
        out = []
        for (powers, signed), coeff in sorted(self.terms.items()):
            term = {
                "coeff": coeff,
                "powers": [{"num": p.numerator, "den": p.denominator} for p in powers],
            }
            natural = tuple(p > 0 and p.numerator % 2 == 1 for p in powers)
            if natural != signed:
                term["abs"] = [not s for s in signed]
            out.append(term)
        return out

    # ------------------------------------------------------------- evaluate

    def _compile(self):
        if self._compiled is None:
            compiled = []
            for (powers, signed), coeff in self.terms.items():
                items = [
                    (i, float(p), signed[i])
                    for i, p in enumerate(powers)
                    if p > 0
                ]
                compiled.append((coeff, items))
            self._compiled = compiled
        return self._compiled

    def __call__(self, x) -> float:
        """Evaluate at a single point (fast scalar path)."""
        total = 0.0
        for coeff, items in self._compile():
            v = coeff
            for i, p, signed in items:
                xi = x[i]
                a = abs(xi) ** p
                if signed and xi < 0:
                    a = -a
                v *= a
                if v == 0.0:
                    break
            total += v
        return total

    def evaluate(self, X) -> np.ndarray:
        """Vectorized evaluation on an (m, n) array of points."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != self.n:
            raise ValueError(f"points have {X.shape[1]} coordinates, expected {self.n}")
        out = np.zeros(X.shape[0])
        for coeff, items in self._compile():
            t = np.full(X.shape[0], coeff)
            for i, p, signed in items:
                col = X[:, i]
                t = t * np.abs(col) ** p
                if signed:
                    t = t * np.sign(col)
            out += t
        return out[0] if single else out

    # ------------------------------------------------------------ structure

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> Parity:
        """EVEN / ODD / NEITHER under x -> -x.

        A term flips sign under negation exactly when its number of sign
        flags is odd, so the classification is exact on the canonical form.
        The zero polynomial reports EVEN.
        """
        if not self.terms:
            return Parity.EVEN
        kinds = {sum(signed) % 2 for (_, signed) in self.terms}
        if kinds == {0}:
            return Parity.EVEN
        if kinds == {1}:
            return Parity.ODD
        return Parity.NEITHER

    def total_degree(self) -> Fraction | None:
        """Largest sum of exponents over terms, None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(powers, Fraction(0)) for (powers, _) in self.terms)

    def has_integer_powers(self) -> bool:
        return all(p.denominator == 1 for (powers, _) in self.terms for p in powers)

    def top_form(self, k=None) -> "GeneralizedPolynomial":
        """The part of (total) degree exactly k; defaults to the leading part."""
        if k is None:
            k = self.total_degree()
            if k is None:
                return GeneralizedPolynomial.zero(self.n)
        k = _as_fraction(k)
        terms = {
            key: c for key, c in self.terms.items()
            if sum(key[0], Fraction(0)) == k
        }
        return GeneralizedPolynomial(self.n, terms)

    def homogeneity_degree(self, d: Dilation) -> float | None:
        """Weighted degree k with f(eps^r o x) = eps^k f(x), or None.

        Every term of a homogeneous function must satisfy sum_i r_i p_i = k;
        the check is exact up to float rounding of the weighted sums.
        Raises ValueError for the zero polynomial (every k fits).
        """
        if d.n != self.n:
            raise ValueError("dilation arity does not match polynomial")
        if not self.terms:
            raise ValueError("the zero polynomial has no well-defined degree")
        degs = [
            sum(w * float(p) for w, p in zip(d.weights, powers))
            for (powers, _) in self.terms
        ]
        k = degs[0]
        if max(degs) - min(degs) <= 1e-12 * max(1.0, abs(k)):
            return k
        return None

    # ------------------------------------------------------------- calculus

    def partial(self, i: int) -> "GeneralizedPolynomial":
        """Partial derivative with respect to x_i.

        |x|^p differentiates to p |x|^(p-1) sgn(x) and |x|^p sgn(x) to
        p |x|^(p-1), both valid for p >= 1.  Exponents in (0, 1), and the
        unsigned p = 1 case (bare |x|), are not continuously differentiable
        at the origin and raise.
        """
        if not 0 <= i < self.n:
            raise IndexError(i)
        out: dict[TermKey, float] = {}
        for (powers, signed), coeff in self.terms.items():
            p = powers[i]
            if p == 0:
                continue
            if p < 1:
                raise ValueError(
                    f"term with exponent {p} on variable {i} is not C^1 at 0"
                )
            s = signed[i]
            if not s and p == 1:
                raise ValueError(
                    f"|x_{i}| term is not differentiable at 0; use a signed power"
                )
            new_p = p - 1
            new_s = (not s) and new_p > 0
            key = (
                powers[:i] + (new_p,) + powers[i + 1:],
                signed[:i] + (new_s,) + signed[i + 1:],
            )
            out[key] = out.get(key, 0.0) + coeff * float(p)
        return GeneralizedPolynomial(self.n, out)

    def gradient(self) -> tuple["GeneralizedPolynomial", ...]:
        return tuple(self.partial(i) for i in range(self.n))

    # ------------------------------------------------------------ arithmetic

    def _binary(self, other, sign: float) -> "GeneralizedPolynomial":
        if not isinstance(other, GeneralizedPolynomial):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("variable counts differ")
        data = dict(self.terms)
        for key, c in other.terms.items():
            data[key] = data.get(key, 0.0) + sign * c
        return GeneralizedPolynomial(self.n, data)

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return GeneralizedPolynomial(
                self.n, {k: c * float(other) for k, c in self.terms.items()}
            )
        if not isinstance(other, GeneralizedPolynomial):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("variable counts differ")
        # |x|^a sgn^s * |x|^b sgn^t = |x|^(a+b) sgn^((s+t) mod 2); the flags
        # never meet a zero exponent because s, t imply a, b > 0.
        out: dict[TermKey, float] = {}
        for (pa, sa), ca in self.terms.items():
            for (pb, sb), cb in other.terms.items():
                powers = tuple(a + b for a, b in zip(pa, pb))
                signed = tuple(a != b for a, b in zip(sa, sb))
                key = (powers, signed)
                out[key] = out.get(key, 0.0) + ca * cb
        return GeneralizedPolynomial(self.n, out)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return f"GeneralizedPolynomial({self.n}, 0)"
        bits = []
        for (powers, signed), coeff in sorted(self.terms.items()):
            factors = [f"{coeff:g}"]
            for i, (p, s) in enumerate(zip(powers, signed)):
                if p == 0:
                    continue
                base = f"|x{i}|^{p}" if not s else f"x{i}^{p}"
                factors.append(base)
            bits.append("*".join(factors))
        return " + ".join(bits)


# ----------------------------------------------------------------- wrappers


def evaluate(p: GeneralizedPolynomial, x) -> np.ndarray:
    return p.evaluate(x)


def parity(p: GeneralizedPolynomial) -> Parity:
    return p.parity()


def homogeneity_degree(p: GeneralizedPolynomial, d: Dilation) -> float | None:
    return p.homogeneity_degree(d)


def project_to_sphere(x, d: Dilation) -> np.ndarray:
    return d.project(x)


# ------------------------------------------------------------------ spheres


def theta_grid(count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be positive")
    return np.arange(count) * (TWO_PI / count)


def theta_points(theta, d: Dilation) -> np.ndarray:
    """Map circle angles onto the generalized sphere (n = 2 only).

    The raw parametrization (|cos|^r1 sgn cos, |sin|^r2 sgn sin) lands on
    the sphere exactly when l = 2; other l are handled by projecting along
    dilation orbits, which keeps the direction of each point.
    """
    if d.n != 2:
        raise ValueError("theta parametrization needs exactly two variables")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    c, s = np.cos(theta), np.sin(theta)
    r1, r2 = d.weights
    X = np.stack(
        [np.abs(c) ** r1 * np.sign(c), np.abs(s) ** r2 * np.sign(s)], axis=-1
    )
    return d.project(X)


def theta_point_scalar(t: float, d: Dilation) -> tuple[float, float]:
    """Single theta sample without numpy overhead (hot path for refinement)."""
    c, s = math.cos(t), math.sin(t)
    r1, r2 = d.weights
    x1 = abs(c) ** r1 * (1.0 if c > 0 else -1.0 if c < 0 else 0.0)
    x2 = abs(s) ** r2 * (1.0 if s > 0 else -1.0 if s < 0 else 0.0)
    if d.l != 2.0:
        rad = abs(x1) ** (d.l / r1) + abs(x2) ** (d.l / r2)
        eps = rad ** (-1.0 / d.l)
        x1, x2 = eps ** r1 * x1, eps ** r2 * x2
    return x1, x2


def sphere_samples(
    d: Dilation, count: int, seed: int = DEFAULT_SEED, offset: float = 0.0
) -> np.ndarray:
    """Deterministic sample set on the generalized sphere.

    n = 1 gives the two-point sphere {+1, -1}; n = 2 uses the uniform theta
    grid (optionally rotated by `offset` grid spacings, for independent
    verification passes); n >= 3 uses a scrambled Halton sequence pushed
    through the normal quantile map and projected along dilation orbits.
    Every row satisfies sum_i |x_i|^(l/r_i) = 1 to float precision.
    """
    n = d.n
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        step = TWO_PI / count
        theta = theta_grid(count) + (offset % 1.0) * step
        return theta_points(theta, d)
    engine = qmc.Halton(d=n, scramble=True, seed=seed)
    u = engine.random(count)
    z = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(z, axis=1)
    keep = norms > 1e-9
    z = z[keep] / norms[keep, None]
    return d.project(z)
