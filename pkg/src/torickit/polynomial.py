"""Multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import exact
from .errors import ParseError


class Polynomial:
    """Sparse monomial dict: exponent tuple -> Fraction coefficient."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: Mapping[tuple, object] | None = None):
        self.nvars = int(nvars)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            c = exact.frac(c)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.coeffs = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: exact.frac(c)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        exps = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        merged = dict(self.coeffs)
        for e, c in other.coeffs.items():
            merged[e] = merged.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, merged)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return Polynomial(self.nvars, out)
        c = exact.frac(other)
        return Polynomial(self.nvars, {e: c * v for e, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def diff(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.coeffs.items():
            if e[i] == 0:
                continue
            e2 = tuple(x - int(j == i) for j, x in enumerate(e))
            out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return Polynomial(self.nvars, out)

    def derivative(self, indices) -> "Polynomial":
        p = self
        for i in indices:
            p = p.diff(i)
        return p

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        total = 0.0
        for e, c in self.coeffs.items():
            term = float(c)
            for xi, ei in zip(x, e):
                if ei:
                    term *= xi**ei
            total += term
        return total

    def eval_exact(self, x) -> Fraction:
        xs = [exact.frac(c) for c in x]
        total = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for xi, ei in zip(xs, e):
                term *= xi**ei
            total += term
        return total

    def compose_affine(self, matrix, shift) -> "Polynomial":
        """p(M x + c) as an exact polynomial in the new variables."""
        m = [[exact.frac(v) for v in row] for row in matrix]
        c = [exact.frac(v) for v in shift]
        if len(m) != self.nvars or len(c) != self.nvars:
            raise ValueError("affine substitution shape mismatch")
        nnew = len(m[0]) if m else 0
        subs = []
        for i in range(self.nvars):
            lin = {tuple(int(j == k) for k in range(nnew)): m[i][j] for j in range(nnew)}
            lin[(0,) * nnew] = c[i]
            subs.append(Polynomial(nnew, lin))
        result = Polynomial.zero(nnew)
        for e, coeff in self.coeffs.items():
            term = Polynomial.constant(nnew, coeff)
            for i, ei in enumerate(e):
                for _ in range(ei):
                    term = term * subs[i]
            result = result + term
        return result

    def to_json(self) -> dict:
        monomials = [
            {"exponents": list(e), "coeff": exact.frac_str(c)}
            for e, c in sorted(self.coeffs.items())
        ]
        return {"monomials": monomials}

    def __repr__(self):
        if self.is_zero:
            return "Polynomial(0)"
        parts = [f"{c}*x^{e}" for e, c in sorted(self.coeffs.items())]
        return "Polynomial(" + " + ".join(parts) + ")"


def polynomial_from_json(doc, nvars: int) -> Polynomial:
    """Parse {"monomials": [{"exponents": [...], "coeff": "p/q"}, ...]}."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from e
    if doc is None:
        return Polynomial.zero(nvars)
    if not isinstance(doc, dict) or "monomials" not in doc:
        raise ParseError("polynomial document must contain 'monomials'")
    coeffs = {}
    for i, mono in enumerate(doc["monomials"]):
        try:
            exps = tuple(int(e) for e in mono["exponents"])
            if len(exps) != nvars:
                raise ParseError(
                    f"monomial {i}: expected {nvars} exponents, got {len(exps)}"
                )
            coeff = mono["coeff"]
            if not isinstance(coeff, (str, int)):
                raise ParseError(f"monomial {i}: coefficient must be int or 'p/q'")
            coeffs[exps] = coeffs.get(exps, Fraction(0)) + exact.frac(coeff)
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ParseError(f"monomial {i}: {e}") from e
    return Polynomial(nvars, coeffs)
