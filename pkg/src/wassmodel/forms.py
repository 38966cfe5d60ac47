"""Affine forms and sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import rat_str, to_rational


def _fmt_coef_term(coef: Fraction, body: str, first: bool) -> str:
    neg = coef < 0
    mag = -coef if neg else coef
    if body and mag == 1:
        text = body
    elif body:
        text = f"{rat_str(mag)}*{body}"
    else:
        text = rat_str(mag)
    if first:
        return f"-{text}" if neg else text
    return f" - {text}" if neg else f" + {text}"


def _var_key(name: str):
    # "nu10" sorts after "nu9"
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1, name)


class AffineForm:
    """``constant + sum(coef[v] * v)``; zero coefficients are never stored."""

    __slots__ = ("constant", "coeffs")

    def __init__(self, constant=0, coeffs: Mapping[str, object] | None = None):
        object.__setattr__(self, "constant", to_rational(constant))
        clean = {}
        for k, v in (coeffs or {}).items():
            v = to_rational(v)
            if v:
                clean[k] = v
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AffineForm is immutable")

    @classmethod
    def var(cls, name: str, coef=1) -> "AffineForm":
        return cls(0, {name: coef})

    @property
    def variables(self) -> list[str]:
        return sorted(self.coeffs, key=_var_key)

    def is_constant(self) -> bool:
        return not self.coeffs

    def coef(self, name: str) -> Fraction:
        return self.coeffs.get(name, Fraction(0))

    def __add__(self, other):
        if isinstance(other, AffineForm):
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = out.get(k, 0) + v
            return AffineForm(self.constant + other.constant, out)
        return AffineForm(self.constant + to_rational(other), self.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(-self.constant, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        s = to_rational(scalar)
        return AffineForm(self.constant * s, {k: v * s for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, AffineForm):
            return self.constant == other.constant and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant == other
        return NotImplemented

    def __hash__(self):
        return hash((self.constant, frozenset(self.coeffs.items())))

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; values may be Fractions or QuadraticNumbers."""
        total = self.constant
        for k, v in self.coeffs.items():
            total = v * values[k] + total
        return total

    def substitute(self, values: Mapping[str, object]) -> "AffineForm":
        """Replace some variables by rationals or by other affine forms."""
        out = AffineForm(self.constant)
        for k, v in self.coeffs.items():
            if k in values:
                out = out + (values[k] * v if isinstance(values[k], AffineForm)
                             else AffineForm(to_rational(values[k]) * v))
            else:
                out = out + AffineForm.var(k, v)
        return out

    def on_simplex(self, prefix: str, n: int) -> "AffineForm":
        """Eliminate ``prefix{n}`` using ``sum_i prefix{i} = 1``."""
        last = f"{prefix}{n}"
        if last not in self.coeffs:
            return self
        repl = AffineForm(1, {f"{prefix}{i}": -1 for i in range(1, n)})
        return self.substitute({last: repl})

    def normalized(self, n: int, prefixes: Sequence[str] = ("mu", "nu")) -> "AffineForm":
        """Canonical representative on the product of probability simplices."""
        out = self
        for pre in prefixes:
            out = out.on_simplex(pre, n)
        return out

    def __repr__(self):
        return f"AffineForm({self})"

    def __str__(self):
        parts = []
        for k in self.variables:
            parts.append(_fmt_coef_term(self.coeffs[k], k, not parts))
        if self.constant or not parts:
            parts.append(_fmt_coef_term(self.constant, "", not parts))
        return "".join(parts)

    def to_json(self) -> dict:
        return {
            "constant": rat_str(self.constant),
            "coefficients": {k: rat_str(self.coeffs[k]) for k in self.variables},
        }


class Polynomial:
    """Sparse polynomial over the rationals in a fixed, ordered variable list."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        clean: dict[tuple, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(variables):
                raise ValueError("exponent vector length does not match variable count")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            c = to_rational(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple["Polynomial", ...]:
        return tuple(cls.var(variables, v) for v in variables)

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Iterable) -> "Polynomial":
        """Build from ``[(coef, exponents), ...]``."""
        return cls(variables, _accumulate((tuple(e), to_rational(c)) for c, e in terms))

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def _check(self, other: "Polynomial"):
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.variables, to_rational(other))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus & substitution -----------------------------------------

    def diff(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.variables, out)

    def evaluate(self, point: Sequence):
        """Exact value at a point of Fractions and/or QuadraticNumbers."""
        if len(point) != len(self.variables):
            raise ValueError(
                f"dimension mismatch: {len(point)} values for {len(self.variables)} variables"
            )
        point = [to_rational(x) if isinstance(x, (int, str, float)) else x for x in point]
        powers: list[dict[int, object]] = [{0: Fraction(1)} for _ in point]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * point[i]
            return cache[k]

        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = pw(i, k) * term
            total = term + total
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for x, k in zip(point, e):
                if k:
                    term *= float(x) ** k
            total += term
        return total

    def compose(self, new_variables: Sequence[str], images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute a polynomial in ``new_variables`` for every variable."""
        new_variables = tuple(new_variables)
        imgs = []
        for v in self.variables:
            img = images[v]
            if not isinstance(img, Polynomial):
                img = Polynomial.constant(new_variables, img)
            if img.variables != new_variables:
                raise ValueError("image polynomial uses different variables")
            imgs.append(img)
        cache: dict[tuple[int, int], Polynomial] = {}

        def pw(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = imgs[i] ** k
            return cache[(i, k)]

        out = Polynomial(new_variables)
        for e, c in self.terms.items():
            term = Polynomial.constant(new_variables, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def substitute(self, values: Mapping[str, object]) -> "Polynomial":
        """Fix some variables at rationals; the result keeps only the rest."""
        keep = tuple(v for v in self.variables if v not in values)
        images = {}
        for v in self.variables:
            if v in values:
                images[v] = Polynomial.constant(keep, to_rational(values[v]))
            else:
                images[v] = Polynomial.var(keep, v)
        return self.compose(keep, images)

    def coefficients_in(self, name: str) -> dict[int, "Polynomial"]:
        """View as a polynomial in ``name`` with coefficients in the other variables."""
        i = self.variables.index(name)
        rest = self.variables[:i] + self.variables[i + 1:]
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: Polynomial(rest, t) for k, t in out.items()}

    def univariate_coeffs(self) -> list[Fraction]:
        """Coefficient list ``[c0, c1, ...]`` of a one-variable polynomial."""
        if len(self.variables) != 1:
            raise ValueError("not a univariate polynomial")
        deg = self.degree()
        out = [Fraction(0)] * (deg + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    @classmethod
    def from_univariate(cls, name: str, coeffs: Sequence) -> "Polynomial":
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        return Polynomial(variables, self.terms)

    # -- display ----------------------------------------------------------

    def _monomial(self, e) -> str:
        parts = []
        for v, k in zip(self.variables, e):
            if k == 1:
                parts.append(v)
            elif k > 1:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __str__(self):
        parts = []
        for e, c in self.sorted_terms():
            parts.append(_fmt_coef_term(c, self._monomial(e), not parts))
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"Polynomial({self.variables}, {self})"

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [[rat_str(c), list(e)] for e, c in self.sorted_terms()],
            "text": str(self),
        }


def _accumulate(pairs) -> dict:
    out: dict = {}
    for e, c in pairs:
        out[e] = out.get(e, 0) + c
    return out


def poly_eval(f: Polynomial, point: Sequence):
    """Exact value of ``f`` at ``point``."""
    return f.evaluate(point)


def affine_to_polynomial(form: AffineForm, variables: Sequence[str]) -> Polynomial:
    variables = tuple(variables)
    out = Polynomial.constant(variables, form.constant)
    for k, v in form.coeffs.items():
        out = out + Polynomial.var(variables, k) * v
    return out
