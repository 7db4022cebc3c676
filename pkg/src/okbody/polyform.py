"""Homogeneous polynomial forms and finite dimensional spaces of them.

Forms are sparse dictionaries from exponent tuples to rational coefficients.
A FormSpan holds a canonical reduced row echelon basis of a space of forms of
one degree, with columns ordered by ascending lexicographic exponent; the
pivot exponents of that basis are what the valuation layer reads off, so the
ordering convention here is load bearing and must not change.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InputError
from .exactnum import nullspace, rref_rows

Exponent = tuple[int, ...]


def all_exponents(nvars: int, degree: int) -> Iterator[Exponent]:
    """Yield every exponent tuple of the given total degree in ascending
    lexicographic order."""
    if nvars <= 0:
        raise InputError("all_exponents: nvars must be positive")
    if nvars == 1:
        yield (degree,)
        return
    for e in range(degree + 1):
        for rest in all_exponents(nvars - 1, degree - e):
            yield (e,) + rest


def count_exponents(nvars: int, degree: int) -> int:
    return math.comb(degree + nvars - 1, nvars - 1)


class HomogeneousForm:
    """A homogeneous polynomial with rational coefficients.

    Immutable by convention: no method mutates terms in place.
    """

    __slots__ = ("nvars", "terms", "degree")

    def __init__(
        self,
        nvars: int,
        terms: dict[Exponent, Fraction] | Iterable[tuple[Exponent, Fraction]],
        degree: int | None = None,
    ):
        if nvars <= 0:
            raise InputError("form: nvars must be positive")
        clean: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = tuple(int(v) for v in e)
            c = Fraction(c)
            if len(e) != nvars:
                raise InputError("form: exponent length != nvars")
            if any(v < 0 for v in e):
                raise InputError("form: negative exponent")
            if c == 0:
                continue
            clean[e] = clean.get(e, Fraction(0)) + c
            if clean[e] == 0:
                del clean[e]
        degs = {sum(e) for e in clean}
        if len(degs) > 1:
            raise InputError("form: mixed degrees, not homogeneous")
        if degs:
            d = degs.pop()
            if degree is not None and degree != d:
                raise InputError("form: declared degree does not match terms")
            degree = d
        self.nvars = nvars
        self.terms = clean
        self.degree = degree  # None only for the zero form of free degree

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int | None = None) -> HomogeneousForm:
        return cls(nvars, {}, degree)

    @classmethod
    def monomial(
        cls, nvars: int, exponent: Sequence[int], coeff: Fraction | int = 1
    ) -> HomogeneousForm:
        return cls(nvars, {tuple(exponent): Fraction(coeff)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> HomogeneousForm:
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(nvars, e)

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def canonical_terms(self) -> tuple[tuple[Exponent, Fraction], ...]:
        return tuple(sorted(self.terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def _check_addable(self, other: HomogeneousForm) -> int | None:
        if self.nvars != other.nvars:
            raise InputError("form: nvars mismatch")
        if self.degree is None:
            return other.degree
        if other.degree is None:
            return self.degree
        if self.degree != other.degree:
            raise InputError("form: cannot add different degrees")
        return self.degree

    def __add__(self, other: HomogeneousForm) -> HomogeneousForm:
        deg = self._check_addable(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return HomogeneousForm(self.nvars, terms, deg)

    def __neg__(self) -> HomogeneousForm:
        return HomogeneousForm(
            self.nvars, {e: -c for e, c in self.terms.items()}, self.degree
        )

    def __sub__(self, other: HomogeneousForm) -> HomogeneousForm:
        return self + (-other)

    def scaled(self, factor: Fraction | int) -> HomogeneousForm:
        factor = Fraction(factor)
        if factor == 0:
            return HomogeneousForm.zero(self.nvars, self.degree)
        return HomogeneousForm(
            self.nvars,
            {e: c * factor for e, c in self.terms.items()},
            self.degree,
        )

    def __mul__(self, other: HomogeneousForm) -> HomogeneousForm:
        if self.nvars != other.nvars:
            raise InputError("form: nvars mismatch")
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return HomogeneousForm(
            self.nvars, _mul_terms(self.terms, other.terms), deg
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HomogeneousForm)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.canonical_terms()))

    # -- substitution and evaluation ----------------------------------------

    def substitute_linear(
        self, matrix: Sequence[Sequence[Fraction]]
    ) -> HomogeneousForm:
        """Replace variable j by the linear form sum_k matrix[j][k] * Y_k.

        The result is the composition f(M y) in the new coordinates.
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise InputError("substitute_linear: matrix must be nvars x nvars")
        lines = [
            {
                (j_unit(n, k)): Fraction(matrix[j][k])
                for k in range(n)
                if Fraction(matrix[j][k]) != 0
            }
            for j in range(n)
        ]
        one = {(0,) * n: Fraction(1)}
        powers: dict[tuple[int, int], dict[Exponent, Fraction]] = {}

        def power(j: int, p: int) -> dict[Exponent, Fraction]:
            if p == 0:
                return one
            got = powers.get((j, p))
            if got is None:
                got = _mul_terms(power(j, p - 1), lines[j])
                powers[(j, p)] = got
            return got

        total: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            prod = one
            for j, ej in enumerate(e):
                if ej:
                    prod = _mul_terms(prod, power(j, ej))
            for ee, cc in prod.items():
                total[ee] = total.get(ee, Fraction(0)) + c * cc
        return HomogeneousForm(n, total, self.degree)

    def set_variable_zero(self, i: int) -> HomogeneousForm:
        """Restrict to the hyperplane where variable i vanishes; the variable
        is dropped, so the result lives in one fewer variable."""
        if self.nvars < 2:
            raise InputError("set_variable_zero: need at least two variables")
        terms = {
            e[:i] + e[i + 1 :]: c
            for e, c in self.terms.items()
            if e[i] == 0
        }
        deg = self.degree if terms else None
        return HomogeneousForm(self.nvars - 1, terms, deg)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.nvars:
            raise InputError("evaluate: point length != nvars")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            val = c
            for x, p in zip(pt, e):
                if p:
                    val *= x**p
            total += val
        return total

    def __repr__(self) -> str:
        if self.is_zero:
            return "HomogeneousForm(0)"
        bits = []
        for e, c in self.canonical_terms():
            mono = "*".join(
                f"X{i + 1}^{p}" if p > 1 else f"X{i + 1}"
                for i, p in enumerate(e)
                if p
            )
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return "HomogeneousForm(" + " + ".join(bits) + ")"


def j_unit(n: int, k: int) -> Exponent:
    e = [0] * n
    e[k] = 1
    return tuple(e)


def _mul_terms(
    a: dict[Exponent, Fraction], b: dict[Exponent, Fraction]
) -> dict[Exponent, Fraction]:
    out: dict[Exponent, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, Fraction(0)) + ca * cb
            if v:
                out[e] = v
            elif e in out:
                del out[e]
    return out


def span_reduce(
    nvars: int, degree: int, forms: Iterable[HomogeneousForm]
) -> tuple[tuple[HomogeneousForm, ...], tuple[Exponent, ...]]:
    """Canonical basis and pivot exponents of the span of the given forms.

    Columns are the exponents present, sorted ascending lex; the basis is the
    reduced row echelon form, so the output is independent of input order.
    Monomial inputs short circuit: the span is the set of distinct monomials.
    """
    kept = []
    for f in forms:
        if f.is_zero:
            continue
        if f.nvars != nvars or f.degree != degree:
            raise InputError("span_reduce: form of wrong shape")
        kept.append(f)
    if not kept:
        return (), ()
    if all(f.is_monomial for f in kept):
        exps = sorted({next(iter(f.terms)) for f in kept})
        basis = tuple(HomogeneousForm.monomial(nvars, e) for e in exps)
        return basis, tuple(exps)
    cols = sorted({e for f in kept for e in f.terms})
    colpos = {e: j for j, e in enumerate(cols)}
    rows = [
        [Fraction(0)] * len(cols) for _ in kept
    ]
    for i, f in enumerate(kept):
        for e, c in f.terms.items():
            rows[i][colpos[e]] = c
    red, piv = rref_rows(rows)
    basis = tuple(
        HomogeneousForm(
            nvars,
            {cols[j]: v for j, v in enumerate(row) if v != 0},
            degree,
        )
        for row in red
    )
    return basis, tuple(cols[j] for j in piv)


class FormSpan:
    """A vector space of homogeneous forms of one degree, canonically based.

    basis rows are in reduced row echelon form over ascending lex exponent
    columns; pivots are the corresponding exponent tuples, which double as
    the valuation set of the space for the standard coordinate flag.
    """

    __slots__ = ("nvars", "degree", "basis", "pivots")

    def __init__(
        self, nvars: int, degree: int, forms: Iterable[HomogeneousForm] = ()
    ):
        if degree < 0:
            raise InputError("span: negative degree")
        self.nvars = nvars
        self.degree = degree
        self.basis, self.pivots = span_reduce(nvars, degree, forms)

    @classmethod
    def complete(cls, nvars: int, degree: int) -> FormSpan:
        span = cls(nvars, degree)
        exps = tuple(all_exponents(nvars, degree))
        span.basis = tuple(
            HomogeneousForm.monomial(nvars, e) for e in exps
        )
        span.pivots = exps
        return span

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_complete(self) -> bool:
        return self.dim == count_exponents(self.nvars, self.degree)

    @property
    def is_monomial_span(self) -> bool:
        return all(f.is_monomial for f in self.basis)

    def contains(self, form: HomogeneousForm) -> bool:
        if form.is_zero:
            return True
        if form.nvars != self.nvars or form.degree != self.degree:
            return False
        rem = form
        for f, p in zip(self.basis, self.pivots):
            c = rem.coefficient(p)
            if c:
                rem = rem - f.scaled(c)
        return rem.is_zero

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FormSpan)
            and self.nvars == other.nvars
            and self.degree == other.degree
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.degree, self.pivots))

    def __add__(self, other: FormSpan) -> FormSpan:
        if self.nvars != other.nvars or self.degree != other.degree:
            raise InputError("span sum: shape mismatch")
        return FormSpan(
            self.nvars, self.degree, list(self.basis) + list(other.basis)
        )

    def __mul__(self, other: FormSpan) -> FormSpan:
        if self.nvars != other.nvars:
            raise InputError("span product: nvars mismatch")
        prods = [a * b for a in self.basis for b in other.basis]
        return FormSpan(self.nvars, self.degree + other.degree, prods)

    def transformed(self, matrix: Sequence[Sequence[Fraction]]) -> FormSpan:
        return FormSpan(
            self.nvars,
            self.degree,
            [f.substitute_linear(matrix) for f in self.basis],
        )

    def restricted(self, var: int) -> FormSpan:
        if self.nvars < 2:
            raise InputError("restricted: need at least two variables")
        return FormSpan(
            self.nvars - 1,
            self.degree,
            [f.set_variable_zero(var) for f in self.basis],
        )

    def divided_by_variable(self, var: int, power: int) -> FormSpan:
        """Quotient by a variable power dividing every element; the degree
        drops by the power."""
        if power < 0:
            raise InputError("divided_by_variable: negative power")
        if power == 0 or not self.basis:
            return FormSpan(self.nvars, self.degree - power, self.basis)
        forms = []
        for f in self.basis:
            terms = {}
            for e, c in f.terms.items():
                if e[var] < power:
                    raise InputError(
                        "divided_by_variable: an element is not divisible"
                    )
                shifted = list(e)
                shifted[var] -= power
                terms[tuple(shifted)] = c
            forms.append(
                HomogeneousForm(self.nvars, terms, self.degree - power)
            )
        return FormSpan(self.nvars, self.degree - power, forms)

    def subspace_with_min_exponent(self, var: int, minimum: int) -> FormSpan:
        """Elements all of whose terms have exponent >= minimum in the given
        variable (the forms divisible by that variable power)."""
        if minimum <= 0 or not self.basis:
            return self
        low = sorted(
            {e for f in self.basis for e in f.terms if e[var] < minimum}
        )
        if not low:
            return self
        rows = [
            [f.coefficient(e) for f in self.basis] for e in low
        ]
        combos = nullspace(rows)
        forms = [
            _combine(self.basis, c, self.nvars, self.degree) for c in combos
        ]
        return FormSpan(self.nvars, self.degree, forms)

    def subspace_vanishing_at(
        self, points: Sequence[Sequence[Fraction]]
    ) -> FormSpan:
        if not points or not self.basis:
            return self
        rows = [
            [f.evaluate(p) for f in self.basis] for p in points
        ]
        combos = nullspace(rows)
        forms = [
            _combine(self.basis, c, self.nvars, self.degree) for c in combos
        ]
        return FormSpan(self.nvars, self.degree, forms)

    def __repr__(self) -> str:
        return (
            f"FormSpan(nvars={self.nvars}, degree={self.degree}, "
            f"dim={self.dim})"
        )


def _combine(
    basis: Sequence[HomogeneousForm],
    coeffs: Sequence[Fraction],
    nvars: int,
    degree: int,
) -> HomogeneousForm:
    total = HomogeneousForm.zero(nvars, degree)
    for f, c in zip(basis, coeffs):
        if c:
            total = total + f.scaled(c)
    return total
