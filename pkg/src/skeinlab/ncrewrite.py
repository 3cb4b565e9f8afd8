"""Word rewriting in q-commutation algebras, with exact verifiers.

A small rewriting engine normalizes noncommutative words against a fixed
set of order-decreasing replacement rules.  Two concrete presentations are
provided: a five-generator "collar" algebra whose crossing generator
q-commutes past two band generators modulo central correction terms, and a
five-generator "exterior" algebra used to reduce the base-case element.

On top of the engine sit three exact verifiers:

  * the closed form of the cosine-kind family on a q-twisted companion
    matrix (`verify_matrix_lemma`),
  * the central-element commutation identity checked along two independent
    routes (`verify_commute_many`),
  * the coefficient-level derivation of the n-th central element
    (`derive_e_n`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from .cheby import (
    VARS_X,
    VARS_XR,
    boundary_form,
    cheb_cosine,
    cheb_sine,
    qdiff_sine_sum,
    qweighted_cosine,
)
from .ring import (
    CPoly,
    Laurent,
    Q,
    QINV,
    Q_PLUS_QINV,
    q_power_diff,
    q_power_sum,
)

Word = Tuple[int, ...]


def _word_key(word: Word) -> Tuple[int, Word]:
    return (len(word), word)


class NcAlgebraSpec:
    """A finite presentation with strictly order-decreasing rewrite rules.

    Generators are ordered by position.  ``rules[(a, b)]`` replaces the
    adjacent pair a*b by a Laurent combination of words, each strictly
    smaller than (a, b) in the graded lexicographic word order; that makes
    every rewrite sequence terminate.  Pairs without a rule are left alone,
    so the presentation may be partial (or empty, giving a free algebra).
    """

    def __init__(
        self,
        name: str,
        generators: Tuple[str, ...],
        rules: Mapping[Tuple[int, int], List[Tuple[Laurent, Word]]],
    ) -> None:
        self.name = name
        self.generators = tuple(generators)
        self.rules: Dict[Tuple[int, int], List[Tuple[Laurent, Word]]] = {}
        for (a, b), replacement in rules.items():
            if not (0 <= a < len(generators) and 0 <= b < len(generators)):
                raise ValueError(f"rule key ({a}, {b}) out of range")
            for coeff, word in replacement:
                if any(g < 0 or g >= len(generators) for g in word):
                    raise ValueError(f"rule for ({a}, {b}) uses unknown generator")
                if _word_key(word) >= _word_key((a, b)):
                    raise ValueError(
                        f"rule for ({a}, {b}) is not order-decreasing at {word}"
                    )
            self.rules[(a, b)] = [(c, tuple(w)) for c, w in replacement]
        self._nf_cache: Dict[Word, Dict[Word, Laurent]] = {}

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def word(self, *names: str) -> Word:
        return tuple(self.index(n) for n in names)

    def word_names(self, word: Word) -> str:
        return "*".join(self.generators[g] for g in word) if word else "1"

    # -- normalization ------------------------------------------------------

    def normal_form_word(self, word: Word) -> Dict[Word, Laurent]:
        """Memoized leftmost-innermost normal form of a single word."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        pos = -1
        for i in range(len(word) - 1):
            if (word[i], word[i + 1]) in self.rules:
                pos = i
                break
        if pos < 0:
            result = {word: Laurent.one()}
        else:
            prefix, suffix = word[:pos], word[pos + 2 :]
            acc: Dict[Word, Laurent] = {}
            for coeff, repl in self.rules[(word[pos], word[pos + 1])]:
                for w, c in self.normal_form_word(prefix + repl + suffix).items():
                    _accumulate(acc, w, coeff * c)
            result = acc
        self._nf_cache[word] = result
        return result

    def normal_form_word_rightmost(
        self, word: Word, memo: Optional[Dict[Word, Dict[Word, Laurent]]] = None
    ) -> Dict[Word, Laurent]:
        """Rightmost-first normal form, used to probe confluence."""
        if memo is None:
            memo = {}
        cached = memo.get(word)
        if cached is not None:
            return cached
        pos = -1
        for i in range(len(word) - 2, -1, -1):
            if (word[i], word[i + 1]) in self.rules:
                pos = i
                break
        if pos < 0:
            result: Dict[Word, Laurent] = {word: Laurent.one()}
        else:
            prefix, suffix = word[:pos], word[pos + 2 :]
            result = {}
            for coeff, repl in self.rules[(word[pos], word[pos + 1])]:
                sub = self.normal_form_word_rightmost(prefix + repl + suffix, memo)
                for w, c in sub.items():
                    _accumulate(result, w, coeff * c)
        memo[word] = result
        return result


def _accumulate(acc: Dict[Word, Laurent], word: Word, coeff: Laurent) -> None:
    if coeff.is_zero():
        return
    total = acc.get(word)
    total = coeff if total is None else total + coeff
    if total.is_zero():
        acc.pop(word, None)
    else:
        acc[word] = total


class NcElement:
    """Laurent-linear combination of words in a fixed presentation."""

    __slots__ = ("spec", "terms")

    def __init__(
        self, spec: NcAlgebraSpec, terms: Mapping[Word, Laurent] | None = None
    ) -> None:
        self.spec = spec
        self.terms: Dict[Word, Laurent] = {}
        if terms:
            for word, coeff in terms.items():
                if not coeff.is_zero():
                    self.terms[tuple(word)] = coeff

    @classmethod
    def generator(cls, spec: NcAlgebraSpec, name: str) -> "NcElement":
        return cls(spec, {(spec.index(name),): Laurent.one()})

    def _check(self, other: "NcElement") -> None:
        if self.spec is not other.spec:
            raise ValueError("elements belong to different presentations")

    def __add__(self, other: "NcElement") -> "NcElement":
        self._check(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            _accumulate(out, word, coeff)
        return NcElement(self.spec, out)

    def __neg__(self) -> "NcElement":
        return NcElement(self.spec, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NcElement") -> "NcElement":
        return self + (-other)

    def __mul__(self, other: "NcElement | Laurent | int") -> "NcElement":
        if isinstance(other, (Laurent, int)):
            scale = other if isinstance(other, Laurent) else Laurent.integer(other)
            return NcElement(
                self.spec, {w: c * scale for w, c in self.terms.items()}
            )
        self._check(other)
        out: Dict[Word, Laurent] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                _accumulate(out, w1 + w2, c1 * c2)
        return NcElement(self.spec, out)

    def __rmul__(self, other: "Laurent | int") -> "NcElement":
        return self * other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcElement):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.spec), frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def normalize(self) -> "NcElement":
        out: Dict[Word, Laurent] = {}
        for word, coeff in self.terms.items():
            for w, c in self.spec.normal_form_word(word).items():
                _accumulate(out, w, coeff * c)
        return NcElement(self.spec, out)

    def normalize_rightmost(self) -> "NcElement":
        out: Dict[Word, Laurent] = {}
        memo: Dict[Word, Dict[Word, Laurent]] = {}
        for word, coeff in self.terms.items():
            for w, c in self.spec.normal_form_word_rightmost(word, memo).items():
                _accumulate(out, w, coeff * c)
        return NcElement(self.spec, out)

    def leading(self) -> Tuple[Word, Laurent]:
        if not self.terms:
            raise ValueError("the zero element has no leading word")
        word = max(self.terms, key=_word_key)
        return word, self.terms[word]

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word in sorted(self.terms, key=_word_key, reverse=True):
            coeff = self.terms[word].render()
            parts.append(f"({coeff})*{self.spec.word_names(word)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NcElement({self.render()!r})"


# -- concrete presentations ----------------------------------------------------


@lru_cache(maxsize=None)
def collar_algebra() -> NcAlgebraSpec:
    """Five generators t1 < l1 < c < cp < x.

    The crossing generator x q-commutes past the two band generators with
    central correction terms c and cp; c and cp commute with everything.
    """
    T1, L1, C, CP, X = range(5)
    one = Laurent.one()
    rules = {
        (X, T1): [
            (Laurent.q_power(2), (T1, X)),
            (QINV - Laurent.q_power(3), (L1,)),
            (one - Laurent.q_power(2), (C,)),
        ],
        (X, L1): [
            (Laurent.q_power(-2), (L1, X)),
            (Q - Laurent.q_power(-3), (T1,)),
            (one - Laurent.q_power(-2), (CP,)),
        ],
        (X, C): [(one, (C, X))],
        (X, CP): [(one, (CP, X))],
        (C, T1): [(one, (T1, C))],
        (C, L1): [(one, (L1, C))],
        (CP, T1): [(one, (T1, CP))],
        (CP, L1): [(one, (L1, CP))],
        (CP, C): [(one, (C, CP))],
    }
    return NcAlgebraSpec("collar", ("t1", "l1", "c", "cp", "x"), rules)


@lru_cache(maxsize=None)
def exterior_algebra() -> NcAlgebraSpec:
    """Five generators l1 < l1p < t < r < x.

    x folds the strand generator t into the two band generators plus t*r;
    the boundary generator r is central.  x past l1p is deliberately left
    free: such words never arise in normalized input.
    """
    L1, L1P, T, R, X = range(5)
    one = Laurent.one()
    rules = {
        (X, T): [(Q, (L1P,)), (QINV, (L1,)), (one, (T, R))],
        (X, L1): [
            (Laurent.q_power(-2), (L1, X)),
            (Q - Laurent.q_power(-3), (T,)),
            (one - Laurent.q_power(-2), (T, R)),
        ],
        (X, R): [(one, (R, X))],
        (R, T): [(one, (T, R))],
        (R, L1): [(one, (L1, R))],
        (R, L1P): [(one, (L1P, R))],
    }
    return NcAlgebraSpec("exterior", ("l1", "l1p", "t", "r", "x"), rules)


@lru_cache(maxsize=None)
def presentation_algebra() -> NcAlgebraSpec:
    """Free container on the exterior generators (no rules); every word is
    already normal, so derived elements can be stored verbatim."""
    return NcAlgebraSpec("presentation", ("l1", "l1p", "t", "r", "x"), {})


# -- two by two matrices over polynomials ---------------------------------------


class Mat2Poly:
    """2x2 matrix with single-variable polynomial entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: CPoly, b: CPoly, c: CPoly, d: CPoly) -> None:
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, scale: "Laurent | int" = 1) -> "Mat2Poly":
        diag = CPoly.constant(scale, VARS_X)
        zero = CPoly.zero(VARS_X)
        return cls(diag, zero, zero, diag)

    def __add__(self, other: "Mat2Poly") -> "Mat2Poly":
        return Mat2Poly(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    def __sub__(self, other: "Mat2Poly") -> "Mat2Poly":
        return Mat2Poly(
            self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d
        )

    def __mul__(self, other: "Mat2Poly") -> "Mat2Poly":
        return Mat2Poly(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat2Poly):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __repr__(self) -> str:
        return (
            f"Mat2Poly([[{self.a.render()}, {self.b.render()}], "
            f"[{self.c.render()}, {self.d.render()}]])"
        )


def twisted_companion() -> Mat2Poly:
    """The q-twisted companion matrix.

    Entries, row by row: q^2 x, q - q^-3, q^-1 - q^3, q^-2 x.
    """
    x = CPoly.variable("x", VARS_X)
    return Mat2Poly(
        x * Laurent.q_power(2),
        CPoly.constant(Laurent({2: 1, -6: -1}), VARS_X),
        CPoly.constant(Laurent({-2: 1, 6: -1}), VARS_X),
        x * Laurent.q_power(-2),
    )


_matrix_cosine_cache: List[Mat2Poly] = []


def matrix_cosine(n: int) -> Mat2Poly:
    """Cosine-kind family applied to the twisted companion matrix, by the
    recursion M(n+1) = A M(n) - M(n-1)."""
    if n < 0:
        raise ValueError("defined for n >= 0")
    if not _matrix_cosine_cache:
        _matrix_cosine_cache.append(Mat2Poly.identity(2))
        _matrix_cosine_cache.append(twisted_companion())
    A = _matrix_cosine_cache[1]
    while len(_matrix_cosine_cache) <= n:
        k = len(_matrix_cosine_cache)
        _matrix_cosine_cache.append(
            A * _matrix_cosine_cache[k - 1] - _matrix_cosine_cache[k - 2]
        )
    return _matrix_cosine_cache[n]


def matrix_cosine_closed(n: int) -> Mat2Poly:
    """Closed form of matrix_cosine in terms of the sine-kind family."""
    band = cheb_sine(n)
    return Mat2Poly(
        qweighted_cosine(n),
        band * (QINV * q_power_diff(2 * n)),
        band * (Q * q_power_diff(2 * n)) * Laurent.integer(-1),
        cheb_sine(n + 1) * Laurent.q_power(-2 * n)
        - cheb_sine(n - 1) * Laurent.q_power(2 * n),
    )


@dataclass
class MatrixLemmaReport:
    max_n: int
    ok: bool
    first_failure: Optional[int]


def verify_matrix_lemma(max_n: int) -> MatrixLemmaReport:
    """Check matrix_cosine(n) == matrix_cosine_closed(n) for n = 0..max_n."""
    for n in range(max_n + 1):
        if matrix_cosine(n) != matrix_cosine_closed(n):
            return MatrixLemmaReport(max_n, False, n)
    return MatrixLemmaReport(max_n, True, None)


# -- commutation identity, two routes -------------------------------------------


@dataclass
class CommuteManyResult:
    n: int
    route: str
    mutated: bool
    route_a_ok: Optional[bool]
    route_b_ok: Optional[bool]
    residual: Optional[str]

    @property
    def ok(self) -> bool:
        checked = [r for r in (self.route_a_ok, self.route_b_ok) if r is not None]
        return bool(checked) and all(checked)


def _band_coefficient(n: int, mutate: bool) -> Laurent:
    # The verified coefficient is q*(q^2n - q^-2n); the mutated variant
    # flips the outer power to exercise failure detection.
    outer = QINV if mutate else Q
    return outer * q_power_diff(2 * n)


def _commute_route_a(n: int, band: Laurent) -> CPoly:
    """Residual of the commutative three-variable form; zero iff the
    identity holds with the supplied band coefficient."""
    V = ("x", "c", "cp")
    x = CPoly.variable("x", V)
    c = CPoly.variable("c", V)
    cp = CPoly.variable("cp", V)
    alpha = Q_PLUS_QINV
    loop2 = x * x - CPoly.constant(alpha * alpha, V)
    term1 = (cheb_cosine(n) - qweighted_cosine(n)).extend(V) * (c * x + cp * alpha)
    term2 = cheb_sine(n).extend(V) * (cp * x + c * alpha) * band
    bracket = (
        (cheb_sine(n) * Laurent.q_power(n) + qdiff_sine_sum(n - 1)).extend(V) * c
        + qdiff_sine_sum(n).extend(V) * cp
    )
    term3 = bracket * loop2 * q_power_diff(n)
    return term1 + term2 + term3


def _poly_words(
    spec: NcAlgebraSpec, poly: CPoly, before: Word, after: Word
) -> Dict[Word, Laurent]:
    """Words before + x^k + after for each term of a single-variable poly."""
    x = spec.index("x")
    out: Dict[Word, Laurent] = {}
    for (k,), coeff in poly.terms.items():
        _accumulate(out, before + (x,) * k + after, coeff)
    return out


def _commute_route_b(n: int, band: Laurent) -> NcElement:
    """Residual inside the collar presentation; zero iff the identity holds."""
    spec = collar_algebra()
    t1 = (spec.index("t1"),)
    l1 = (spec.index("l1"),)
    c = (spec.index("c"),)
    cp = (spec.index("cp"),)
    terms: Dict[Word, Laurent] = {}
    for w, co in _poly_words(spec, cheb_cosine(n), (), t1).items():
        _accumulate(terms, w, co)
    for w, co in _poly_words(spec, cheb_sine(n) * band, l1, ()).items():
        _accumulate(terms, w, co)
    bracket_c = (cheb_sine(n) * Laurent.q_power(n) + qdiff_sine_sum(n - 1)) * q_power_diff(n)
    for w, co in _poly_words(spec, bracket_c, c, ()).items():
        _accumulate(terms, w, co)
    for w, co in _poly_words(spec, qdiff_sine_sum(n) * q_power_diff(n), cp, ()).items():
        _accumulate(terms, w, co)
    for w, co in _poly_words(spec, qweighted_cosine(n), t1, ()).items():
        _accumulate(terms, w, -co)
    return NcElement(spec, terms).normalize()


def verify_commute_many(
    n: int, route: str = "both", mutate: bool = False
) -> CommuteManyResult:
    """Verify that the n-th cosine-kind element commutes with the crossing
    generator, along route a (commutative form) and/or route b (word
    rewriting).  With mutate=True the band coefficient is corrupted and the
    result reports the first surviving monomial."""
    if route not in ("a", "b", "both"):
        raise ValueError(f"unknown route {route!r}")
    if n < 1:
        raise ValueError("defined for n >= 1")
    band = _band_coefficient(n, mutate)
    a_ok: Optional[bool] = None
    b_ok: Optional[bool] = None
    residual: Optional[str] = None
    if route in ("a", "both"):
        res_a = _commute_route_a(n, band)
        a_ok = res_a.is_zero()
        if not a_ok:
            mono, coeff = res_a.leading()
            names = [f"{v}^{e}" for v, e in zip(res_a.vars, mono) if e]
            residual = f"route a: ({coeff.render()})*{'*'.join(names) or '1'}"
    if route in ("b", "both"):
        res_b = _commute_route_b(n, band)
        b_ok = res_b.is_zero()
        if not b_ok and residual is None:
            word, coeff = res_b.leading()
            residual = f"route b: ({coeff.render()})*{res_b.spec.word_names(word)}"
    return CommuteManyResult(n, route, mutate, a_ok, b_ok, residual)


# -- derivation of the n-th element ---------------------------------------------


@dataclass
class ElementDerivation:
    n: int
    ok: bool
    detail: str
    strand_coeff: CPoly
    band_coeff: CPoly
    element: NcElement
    base_case_reduced: Optional[NcElement]


def derive_e_n(n: int) -> ElementDerivation:
    """Derive the inner part of the n-th central element from the commute
    identity: divide the strand and band coefficient blocks by the common
    factor q*(q^n - q^-n) and package the quotients as words.

    For n = 1 the element is additionally reduced inside the exterior
    presentation, where it must collapse to q*(l1 - l1p).
    """
    if n < 1:
        raise ValueError("defined for n >= 1")
    checks: List[str] = []
    common = Q * q_power_diff(n)

    # Strand block: cosine defect plus boundary-weighted prefix.
    prefix = (
        cheb_sine(n) * Laurent.q_power(n) + qdiff_sine_sum(n - 1) + qdiff_sine_sum(n)
    )
    r_var = CPoly.variable("r", VARS_XR)
    strand_block = (cheb_cosine(n) - qweighted_cosine(n)).extend(VARS_XR) + (
        prefix.extend(VARS_XR) * r_var * q_power_diff(n)
    )
    if strand_block != boundary_form(n) * q_power_diff(n):
        checks.append("strand block does not match the boundary form")
    strand_coeff = strand_block.divide_exact(CPoly.constant(common, VARS_XR))
    if strand_coeff != boundary_form(n) * QINV:
        checks.append("strand quotient is not qbar times the boundary form")

    # Band block: q*(q^2n - q^-2n) = q*(q^n - q^-n)*(q^n + q^-n).
    if Q * q_power_diff(2 * n) != common * q_power_sum(n):
        checks.append("band coefficient does not factor through the common term")
    if Laurent.q_power(2 * n) - Laurent.one() != Laurent.q_power(n) * q_power_diff(n):
        checks.append("q^2n - 1 does not factor as q^n*(q^n - q^-n)")
    band_block = cheb_sine(n) * (Q * q_power_diff(2 * n))
    band_coeff = band_block.divide_exact(CPoly.constant(common, VARS_X))
    if band_coeff != cheb_sine(n) * q_power_sum(n):
        checks.append("band quotient is not (q^n + q^-n) times the sine family")

    # Package as words: x^a r^b t for the strand part, l1 x^k for the band.
    spec = presentation_algebra()
    xg, rg, tg, l1g = (spec.index(g) for g in ("x", "r", "t", "l1"))
    terms: Dict[Word, Laurent] = {}
    for (a, b), coeff in strand_coeff.terms.items():
        _accumulate(terms, (xg,) * a + (rg,) * b + (tg,), coeff)
    for (k,), coeff in band_coeff.terms.items():
        _accumulate(terms, (l1g,) + (xg,) * k, coeff)
    element = NcElement(spec, terms)

    base_case: Optional[NcElement] = None
    if n == 1:
        ext = exterior_algebra()
        raw = NcElement(ext, terms)
        base_case = raw.normalize()
        expected = NcElement(
            ext, {(ext.index("l1"),): Q, (ext.index("l1p"),): -Q}
        )
        if base_case != expected:
            checks.append("base case does not reduce to q*(l1 - l1p)")

    return ElementDerivation(
        n=n,
        ok=not checks,
        detail="; ".join(checks) if checks else "ok",
        strand_coeff=strand_coeff,
        band_coeff=band_coeff,
        element=element,
        base_case_reduced=base_case,
    )
