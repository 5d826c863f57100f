"""Formal group algebras, their Weyl action, and localization at root classes.

Two exact backends over arbitrary-precision integers:

* ``additive``: S = Z[t_1..t_n][h], where ``t_i`` are the coordinates of the
  chosen weight lattice basis and ``h`` is an extra central variable.  The
  first Chern class of a weight ``lam`` is the linear form ``x_lam = lam``.
* ``multiplicative``: S = Z[Lambda][v, v^{-1}], spanned by group-like Laurent
  monomials ``E(m) = e^{sum m_i b_i}`` together with an extra Laurent
  variable ``v`` (with ``q := v^2``).  Here ``x_lam = 1 - e^{-lam}``.

Elements of the localization Q keep their denominators as *symbolic* factor
multisets (root classes and the hatted variants used by the h- and
q-deformed operator families); normalization divides the numerator exactly
by factor expansions and never computes polynomial GCDs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .rootdata import RootDatum, WeylElement

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
LAWS = (ADDITIVE, MULTIPLICATIVE)

Exponents = tuple[int, ...]
Weight = tuple[int, ...]


class Backend:
    """A formal group law backend bound to a root datum.

    The exponent vectors of :class:`SElem` have length ``rank + 1``; the last
    slot is the extra variable (``h`` for additive, ``v`` for multiplicative).
    """

    def __init__(self, datum: RootDatum, law: str) -> None:
        if law not in LAWS:
            raise ValueError(f"law must be one of {LAWS}, got {law!r}")
        self.datum = datum
        self.law = law
        self.rank = datum.rank
        self.extra_var = "h" if law == ADDITIVE else "v"
        self._expand_cache: dict[FactorSymbol, SElem] = {}
        self._act_form_cache: dict[tuple[int, ...], list[SElem]] = {}
        self._act_power_cache: dict[tuple[tuple[int, ...], int], list[SElem]] = {}
        weights = set()
        for beta in datum.positive_roots:
            wt = datum.root_to_weight(beta)
            weights.add(wt)
            weights.add(tuple(-c for c in wt))
        self._root_weights = frozenset(weights)
        self._positive_root_weights = frozenset(
            datum.root_to_weight(beta) for beta in datum.positive_roots
        )

    def is_root(self, weight: Sequence[int]) -> bool:
        return tuple(weight) in self._root_weights

    def is_negative_root(self, weight: Sequence[int]) -> bool:
        return tuple(-c for c in weight) in self._positive_root_weights

    def compatible(self, other: "Backend") -> bool:
        return self.law == other.law and self.datum is other.datum

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Backend({self.datum.label or 'custom'}, {self.law})"


def _tuple_add(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def _tuple_sub(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))


class SElem:
    """An exact element of the formal group algebra S."""

    __slots__ = ("backend", "terms")

    def __init__(self, backend: Backend, terms: Mapping[Exponents, int], _raw: bool = False):
        self.backend = backend
        if _raw:
            self.terms = dict(terms)
        else:
            clean: dict[Exponents, int] = {}
            width = backend.rank + 1
            for key, coeff in terms.items():
                if not coeff:
                    continue
                key = tuple(key)
                if len(key) != width:
                    raise ValueError(f"exponent vector must have length {width}")
                if backend.law == ADDITIVE and any(e < 0 for e in key):
                    raise ValueError("additive backend does not allow negative exponents")
                clean[key] = clean.get(key, 0) + coeff
            self.terms = {k: c for k, c in clean.items() if c}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(backend: Backend, value: int) -> "SElem":
        if not value:
            return SElem(backend, {}, _raw=True)
        zero_key = (0,) * (backend.rank + 1)
        return SElem(backend, {zero_key: int(value)}, _raw=True)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero_key = (0,) * (self.backend.rank + 1)
        return all(k == zero_key for k in self.terms)

    def constant_value(self) -> int:
        zero_key = (0,) * (self.backend.rank + 1)
        if not self.terms:
            return 0
        if set(self.terms) != {zero_key}:
            raise ValueError("element is not a constant")
        return self.terms[zero_key]

    def key(self) -> tuple:
        """Canonical hashable form (used to merge denominator factors)."""
        return (self.backend.law, tuple(sorted(self.terms.items())))

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "SElem") -> None:
        if self.backend is not other.backend and not self.backend.compatible(other.backend):
            raise ValueError("mixed backends in S arithmetic")

    def __add__(self, other: "SElem") -> "SElem":
        self._check(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            val = out.get(key, 0) + coeff
            if val:
                out[key] = val
            elif key in out:
                del out[key]
        return SElem(self.backend, out, _raw=True)

    def __sub__(self, other: "SElem") -> "SElem":
        self._check(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            val = out.get(key, 0) - coeff
            if val:
                out[key] = val
            elif key in out:
                del out[key]
        return SElem(self.backend, out, _raw=True)

    def __neg__(self) -> "SElem":
        return SElem(self.backend, {k: -c for k, c in self.terms.items()}, _raw=True)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return SElem(self.backend, {}, _raw=True)
            return SElem(
                self.backend, {k: c * other for k, c in self.terms.items()}, _raw=True
            )
        self._check(other)
        out: dict[Exponents, int] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = _tuple_add(ka, kb)
                val = out.get(key, 0) + ca * cb
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
        return SElem(self.backend, out, _raw=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SElem":
        if n < 0:
            raise ValueError("negative powers are not defined in S")
        result = SElem.constant(self.backend, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SElem)
            and self.backend.compatible(other.backend)
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.backend.law, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        from .serialize import selem_to_str

        return f"S<{selem_to_str(self)}>"

    # -- exact evaluation (used by randomized identity tests) -----------------

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Evaluate exactly at rational values of (t_1..t_n, h), respectively
        at nonzero rational values (z_1..z_n, v) with ``E(m) = prod z_i^m_i``."""
        if len(point) != self.backend.rank + 1:
            raise ValueError("evaluation point has wrong length")
        total = Fraction(0)
        for key, coeff in self.terms.items():
            val = Fraction(coeff)
            for base, exp in zip(point, key):
                if exp:
                    val *= Fraction(base) ** exp
            total += val
        return total


# ---------------------------------------------------------------------------
# Backend element constructors
# ---------------------------------------------------------------------------


def zero(backend: Backend) -> SElem:
    return SElem.constant(backend, 0)


def one(backend: Backend) -> SElem:
    return SElem.constant(backend, 1)


def from_int(backend: Backend, value: int) -> SElem:
    return SElem.constant(backend, value)


def monomial(backend: Backend, exponents: Sequence[int], coeff: int = 1) -> SElem:
    return SElem(backend, {tuple(exponents): coeff})


def e_mono(backend: Backend, weight: Sequence[int], v_power: int = 0) -> SElem:
    """The group-like Laurent monomial E(weight) * v^power (multiplicative)."""
    if backend.law != MULTIPLICATIVE:
        raise ValueError("group-like monomials exist only in the multiplicative backend")
    return SElem(backend, {tuple(weight) + (v_power,): 1})


def h_var(backend: Backend) -> SElem:
    if backend.law != ADDITIVE:
        raise ValueError("h lives in the additive backend")
    return monomial(backend, (0,) * backend.rank + (1,))

def v_var(backend: Backend, power: int = 1) -> SElem:
    if backend.law != MULTIPLICATIVE:
        raise ValueError("v lives in the multiplicative backend")
    return monomial(backend, (0,) * backend.rank + (power,))


def q_of(backend: Backend) -> SElem:
    """q = v^2."""
    return v_var(backend, 2)


def linear_form(backend: Backend, weight: Sequence[int]) -> SElem:
    if backend.law != ADDITIVE:
        raise ValueError("linear forms live in the additive backend")
    terms: dict[Exponents, int] = {}
    for i, c in enumerate(weight):
        if c:
            key = tuple(int(i == j) for j in range(backend.rank)) + (0,)
            terms[key] = c
    return SElem(backend, terms, _raw=True)


def x_class(backend: Backend, weight: Sequence[int]) -> SElem:
    """The first characteristic class ``x_lam`` of a weight."""
    weight = tuple(weight)
    if len(weight) != backend.rank:
        raise ValueError(f"weight must have {backend.rank} coordinates")
    if backend.law == ADDITIVE:
        return linear_form(backend, weight)
    neg = tuple(-c for c in weight)
    return one(backend) - e_mono(backend, neg)


def formal_sum(backend: Backend, a: SElem, b: SElem) -> SElem:
    """The formal group law F(a, b): a+b additively, a+b-ab multiplicatively."""
    if backend.law == ADDITIVE:
        return a + b
    return a + b - a * b


# ---------------------------------------------------------------------------
# Weyl action
# ---------------------------------------------------------------------------


def _act_additive(backend: Backend, w: WeylElement, p: SElem) -> SElem:
    datum = backend.datum
    forms = backend._act_form_cache.get(w.word)
    if forms is None:
        mat = datum.lattice_matrix(w)
        forms = [
            linear_form(backend, tuple(mat[r][i] for r in range(backend.rank)))
            for i in range(backend.rank)
        ]
        backend._act_form_cache[w.word] = forms

    def power(i: int, e: int) -> SElem:
        cache = backend._act_power_cache.setdefault((w.word, i), [one(backend)])
        while len(cache) <= e:
            cache.append(cache[-1] * forms[i])
        return cache[e]

    out = zero(backend)
    h_unit = (0,) * backend.rank
    for key, coeff in p.terms.items():
        term = SElem(backend, {h_unit + (key[-1],): coeff}, _raw=True)
        for i in range(backend.rank):
            if key[i]:
                term = term * power(i, key[i])
        out = out + term
    return out


def weyl_act(backend: Backend, w: WeylElement, p: SElem) -> SElem:
    """Apply a Weyl group element to an S element (ring automorphism)."""
    if w.length == 0:
        return p
    if backend.law == MULTIPLICATIVE:
        datum = backend.datum
        out: dict[Exponents, int] = {}
        for key, coeff in p.terms.items():
            new = datum.apply(w, key[:-1]) + (key[-1],)
            out[new] = out.get(new, 0) + coeff
        return SElem(backend, out, _raw=True)
    return _act_additive(backend, w, p)


# ---------------------------------------------------------------------------
# Exact division
# ---------------------------------------------------------------------------


def _divide_selem(p: SElem, d: SElem) -> SElem | None:
    """Exact division in S; ``None`` when d does not divide p."""
    backend = p.backend
    if d.is_zero():
        raise ZeroDivisionError("division by zero in S")
    if p.is_zero():
        return p
    width = backend.rank + 1
    if backend.law == MULTIPLICATIVE:
        # Shift both operands by monomial units so all exponents are >= 0.
        shift_p = tuple(min(k[i] for k in p.terms) for i in range(width))
        shift_d = tuple(min(k[i] for k in d.terms) for i in range(width))
        p_terms = {_tuple_sub(k, shift_p): c for k, c in p.terms.items()}
        d_terms = {_tuple_sub(k, shift_d): c for k, c in d.terms.items()}
        out_shift = _tuple_sub(shift_p, shift_d)
    else:
        p_terms = dict(p.terms)
        d_terms = dict(d.terms)
        out_shift = (0,) * width

    lead_d = max(d_terms)
    cd = d_terms[lead_d]
    quotient: dict[Exponents, int] = {}
    remainder = p_terms
    while remainder:
        lead_r = max(remainder)
        cr = remainder[lead_r]
        diff = _tuple_sub(lead_r, lead_d)
        if any(e < 0 for e in diff) or cr % cd:
            return None
        coeff = cr // cd
        quotient[diff] = coeff
        for key, c in d_terms.items():
            tgt = _tuple_add(key, diff)
            val = remainder.get(tgt, 0) - coeff * c
            if val:
                remainder[tgt] = val
            elif tgt in remainder:
                del remainder[tgt]
    if backend.law == ADDITIVE:
        return SElem(backend, quotient, _raw=True)
    shifted = {_tuple_add(k, out_shift): c for k, c in quotient.items()}
    return SElem(backend, shifted, _raw=True)


# ---------------------------------------------------------------------------
# Denominator factors
# ---------------------------------------------------------------------------

X_ROOT = "x_root"
HAT_ADDITIVE = "hat_additive"
ONE_MINUS_E = "one_minus_e"
HAT_MULTIPLICATIVE = "hat_multiplicative"
ONE_PLUS_ROOT = "one_plus_root"

FACTOR_KINDS = (X_ROOT, HAT_ADDITIVE, ONE_MINUS_E, HAT_MULTIPLICATIVE, ONE_PLUS_ROOT)


@dataclass(frozen=True, order=True)
class FactorSymbol:
    """A symbolic denominator factor over a root ``beta`` (lattice coords).

    kinds: ``x_root`` = x_beta; ``hat_additive`` = h - beta;
    ``one_minus_e`` = 1 - e^beta; ``hat_multiplicative`` = 1 - q e^{-beta};
    ``one_plus_root`` = 1 + beta.
    """

    kind: str
    root: Weight

    def __post_init__(self):
        if self.kind not in FACTOR_KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")


def expand_factor(backend: Backend, factor: FactorSymbol) -> SElem:
    cached = backend._expand_cache.get(factor)
    if cached is not None:
        return cached
    beta = factor.root
    if len(beta) != backend.rank:
        raise ValueError("factor root has wrong coordinate length")
    if not backend.is_root(beta):
        raise ValueError(f"factor root {beta} is not a root of the datum")
    kind = factor.kind
    if kind == X_ROOT:
        value = x_class(backend, beta)
    elif kind == HAT_ADDITIVE:
        if backend.law != ADDITIVE:
            raise ValueError("hat_additive factors require the additive backend")
        value = h_var(backend) - linear_form(backend, beta)
    elif kind == ONE_PLUS_ROOT:
        if backend.law != ADDITIVE:
            raise ValueError("one_plus_root factors require the additive backend")
        value = one(backend) + linear_form(backend, beta)
    elif kind == ONE_MINUS_E:
        if backend.law != MULTIPLICATIVE:
            raise ValueError("one_minus_e factors require the multiplicative backend")
        value = one(backend) - e_mono(backend, beta)
    elif kind == HAT_MULTIPLICATIVE:
        if backend.law != MULTIPLICATIVE:
            raise ValueError("hat_multiplicative factors require the multiplicative backend")
        value = one(backend) - e_mono(backend, tuple(-c for c in beta), v_power=2)
    else:  # pragma: no cover
        raise ValueError(f"unknown factor kind {kind!r}")
    if value.is_zero():
        raise ValueError(f"factor {factor} expands to zero")
    backend._expand_cache[factor] = value
    return value


def divide_exact(backend: Backend, p: SElem, factor: FactorSymbol | SElem) -> SElem | None:
    """Exact division of p by a factor symbol (or a raw S element)."""
    divisor = factor if isinstance(factor, SElem) else expand_factor(backend, factor)
    return _divide_selem(p, divisor)


def _canonicalize_factor(
    backend: Backend, factor: FactorSymbol
) -> tuple[FactorSymbol, SElem | None]:
    """Rewrite a factor over a negative root as a positive-root factor times a
    unit; returns (canonical factor, numerator multiplier for 1/factor).

    Only ``x_root`` and ``one_minus_e`` admit unit rewrites:
    additive  1/x_{-beta} = -1 / x_beta;
    multiplicative  1/x_{-beta} = -E(-beta)/x_beta and 1 - e^beta = x_{-beta}.
    """
    kind, beta = factor.kind, factor.root
    if kind == ONE_MINUS_E:
        if backend.law != MULTIPLICATIVE:
            raise ValueError("one_minus_e factors require the multiplicative backend")
        # 1 - e^beta = x_{-beta}: fold into the x_root kind first.
        return _canonicalize_factor(
            backend, FactorSymbol(X_ROOT, tuple(-c for c in beta))
        )
    if kind == X_ROOT and backend.is_negative_root(beta):
        pos = tuple(-c for c in beta)
        if backend.law == ADDITIVE:
            unit = SElem.constant(backend, -1)
        else:
            unit = e_mono(backend, beta) * -1  # -E(beta) = -e^{beta}, beta negative
        return FactorSymbol(X_ROOT, pos), unit
    return factor, None


def weyl_act_factor(backend: Backend, w: WeylElement, factor: FactorSymbol) -> FactorSymbol:
    beta = backend.datum.apply(w, factor.root)
    return FactorSymbol(factor.kind, beta)


# ---------------------------------------------------------------------------
# The localization Q
# ---------------------------------------------------------------------------


class QElem:
    """num / prod(den) with a symbolic denominator multiset, kept normalized."""

    __slots__ = ("backend", "num", "den")

    def __init__(
        self,
        num: SElem,
        den: Iterable[FactorSymbol] = (),
        _raw: bool = False,
    ):
        backend = num.backend
        if _raw:
            self.backend = backend
            self.num = num
            self.den = tuple(den)
            return
        factors: list[FactorSymbol] = []
        for factor in den:
            canonical, unit = _canonicalize_factor(backend, factor)
            expand_factor(backend, canonical)  # validates kind/backend
            if unit is not None:
                num = num * unit
            factors.append(canonical)
        num, factors = _normalize(backend, num, factors)
        self.backend = backend
        self.num = num
        self.den = tuple(factors)

    # -- helpers ------------------------------------------------------------

    @staticmethod
    def from_s(num: SElem) -> "QElem":
        return QElem(num, (), _raw=True)

    @staticmethod
    def from_int(backend: Backend, value: int) -> "QElem":
        return QElem(SElem.constant(backend, value), (), _raw=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_product(self) -> SElem:
        out = one(self.backend)
        for factor in self.den:
            out = out * expand_factor(self.backend, factor)
        return out

    def as_selem(self) -> SElem:
        """Certify the element lies in S (empty denominator) and return it."""
        if self.den:
            raise ValueError(
                "element does not normalize to S; residual denominator "
                f"{[f'{f.kind}{f.root}' for f in self.den]}"
            )
        return self.num

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "QElem") -> None:
        if not self.backend.compatible(other.backend):
            raise ValueError("mixed backends in Q arithmetic")

    def __add__(self, other: "QElem") -> "QElem":
        self._check(other)
        backend = self.backend
        mine = _den_counter(backend, self.den)
        theirs = _den_counter(backend, other.den)
        merged: dict[tuple, tuple[FactorSymbol, int]] = {}
        for key, (factor, count) in mine.items():
            merged[key] = (factor, count)
        for key, (factor, count) in theirs.items():
            if key in merged:
                merged[key] = (merged[key][0], max(merged[key][1], count))
            else:
                merged[key] = (factor, count)
        num_a = self.num
        num_b = other.num
        den: list[FactorSymbol] = []
        for key, (factor, count) in merged.items():
            have_a = mine.get(key, (factor, 0))[1]
            have_b = theirs.get(key, (factor, 0))[1]
            expansion = expand_factor(backend, factor)
            for _ in range(count - have_a):
                num_a = num_a * expansion
            for _ in range(count - have_b):
                num_b = num_b * expansion
            den.extend([factor] * count)
        num, den = _normalize(backend, num_a + num_b, den)
        return QElem(num, den, _raw=True)

    def __sub__(self, other: "QElem") -> "QElem":
        return self + (-other)

    def __neg__(self) -> "QElem":
        return QElem(-self.num, self.den, _raw=True)

    def __mul__(self, other):
        if isinstance(other, int):
            num, den = _normalize(self.backend, self.num * other, list(self.den))
            return QElem(num, den, _raw=True)
        if isinstance(other, SElem):
            other = QElem.from_s(other)
        if not isinstance(other, QElem):
            return NotImplemented
        self._check(other)
        num, den = _normalize(
            self.backend, self.num * other.num, list(self.den) + list(other.den)
        )
        return QElem(num, den, _raw=True)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, QElem) and q_equal(self, other)

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        raise TypeError("QElem is not hashable")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        from .serialize import qelem_to_str

        return f"Q<{qelem_to_str(self)}>"

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        den = Fraction(1)
        for factor in self.den:
            val = expand_factor(self.backend, factor).evaluate(point)
            if val == 0:
                raise ZeroDivisionError("denominator factor vanishes at the point")
            den *= val
        return self.num.evaluate(point) / den


def _den_counter(
    backend: Backend, den: Sequence[FactorSymbol]
) -> dict[tuple, tuple[FactorSymbol, int]]:
    out: dict[tuple, tuple[FactorSymbol, int]] = {}
    for factor in den:
        key = expand_factor(backend, factor).key()
        if key in out:
            out[key] = (out[key][0], out[key][1] + 1)
        else:
            out[key] = (factor, 1)
    return out


def _normalize(
    backend: Backend, num: SElem, den: list[FactorSymbol]
) -> tuple[SElem, list[FactorSymbol]]:
    if num.is_zero():
        return num, []
    if not den:
        return num, den
    den = sorted(den)
    changed = True
    while changed and den:
        changed = False
        for idx, factor in enumerate(den):
            quotient = _divide_selem(num, expand_factor(backend, factor))
            if quotient is not None:
                num = quotient
                del den[idx]
                changed = True
                break
    return num, den


def q_equal(p: QElem, q: QElem) -> bool:
    """Equality in Q by cross-multiplication of numerators with denominators."""
    if not p.backend.compatible(q.backend):
        raise ValueError("mixed backends in q_equal")
    return (p.num * q.den_product()) == (q.num * p.den_product())


def weyl_act_q(backend: Backend, w: WeylElement, p: QElem) -> QElem:
    """Weyl action on Q: act on the numerator and on each factor's root.

    The action is a ring automorphism and the canonical rewrites only move
    units around, so a normalized input stays normalized; no re-division is
    attempted here.
    """
    if w.length == 0:
        return p
    num = weyl_act(backend, w, p.num)
    if not p.den:
        return QElem(num, (), _raw=True)
    den: list[FactorSymbol] = []
    for factor in p.den:
        moved = FactorSymbol(factor.kind, backend.datum.apply(w, factor.root))
        canonical, unit = _canonicalize_factor(backend, moved)
        if unit is not None:
            num = num * unit
        den.append(canonical)
    den.sort()
    return QElem(num, tuple(den), _raw=True)


# ---------------------------------------------------------------------------
# kappa classes
# ---------------------------------------------------------------------------


def kappa(backend: Backend, weight: Sequence[int]) -> SElem:
    """kappa_lam = 1/x_lam + 1/x_{-lam}, certified to land in S."""
    weight = tuple(weight)
    if all(c == 0 for c in weight):
        raise ValueError("kappa is undefined at weight 0")
    if not backend.is_root(weight):
        # kappa is defined for any nonzero weight; but denominators must be
        # expressible as factor symbols, which require roots.  Compute via
        # the generic x classes directly when the weight is a root of the
        # datum; otherwise fall back to the same formula with raw divisions.
        xp = x_class(backend, weight)
        xm = x_class(backend, tuple(-c for c in weight))
        num = xp + xm
        prod = xp * xm
        quotient = _divide_selem(num, prod)
        if quotient is None:
            raise ValueError("kappa did not normalize to S")
        return quotient
    pos = QElem(one(backend), [FactorSymbol(X_ROOT, weight)])
    neg = QElem(one(backend), [FactorSymbol(X_ROOT, tuple(-c for c in weight))])
    return (pos + neg).as_selem()


def kappa_pair(backend: Backend, i: int, j: int) -> SElem:
    """kappa_{alpha beta} for simple roots alpha_i, alpha_j with bond order 3:

        1/(x_{a+b} x_b) - 1/(x_{a+b} x_{-a}) - 1/(x_a x_b),

    certified to land in S (it vanishes for both supported backends)."""
    datum = backend.datum
    a_ij = datum.cartan[i - 1][j - 1]
    a_ji = datum.cartan[j - 1][i - 1]
    if a_ij * a_ji != 1:
        raise ValueError("kappa_pair requires a braid bond of order 3")
    alpha = datum.simple_root(i)
    beta = datum.simple_root(j)
    absum = tuple(x + y for x, y in zip(alpha, beta))
    neg_alpha = tuple(-c for c in alpha)
    term1 = QElem(one(backend), [FactorSymbol(X_ROOT, absum), FactorSymbol(X_ROOT, beta)])
    term2 = QElem(one(backend), [FactorSymbol(X_ROOT, absum), FactorSymbol(X_ROOT, neg_alpha)])
    term3 = QElem(one(backend), [FactorSymbol(X_ROOT, alpha), FactorSymbol(X_ROOT, beta)])
    return (term1 - term2 - term3).as_selem()


# ---------------------------------------------------------------------------
# Convenience
# ---------------------------------------------------------------------------


def x_simple(backend: Backend, i: int) -> SElem:
    return x_class(backend, backend.datum.simple_root(i))


def product_over_positive_roots(backend: Backend, f: Callable[[Weight], SElem]) -> SElem:
    out = one(backend)
    for beta in backend.datum.positive_roots:
        out = out * f(backend.datum.root_to_weight(beta))
    return out
