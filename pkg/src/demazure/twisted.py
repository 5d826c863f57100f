"""The twisted group algebra Q_W and divided-difference operator families.

Q_W is the free Q-module on symbols ``delta_w`` with the twisted product
``(p delta_w)(p' delta_{w'}) = p w(p') delta_{w w'}``.  An operator family
assigns to every root ``alpha`` a pair of coefficients (a_alpha, b_alpha)
and the single-reflection operator ``Z_alpha = a_alpha + b_alpha delta_alpha``;
words compose to ``Z_I``, and the elements ``Z_{I_w}`` for a fixed choice of
reduced words {I_w} form a Q-basis.  Because each family also supplies a
symbolic inverse of b_alpha, every triangular basis change here is carried
out by multiplication alone (no division ever happens blindly).

Built-in families::

    X:    a = 1/x_a,          b = -1/x_a            (either backend)
    Y:    a = 1/x_{-a},       b = 1/x_a             (either backend)
    T:    a = -h/a,           b = (h-a)/a           (additive, h)
    tau:  a = (q-1)/(1-e^a),  b = (1-q e^{-a})/(1-e^a)   (multiplicative, q = v^2)
    sigma (custom preset): a = -1/a, b = (1+a)/a    (additive)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .formal import (
    ADDITIVE,
    HAT_ADDITIVE,
    HAT_MULTIPLICATIVE,
    MULTIPLICATIVE,
    ONE_MINUS_E,
    ONE_PLUS_ROOT,
    X_ROOT,
    Backend,
    FactorSymbol,
    QElem,
    SElem,
    e_mono,
    expand_factor,
    h_var,
    kappa,
    linear_form,
    one,
    q_equal,
    q_of,
    v_var,
    weyl_act_q,
    x_class,
)
from .rootdata import WeylElement, Word

Weight = tuple[int, ...]


# ---------------------------------------------------------------------------
# QWElem
# ---------------------------------------------------------------------------


class QWElem:
    """An element of Q_W: a finite Q-combination of the symbols delta_w."""

    __slots__ = ("backend", "coeffs")

    def __init__(self, backend: Backend, coeffs: Mapping[WeylElement, QElem], _raw=False):
        self.backend = backend
        if _raw:
            self.coeffs = dict(coeffs)
        else:
            self.coeffs = {w: c for w, c in coeffs.items() if not c.is_zero()}

    @staticmethod
    def delta(backend: Backend, w: WeylElement, coeff: QElem | SElem | int = 1) -> "QWElem":
        if isinstance(coeff, int):
            coeff = QElem.from_int(backend, coeff)
        elif isinstance(coeff, SElem):
            coeff = QElem.from_s(coeff)
        if coeff.is_zero():
            return QWElem(backend, {}, _raw=True)
        return QWElem(backend, {w: coeff}, _raw=True)

    @staticmethod
    def zero(backend: Backend) -> "QWElem":
        return QWElem(backend, {}, _raw=True)

    @staticmethod
    def one(backend: Backend) -> "QWElem":
        return QWElem.delta(backend, backend.datum.identity, 1)

    def support(self) -> tuple[WeylElement, ...]:
        return tuple(sorted(self.coeffs, key=WeylElement.sort_key))

    def coeff(self, w: WeylElement) -> QElem:
        return self.coeffs.get(w, QElem.from_int(self.backend, 0))

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "QWElem") -> "QWElem":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            if w in out:
                val = out[w] + c
                if val.is_zero():
                    del out[w]
                else:
                    out[w] = val
            else:
                out[w] = c
        return QWElem(self.backend, out, _raw=True)

    def __sub__(self, other: "QWElem") -> "QWElem":
        return self + (-other)

    def __neg__(self) -> "QWElem":
        return QWElem(self.backend, {w: -c for w, c in self.coeffs.items()}, _raw=True)

    def __rmul__(self, scalar) -> "QWElem":
        """Left multiplication by a scalar p: p . (p' delta_w) = (p p') delta_w."""
        scalar = _as_q(self.backend, scalar)
        out = {}
        for w, c in self.coeffs.items():
            val = scalar * c
            if not val.is_zero():
                out[w] = val
        return QWElem(self.backend, out, _raw=True)

    # -- twisted product and action ------------------------------------------

    def __mul__(self, other) -> "QWElem":
        """The twisted product; a scalar on the right means (scalar) delta_e."""
        backend = self.backend
        if not isinstance(other, QWElem):
            other = QWElem.delta(backend, backend.datum.identity, _as_q(backend, other))
        datum = backend.datum
        out: dict[WeylElement, QElem] = {}
        for w1, p1 in self.coeffs.items():
            for w2, p2 in other.coeffs.items():
                target = datum.multiply(w1, w2)
                val = p1 * weyl_act_q(backend, w1, p2)
                if val.is_zero():
                    continue
                if target in out:
                    acc = out[target] + val
                    if acc.is_zero():
                        del out[target]
                    else:
                        out[target] = acc
                else:
                    out[target] = val
        return QWElem(backend, out, _raw=True)

    def act(self, p: QElem | SElem | int) -> QElem:
        """The Q_W action on Q: (p' delta_w) . p = p' w(p)."""
        p = _as_q(self.backend, p)
        total = QElem.from_int(self.backend, 0)
        for w, c in self.coeffs.items():
            total = total + c * weyl_act_q(self.backend, w, p)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, QWElem):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover
        raise TypeError("QWElem is not hashable")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        from .serialize import qelem_to_str

        parts = [
            f"({qelem_to_str(c)})d[{''.join(map(str, w.word)) or 'e'}]"
            for w, c in sorted(self.coeffs.items(), key=lambda kv: kv[0].sort_key())
        ]
        return " + ".join(parts) or "0"


def _as_q(backend: Backend, value) -> QElem:
    if isinstance(value, QElem):
        return value
    if isinstance(value, SElem):
        return QElem.from_s(value)
    if isinstance(value, int):
        return QElem.from_int(backend, value)
    raise TypeError(f"cannot coerce {type(value).__name__} to QElem")


def qw_mul(z1: QWElem, z2: QWElem) -> QWElem:
    return z1 * z2


def qw_act(z: QWElem, p: QElem) -> QElem:
    return z.act(p)


# ---------------------------------------------------------------------------
# Operator families
# ---------------------------------------------------------------------------

C_RULE_REDUCED = "reduced"  # c = 1 iff the subword is reduced with the right product
C_RULE_DEMAZURE = "demazure"  # c = 1 iff the target is the Demazure product
C_RULE_GROUP = "group"  # c = 1 iff the target is the plain group product
C_RULE_HECKE = "hecke"  # c given by the Hecke two-case recursion (values in Z[q])


@dataclass
class OperatorFamily:
    """A W-equivariant operator family Z_alpha = a_alpha + b_alpha delta_alpha.

    ``a``, ``b``, ``b_inv`` take a *root* in lattice coordinates (any sign)
    and return QElems; ``b_inv`` must be the exact reciprocal of ``b``.
    """

    name: str
    backend: Backend
    a: Callable[[Weight], QElem]
    b: Callable[[Weight], QElem]
    b_inv: Callable[[Weight], QElem]
    c_rule: str | None = None
    quadratic: str | None = None  # description used by verify_relations

    def check_equivariance(self) -> list[str]:
        """Exact check of w(a_alpha) = a_{w(alpha)} (and b, b_inv) for every
        simple reflection against every root; returns failure descriptions."""
        backend = self.backend
        datum = backend.datum
        failures = []
        roots = []
        for beta in datum.positive_roots:
            wt = datum.root_to_weight(beta)
            roots.append(wt)
            roots.append(tuple(-c for c in wt))
        for i in range(1, datum.rank + 1):
            s = datum.simple_reflection(i)
            for beta in roots:
                image = datum.apply(s, beta)
                for label, fn in (("a", self.a), ("b", self.b), ("b_inv", self.b_inv)):
                    lhs = weyl_act_q(backend, s, fn(beta))
                    rhs = fn(image)
                    if not q_equal(lhs, rhs):
                        failures.append(
                            f"{label}: s_{i} of {label}({beta}) != {label}({image})"
                        )
        return failures

    def check_b_inverse(self) -> list[str]:
        backend = self.backend
        datum = backend.datum
        failures = []
        for beta in datum.positive_roots:
            wt = datum.root_to_weight(beta)
            for root in (wt, tuple(-c for c in wt)):
                prod = self.b(root) * self.b_inv(root)
                if not q_equal(prod, QElem.from_int(backend, 1)):
                    failures.append(f"b({root}) * b_inv({root}) != 1")
        return failures


def _x_factor(weight: Weight) -> FactorSymbol:
    return FactorSymbol(X_ROOT, tuple(weight))


def family_x(backend: Backend) -> OperatorFamily:
    def a(alpha: Weight) -> QElem:
        return QElem(one(backend), [_x_factor(alpha)])

    def b(alpha: Weight) -> QElem:
        return QElem(-one(backend), [_x_factor(alpha)])

    def b_inv(alpha: Weight) -> QElem:
        return QElem.from_s(-x_class(backend, alpha))

    rule = C_RULE_REDUCED if backend.law == ADDITIVE else C_RULE_DEMAZURE
    return OperatorFamily("x", backend, a, b, b_inv, c_rule=rule, quadratic="kappa")


def family_y(backend: Backend) -> OperatorFamily:
    def a(alpha: Weight) -> QElem:
        return QElem(one(backend), [_x_factor(tuple(-c for c in alpha))])

    def b(alpha: Weight) -> QElem:
        return QElem(one(backend), [_x_factor(alpha)])

    def b_inv(alpha: Weight) -> QElem:
        return QElem.from_s(x_class(backend, alpha))

    rule = C_RULE_REDUCED if backend.law == ADDITIVE else C_RULE_DEMAZURE
    return OperatorFamily("y", backend, a, b, b_inv, c_rule=rule, quadratic="kappa")


def family_t(backend: Backend) -> OperatorFamily:
    if backend.law != ADDITIVE:
        raise ValueError("the T family requires the additive backend (with h)")

    def a(alpha: Weight) -> QElem:
        return QElem(-h_var(backend), [_x_factor(alpha)])

    def b(alpha: Weight) -> QElem:
        return QElem(
            h_var(backend) - linear_form(backend, alpha), [_x_factor(alpha)]
        )

    def b_inv(alpha: Weight) -> QElem:
        return QElem(linear_form(backend, alpha), [FactorSymbol(HAT_ADDITIVE, tuple(alpha))])

    return OperatorFamily("t", backend, a, b, b_inv, c_rule=C_RULE_GROUP, quadratic="involution")


def family_tau(backend: Backend) -> OperatorFamily:
    if backend.law != MULTIPLICATIVE:
        raise ValueError("the tau family requires the multiplicative backend (with v)")

    def a(alpha: Weight) -> QElem:
        return QElem(q_of(backend) - one(backend), [FactorSymbol(ONE_MINUS_E, tuple(alpha))])

    def b(alpha: Weight) -> QElem:
        hat = expand_factor(backend, FactorSymbol(HAT_MULTIPLICATIVE, tuple(alpha)))
        return QElem(hat, [FactorSymbol(ONE_MINUS_E, tuple(alpha))])

    def b_inv(alpha: Weight) -> QElem:
        num = one(backend) - e_mono(backend, tuple(alpha))
        return QElem(num, [FactorSymbol(HAT_MULTIPLICATIVE, tuple(alpha))])

    return OperatorFamily("tau", backend, a, b, b_inv, c_rule=C_RULE_HECKE, quadratic="hecke")


def family_sigma(backend: Backend) -> OperatorFamily:
    """Custom preset: sigma_alpha = ((1+alpha)/alpha) delta_alpha - 1/alpha."""
    if backend.law != ADDITIVE:
        raise ValueError("the sigma preset requires the additive backend")

    def a(alpha: Weight) -> QElem:
        return QElem(-one(backend), [_x_factor(alpha)])

    def b(alpha: Weight) -> QElem:
        return QElem(one(backend) + linear_form(backend, alpha), [_x_factor(alpha)])

    def b_inv(alpha: Weight) -> QElem:
        return QElem(
            linear_form(backend, alpha), [FactorSymbol(ONE_PLUS_ROOT, tuple(alpha))]
        )

    return OperatorFamily("custom:sigma", backend, a, b, b_inv, c_rule=None, quadratic=None)


def custom_family(
    backend: Backend,
    name: str,
    a: Callable[[Weight], QElem],
    b: Callable[[Weight], QElem],
    b_inv: Callable[[Weight], QElem],
    check: bool = True,
) -> OperatorFamily:
    fam = OperatorFamily(f"custom:{name}", backend, a, b, b_inv, c_rule=None)
    if check:
        problems = fam.check_b_inverse() + fam.check_equivariance()
        if problems:
            raise ValueError(
                "custom family failed validation: " + "; ".join(problems[:5])
            )
    return fam


BUILTIN_FAMILIES: dict[str, Callable[[Backend], OperatorFamily]] = {
    "x": family_x,
    "y": family_y,
    "t": family_t,
    "tau": family_tau,
    "sigma": family_sigma,
}


# ---------------------------------------------------------------------------
# The algebra of a family with a fixed reduced-word choice
# ---------------------------------------------------------------------------


class Algebra:
    """An operator family together with a fixed reduced word I_w per element.

    All basis-change coefficients (a, b, c), Leibniz coefficients, and the
    memoized subword tables are cached here.
    """

    def __init__(self, family: OperatorFamily, words: Mapping[WeylElement, Word] | None = None):
        self.family = family
        self.backend = family.backend
        self.datum = family.backend.datum
        table: dict[WeylElement, Word] = {w: w.word for w in self.datum.elements}
        if words:
            for w, word in words.items():
                word = tuple(word)
                if self.datum.element_by_word(word) is not w or len(word) != w.length:
                    raise ValueError(
                        f"word {word} is not a reduced word for {''.join(map(str, w.word)) or 'e'}"
                    )
                table[w] = word
        self.words = table
        self._simple_cache: dict[int, QWElem] = {}
        self._compose_cache: dict[Word, QWElem] = {}
        self._diag_inverse_cache: dict[WeylElement, QElem] = {}
        self._b_rows: dict[WeylElement, dict[WeylElement, QElem]] = {}
        self._leibniz_cache: dict[tuple[Word, tuple[int, ...]], QElem] = {}
        self._subword_cache: dict[Word, list] = {}
        self._hecke_cache: dict[Word, dict[WeylElement, SElem]] = {}

    # -- elements -------------------------------------------------------------

    def word(self, w: WeylElement) -> Word:
        return self.words[w]

    def with_words(self, overrides: Mapping[WeylElement, Word]) -> "Algebra":
        table = dict(self.words)
        table.update({w: tuple(word) for w, word in overrides.items()})
        return Algebra(self.family, table)

    def simple_element(self, i: int) -> QWElem:
        cached = self._simple_cache.get(i)
        if cached is None:
            alpha = self.datum.simple_root(i)
            s_i = self.datum.simple_reflection(i)
            cached = QWElem(
                self.backend,
                {self.datum.identity: self.family.a(alpha), s_i: self.family.b(alpha)},
            )
            self._simple_cache[i] = cached
        return cached

    def compose_word(self, word: Sequence[int]) -> QWElem:
        word = tuple(word)
        cached = self._compose_cache.get(word)
        if cached is not None:
            return cached
        if not word:
            value = QWElem.one(self.backend)
        else:
            value = self.compose_word(word[:-1]) * self.simple_element(word[-1])
        self._compose_cache[word] = value
        return value

    def z_basis_element(self, w: WeylElement) -> QWElem:
        return self.compose_word(self.words[w])

    # -- triangular data -------------------------------------------------------

    def diag_inverse(self, w: WeylElement) -> QElem:
        """1 / (leading delta_w coefficient of Z_{I_w}), as a product of
        twisted b-inverses along the word."""
        cached = self._diag_inverse_cache.get(w)
        if cached is None:
            cached = QElem.from_int(self.backend, 1)
            for beta in self.datum.inversion_roots_along(self.words[w]):
                cached = cached * self.family.b_inv(self.datum.root_to_weight(beta))
            self._diag_inverse_cache[w] = cached
        return cached

    def a_coefficients(self, word: Sequence[int]) -> dict[WeylElement, QElem]:
        """Row of a-coefficients: Z_word = sum_v a_v delta_v."""
        return dict(self.compose_word(word).coeffs)

    def b_row(self, u: WeylElement) -> dict[WeylElement, QElem]:
        """Row of b-coefficients: delta_u = sum_{v <= u} b_{u, I_v} Z_{I_v}."""
        cached = self._b_rows.get(u)
        if cached is not None:
            return cached
        for w in self.datum.elements:
            if w.sort_key() > u.sort_key():
                break
            if w in self._b_rows:
                continue
            dinv = self.diag_inverse(w)
            arow = self.z_basis_element(w).coeffs
            row: dict[WeylElement, QElem] = {w: dinv}
            for v, a_wv in arow.items():
                if v is w:
                    continue
                scale = dinv * a_wv
                for t, bvt in self._b_rows[v].items():
                    val = scale * bvt
                    if val.is_zero():
                        continue
                    if t in row:
                        acc = row[t] - val
                        if acc.is_zero():
                            del row[t]
                        else:
                            row[t] = acc
                    else:
                        row[t] = -val
            self._b_rows[w] = row
        return self._b_rows[u]

    def delta_in_z(self, u: WeylElement) -> dict[WeylElement, QElem]:
        return dict(self.b_row(u))

    def expand_in_z_basis(self, source) -> dict[WeylElement, QElem]:
        """Coefficients c with source = sum_w c_w Z_{I_w} (generic triangular
        solve); ``source`` is a word or a QWElem."""
        if isinstance(source, QWElem):
            z = source
        else:
            z = self.compose_word(tuple(source))
        work = dict(z.coeffs)
        out: dict[WeylElement, QElem] = {}
        order = sorted(self.datum.elements, key=WeylElement.sort_key, reverse=True)
        for w in order:
            coeff = work.get(w)
            if coeff is None or coeff.is_zero():
                continue
            c_w = coeff * self.diag_inverse(w)
            out[w] = c_w
            for v, a_wv in self.z_basis_element(w).coeffs.items():
                val = c_w * a_wv
                if val.is_zero():
                    continue
                if v in work:
                    acc = work[v] - val
                    work[v] = acc
                else:  # pragma: no cover - triangularity violation
                    work[v] = -val
        for v, rest in work.items():
            if not rest.is_zero():  # pragma: no cover - consistency guard
                raise AssertionError("triangular solve left a nonzero residue")
        return out

    # -- c coefficients ---------------------------------------------------------

    def hecke_coefficients(self, word: Sequence[int]) -> dict[WeylElement, SElem]:
        """Expansion of tau_word over {tau_w} via the two-case recursion;
        values are polynomials in q = v^2."""
        word = tuple(word)
        cached = self._hecke_cache.get(word)
        if cached is not None:
            return cached
        backend = self.backend
        if not word:
            state = {self.datum.identity: one(backend)}
        else:
            prev = self.hecke_coefficients(word[:-1])
            i = word[-1]
            q = q_of(backend)
            qm1 = q - one(backend)
            state = {}
            for w, c in prev.items():
                if self.datum.has_right_descent(w, i):
                    down = self.datum.multiply_simple(w, i)
                    for target, inc in ((w, c * qm1), (down, c * q)):
                        acc = state.get(target)
                        acc = inc if acc is None else acc + inc
                        if acc.is_zero():
                            state.pop(target, None)
                        else:
                            state[target] = acc
                else:
                    up = self.datum.multiply_simple(w, i)
                    acc = state.get(up)
                    acc = c if acc is None else acc + c
                    if acc.is_zero():
                        state.pop(up, None)
                    else:
                        state[up] = acc
        self._hecke_cache[word] = state
        return state

    def c_coefficient(self, word: Sequence[int], w: WeylElement) -> QElem:
        """c_{J, I_w} in Z_J = sum_w c Z_{I_w}, via the family's fast rule
        when one exists (the generic expansion otherwise)."""
        word = tuple(word)
        rule = self.family.c_rule
        backend = self.backend
        if rule == C_RULE_REDUCED:
            hit = len(word) == w.length and self.datum.element_by_word(word) is w
            return QElem.from_int(backend, 1 if hit else 0)
        if rule == C_RULE_DEMAZURE:
            return QElem.from_int(backend, 1 if self.datum.demazure_product(word) is w else 0)
        if rule == C_RULE_GROUP:
            return QElem.from_int(backend, 1 if self.datum.element_by_word(word) is w else 0)
        if rule == C_RULE_HECKE:
            value = self.hecke_coefficients(word).get(w)
            return QElem.from_s(value) if value is not None else QElem.from_int(backend, 0)
        coeffs = self.expand_in_z_basis(word)
        return coeffs.get(w, QElem.from_int(backend, 0))

    # -- Leibniz coefficients ----------------------------------------------------

    # Case codes for position j relative to (E, F):
    _BOTH, _ONE, _NEITHER = 0, 1, 2

    def _leibniz_cases(self, k: int, E: Iterable[int], F: Iterable[int]) -> tuple[int, ...]:
        es, fs = set(E), set(F)
        for j in es | fs:
            if not 1 <= j <= k:
                raise ValueError(f"subset index {j} out of range 1..{k}")
        out = []
        for j in range(1, k + 1):
            in_e, in_f = j in es, j in fs
            if in_e and in_f:
                out.append(self._BOTH)
            elif in_e or in_f:
                out.append(self._ONE)
            else:
                out.append(self._NEITHER)
        return tuple(out)

    def _leibniz_eval(self, word: Word, cases: tuple[int, ...]) -> QElem:
        """(B_1 ... B_k) . 1 with B_j chosen by cases[j]; memoized on suffixes."""
        backend = self.backend
        if not cases:
            return QElem.from_int(backend, 1)
        key = (word, cases)
        cached = self._leibniz_cache.get(key)
        if cached is not None:
            return cached
        j = len(word) - len(cases)  # 0-based position of the first remaining letter
        tail = self._leibniz_eval(word, cases[1:])
        i = word[j]
        alpha = self.datum.simple_root(i)
        s_i = self.datum.simple_reflection(i)
        fam = self.family
        case = cases[0]
        reflected = weyl_act_q(backend, s_i, tail)
        if case == self._BOTH:
            value = fam.b_inv(alpha) * reflected
        elif case == self._ONE:
            value = -(fam.a(alpha) * fam.b_inv(alpha)) * reflected
        else:
            a = fam.a(alpha)
            value = a * tail + (a * a * fam.b_inv(alpha)) * reflected
        self._leibniz_cache[key] = value
        return value

    def leibniz_coefficient(self, word: Sequence[int], E: Iterable[int], F: Iterable[int]) -> QElem:
        word = tuple(word)
        cases = self._leibniz_cases(len(word), E, F)
        return self._leibniz_eval(word, cases)

    def billey_closed_form(self, word: Sequence[int], E: Iterable[int]) -> QElem:
        """(-1)^(k-|E|) prod_{j not in E} m_j prod_j n_j^{-1} with
        m_j = a(beta_j), n_j = b(beta_j) along the inversion roots beta_j."""
        word = tuple(word)
        k = len(word)
        es = set(E)
        for j in es:
            if not 1 <= j <= k:
                raise ValueError(f"subset index {j} out of range 1..{k}")
        betas = [
            self.datum.root_to_weight(beta)
            for beta in self.datum.inversion_roots_along(word)
        ]
        value = QElem.from_int(self.backend, (-1) ** (k - len(es)))
        for j in range(1, k + 1):
            if j not in es:
                value = value * self.family.a(betas[j - 1])
            value = value * self.family.b_inv(betas[j - 1])
        return value

    # -- subword tables (bitmask -> product data) ---------------------------------

    def subword_table(self, word: Sequence[int]) -> list:
        """Per bitmask over positions of ``word``: (element, is_reduced)."""
        word = tuple(word)
        cached = self._subword_cache.get(word)
        if cached is not None:
            return cached
        k = len(word)
        table = []
        for mask in range(1 << k):
            letters = tuple(word[j] for j in range(k) if mask >> j & 1)
            elem = self.datum.element_by_word(letters)
            table.append((letters, elem, elem.length == len(letters)))
        self._subword_cache[word] = table
        return table

    def c_supports(self, word: Sequence[int], w: WeylElement) -> list[tuple[frozenset, QElem]]:
        """All subsets E of positions with c_{word|E, I_w} nonzero, with the
        c value; positions are 1-based."""
        word = tuple(word)
        k = len(word)
        rule = self.family.c_rule
        out = []
        one_q = QElem.from_int(self.backend, 1)
        for mask, (letters, elem, reduced) in enumerate(self.subword_table(word)):
            if rule == C_RULE_REDUCED:
                if not (reduced and elem is w):
                    continue
                value = one_q
            elif rule == C_RULE_DEMAZURE:
                if self.datum.demazure_product(letters) is not w:
                    continue
                value = one_q
            elif rule == C_RULE_GROUP:
                if elem is not w:
                    continue
                value = one_q
            elif rule == C_RULE_HECKE:
                coeff = self.hecke_coefficients(letters).get(w)
                if coeff is None or coeff.is_zero():
                    continue
                value = QElem.from_s(coeff)
            else:
                coeff = self.expand_in_z_basis(letters).get(w)
                if coeff is None or coeff.is_zero():
                    continue
                value = coeff
            subset = frozenset(j + 1 for j in range(k) if mask >> j & 1)
            out.append((subset, value))
        return out

    # -- tau inverses ---------------------------------------------------------------

    def tau_inverse(self, w: WeylElement) -> QWElem:
        """(tau_w)^{-1} via the quadratic relation, along the reversed word."""
        if self.family.c_rule != C_RULE_HECKE:
            raise ValueError("tau_inverse is defined for the tau family")
        backend = self.backend
        out = QWElem.one(backend)
        q_inv = QElem.from_s(v_var(backend, -2))
        qm1 = QElem.from_s(q_of(backend) - one(backend))
        for i in reversed(self.words[w]):
            single = self.simple_element(i)
            inv = q_inv * (single - QWElem.delta(backend, self.datum.identity, qm1))
            out = out * inv
        return out

    # -- relations -----------------------------------------------------------------

    def verify_relations(self) -> list[dict]:
        """Quadratic + braid relation report; entries are dicts with keys
        name, passed, detail."""
        backend = self.backend
        datum = self.datum
        report: list[dict] = []
        quad = self.family.quadratic
        for i in range(1, datum.rank + 1):
            z = self.simple_element(i)
            zz = z * z
            alpha = datum.simple_root(i)
            if quad == "kappa":
                residual = zz - QWElem.delta(backend, datum.identity, kappa(backend, alpha)) * z
                name = f"Z_{i}^2 = kappa_{i} Z_{i}"
            elif quad == "involution":
                residual = zz - QWElem.one(backend)
                name = f"Z_{i}^2 = 1"
            elif quad == "hecke":
                qq = QElem.from_s(q_of(backend))
                qm1 = QElem.from_s(q_of(backend) - one(backend))
                residual = zz - qm1 * z - qq * QWElem.one(backend)
                name = f"Z_{i}^2 = (q-1) Z_{i} + q"
            else:
                # Custom family: solve Z^2 = c1 Z + c0 on the delta basis and
                # report the resulting coefficients.
                s_i = datum.simple_reflection(i)
                c1 = zz.coeff(s_i) * self.family.b_inv(alpha)
                c0 = zz.coeff(datum.identity) - c1 * self.family.a(alpha)
                residual = zz - c1 * z - c0 * QWElem.one(backend)
                from .serialize import qelem_to_str

                name = f"Z_{i}^2 = ({qelem_to_str(c1)}) Z_{i} + ({qelem_to_str(c0)})"
            report.append(_relation_entry(name, residual))
        for i in range(1, datum.rank + 1):
            for j in range(i + 1, datum.rank + 1):
                m = _bond_order(datum.cartan[i - 1][j - 1] * datum.cartan[j - 1][i - 1])
                lhs = QWElem.one(backend)
                rhs = QWElem.one(backend)
                for t in range(m):
                    lhs = lhs * self.simple_element(i if t % 2 == 0 else j)
                    rhs = rhs * self.simple_element(j if t % 2 == 0 else i)
                report.append(
                    _relation_entry(f"braid({i},{j}) of order {m}", lhs - rhs)
                )
        return report


def _bond_order(product: int) -> int:
    return {0: 2, 1: 3, 2: 4, 3: 6}[product]


def _relation_entry(name: str, residual: QWElem) -> dict:
    passed = residual.is_zero()
    entry = {"name": name, "passed": passed}
    if not passed:  # pragma: no cover - exercised only by broken families
        entry["detail"] = repr(residual)
    return entry


# ---------------------------------------------------------------------------
# Module-level wrappers with the operation names used across the package
# ---------------------------------------------------------------------------


def operator_element(algebra: Algebra, i: int) -> QWElem:
    return algebra.simple_element(i)


def compose_word(algebra: Algebra, word: Sequence[int]) -> QWElem:
    return algebra.compose_word(word)


def delta_in_Z(algebra: Algebra, w: WeylElement) -> dict[WeylElement, QElem]:
    return algebra.delta_in_z(w)


def Z_in_delta(algebra: Algebra, word: Sequence[int]) -> dict[WeylElement, QElem]:
    return algebra.a_coefficients(word)


def expand_in_Z_basis(algebra: Algebra, word: Sequence[int]) -> dict[WeylElement, QElem]:
    return algebra.expand_in_z_basis(word)


def leibniz_coefficient(algebra: Algebra, word, E, F) -> QElem:
    return algebra.leibniz_coefficient(word, E, F)


def billey_closed_form(algebra: Algebra, word, E) -> QElem:
    return algebra.billey_closed_form(word, E)


def tau_inverse(algebra: Algebra, w: WeylElement) -> QWElem:
    return algebra.tau_inverse(w)


def verify_relations(algebra: Algebra) -> list[dict]:
    return algebra.verify_relations()
