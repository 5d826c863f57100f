"""Root data and Weyl group combinatorics.

Conventions
-----------
* A Cartan matrix ``A`` has entries ``A[i][j] = <alpha_j, alpha_i^vee>``
  (0-based internally; the public API uses 1-based simple-root indices).
* The simple reflection acts by ``s_i(lam) = lam - <lam, alpha_i^vee> alpha_i``.
* Words multiply left to right: the word ``(i_1, ..., i_k)`` denotes
  ``s_{i_1} s_{i_2} ... s_{i_k}``, acting on weights by
  ``w(lam) = s_{i_1}(s_{i_2}(... s_{i_k}(lam)))``.
* Two weight lattices are supported:

  - ``"simply-connected"``: basis = fundamental weights, so the simple root
    ``alpha_j`` has coordinates equal to the j-th column of the Cartan
    matrix and ``s_i(lam) = lam - lam_i * alpha_i``.
  - ``"adjoint"``: basis = simple roots.

* Roots are also tracked in *root coordinates* (integer combinations of the
  simple roots); this description is shared by both lattices and is used to
  canonicalize Weyl group elements.

Only finite (spherical) types are allowed; a Cartan matrix is accepted
exactly when all of its principal minors are positive, and rejected with the
first offending principal submatrix otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Word = tuple[int, ...]
Weight = tuple[int, ...]
RootVector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

SIMPLY_CONNECTED = "simply-connected"
ADJOINT = "adjoint"
LATTICES = (SIMPLY_CONNECTED, ADJOINT)

DEFAULT_MAX_RANK = 5
DEFAULT_MAX_ORDER = 1920


# ---------------------------------------------------------------------------
# Cartan matrices
# ---------------------------------------------------------------------------


def named_cartan_matrix(label: str) -> list[list[int]]:
    """Return the Cartan matrix for a standard type label such as ``"A2"``.

    >>> named_cartan_matrix("B2")
    [[2, -1], [-2, 2]]
    """
    label = label.strip()
    if len(label) < 2 or label[0].upper() not in "ABCDFG" or not label[1:].isdigit():
        raise ValueError(f"unrecognized type label {label!r}")
    kind, n = label[0].upper(), int(label[1:])
    if n < 1:
        raise ValueError(f"rank must be positive, got {label!r}")

    def chain(size: int) -> list[list[int]]:
        mat = [[0] * size for _ in range(size)]
        for i in range(size):
            mat[i][i] = 2
            if i + 1 < size:
                mat[i][i + 1] = -1
                mat[i + 1][i] = -1
        return mat

    if kind == "A":
        return chain(n)
    if kind == "B":
        if n < 2:
            raise ValueError("type B requires rank >= 2")
        mat = chain(n)
        mat[n - 1][n - 2] = -2  # alpha_n is the short root
        return mat
    if kind == "C":
        if n < 2:
            raise ValueError("type C requires rank >= 2")
        mat = chain(n)
        mat[n - 2][n - 1] = -2  # alpha_n is the long root
        return mat
    if kind == "D":
        if n < 4:
            raise ValueError("type D requires rank >= 4")
        mat = chain(n - 1)
        for row in mat:
            row.append(0)
        mat.append([0] * n)
        mat[n - 1][n - 1] = 2
        mat[n - 3][n - 1] = -1
        mat[n - 1][n - 3] = -1
        mat[n - 2][n - 1] = 0
        mat[n - 1][n - 2] = 0
        return mat
    if kind == "F":
        if n != 4:
            raise ValueError("type F requires rank 4")
        return [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    if kind == "G":
        if n != 2:
            raise ValueError("type G requires rank 2")
        return [[2, -1], [-3, 2]]
    raise ValueError(f"unrecognized type label {label!r}")


def _principal_minor(mat: Sequence[Sequence[int]], rows: Sequence[int]) -> Fraction:
    """Determinant of the principal submatrix on the given row/column set."""
    sub = [[Fraction(mat[r][c]) for c in rows] for r in rows]
    n = len(sub)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if sub[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            sub[col], sub[pivot] = sub[pivot], sub[col]
            det = -det
        det *= sub[col][col]
        for r in range(col + 1, n):
            factor = sub[r][col] / sub[col][col]
            if factor:
                for c in range(col, n):
                    sub[r][c] -= factor * sub[col][c]
    return det


def validate_cartan_matrix(mat: Sequence[Sequence[int]]) -> None:
    """Check shape, integrality, sign pattern, and finite type.

    Raises ``ValueError`` describing the first violated condition; for a
    non-finite matrix the message names an offending principal submatrix.
    """
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("Cartan matrix must be square and non-empty")
    for i in range(n):
        for j in range(n):
            entry = mat[i][j]
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise ValueError(f"Cartan entry ({i + 1},{j + 1}) must be an integer")
            if i == j and entry != 2:
                raise ValueError(f"Cartan diagonal entry ({i + 1},{i + 1}) must be 2")
            if i != j and entry > 0:
                raise ValueError(f"Cartan off-diagonal entry ({i + 1},{j + 1}) must be <= 0")
    for i in range(n):
        for j in range(n):
            if i != j and (mat[i][j] == 0) != (mat[j][i] == 0):
                raise ValueError(
                    f"Cartan entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) "
                    "must vanish together"
                )
    for size in range(1, n + 1):
        for rows in itertools.combinations(range(n), size):
            if _principal_minor(mat, rows) <= 0:
                labels = ", ".join(str(r + 1) for r in rows)
                raise ValueError(
                    "Cartan matrix is not of finite type: principal submatrix on "
                    f"rows/columns {{{labels}}} has non-positive determinant"
                )


def coxeter_exponent(a_ij: int, a_ji: int) -> int:
    """Order m of s_i s_j determined by the Cartan entries."""
    product = a_ij * a_ji
    try:
        return {0: 2, 1: 3, 2: 4, 3: 6}[product]
    except KeyError:  # pragma: no cover - excluded by the finite-type check
        raise ValueError(f"no finite Coxeter bond for a_ij*a_ji = {product}")


# ---------------------------------------------------------------------------
# Weyl group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, identified by its action on root coordinates.

    ``word`` is the canonical reduced word: minimal length, then
    lexicographically smallest.
    """

    word: Word
    root_matrix: Matrix

    @property
    def length(self) -> int:
        return len(self.word)

    def sort_key(self) -> tuple[int, Word]:
        return (len(self.word), self.word)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"W[{''.join(map(str, self.word)) or 'e'}]"


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt) for ra in a
    )


def _mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


class RootDatum:
    """A finite root datum: Cartan matrix, lattice choice, and Weyl group.

    Construct via :func:`build_root_datum`.
    """

    def __init__(
        self,
        cartan: Sequence[Sequence[int]],
        lattice: str = SIMPLY_CONNECTED,
        label: str | None = None,
        max_rank: int = DEFAULT_MAX_RANK,
        max_order: int = DEFAULT_MAX_ORDER,
    ) -> None:
        validate_cartan_matrix(cartan)
        if lattice not in LATTICES:
            raise ValueError(f"lattice must be one of {LATTICES}, got {lattice!r}")
        n = len(cartan)
        if n > max_rank:
            raise ValueError(f"rank {n} exceeds the cap {max_rank}")
        self.cartan: Matrix = tuple(tuple(int(x) for x in row) for row in cartan)
        self.rank = n
        self.lattice = lattice
        self.label = label
        self.max_order = max_order

        # Simple reflections on root coordinates: row i is replaced.
        self._root_refl: dict[int, Matrix] = {}
        # Simple reflections on lattice coordinates.
        self._lat_refl: dict[int, Matrix] = {}
        for i in range(n):
            root_rows = [[int(r == c) for c in range(n)] for r in range(n)]
            for j in range(n):
                root_rows[i][j] -= self.cartan[i][j]
            self._root_refl[i + 1] = tuple(tuple(r) for r in root_rows)
            if lattice == ADJOINT:
                self._lat_refl[i + 1] = self._root_refl[i + 1]
            else:
                lat_rows = [[int(r == c) for c in range(n)] for r in range(n)]
                for r in range(n):
                    lat_rows[r][i] -= self.cartan[r][i]
                self._lat_refl[i + 1] = tuple(tuple(r) for r in lat_rows)

        self._enumerate_weyl_group()
        self._positive_roots = self._enumerate_positive_roots()
        if len(self._positive_roots) != self.longest_element.length:
            raise AssertionError("positive root count does not match longest length")
        self._all_words_cache: dict[Word, tuple[Word, ...]] = {}
        self._bruhat_cache: dict[tuple[Word, Word], bool] = {}
        self._inverse_cache: dict[Word, WeylElement] = {}
        self._lattice_matrix_cache: dict[Word, Matrix] = {}

    # -- construction ------------------------------------------------------

    def _enumerate_weyl_group(self) -> None:
        n = self.rank
        identity = WeylElement((), _identity(n))
        by_matrix: dict[Matrix, WeylElement] = {identity.root_matrix: identity}
        by_word: dict[Word, WeylElement] = {(): identity}
        level = [identity]
        while level:
            next_level: list[WeylElement] = []
            for w in sorted(level, key=lambda e: e.word):
                for i in range(1, n + 1):
                    mat = _mat_mul(w.root_matrix, self._root_refl[i])
                    if mat not in by_matrix:
                        elem = WeylElement(w.word + (i,), mat)
                        by_matrix[mat] = elem
                        by_word[elem.word] = elem
                        next_level.append(elem)
                        if len(by_matrix) > self.max_order:
                            raise ValueError(
                                f"Weyl group order exceeds the cap {self.max_order}"
                            )
            level = next_level
        self._by_matrix = by_matrix
        self._by_word = by_word
        self._elements = sorted(by_matrix.values(), key=WeylElement.sort_key)
        self.identity = identity
        self.longest_element = max(self._elements, key=lambda e: e.length)
        if sum(1 for e in self._elements if e.length == self.longest_element.length) != 1:
            raise AssertionError("longest element is not unique")

    def _enumerate_positive_roots(self) -> tuple[RootVector, ...]:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        roots: set[RootVector] = set(simple)
        frontier = list(simple)
        while frontier:
            new: list[RootVector] = []
            for beta in frontier:
                for i in range(1, n + 1):
                    img = _mat_vec(self._root_refl[i], beta)
                    if img not in roots and all(c >= 0 for c in img):
                        roots.add(img)
                        new.append(img)
            frontier = new
        return tuple(sorted(roots, key=lambda r: (sum(r), r)))

    # -- basic group operations --------------------------------------------

    @property
    def elements(self) -> tuple[WeylElement, ...]:
        return tuple(self._elements)

    @property
    def order(self) -> int:
        return len(self._elements)

    @property
    def positive_roots(self) -> tuple[RootVector, ...]:
        return self._positive_roots

    def simple_reflection(self, i: int) -> WeylElement:
        if not 1 <= i <= self.rank:
            raise ValueError(f"simple reflection index {i} out of range 1..{self.rank}")
        return self._by_matrix[self._root_refl[i]]

    def element_by_matrix(self, mat: Matrix) -> WeylElement:
        return self._by_matrix[mat]

    def element_by_word(self, word: Iterable[int]) -> WeylElement:
        """The element represented by an arbitrary (not necessarily reduced) word."""
        mat = _identity(self.rank)
        for i in word:
            if not 1 <= i <= self.rank:
                raise ValueError(f"word letter {i} out of range 1..{self.rank}")
            mat = _mat_mul(mat, self._root_refl[i])
        return self._by_matrix[mat]

    def multiply(self, u: WeylElement, v: WeylElement) -> WeylElement:
        return self._by_matrix[_mat_mul(u.root_matrix, v.root_matrix)]

    def multiply_simple(self, w: WeylElement, i: int, side: str = "right") -> WeylElement:
        if side == "right":
            return self._by_matrix[_mat_mul(w.root_matrix, self._root_refl[i])]
        return self._by_matrix[_mat_mul(self._root_refl[i], w.root_matrix)]

    def inverse(self, w: WeylElement) -> WeylElement:
        cached = self._inverse_cache.get(w.word)
        if cached is None:
            cached = self.element_by_word(tuple(reversed(w.word)))
            self._inverse_cache[w.word] = cached
        return cached

    # -- descents, Bruhat order, Demazure product ---------------------------

    def root_action(self, w: WeylElement, beta: Sequence[int]) -> RootVector:
        """Apply ``w`` to a vector in root coordinates."""
        return _mat_vec(w.root_matrix, beta)

    def has_right_descent(self, w: WeylElement, i: int) -> bool:
        # w s_i < w  iff  w(alpha_i) is a negative root.
        column = tuple(row[i - 1] for row in w.root_matrix)
        return all(c <= 0 for c in column)

    def has_left_descent(self, w: WeylElement, i: int) -> bool:
        return self.has_right_descent(self.inverse(w), i)

    def right_descents(self, w: WeylElement) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.rank + 1) if self.has_right_descent(w, i))

    def left_descents(self, w: WeylElement) -> tuple[int, ...]:
        inv = self.inverse(w)
        return tuple(i for i in range(1, self.rank + 1) if self.has_right_descent(inv, i))

    def demazure_product(self, word: Iterable[int]) -> WeylElement:
        """Fold the word with w * s_i := w s_i when that goes up, else w."""
        w = self.identity
        for i in word:
            if not 1 <= i <= self.rank:
                raise ValueError(f"word letter {i} out of range 1..{self.rank}")
            if not self.has_right_descent(w, i):
                w = self.multiply_simple(w, i)
        return w

    def bruhat_leq(self, u: WeylElement, w: WeylElement) -> bool:
        """Bruhat order, via the left-descent recursion."""
        key = (u.word, w.word)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        if u.length == 0:
            result = True
        elif u.length > w.length:
            result = False
        else:
            i = w.word[0]
            sw = self.multiply_simple(w, i, side="left")
            su = self.multiply_simple(u, i, side="left")
            if su.length < u.length:
                result = self.bruhat_leq(su, sw)
            else:
                result = self.bruhat_leq(u, sw)
        self._bruhat_cache[key] = result
        return result

    def bruhat_interval_below(self, w: WeylElement) -> tuple[WeylElement, ...]:
        return tuple(u for u in self._elements if self.bruhat_leq(u, w))

    def all_reduced_words(self, w: WeylElement) -> tuple[Word, ...]:
        cached = self._all_words_cache.get(w.word)
        if cached is not None:
            return cached
        if w.length == 0:
            result: tuple[Word, ...] = ((),)
        else:
            collected: list[Word] = []
            for i in self.left_descents(w):
                rest = self.multiply_simple(w, i, side="left")
                collected.extend((i,) + tail for tail in self.all_reduced_words(rest))
            result = tuple(sorted(collected))
        self._all_words_cache[w.word] = result
        return result

    def is_reduced(self, word: Sequence[int]) -> bool:
        return self.element_by_word(word).length == len(word)

    # -- lattice action ------------------------------------------------------

    def lattice_matrix(self, w: WeylElement) -> Matrix:
        cached = self._lattice_matrix_cache.get(w.word)
        if cached is None:
            cached = _identity(self.rank)
            for i in w.word:
                cached = _mat_mul(cached, self._lat_refl[i])
            self._lattice_matrix_cache[w.word] = cached
        return cached

    def apply(self, w: WeylElement, weight: Sequence[int]) -> Weight:
        """Apply ``w`` to a weight given in the chosen lattice basis."""
        if len(weight) != self.rank:
            raise ValueError(f"weight must have {self.rank} coordinates")
        return _mat_vec(self.lattice_matrix(w), weight)

    def simple_root(self, j: int) -> Weight:
        """Lattice coordinates of ``alpha_j``."""
        if not 1 <= j <= self.rank:
            raise ValueError(f"simple root index {j} out of range 1..{self.rank}")
        if self.lattice == ADJOINT:
            return tuple(int(j - 1 == c) for c in range(self.rank))
        return tuple(self.cartan[r][j - 1] for r in range(self.rank))

    def root_to_weight(self, beta: Sequence[int]) -> Weight:
        """Lattice coordinates of a vector given in root coordinates."""
        if self.lattice == ADJOINT:
            return tuple(int(c) for c in beta)
        return tuple(
            sum(self.cartan[r][j] * beta[j] for j in range(self.rank))
            for r in range(self.rank)
        )

    def inversion_roots_along(self, word: Sequence[int]) -> tuple[RootVector, ...]:
        """Roots ``beta_j = s_{i_1} ... s_{i_{j-1}}(alpha_{i_j})`` along a word.

        For a reduced word these are the (distinct, positive) inversions of
        the inverse element; for a general word signs may repeat.
        """
        mat = _identity(self.rank)
        out: list[RootVector] = []
        for i in word:
            alpha = tuple(int(i - 1 == c) for c in range(self.rank))
            out.append(_mat_vec(mat, alpha))
            mat = _mat_mul(mat, self._root_refl[i])
        return tuple(out)

    def inversions(self, w: WeylElement) -> tuple[RootVector, ...]:
        """Positive roots sent to negative roots by ``w``."""
        out = []
        for beta in self._positive_roots:
            img = _mat_vec(w.root_matrix, beta)
            if all(c <= 0 for c in img):
                out.append(beta)
        return tuple(out)

    # -- parabolic structure -------------------------------------------------

    def _check_parabolic(self, subset: Iterable[int]) -> tuple[int, ...]:
        J = tuple(sorted(set(subset)))
        for j in J:
            if not 1 <= j <= self.rank:
                raise ValueError(f"parabolic index {j} out of range 1..{self.rank}")
        return J

    def parabolic_elements(self, subset: Iterable[int]) -> tuple[WeylElement, ...]:
        """Elements of the standard parabolic subgroup W_J."""
        J = set(self._check_parabolic(subset))
        return tuple(w for w in self._elements if set(w.word) <= J)

    def min_coset_reps(self, subset: Iterable[int]) -> tuple[WeylElement, ...]:
        """Minimal-length representatives of the cosets w W_J."""
        J = self._check_parabolic(subset)
        return tuple(
            w
            for w in self._elements
            if not any(self.has_right_descent(w, j) for j in J)
        )

    def coset_factorization(
        self, w: WeylElement, subset: Iterable[int]
    ) -> tuple[WeylElement, WeylElement]:
        """Unique factorization w = u v with u in W^J and v in W_J."""
        J = self._check_parabolic(subset)
        v_word_rev: list[int] = []
        cur = w
        while True:
            j = next((j for j in J if self.has_right_descent(cur, j)), None)
            if j is None:
                break
            v_word_rev.append(j)
            cur = self.multiply_simple(cur, j)
        v = self.element_by_word(tuple(reversed(v_word_rev)))
        return cur, v

    def j_compatible_words(self, subset: Iterable[int]) -> dict[WeylElement, Word]:
        """Reduced words ``I_w = I_u + I_v`` along the W^J x W_J factorization."""
        J = self._check_parabolic(subset)
        out: dict[WeylElement, Word] = {}
        for w in self._elements:
            u, v = self.coset_factorization(w, J)
            word = u.word + v.word
            if self.element_by_word(word) is not w or len(word) != w.length:
                raise AssertionError("coset factorization produced a bad word")
            out[w] = word
        return out


# ---------------------------------------------------------------------------
# Public, module-level operations
# ---------------------------------------------------------------------------


def build_root_datum(
    spec: str | Mapping,
    lattice: str | None = None,
    max_rank: int = DEFAULT_MAX_RANK,
    max_order: int = DEFAULT_MAX_ORDER,
) -> RootDatum:
    """Build a root datum from a type label or an explicit description.

    ``spec`` is either a label like ``"A2"`` or a mapping with keys
    ``"cartan"`` (list of rows) and optionally ``"lattice"``.

    >>> d = build_root_datum("A2")
    >>> d.order, len(d.positive_roots)
    (6, 3)
    """
    if isinstance(spec, str):
        cartan = named_cartan_matrix(spec)
        label = spec.strip().upper()
        chosen = lattice or SIMPLY_CONNECTED
    elif isinstance(spec, Mapping):
        if "cartan" not in spec:
            raise ValueError("explicit datum requires a 'cartan' key")
        cartan = [list(row) for row in spec["cartan"]]
        label = spec.get("label")
        chosen = lattice or spec.get("lattice", SIMPLY_CONNECTED)
    else:
        raise ValueError(f"cannot build a root datum from {type(spec).__name__}")
    return RootDatum(cartan, lattice=chosen, label=label, max_rank=max_rank, max_order=max_order)


def weyl_elements(datum: RootDatum) -> tuple[WeylElement, ...]:
    """All Weyl group elements, sorted by (length, word)."""
    return datum.elements


def reduced_word(datum: RootDatum, w: WeylElement) -> Word:
    """The canonical ((length, lex)-minimal) reduced word of ``w``."""
    return w.word


def all_reduced_words(datum: RootDatum, w: WeylElement) -> tuple[Word, ...]:
    return datum.all_reduced_words(w)


def demazure_product(datum: RootDatum, word: Sequence[int]) -> WeylElement:
    return datum.demazure_product(word)


def bruhat_leq(datum: RootDatum, u: WeylElement, w: WeylElement) -> bool:
    return datum.bruhat_leq(u, w)


def weyl_action(datum: RootDatum, w: WeylElement, weight: Sequence[int]) -> Weight:
    return datum.apply(w, weight)


def min_coset_reps(datum: RootDatum, subset: Iterable[int]) -> tuple[WeylElement, ...]:
    return datum.min_coset_reps(subset)


def j_compatible_words(datum: RootDatum, subset: Iterable[int]) -> dict[WeylElement, Word]:
    return datum.j_compatible_words(subset)
