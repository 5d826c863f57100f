"""The formal group algebra S and its localization Q.

Every computation happens over a coefficient ring S attached to a root
datum and a one-dimensional formal group law:

  * additive law        x_{lam+mu} = x_lam + x_mu           (S = Sym, with h)
  * multiplicative law  x_{lam+mu} = x_lam + x_mu - x_lam x_mu
                        realized through group-like monomials e^lam (with v)

Arithmetic is exact: integer coefficients, no floats anywhere.  The
localization Q keeps denominators as symbolic factors (x_root(alpha),
one_plus_root(alpha), hat(alpha), ...) so cancellation is exact too.

Run:  python3 demos/02_formal_group_backends.py
"""

from demazure.formal import (
    ADDITIVE,
    MULTIPLICATIVE,
    Backend,
    FactorSymbol,
    QElem,
    e_mono,
    h_var,
    kappa_pair,
    q_equal,
    v_var,
    x_class,
)
from demazure.rootdata import build_root_datum
from demazure.serialize import qelem_to_str, selem_to_str

a2 = build_root_datum("A2")
alpha1 = a2.simple_root(1)
alpha2 = a2.simple_root(2)

# ---------------------------------------------------------------------------
# Additive backend: x_lam is linear in lam, plus a formal parameter h
# ---------------------------------------------------------------------------

add = Backend(a2, ADDITIVE)
x1 = x_class(add, alpha1)
x2 = x_class(add, alpha2)
print("additive x_alpha1            :", selem_to_str(x1))
print("additive x_(alpha1 + alpha2) :",
      selem_to_str(x_class(add, tuple(a + b for a, b in zip(alpha1, alpha2)))))
print("          ... equals x1 + x2 :",
      x_class(add, tuple(a + b for a, b in zip(alpha1, alpha2))) == x1 + x2)
print("the deformation parameter h  :", selem_to_str(h_var(add)))

# ---------------------------------------------------------------------------
# Multiplicative backend: x_lam = 1 - e^{-lam}, with group-likes e^lam
# ---------------------------------------------------------------------------

mul = Backend(a2, MULTIPLICATIVE)
y1 = x_class(mul, alpha1)
y2 = x_class(mul, alpha2)
sum_root = tuple(a + b for a, b in zip(alpha1, alpha2))
print("\nmultiplicative x_alpha1      :", selem_to_str(y1))
print("x_(alpha1+alpha2)            :", selem_to_str(x_class(mul, sum_root)))
print("   == x1 + x2 - x1*x2        :",
      x_class(mul, sum_root) == y1 + y2 - y1 * y2)
print("e^alpha1 * e^(-alpha1) = 1   :",
      e_mono(mul, alpha1) * e_mono(mul, tuple(-c for c in alpha1))
      == e_mono(mul, (0, 0)))

# ---------------------------------------------------------------------------
# The kappa class of a bond: zero for both laws when the bond order is 3
# ---------------------------------------------------------------------------

print("\nkappa_12 additive       :", selem_to_str(kappa_pair(add, 1, 2)))
print("kappa_12 multiplicative :", selem_to_str(kappa_pair(mul, 1, 2)))
b2 = build_root_datum("B2")
try:
    kappa_pair(Backend(b2, ADDITIVE), 1, 2)
except ValueError as exc:
    print("on B2 the bond has order 4, so kappa_pair refuses:", exc)

# ---------------------------------------------------------------------------
# Localization: denominators stay symbolic, equality is cross-multiplied
# ---------------------------------------------------------------------------

frac = QElem(x2, [FactorSymbol("x_root", alpha1)])
print("\na localized element          :", qelem_to_str(frac))
print("x_alpha1 / x_root(alpha1)    :",
      qelem_to_str(QElem(x1, [FactorSymbol("x_root", alpha1)])),
      "(cancelled on construction)")

lhs = frac + QElem.from_int(add, 1)
rhs = QElem(x2 + x1, [FactorSymbol("x_root", alpha1)])
print("x2/x1 + 1 == (x2 + x1)/x1    :", q_equal(lhs, rhs))

# the multiplicative unit v = e^0 ... v^k tracks the Lusztig parameter
print("\nmultiplicative parameter v   :", selem_to_str(v_var(mul)))
