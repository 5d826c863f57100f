"""Root data and Weyl groups.

A root datum is described by its Cartan matrix and a lattice choice; the
simply-connected lattice uses the fundamental weights as coordinates, so
the j-th simple root is the j-th *column* of the Cartan matrix.  Weyl
group elements are stored with a canonical (lexicographically minimal)
reduced word, and the library enumerates reduced words, Bruhat order, and
minimal coset representatives exactly.

Run:  python3 demos/01_root_data_and_weyl_groups.py
"""

from demazure.rootdata import build_root_datum
from demazure.serialize import word_to_str

# ---------------------------------------------------------------------------
# Named data and explicit Cartan matrices build the same objects
# ---------------------------------------------------------------------------

a2 = build_root_datum("A2")
b2 = build_root_datum({"cartan": [[2, -2], [-1, 2]], "label": "B2"})

print("A2 Cartan matrix:", a2.cartan)
print("A2 simple roots (fundamental-weight coordinates):",
      a2.simple_root(1), a2.simple_root(2))

# ---------------------------------------------------------------------------
# The Weyl group, its reduced words, and the Bruhat order
# ---------------------------------------------------------------------------

print("\nA2 Weyl group has", len(a2.elements), "elements:")
for w in sorted(a2.elements, key=lambda e: e.sort_key()):
    words = a2.all_reduced_words(w)
    print(f"  {word_to_str(w.word) or 'e':>4}  length {w.length}  "
          f"reduced words: {[word_to_str(word) for word in words]}")

w0 = a2.longest_element
s1 = a2.element_by_word((1,))
s121 = a2.element_by_word((1, 2, 1))
print("\nlongest element:", word_to_str(w0.word))
print("s1 <= w0 in Bruhat order:", a2.bruhat_leq(s1, w0))
print("the word (1,2,1) and the word (2,1,2) name the same element:",
      s121 is a2.element_by_word((2, 1, 2)))

# ---------------------------------------------------------------------------
# Demazure product: like multiplication, but never goes down
# ---------------------------------------------------------------------------

print("\nordinary product  s1 * s1 =",
      word_to_str(a2.multiply(s1, s1).word) or "e")
print("Demazure product of the word (1, 1):",
      word_to_str(a2.demazure_product((1, 1)).word) or "e")

# ---------------------------------------------------------------------------
# Positive roots and inversion sets drive every localization formula
# ---------------------------------------------------------------------------

print("\nB2 positive roots (root coordinates):", b2.positive_roots)
print("B2 inversions along the word (1,2,1):",
      [b2.root_to_weight(beta) for beta in b2.inversion_roots_along((1, 2, 1))])

# ---------------------------------------------------------------------------
# Parabolic pieces: minimal coset representatives and compatible words
# ---------------------------------------------------------------------------

reps = a2.min_coset_reps((1,))
print("\nminimal representatives of W / W_{1}:",
      [word_to_str(w.word) or "e" for w in reps])
jwords = a2.j_compatible_words((1,))
print("J-compatible reduced words (coset representative first, J-part last):")
for w, word in sorted(jwords.items(), key=lambda kv: kv[0].sort_key()):
    print(f"  {word_to_str(w.word) or 'e':>4}  ->  {word_to_str(word) or 'e'}")
