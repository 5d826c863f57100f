"""Canonical text and JSON forms for every value the package exchanges.

Formats (all deterministic, round-tripping byte-identically):

* words: digit strings, ``"121"`` for s1 s2 s1, ``""`` for the identity;
  comma-separated (``"1,2,1"``) accepted everywhere and required once an
  index reaches 10;
* S elements: ``c * t1^a1 ... tn^an h^k`` terms (additive) or
  ``c * E(m1,...,mn) v^k`` terms (multiplicative), joined by `` + `` with the
  sign carried by the coefficient, terms in sorted exponent order;
* Q elements: ``{"num": <selem str>, "den": [{"kind": ..., "root": [...]}]}``;
* Q_W elements: a map from word string to Q element;
* root data: ``{"cartan": [[...]], "lattice": "simply-connected"}``;
* structure tables: arrays of ``{u, v, w, family, backend, value}`` records
  sorted by (u, v, w); discrepancy lists of ``{location, formula, oracle}``.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .formal import (
    ADDITIVE,
    FACTOR_KINDS,
    Backend,
    FactorSymbol,
    QElem,
    SElem,
)
from .rootdata import RootDatum, Word, build_root_datum


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


def word_to_str(word: Sequence[int]) -> str:
    word = tuple(word)
    if any(i >= 10 for i in word):
        return ",".join(str(i) for i in word)
    return "".join(str(i) for i in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text or text in ("e", '""'):
        return ()
    if "," in text:
        parts = [p.strip() for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    try:
        word = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"cannot parse word {text!r}") from exc
    if any(i < 1 for i in word):
        raise ValueError(f"word indices must be >= 1, got {text!r}")
    return word


# ---------------------------------------------------------------------------
# S elements
# ---------------------------------------------------------------------------


def selem_to_str(p: SElem) -> str:
    if p.is_zero():
        return "0"
    backend = p.backend
    rank = backend.datum.rank
    additive = backend.law == ADDITIVE
    chunks = []
    for exps, coeff in sorted(p.terms.items()):
        parts = []
        if additive:
            for i in range(rank):
                if exps[i] == 1:
                    parts.append(f"t{i + 1}")
                elif exps[i]:
                    parts.append(f"t{i + 1}^{exps[i]}")
            if exps[rank] == 1:
                parts.append("h")
            elif exps[rank]:
                parts.append(f"h^{exps[rank]}")
        else:
            if any(exps[:rank]):
                parts.append("E(" + ",".join(str(m) for m in exps[:rank]) + ")")
            if exps[rank] == 1:
                parts.append("v")
            elif exps[rank]:
                parts.append(f"v^{exps[rank]}")
        if parts:
            chunks.append(f"{coeff} * " + " ".join(parts))
        else:
            chunks.append(str(coeff))
    return " + ".join(chunks)


def parse_selem(backend: Backend, text: str) -> SElem:
    text = text.strip()
    rank = backend.datum.rank
    additive = backend.law == ADDITIVE
    terms: dict[tuple[int, ...], int] = {}
    if text == "0":
        return SElem(backend, {})
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if " * " in chunk:
            coeff_text, rest = chunk.split(" * ", 1)
            factors = rest.split()
        else:
            coeff_text, factors = chunk, []
        coeff = int(coeff_text)
        exps = [0] * (rank + 1)
        for token in factors:
            if additive:
                if token == "h":
                    exps[rank] += 1
                elif token.startswith("h^"):
                    exps[rank] += int(token[2:])
                elif token.startswith("t"):
                    name, _, power = token.partition("^")
                    exps[int(name[1:]) - 1] += int(power) if power else 1
                else:
                    raise ValueError(f"bad additive factor {token!r}")
            else:
                if token == "v":
                    exps[rank] += 1
                elif token.startswith("v^"):
                    exps[rank] += int(token[2:])
                elif token.startswith("E(") and token.endswith(")"):
                    values = [int(x) for x in token[2:-1].split(",")]
                    if len(values) != rank:
                        raise ValueError(f"E vector length {len(values)} != rank {rank}")
                    for i, m in enumerate(values):
                        exps[i] += m
                else:
                    raise ValueError(f"bad multiplicative factor {token!r}")
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return SElem(backend, terms)


# ---------------------------------------------------------------------------
# Factor symbols and Q elements
# ---------------------------------------------------------------------------


def factor_to_json(factor: FactorSymbol) -> dict:
    return {"kind": factor.kind, "root": list(factor.root)}


def parse_factor(obj: Mapping) -> FactorSymbol:
    kind = obj["kind"]
    if kind not in FACTOR_KINDS:
        raise ValueError(f"unknown factor kind {kind!r}")
    return FactorSymbol(kind, tuple(int(c) for c in obj["root"]))


def factor_to_str(factor: FactorSymbol) -> str:
    return f"{factor.kind}({','.join(str(c) for c in factor.root)})"


def qelem_to_json(p: QElem) -> dict:
    return {
        "num": selem_to_str(p.num),
        "den": [factor_to_json(f) for f in p.den],
    }


def parse_qelem(backend: Backend, obj: Mapping) -> QElem:
    num = parse_selem(backend, obj["num"])
    den = [parse_factor(f) for f in obj.get("den", ())]
    return QElem(num, den)


def qelem_to_str(p: QElem) -> str:
    num = selem_to_str(p.num)
    if not p.den:
        return num
    den = " * ".join(factor_to_str(f) for f in p.den)
    return f"({num}) / ({den})"


def qwelem_to_json(z) -> dict:
    return {
        word_to_str(w.word): qelem_to_json(c)
        for w, c in sorted(z.coeffs.items(), key=lambda kv: kv[0].sort_key())
    }


def parse_qwelem(backend: Backend, obj: Mapping):
    from .twisted import QWElem

    datum = backend.datum
    coeffs = {
        datum.element_by_word(parse_word(key)): parse_qelem(backend, value)
        for key, value in obj.items()
    }
    return QWElem(backend, coeffs)


# ---------------------------------------------------------------------------
# Root data
# ---------------------------------------------------------------------------


def datum_to_json(datum: RootDatum) -> dict:
    out = {"cartan": [list(row) for row in datum.cartan], "lattice": datum.lattice}
    if datum.label:
        out["label"] = datum.label
    return out


def datum_from_json(obj: Mapping) -> RootDatum:
    return build_root_datum(dict(obj))


# ---------------------------------------------------------------------------
# Tables and discrepancy reports
# ---------------------------------------------------------------------------


def table_records_to_json(records: Iterable) -> list[dict]:
    """Records carry (u, v, w: WeylElement, family, backend_law, value: QElem)."""
    rows = []
    for rec in records:
        rows.append(
            {
                "u": word_to_str(rec.u.word),
                "v": word_to_str(rec.v.word),
                "w": word_to_str(rec.w.word),
                "family": rec.family,
                "backend": rec.backend_law,
                "value": qelem_to_json(rec.value),
            }
        )
    rows.sort(key=lambda r: (_word_key(r["u"]), _word_key(r["v"]), _word_key(r["w"])))
    return rows


def _word_key(word_str: str) -> tuple[int, Word]:
    word = parse_word(word_str)
    return (len(word), word)


def table_records_to_text(records: Iterable) -> str:
    rows = []
    for rec in sorted(
        records, key=lambda r: (r.u.sort_key(), r.v.sort_key(), r.w.sort_key())
    ):
        value = qelem_to_str(rec.value)
        rows.append(
            f"u={word_to_str(rec.u.word) or 'e'} "
            f"v={word_to_str(rec.v.word) or 'e'} "
            f"w={word_to_str(rec.w.word) or 'e'}  {value}"
        )
    return "\n".join(rows)


def discrepancy_to_json(entries: Iterable[Mapping]) -> dict:
    out = []
    for entry in entries:
        out.append(
            {
                "location": entry["location"],
                "formula": entry["formula"],
                "oracle": entry["oracle"],
            }
        )
    return {"discrepancies": out, "count": len(out)}


def dumps_canonical(obj) -> str:
    """The one JSON writer: stable key order, stable layout, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
