"""Command-line front end: generate, check, and export the symbolic tables.

Subcommands
-----------

``mult``
    Structure constants of the dual classes (formula route).  With ``--u``
    and ``--v`` it prints the rows of one product; with neither it prints
    the full table, optionally split over a worker pool (``--jobs``).
    ``--check`` recomputes every row through the independent oracle route
    and reports any mismatch.
``restrict``
    One restriction coefficient b_{v, I_w}.  ``--check`` cross-checks the
    basis-expansion route against the closed-form route.
``stab {coh,k}``
    Stable-basis structure constants for one pair (u, v), by the oracle
    route.  For ``coh`` the literal closed form carries one extra factor
    (the product of the hat-classes over the positive roots); ``--check``
    surfaces that systematic difference as a discrepancy report instead of
    hiding it.
``verify``
    Run a named property suite (relations, leibniz, duality,
    paper-examples, all) and exit 2 if anything fails.

Exit codes: 0 success, 2 discrepancy found, 3 configuration error.

Words are digit strings ("121"), "" or "e" for the identity; ranks with
ten or more nodes use the comma form ("1,10,2").  Output is deterministic:
the same configuration produces identical bytes for every worker count.

Custom families (``--family custom:FILE``) are described by a JSON file:

    {"name": "sigma", "law": "additive",
     "a":     {"num": [[-1, 0, 0, 0]], "den": [["x_root", 1]]},
     "b":     {"num": [[1, 0, 0, 0], [1, 1, 0, 0]], "den": [["x_root", 1]]},
     "b_inv": {"num": [[1, 1, 0, 0]], "den": [["one_plus_root", 1]]}}

Each numerator term is ``[coeff, alpha_exp, extra_exp, e_mult]`` and means
``coeff * x_alpha^alpha_exp * h^extra_exp`` additively (``v^extra_exp``
and an optional group-like factor ``E(e_mult * alpha)`` multiplicatively);
each denominator entry is ``[factor_kind, sign]`` applied at ``sign *
alpha``.  The family is validated (b inverse, equivariance) before use.

Explicit word files (``--words file:PATH``) map every element's canonical
word to the chosen reduced word, e.g. ``{"": "", "1": "1", "121": "212",
...}``; the file must cover the whole Weyl group.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Mapping, Sequence

from .dual import CohStableBasis, DualBasis, KStableBasis
from .formal import (
    ADDITIVE,
    MULTIPLICATIVE,
    Backend,
    FactorSymbol,
    QElem,
    SElem,
    e_mono,
    h_var,
    q_equal,
    v_var,
    x_class,
)
from .rootdata import RootDatum, Word, build_root_datum
from .serialize import (
    dumps_canonical,
    parse_word,
    qelem_to_json,
    qelem_to_str,
    word_to_str,
)
from .twisted import Algebra, BUILTIN_FAMILIES, OperatorFamily, custom_family
from .verify import SUITE_NAMES, run_suite

EXIT_OK = 0
EXIT_DISCREPANCY = 2
EXIT_CONFIG = 3

_LAW_NAMES = {"additive": ADDITIVE, "multiplicative": MULTIPLICATIVE}


class CliError(Exception):
    """Configuration problem; maps to exit code 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise CliError(message)


# ---------------------------------------------------------------------------
# Session configuration
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SessionConfig:
    """Everything needed to rebuild the working objects, in JSON-able form."""

    type_label: str | None = "A2"
    cartan_file: str | None = None
    lattice: str = "simply-connected"
    law: str = ADDITIVE
    family: str = "x"
    words: str = "lexmin"
    out: str = "text"
    check: bool = False
    jobs: int = 1

    def cache_key(self) -> str:
        payload = dataclasses.asdict(self)
        payload.pop("out")
        payload.pop("check")
        payload.pop("jobs")
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def from_key(key: str) -> "SessionConfig":
        return SessionConfig(**json.loads(key))


def _resolve_config(
    args: argparse.Namespace,
    default_family: str,
    forced_law: str | None = None,
    forced_family: str | None = None,
) -> SessionConfig:
    if args.cartan and args.type:
        raise CliError("--type and --cartan are mutually exclusive")
    family = args.family or forced_family or default_family
    if forced_family and family != forced_family:
        raise CliError(
            f"this command uses the {forced_family!r} family, not {family!r}"
        )
    law = args.fgl
    if forced_law:
        if law and law != forced_law:
            raise CliError(f"this command requires the {forced_law} backend")
        law = forced_law
    if not law:
        law = _family_default_law(family)
    _check_family_law(family, law)
    if args.jobs < 1:
        raise CliError("--jobs must be at least 1")
    return SessionConfig(
        type_label=None if args.cartan else (args.type or "A2"),
        cartan_file=args.cartan,
        lattice=args.lattice,
        law=law,
        family=family,
        words=args.words,
        out=args.out,
        check=args.check,
        jobs=args.jobs,
    )


def _family_default_law(family: str) -> str:
    if family == "tau":
        return MULTIPLICATIVE
    return ADDITIVE


def _check_family_law(family: str, law: str) -> None:
    if law not in (ADDITIVE, MULTIPLICATIVE):
        raise CliError(f"unknown backend law {law!r}")
    if family.startswith("custom:"):
        return  # the file declares its own law; checked when loading
    constraints = {"t": ADDITIVE, "sigma": ADDITIVE, "tau": MULTIPLICATIVE}
    if family in constraints and law != constraints[family]:
        raise CliError(f"family {family!r} requires the {constraints[family]} backend")
    if family not in constraints and family not in ("x", "y"):
        raise CliError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Building the working objects from a configuration
# ---------------------------------------------------------------------------


def _build_datum(config: SessionConfig) -> RootDatum:
    if config.cartan_file:
        with open(config.cartan_file, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        return build_root_datum(spec, lattice=config.lattice)
    return build_root_datum(config.type_label, lattice=config.lattice)


def _word_overrides(datum: RootDatum, policy: str):
    if policy == "lexmin":
        return None
    if policy.startswith("jcompat:"):
        subset = parse_word(policy[len("jcompat:") :])
        if not subset:
            raise CliError("jcompat needs a non-empty generator subset, e.g. jcompat:1")
        return datum.j_compatible_words(subset)
    if policy.startswith("file:"):
        path = policy[len("file:") :]
        with open(path, "r", encoding="utf-8") as fh:
            table = json.load(fh)
        overrides: dict = {}
        for key, value in table.items():
            element = datum.element_by_word(parse_word(key))
            overrides[element] = parse_word(value)
        missing = [w for w in datum.elements if w not in overrides]
        if missing:
            raise CliError(
                f"word file must cover every element; missing {len(missing)} entries"
            )
        return overrides
    raise CliError(f"unknown word policy {policy!r}")


def _term_value(backend: Backend, weight, term: Sequence) -> SElem:
    coeff, alpha_exp, extra_exp, e_mult = (int(c) for c in term)
    value = SElem.constant(backend, coeff)
    for _ in range(alpha_exp):
        value = value * x_class(backend, weight)
    if extra_exp:
        extra = h_var(backend) if backend.law == ADDITIVE else v_var(backend)
        for _ in range(extra_exp):
            value = value * extra
    if e_mult:
        if backend.law != MULTIPLICATIVE:
            raise CliError("group-like numerator terms need the multiplicative backend")
        value = value * e_mono(backend, tuple(e_mult * c for c in weight))
    return value


def _coeff_fn(backend: Backend, spec: Mapping) -> Callable:
    num_terms = [tuple(term) for term in spec.get("num", [])]
    den_spec = [(str(kind), int(sign)) for kind, sign in spec.get("den", [])]

    def fn(weight) -> QElem:
        total = SElem.constant(backend, 0)
        for term in num_terms:
            total = total + _term_value(backend, weight, term)
        den = [
            FactorSymbol(kind, tuple(sign * c for c in weight))
            for kind, sign in den_spec
        ]
        return QElem(total, den)

    return fn


def _load_custom_family(backend: Backend, path: str) -> OperatorFamily:
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    law = spec.get("law")
    if law not in _LAW_NAMES or _LAW_NAMES[law] != backend.law:
        raise CliError(
            f"custom family {path!r} declares law {law!r}; "
            f"configured backend is {backend.law!r}"
        )
    try:
        return custom_family(
            backend,
            str(spec.get("name", "file")),
            _coeff_fn(backend, spec["a"]),
            _coeff_fn(backend, spec["b"]),
            _coeff_fn(backend, spec["b_inv"]),
        )
    except (KeyError, ValueError) as exc:
        raise CliError(f"invalid custom family {path!r}: {exc}") from exc


def _build_family(backend: Backend, token: str) -> OperatorFamily:
    if token.startswith("custom:"):
        return _load_custom_family(backend, token[len("custom:") :])
    return BUILTIN_FAMILIES[token](backend)


_SESSION_CACHE: dict[str, DualBasis] = {}


def _session_basis(key: str) -> DualBasis:
    basis = _SESSION_CACHE.get(key)
    if basis is None:
        config = SessionConfig.from_key(key)
        datum = _build_datum(config)
        backend = Backend(datum, config.law)
        algebra = Algebra(_build_family(backend, config.family), None)
        overrides = _word_overrides(datum, config.words)
        if overrides:
            algebra = algebra.with_words(overrides)
        basis = DualBasis(algebra)
        _SESSION_CACHE[key] = basis
    return basis


# ---------------------------------------------------------------------------
# mult
# ---------------------------------------------------------------------------


def _mult_pair_task(key: str, u_str: str, v_str: str, check: bool) -> tuple[list, list]:
    """Formula-route rows for one (u, v), plus oracle discrepancies if asked.

    Runs inside worker processes; everything in and out is JSON-able.
    """
    basis = _session_basis(key)
    datum = basis.datum
    u = datum.element_by_word(parse_word(u_str))
    v = datum.element_by_word(parse_word(v_str))
    rows = []
    oracle = basis.product_oracle(u, v) if check else None
    discrepancies = []
    zero = QElem.from_int(basis.backend, 0)
    for w in basis.order:
        upper = datum.bruhat_leq(u, w) and datum.bruhat_leq(v, w)
        value = basis.structure_constant(u, v, w) if upper else zero
        if not value.is_zero():
            rows.append(
                {
                    "u": word_to_str(u.word),
                    "v": word_to_str(v.word),
                    "w": word_to_str(w.word),
                    "value": qelem_to_json(value),
                    "text": qelem_to_str(value),
                }
            )
        if check:
            oracle_value = oracle.get(w, zero)
            if not q_equal(value, oracle_value):
                discrepancies.append(
                    {
                        "location": [
                            word_to_str(u.word),
                            word_to_str(v.word),
                            word_to_str(w.word),
                        ],
                        "formula": qelem_to_str(value),
                        "oracle": qelem_to_str(oracle_value),
                    }
                )
    return rows, discrepancies


def _row_sort_key(row: Mapping) -> tuple:
    def word_key(text: str):
        word = parse_word(text)
        return (len(word), word)

    return (word_key(row["u"]), word_key(row["v"]), word_key(row["w"]))


def cmd_mult(args: argparse.Namespace) -> int:
    config = _resolve_config(args, default_family="x")
    if (args.u is None) != (args.v is None):
        raise CliError("provide both --u and --v, or neither for the full table")
    key = config.cache_key()
    basis = _session_basis(key)
    datum = basis.datum
    if args.u is not None:
        pairs = [(word_to_str(datum.element_by_word(parse_word(args.u)).word),
                  word_to_str(datum.element_by_word(parse_word(args.v)).word))]
    else:
        names = [word_to_str(w.word) for w in basis.order]
        pairs = [(u, v) for u in names for v in names]
    rows: list = []
    discrepancies: list = []
    if config.jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [
                pool.submit(_mult_pair_task, key, u, v, config.check) for u, v in pairs
            ]
            for future in futures:
                pair_rows, pair_bad = future.result()
                rows.extend(pair_rows)
                discrepancies.extend(pair_bad)
    else:
        for u, v in pairs:
            pair_rows, pair_bad = _mult_pair_task(key, u, v, config.check)
            rows.extend(pair_rows)
            discrepancies.extend(pair_bad)
    rows.sort(key=_row_sort_key)
    discrepancies.sort(key=lambda d: d["location"])

    if config.out == "json":
        payload = {
            "command": "mult",
            "datum": datum.label or "custom",
            "lattice": config.lattice,
            "law": config.law,
            "family": config.family,
            "records": [
                {k: row[k] for k in ("u", "v", "w", "value")} for row in rows
            ],
        }
        if config.check:
            payload["report"] = {
                "count": len(discrepancies),
                "discrepancies": discrepancies,
            }
        sys.stdout.write(dumps_canonical(payload))
    else:
        for row in rows:
            print(
                f"u={row['u'] or 'e'} v={row['v'] or 'e'} "
                f"w={row['w'] or 'e'}  {row['text']}"
            )
        _print_text_report(config.check, discrepancies)
    return EXIT_DISCREPANCY if discrepancies else EXIT_OK


def _print_text_report(checked: bool, discrepancies: list) -> None:
    if not checked:
        return
    if not discrepancies:
        print("check: ok")
        return
    print(f"check: {len(discrepancies)} discrepancies")
    for entry in discrepancies:
        loc = ",".join(str(part) for part in entry["location"])
        print(f"  at {loc}: formula={entry['formula']} oracle={entry['oracle']}")


# ---------------------------------------------------------------------------
# restrict
# ---------------------------------------------------------------------------


def cmd_restrict(args: argparse.Namespace) -> int:
    config = _resolve_config(args, default_family="x")
    if args.v is None or args.w is None:
        raise CliError("restrict needs --v and --w")
    basis = _session_basis(config.cache_key())
    datum = basis.datum
    v = datum.element_by_word(parse_word(args.v))
    w = datum.element_by_word(parse_word(args.w))
    value = basis.restriction(v, w)
    discrepancies = []
    if config.check:
        closed = basis.restriction_via_billey(v, w)
        if not q_equal(value, closed):
            discrepancies.append(
                {
                    "location": [word_to_str(v.word), word_to_str(w.word)],
                    "formula": qelem_to_str(closed),
                    "oracle": qelem_to_str(value),
                }
            )
    if config.out == "json":
        payload = {
            "command": "restrict",
            "datum": datum.label or "custom",
            "lattice": config.lattice,
            "law": config.law,
            "family": config.family,
            "v": word_to_str(v.word),
            "w": word_to_str(w.word),
            "value": qelem_to_json(value),
        }
        if config.check:
            payload["report"] = {
                "count": len(discrepancies),
                "discrepancies": discrepancies,
            }
        sys.stdout.write(dumps_canonical(payload))
    else:
        print(qelem_to_str(value))
        _print_text_report(config.check, discrepancies)
    return EXIT_DISCREPANCY if discrepancies else EXIT_OK


# ---------------------------------------------------------------------------
# stab
# ---------------------------------------------------------------------------


def cmd_stab(args: argparse.Namespace) -> int:
    forced_law = ADDITIVE if args.variant == "coh" else MULTIPLICATIVE
    forced_family = "t" if args.variant == "coh" else "tau"
    config = _resolve_config(
        args, default_family=forced_family, forced_law=forced_law,
        forced_family=forced_family,
    )
    if args.u is None or args.v is None:
        raise CliError("stab needs --u and --v")
    datum = _build_datum(config)
    overrides = _word_overrides(datum, config.words)
    if args.variant == "coh":
        stable = CohStableBasis(datum, words=overrides)
        oracle = stable.constants_oracle
        formula = stable.constant_formula
    else:
        stable = KStableBasis(datum, words=overrides)
        oracle = stable.p_constants_oracle
        formula = stable.p_constant_formula
    backend = stable.backend
    u = datum.element_by_word(parse_word(args.u))
    v = datum.element_by_word(parse_word(args.v))
    constants = oracle(u, v)
    rows = []
    discrepancies = []
    zero = QElem.from_int(backend, 0)
    for w in stable.basis.order:
        value = constants.get(w, zero)
        if not value.is_zero():
            rows.append(
                {
                    "w": word_to_str(w.word),
                    "value": qelem_to_json(value),
                    "text": qelem_to_str(value),
                }
            )
        if config.check:
            upper = datum.bruhat_leq(u, w) and datum.bruhat_leq(v, w)
            formula_value = formula(u, v, w) if upper else zero
            if not q_equal(formula_value, value):
                discrepancies.append(
                    {
                        "location": [
                            word_to_str(u.word),
                            word_to_str(v.word),
                            word_to_str(w.word),
                        ],
                        "formula": qelem_to_str(formula_value),
                        "oracle": qelem_to_str(value),
                    }
                )
    if config.out == "json":
        payload = {
            "command": "stab",
            "variant": args.variant,
            "datum": datum.label or "custom",
            "lattice": config.lattice,
            "law": config.law,
            "u": word_to_str(u.word),
            "v": word_to_str(v.word),
            "rows": [{k: row[k] for k in ("w", "value")} for row in rows],
        }
        if config.check:
            payload["report"] = {
                "count": len(discrepancies),
                "discrepancies": discrepancies,
            }
        sys.stdout.write(dumps_canonical(payload))
    else:
        for row in rows:
            print(f"w={row['w'] or 'e'}  {row['text']}")
        _print_text_report(config.check, discrepancies)
    return EXIT_DISCREPANCY if discrepancies else EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite not in SUITE_NAMES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {SUITE_NAMES}")
    config = _resolve_config(args, default_family="x")
    datum = _build_datum(config)
    families = (args.family,) if args.family else None
    laws = (args.fgl,) if args.fgl else None
    if args.family and args.family.startswith("custom:"):
        raise CliError("verify suites cover the built-in families")
    report = run_suite(args.suite, datum, families=families, laws=laws)
    passed = report.is_empty
    if config.out == "json":
        payload = {
            "command": "verify",
            "suite": args.suite,
            "datum": datum.label or "custom",
            "passed": passed,
            "report": report.to_json(),
        }
        sys.stdout.write(dumps_canonical(payload))
    else:
        status = "PASS" if passed else f"FAIL ({len(report.entries)} discrepancies)"
        print(f"suite {args.suite} on {datum.label or 'custom'}: {status}")
        for entry in report.entries:
            item = entry.as_json_entry()
            loc = ",".join(str(part) for part in item["location"])
            print(f"  at {loc}: formula={item['formula']} oracle={item['oracle']}")
    return EXIT_OK if passed else EXIT_DISCREPANCY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--type", help="named datum label, e.g. A2, B2, A3")
    parser.add_argument("--cartan", help="JSON file with an explicit Cartan matrix")
    parser.add_argument(
        "--lattice",
        default="simply-connected",
        help="lattice choice (simply-connected, adjoint)",
    )
    parser.add_argument(
        "--fgl",
        choices=(ADDITIVE, MULTIPLICATIVE),
        help="formal group law backend (default depends on the family)",
    )
    parser.add_argument(
        "--family",
        help="operator family: x, y, t, tau, sigma, or custom:FILE",
    )
    parser.add_argument(
        "--words",
        default="lexmin",
        help="reduced word policy: lexmin, jcompat:J, or file:PATH",
    )
    parser.add_argument("--out", choices=("text", "json"), default="text")
    parser.add_argument("--check", action="store_true", help="run the oracle cross-check")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="demazure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    mult = sub.add_parser("mult", help="structure constants of dual classes")
    _add_common_flags(mult)
    mult.add_argument("--u", help='left factor, a word like "12" ("" = identity)')
    mult.add_argument("--v", help="right factor")
    mult.set_defaults(func=cmd_mult)

    restrict = sub.add_parser("restrict", help="restriction coefficient b_{v, I_w}")
    _add_common_flags(restrict)
    restrict.add_argument("--v", help="point (Weyl element word)")
    restrict.add_argument("--w", help="class index (Weyl element word)")
    restrict.set_defaults(func=cmd_restrict)

    stab = sub.add_parser("stab", help="stable-basis structure constants")
    stab.add_argument("variant", choices=("coh", "k"))
    _add_common_flags(stab)
    stab.add_argument("--u", help="left factor")
    stab.add_argument("--v", help="right factor")
    stab.set_defaults(func=cmd_stab)

    verify = sub.add_parser("verify", help="run a property suite")
    _add_common_flags(verify)
    verify.add_argument("--suite", required=True, help="|".join(SUITE_NAMES))
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
