"""Command line front end: ``compute``, ``verify``, ``census`` and ``selftest``.

Problem files are TOML (or JSON) with keys ``gamma``, ``sigma`` or ``n``, ``variant``,
``truncation``, ``caps`` and ``table``.  Exit codes: 0 ok, 2 parse error, 3 unsupported
model, 4 cap exceeded, 5 internal invariant failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

import jsonschema

from . import __version__
from .caps import DEFAULT_CAPS, Caps
from .errors import InvariantViolation, LampError, ParseError, UnsupportedModel
from .findim import (FinDimAlgebra, m_tensor, validate_algebra, verify_family,
                     verify_function_algebra_iso, verify_k0_diagram)
from .groups import is_torsion_free, make_group
from .intmatrix import IntMatrix
from .kformula import (CAVEAT, DEFAULT_TABLE, BaseKTable, assemble, k1_corollary_check,
                       label_count, variant_discrepancies)
from .oracle import DEFAULT_GRID, ComparisonVerdict, cross_check, run_grid
from .orbits import census

EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_CAP, EXIT_INTERNAL = 0, 2, 3, 4, 5

SPEC_KEYS = {"gamma", "sigma", "n", "variant", "truncation", "caps", "table"}


@dataclass(frozen=True)
class ProblemSpec:
    gamma: str | dict
    sigma: str | dict | None = None
    n: int | None = None
    variant: str = "all"
    truncation: dict | None = None
    caps: dict = field(default_factory=dict)
    table: dict = field(default_factory=dict)

    def echo(self) -> dict:
        out = {"gamma": self.gamma}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        if self.n is not None:
            out["n"] = self.n
        out["variant"] = self.variant
        if self.truncation is not None:
            out["truncation"] = dict(sorted(self.truncation.items()))
        if self.caps:
            out["caps"] = dict(sorted(self.caps.items()))
        if self.table:
            out["table"] = {k: list(v) for k, v in sorted(self.table.items())}
        return out


def load_document(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".json":
            doc = json.loads(text)
        else:
            doc = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a table")
    return doc


def parse_spec(doc: dict) -> ProblemSpec:
    unknown = set(doc) - SPEC_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    if not isinstance(doc.get("gamma"), (str, dict)):
        raise ParseError("'gamma' (a group descriptor or explicit table) is required")
    sigma, n = doc.get("sigma"), doc.get("n")
    if (sigma is None) == (n is None):
        raise ParseError("give exactly one of 'sigma' or 'n'")
    if sigma is not None and not isinstance(sigma, (str, dict)):
        raise ParseError("'sigma' must be a group descriptor or explicit table")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 0):
        raise ParseError("'n' must be a nonnegative integer")
    variant = doc.get("variant", "all")
    if variant not in ("literal", "orbit", "torsionfree", "blockcount", "all"):
        raise ParseError(f"unknown variant {variant!r}")
    trunc = doc.get("truncation")
    if trunc is not None:
        if not isinstance(trunc, dict) or set(trunc) - {"max_subset_size", "radius", "expand"}:
            raise ParseError("truncation takes max_subset_size, radius and expand")
        for key in ("max_subset_size", "radius"):
            v = trunc.get(key)
            if not isinstance(v, int) or isinstance(v, bool) or v < (1 if key == "max_subset_size" else 0):
                raise ParseError(f"truncation.{key} must be a positive integer")
    caps = doc.get("caps", {})
    table = doc.get("table", {})
    if not isinstance(caps, dict) or not isinstance(table, dict):
        raise ParseError("'caps' and 'table' must be tables")
    return ProblemSpec(doc["gamma"], sigma, n, variant, trunc, dict(caps), _parse_table(table))


def _parse_table(table) -> dict:
    out = {}
    for desc, ranks in table.items():
        if (not isinstance(ranks, (list, tuple)) or len(ranks) != 2
                or not all(isinstance(r, int) and r >= 0 for r in ranks)):
            raise ParseError(f"table entry {desc!r} must be [k0_rank, k1_rank]")
        out[str(desc)] = tuple(ranks)
    return out


def parse_table_option(text: str) -> dict:
    """``--table`` accepts a file or inline ``desc=k0,k1;desc=k0,k1``."""
    if Path(text).is_file():
        return _parse_table(load_document(text))
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        desc, sep, ranks = item.rpartition("=")
        try:
            k0, k1 = (int(x) for x in ranks.split(","))
        except ValueError:
            raise ParseError(f"bad table override {item!r}; expected desc=k0,k1") from None
        if not sep or not desc:
            raise ParseError(f"bad table override {item!r}; expected desc=k0,k1")
        out[desc.strip()] = (k0, k1)
    return _parse_table(out)


def parse_caps(items: Sequence[str], base: Caps = DEFAULT_CAPS) -> Caps:
    kw = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"--cap expects name=value, got {item!r}")
        try:
            kw[name.strip()] = int(value)
        except ValueError:
            raise ParseError(f"cap value must be an integer: {item!r}") from None
    return base.override(**kw)


# -- commands -----------------------------------------------------------------

def envelope(command: str, input_: dict, results=(), oracle=(), discrepancies=(), extra=None) -> dict:
    env = {
        "version": __version__,
        "command": command,
        "input": input_,
        "results": list(results),
        "oracle": list(oracle),
        "discrepancies": list(discrepancies),
        "caveats": [CAVEAT],
    }
    if extra:
        env.update(extra)
    return env


def _variants_for(spec: ProblemSpec, gamma) -> list[str]:
    if spec.variant != "all":
        return [spec.variant]
    out = ["literal", "orbit"]
    if is_torsion_free(gamma):
        out.append("torsionfree")
    return out


def cmd_compute(spec: ProblemSpec, caps: Caps = DEFAULT_CAPS, table: BaseKTable = DEFAULT_TABLE) -> dict:
    caps = caps.override(**spec.caps) if spec.caps else caps
    table = table.with_overrides(spec.table) if spec.table else table
    gamma = make_group(spec.gamma, caps.group_order)
    sigma = make_group(spec.sigma, caps.group_order) if spec.sigma is not None else None
    kw = {"truncation": spec.truncation, "table": table, "caps": caps}
    if sigma is not None:
        kw["sigma"] = sigma
    else:
        kw["n"] = spec.n
    reports = [assemble(v, gamma, **dict(kw)) for v in _variants_for(spec, gamma)]
    for r in reports:
        if not k1_corollary_check(r):
            raise InvariantViolation(f"K1 total differs from the base group in variant {r.variant}")
    discrepancies = variant_discrepancies(reports) if len(reports) > 1 else []
    verdicts: list[ComparisonVerdict] = []
    if gamma.is_finite:
        m = label_count(sigma, spec.n)
        witness_order = sigma.order if sigma is not None else m + 1
        if witness_order ** gamma.order * gamma.order <= caps.group_order:
            verdicts = cross_check(gamma, sigma=sigma, n=spec.n, caps=caps)
            failed = [v for v in verdicts if v.must_pass and not v.equal]
            if failed:
                raise InvariantViolation(f"oracle disagreement: {failed[0].name}")
            discrepancies += [{"quantity": v.name, "context": v.context,
                               "values": {v.lhs_name: v.lhs, v.rhs_name: v.rhs}}
                              for v in verdicts if not v.equal]
    return envelope("compute", spec.echo(), [r.to_json() for r in reports],
                    [v.to_json() for v in verdicts], discrepancies)


def default_algebra_grid(max_n: int = 3, max_k: int = 4) -> list[tuple]:
    """(1, k1, ..., kn) with n ≤ max_n and nondecreasing sizes ≤ max_k."""
    out = []
    for n in range(max_n + 1):
        for ks in itertools.combinations_with_replacement(range(1, max_k + 1), n):
            out.append((1,) + ks)
    return out


def _snf_verdict(A: FinDimAlgebra, t: int) -> ComparisonVerdict:
    M = m_tensor(A, t)
    S, U, V = M.smith()
    size = M.shape[0]
    ident = IntMatrix.identity(size)
    inv = M.inverse()
    facts = {
        "det": M.det(),
        "snf_identity": S == ident,
        "unimodular": abs(U.det()) == 1 and abs(V.det()) == 1 and U @ M @ V == S,
        "inverse_checked": M @ inv == ident and inv @ M == ident,
    }
    return ComparisonVerdict("M_F unimodular", "observed", facts, "expected",
                             {"det": 1, "snf_identity": True, "unimodular": True, "inverse_checked": True},
                             {"algebra": list(A.sizes), "t": t})


def algebra_verdicts(algebras, max_t: int = 3, caps: Caps = DEFAULT_CAPS) -> list[ComparisonVerdict]:
    out = []
    for sizes in algebras:
        A = validate_algebra(sizes)
        for t in range(max_t + 1):
            ctx = {"algebra": list(A.sizes), "t": t}
            fam = verify_family(A, t, caps.tensor_dim)
            out.append(ComparisonVerdict("projection family independent and closed", "rank",
                                         fam["rank"] if fam["ok"] else fam, "family_size",
                                         fam["family_size"], ctx))
            k0 = verify_k0_diagram(A, t, caps.tensor_dim)
            out.append(ComparisonVerdict("K0 rank map = M_F", "computed", k0["computed"], "expected",
                                         k0["expected"] if k0["partition_of_unity"] else None, ctx))
            iso = verify_function_algebra_iso(A, t, caps.tensor_dim)
            out.append(ComparisonVerdict("family span ≅ functions on {0..n}^F", "span",
                                         {"dimension": iso["span_dimension"], "image_rank": iso["image_rank"],
                                          "multiplicative": iso["multiplicative"]},
                                         "expected", {"dimension": iso["expected_dimension"],
                                                      "image_rank": iso["expected_dimension"],
                                                      "multiplicative": True}, ctx))
            out.append(_snf_verdict(A, t))
    return out


def cmd_verify(grid: dict | None = None, caps: Caps = DEFAULT_CAPS) -> dict:
    grid = dict(grid or {})
    unknown = set(grid) - {"pairs", "algebras", "max_t", "bijection_max_order"}
    if unknown:
        raise ParseError(f"unknown grid keys {sorted(unknown)}")
    pairs = grid.get("pairs", DEFAULT_GRID)
    try:
        pairs = tuple((str(s), str(g)) for s, g in pairs)
        algebras = [tuple(int(k) for k in a) for a in grid.get("algebras", default_algebra_grid())]
        max_t = int(grid.get("max_t", 3))
        bij = int(grid.get("bijection_max_order", 8))
    except (TypeError, ValueError):
        raise ParseError("malformed verify grid") from None
    verdicts = run_grid(pairs, caps, bij) + algebra_verdicts(algebras, max_t, caps)
    discrepancies = [{"quantity": v.name, "context": v.context,
                      "values": {v.lhs_name: v.lhs, v.rhs_name: v.rhs}}
                     for v in verdicts if not v.equal and not v.must_pass]
    echo = {"pairs": [list(p) for p in pairs], "algebras": [list(a) for a in algebras],
            "max_t": max_t, "bijection_max_order": bij}
    env = envelope("verify", echo, [], [v.to_json() for v in verdicts], discrepancies)
    env["passed"] = all(v.ok for v in verdicts)
    return env


def cmd_census(gamma: str, k_max: int, r: int, sigma: str | None = None, n: int | None = None,
               caps: Caps = DEFAULT_CAPS) -> dict:
    G = make_group(gamma, caps.group_order)
    if not is_torsion_free(G) or G.is_finite:
        raise UnsupportedModel(f"census needs a torsion-free infinite model, got {G.descriptor}")
    if k_max < 1 or r < 0:
        raise ParseError("census needs k >= 1 and r >= 0")
    counts = census(G, k_max, r, caps.census)
    table = {str(k): {"classes": c} for k, c in sorted(counts.items())}
    echo = {"gamma": G.descriptor, "max_subset_size": k_max, "radius": r}
    if sigma is not None or n is not None:
        m = label_count(make_group(sigma) if sigma is not None else None, n)
        echo["labels"] = m
        for k, row in table.items():
            row["weighted_k0"] = row["classes"] * m ** int(k)
    return envelope("census", echo, extra={"census": table})


def cmd_selftest() -> dict:
    """Fast anchors: a small compute, a census and a one-pair verify."""
    verdicts = []
    env = cmd_compute(ProblemSpec("cyclic(2)", n=2, variant="all"))
    lit, orb = (r["totals"]["k0"]["finite"] for r in env["results"])
    verdicts.append(ComparisonVerdict("literal/orbit on (n=2, cyclic(2))", "observed", [lit, orb],
                                      "expected", [12, 9]))
    c = census(make_group("lattice(1)"), 3, 4)
    verdicts.append(ComparisonVerdict("census of Z, k=3, r=4", "observed", c[3], "expected", 6))
    verdicts += run_grid((("cyclic(2)", "cyclic(2)"),), DEFAULT_CAPS, 2)
    verdicts += algebra_verdicts([(1, 2)], 2)
    env = envelope("selftest", {}, [], [v.to_json() for v in verdicts],
                   [{"quantity": v.name, "context": v.context} for v in verdicts if not v.equal and not v.must_pass])
    env["passed"] = all(v.ok for v in verdicts)
    return env


# -- output -------------------------------------------------------------------

def load_schema() -> dict:
    return json.loads(resources.files("lamplighter_k").joinpath("report_schema.json").read_text("utf-8"))


def validate_envelope(env: dict) -> None:
    jsonschema.validate(env, load_schema())


def dumps(env: dict) -> str:
    return json.dumps(env, indent=2, ensure_ascii=False) + "\n"


def _fmt_degree(d: dict) -> str:
    parts = []
    if d["finite"] or not d["countably_infinite"]:
        parts.append(f"Z^{d['finite']}")
    if d["countably_infinite"]:
        parts.append("Z^(countably infinite)")
    parts.extend(f"{name}^{c}" if c > 1 else name for name, c in d.get("symbolic", {}).items())
    return " ⊕ ".join(parts)


def render_text(env: dict) -> str:
    lines = [f"lamplighter-k {env['version']} {env['command']}"]
    for key, value in env["input"].items():
        lines.append(f"  {key}: {value}")
    for r in env["results"]:
        lines.append(f"[{r['variant']}] K0 = {_fmt_degree(r['totals']['k0'])}; "
                     f"K1 = {_fmt_degree(r['totals']['k1'])}  ({len(r['summands'])} summands)")
        if r["window"]:
            w = r["window"]
            lines.append(f"    window k <= {w['max_subset_size']}, r <= {w['radius']}, census {w['census']}")
    if "census" in env:
        for k, row in env["census"].items():
            lines.append(f"  size {k}: {row}")
    if env["oracle"]:
        bad = [v for v in env["oracle"] if not v["equal"]]
        lines.append(f"oracle: {len(env['oracle']) - len(bad)}/{len(env['oracle'])} verdicts equal")
        for v in bad:
            tag = "FAIL" if v["must_pass"] else "flag"
            lines.append(f"  {tag}: {v['name']} {v['context']}: {v['lhs']['value']} vs {v['rhs']['value']}")
    for d in env["discrepancies"]:
        lines.append(f"discrepancy: {d['quantity']}: {d.get('values', '')}")
    if "passed" in env:
        lines.append("PASSED" if env["passed"] else "FAILED")
    lines.append(f"caveat: {env['caveats'][0]}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE",
                        help="override an enumeration cap (repeatable)")
    common.add_argument("--table", metavar="OVERRIDES",
                        help="base-K table overrides: a TOML/JSON file or 'desc=k0,k1;...'")

    p = argparse.ArgumentParser(prog="lamplighter-k",
                                description="K-theory of lamplighter group C*-algebras and full-shift crossed products.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", parents=[common], help="assemble the K-theory for a problem file")
    c.add_argument("spec", help="problem file (TOML or JSON)")
    c.add_argument("--variant", choices=["literal", "orbit", "torsionfree", "blockcount", "all"])
    v = sub.add_parser("verify", parents=[common], help="run the oracle and matrix suites")
    v.add_argument("grid", nargs="?", help="grid file (TOML or JSON); default grid otherwise")
    s = sub.add_parser("census", parents=[common], help="count orbit classes of finite subsets in a window")
    s.add_argument("gamma")
    s.add_argument("k", type=int)
    s.add_argument("r", type=int)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--sigma")
    g.add_argument("--n", type=int)
    sub.add_parser("selftest", parents=[common], help="quick end-to-end check")
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, dict | None, str | None]:
    """Parse arguments and execute; returns (exit code, envelope, JSON target)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_PARSE), None, None
    started = time.perf_counter()
    caps = parse_caps(args.cap)
    table = DEFAULT_TABLE.with_overrides(parse_table_option(args.table)) if args.table else DEFAULT_TABLE
    if args.command == "compute":
        spec = parse_spec(load_document(args.spec))
        if args.variant:
            spec = ProblemSpec(spec.gamma, spec.sigma, spec.n, args.variant, spec.truncation,
                               spec.caps, spec.table)
        env = cmd_compute(spec, caps, table)
    elif args.command == "verify":
        env = cmd_verify(load_document(args.grid) if args.grid else None, caps)
    elif args.command == "census":
        env = cmd_census(args.gamma, args.k, args.r, args.sigma, args.n, caps)
    else:
        env = cmd_selftest()
    env["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    validate_envelope(env)
    code = EXIT_OK if env.get("passed", True) else EXIT_INTERNAL
    return code, env, args.json


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, env, json_path = run(argv)
    except LampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except jsonschema.ValidationError as exc:
        print(f"internal error: report fails its schema: {exc.message}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is an internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if env is None:
        return code
    if json_path == "-":
        sys.stdout.write(dumps(env))
    else:
        sys.stdout.write(render_text(env))
        if json_path:
            Path(json_path).write_text(dumps(env), encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
