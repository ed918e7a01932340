"""Unified command line: config parsing, dispatch, and report emission.

Five subcommands expose the library: `symbol` (tame symbol values),
`torus` (finite torus models, centers, isotropic subgroups), `svn`
(uniqueness verification for cover representations), `slope` (criticality
verdicts for weight/slope rows), and `kubota` (symbol values and the
homomorphism audit).

Reports come in two modes.  Machine mode is line-delimited ``key = value``
text with stable key names and no timing, so identical inputs -- including
seeds -- produce byte-identical output, and `parse_machine_report` inverts
`emit`.  Table mode is aligned for humans and shows wall-clock time.  The
process exit code is 0 exactly when every verification boolean in the
report is true; configuration problems and module errors exit nonzero with
a single-line diagnostic.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .localfield import TameElement, make_local_model, tame_symbol
from .toruscover import (
    TorusSpec,
    build_finite_model,
    check_symplectic,
    compute_center,
    enumerate_maximal_isotropics,
    is_tame,
)
from .heisenberg import (
    CocycleSpec,
    achi_report,
    build_cover,
    central_characters,
    verify_svn,
)
from .slope import RootDatum, SlopeVector, WeightChar, compute_rho, is_noncritical
from .kubota import homomorphism_audit, in_gamma_level, kubota_symbol

Record = Tuple[Tuple[str, str], ...]


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus its resolved options."""

    subcommand: str
    mode: str
    options: Dict[str, object]


@dataclass
class Report:
    """What a run produced: typed records plus verification booleans.

    Timing is carried for table display but excluded from equality and from
    machine output, which keeps machine reports deterministic.
    """

    subcommand: str
    digest: str
    records: Tuple[Record, ...]
    checks: Tuple[Tuple[str, bool], ...]
    timing: float = field(default=0.0, compare=False)

    def record_value(self, index: int, key: str) -> str:
        for k, v in self.records[index]:
            if k == key:
                return v
        raise KeyError(key)


class ConfigError(ValueError):
    """A schema violation, with the offending field path in the message."""


# ---------------------------------------------------------------------------
# value formatting and the input digest
# ---------------------------------------------------------------------------

def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _digest(subcommand: str, pieces: Sequence[str]) -> str:
    blob = subcommand + "\x1f" + "\x1f".join(pieces)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# config files: line-oriented key = value with integer-matrix blocks
# ---------------------------------------------------------------------------

def parse_config_file(path: str) -> Tuple[Dict[str, str], Dict[str, Tuple[Tuple[int, ...], ...]]]:
    """Parse `key = value` lines and `matrix NAME = [` ... `]` blocks.

    Returns (scalars, matrices); comments start with '#'.  Errors carry the
    line number and field path.
    """
    scalars: Dict[str, str] = {}
    matrices: Dict[str, Tuple[Tuple[int, ...], ...]] = {}
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    block: Optional[str] = None
    rows: List[Tuple[int, ...]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if block is not None:
            if line == "]":
                if rows and any(len(r) != len(rows[0]) for r in rows):
                    raise ConfigError(f"config line {lineno}: matrix {block}: ragged rows")
                matrices[block] = tuple(rows)
                block, rows = None, []
                continue
            try:
                rows.append(tuple(int(tok) for tok in line.split()))
            except ValueError:
                raise ConfigError(
                    f"config line {lineno}: matrix {block}: expected integer row, got {line!r}"
                ) from None
            continue
        if line.startswith("matrix "):
            head, _, tail = line.partition("=")
            name = head[len("matrix "):].strip()
            if not name or tail.strip() != "[":
                raise ConfigError(f"config line {lineno}: expected 'matrix NAME = ['")
            block, rows = name, []
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {line!r}")
        scalars[key.strip()] = value.strip()
    if block is not None:
        raise ConfigError(f"config: matrix {block}: unterminated block")
    return scalars, matrices


def _need(scalars: Dict[str, str], key: str) -> str:
    if key not in scalars:
        raise ConfigError(f"config: missing field '{key}'")
    return scalars[key]


def _need_int(scalars: Dict[str, str], key: str) -> int:
    value = _need(scalars, key)
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"config: field '{key}': expected integer, got {value!r}") from None


def _need_matrix(matrices: Dict[str, Tuple[Tuple[int, ...], ...]], name: str):
    if name not in matrices:
        raise ConfigError(f"config: missing matrix '{name}'")
    return matrices[name]


def _parse_fraction(token: str, path: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{path}: expected rational 'p/q', got {token!r}") from None


def _parse_int_list(token: str, path: str) -> Tuple[int, ...]:
    try:
        return tuple(int(t) for t in token.split(","))
    except ValueError:
        raise ConfigError(f"{path}: expected comma-separated integers, got {token!r}") from None


# ---------------------------------------------------------------------------
# torus / svn shared model construction
# ---------------------------------------------------------------------------

def _model_from_config(path: str):
    """Build (model, cocycle-or-None, digest pieces) from a torus config."""
    scalars, matrices = parse_config_file(path)
    mode = _need(scalars, "mode")
    pieces = [f"mode={mode}"]
    if mode == "local":
        n = _need_int(scalars, "n")
        m = _need_int(scalars, "m")
        q = _need_int(scalars, "q")
        mat = _need_matrix(matrices, "M")
        if n != len(mat):
            raise ConfigError("config: field 'n': does not match the rows of matrix M")
        spec = TorusSpec.local(make_local_model(q, m), mat)
        pieces += [f"n={n}", f"m={m}", f"q={q}", f"M={mat}"]
    elif mode == "lattice":
        n = _need_int(scalars, "n")
        m = _need_int(scalars, "m")
        mat = _need_matrix(matrices, "J")
        spec = TorusSpec.lattice(n, m, mat)
        pieces += [f"n={n}", f"m={m}", f"J={mat}"]
    else:
        raise ConfigError(f"config: field 'mode': expected 'local' or 'lattice', got {mode!r}")
    model = build_finite_model(spec)
    cocycle = None
    if "cocycle" in scalars:
        conv = scalars["cocycle"]
        cmat = _need_matrix(matrices, "C")
        cocycle = CocycleSpec(conv, cmat)
        pieces += [f"cocycle={conv}", f"C={cmat}"]
    return model, cocycle, pieces


# ---------------------------------------------------------------------------
# subcommand drivers
# ---------------------------------------------------------------------------

def _pair(token: str, path: str) -> Tuple[int, int]:
    values = _parse_int_list(token, path)
    if len(values) != 2:
        raise ConfigError(f"{path}: expected two integers v,u")
    return values[0], values[1]


def _run_symbol(opts: Dict[str, object]) -> Report:
    q, m = int(opts["q"]), int(opts["m"])
    xv, xu = _pair(str(opts["x"]), "flag --x")
    yv, yu = _pair(str(opts["y"]), "flag --y")
    model = make_local_model(q, m)
    x, y = TameElement(xv, xu), TameElement(yv, yu)
    fwd = tame_symbol(model, x, y)
    rev = tame_symbol(model, y, x)
    record = [
        ("q", _fmt(q)), ("m", _fmt(m)),
        ("x", _fmt((xv, xu))), ("y", _fmt((yv, yu))),
        ("exponent", _fmt(fwd.e)), ("symbol", f"zeta^{fwd.e}"),
    ]
    if m == 2:
        record.append(("value", str(fwd)))
    checks = (("antisymmetry_ok", (fwd * rev).is_one),)
    return Report("symbol", _digest("symbol", [f"q={q}", f"m={m}",
                                               f"x={xv},{xu}", f"y={yv},{yu}"]),
                  (tuple(record),), checks)


def _run_torus(opts: Dict[str, object]) -> Report:
    model, _cocycle, pieces = _model_from_config(str(opts["config"]))
    center = compute_center(model)
    sym = check_symplectic(model)
    isotropics = enumerate_maximal_isotropics(model)
    tame_flags = [is_tame(model, desc) for desc in isotropics]
    records: List[Record] = [(
        ("kind", "summary"),
        ("order", _fmt(model.order)),
        ("center_order", _fmt(center.order)),
        ("center_index", _fmt(sym["index"])),
        ("isotropic_count", _fmt(len(isotropics))),
        ("tame_count", _fmt(sum(tame_flags))),
    )]
    if opts.get("center"):
        records.append((
            ("kind", "center"),
            ("generators", ";".join(_fmt(g) for g in center.generators) or "none"),
        ))
    if opts.get("isotropics") or opts.get("tame_check"):
        for i, desc in enumerate(isotropics):
            rec = [
                ("kind", "isotropic"), ("index", _fmt(i)),
                ("order", _fmt(desc.order)),
                ("generators", ";".join(_fmt(g) for g in desc.generators) or "none"),
            ]
            if opts.get("tame_check"):
                rec.append(("tame", _fmt(tame_flags[i])))
            records.append(tuple(rec))
    checks = (
        ("alternating", bool(sym["alternating"])),
        ("nondegenerate_on_quotient", bool(sym["nondegenerate_on_quotient"])),
        ("center_index_is_square", bool(sym["index_is_square"])),
    )
    return Report("torus", _digest("torus", pieces), tuple(records), checks)


def _run_svn(opts: Dict[str, object]) -> Report:
    model, cocycle, pieces = _model_from_config(str(opts["config"]))
    cover = build_cover(model, cocycle)
    conductor = opts.get("conductor")
    if conductor is not None:
        conductor = int(conductor)
        pieces.append(f"conductor={conductor}")
    chars = central_characters(cover, injective_only=True)
    gens = compute_center(model).generators
    coords = [cover.lift(g) for g in gens] + [(model.zero(), 1)]

    def coord_string(c) -> str:
        return ",".join(str(c.value_exponent(g)) for g in coords)

    if opts.get("chi") is not None:
        wanted = tuple(_parse_fraction(tok, "flag --chi") % 1
                       for tok in str(opts["chi"]).split(","))
        matches = [c for c in chars
                   if tuple(c.value_exponent(g) for g in coords) == wanted]
        if not matches:
            raise ConfigError(
                "flag --chi: no faithful central character has these generator values "
                f"(expected {len(coords)} exponents: one per center generator, then mu)")
        chars = matches
        pieces.append("chi=" + ",".join(str(w) for w in wanted))
    elif not opts.get("all_chars"):
        raise ConfigError("svn requires either --chi or --all-chars")
    records: List[Record] = []
    checks: List[Tuple[str, bool]] = []
    for i, chi in enumerate(chars):
        rep = verify_svn(cover, chi, conductor=conductor)
        alg = achi_report(cover, chi, conductor=conductor)
        records.append((
            ("chi", coord_string(chi)),
            ("d", _fmt(rep["induced_dimension"])),
            ("I_chi_size", _fmt(rep["induction_count"] // rep["isotropic_count"])),
            ("unique_class", _fmt(rep["oracle_class_count"] == 1)),
            ("achi", (f"dim={alg['dimension']} radical={alg['radical_dim']} "
                      f"center={alg['center_dim']} splits={_fmt(alg['splits'])}")),
            ("conductor", _fmt(rep["conductor"])),
        ))
        checks.append((f"chi_{i}_ok", bool(rep["ok"])))
    return Report("svn", _digest("svn", pieces), tuple(records), tuple(checks))


def _datum_from_config(path: str) -> Tuple[RootDatum, List[str]]:
    scalars, matrices = parse_config_file(path)
    rank_full = _need_int(scalars, "rank_full")
    rank_split = _need_int(scalars, "rank_split")
    res = _need_matrix(matrices, "res")
    roots = _need_matrix(matrices, "roots")
    coroots = _need_matrix(matrices, "coroots")
    if len(roots) != len(coroots):
        raise ConfigError("config: matrices 'roots' and 'coroots' need equal row counts")
    simple = _parse_int_list(_need(scalars, "simple"), "config: field 'simple'")
    restricted = _need_matrix(matrices, "restricted")
    mults = _parse_int_list(_need(scalars, "multiplicities"),
                            "config: field 'multiplicities'")
    if len(mults) != len(restricted):
        raise ConfigError("config: field 'multiplicities': one entry per restricted root")
    def restrict_row(root: Sequence[int]) -> Tuple[Fraction, ...]:
        return tuple(
            sum(Fraction(res[i][j]) * root[j] for j in range(rank_full))
            for i in range(rank_split))

    for idx in simple:
        if not 0 <= idx < len(roots):
            raise ConfigError(f"config: field 'simple': index {idx} out of range")
    datum = RootDatum(
        rank_full=rank_full,
        rank_split=rank_split,
        restriction=res,
        positive_roots=tuple(
            (tuple(Fraction(x) for x in r), tuple(Fraction(x) for x in c))
            for r, c in zip(roots, coroots)),
        simple_pairs=tuple((idx, restrict_row(roots[idx])) for idx in simple),
        restricted_roots=tuple(
            (tuple(Fraction(x) for x in row), mult)
            for row, mult in zip(restricted, mults)),
    )
    pieces = [f"rank_full={rank_full}", f"rank_split={rank_split}", f"res={res}",
              f"roots={roots}", f"coroots={coroots}", f"simple={simple}",
              f"restricted={restricted}", f"mults={mults}"]
    return datum, pieces


def _rows_from_batch(path: str, datum: RootDatum):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            left, sep, right = line.partition(";")
            if not sep:
                raise ConfigError(
                    f"batch line {lineno}: expected 'w1,...,wk ; s1,...,sr'")
            weight = _parse_int_list(left.strip(), f"batch line {lineno}: weight")
            slope = tuple(_parse_fraction(tok.strip(), f"batch line {lineno}: slope")
                          for tok in right.strip().split(","))
            if len(weight) != datum.rank_full or len(slope) != datum.rank_split:
                raise ConfigError(
                    f"batch line {lineno}: weight needs {datum.rank_full} entries "
                    f"and slope {datum.rank_split}")
            rows.append((weight, slope))
    return rows


def _run_slope(opts: Dict[str, object]) -> Report:
    datum, pieces = _datum_from_config(str(opts["config"]))
    compute_rho(datum)  # raises on an inconsistent datum
    rows = _rows_from_batch(str(opts["batch"]), datum)
    pieces.append(f"rows={len(rows)}")
    records: List[Record] = []
    for i, (weight, slope) in enumerate(rows):
        verdict = is_noncritical(datum, WeightChar(weight, SlopeVector(slope)))
        witnesses = ";".join(
            ",".join(str(x) for x in w) for w in verdict["witnesses"]) or "none"
        records.append((
            ("row", _fmt(i)),
            ("weight", _fmt(weight)),
            ("theta_slope", ",".join(str(s) for s in slope)),
            ("noncritical", _fmt(verdict["noncritical"])),
            ("witnesses", witnesses),
        ))
        pieces.append(f"row{i}={weight}|{slope}")
    checks = (("datum_consistent", True),)
    return Report("slope", _digest("slope", pieces), tuple(records), checks)


def _run_kubota(opts: Dict[str, object]) -> Report:
    records: List[Record] = []
    checks: List[Tuple[str, bool]] = []
    pieces: List[str] = []
    if opts.get("matrix") is None and opts.get("audit") is None:
        raise ConfigError("kubota requires --matrix and/or --audit")
    if opts.get("matrix") is not None:
        entries = _parse_int_list(str(opts["matrix"]), "flag --matrix")
        if len(entries) != 4:
            raise ConfigError("flag --matrix: expected four integers a,b,c,d")
        gamma = ((entries[0], entries[1]), (entries[2], entries[3]))
        value = kubota_symbol(gamma)  # raises outside Gamma(4)
        records.append((
            ("kind", "symbol"),
            ("matrix", _fmt(entries)),
            ("value", str(value)),
        ))
        checks.append(("matrix_in_gamma_4", in_gamma_level(gamma, 2)))
        pieces.append(f"matrix={entries}")
    if opts.get("audit") is not None:
        if opts.get("seed") is None:
            raise ConfigError("flag --audit: sampling requires an explicit --seed")
        count = int(opts["audit"])
        seed = int(opts["seed"])
        bound = int(opts.get("bound") or 10**6)
        report = homomorphism_audit(2, count, bound, seed)
        failures = report["failures"]
        records.append((
            ("kind", "audit"),
            ("samples", _fmt(count)),
            ("seed", _fmt(seed)),
            ("bound", _fmt(bound)),
            ("failure_count", _fmt(len(failures))),
            ("surjective", _fmt(report["surjective"])),
        ))
        for f in failures:
            records.append((
                ("kind", "failure"),
                ("gamma1", _fmt([x for row in f["gamma1"] for x in row])),
                ("gamma2", _fmt([x for row in f["gamma2"] for x in row])),
                ("product_exponent", _fmt(f["product_exponent"])),
                ("factor_exponents", _fmt(f["factor_exponents"])),
            ))
        checks.append(("audit_zero_failures", not failures))
        pieces.append(f"audit={count},seed={seed},bound={bound}")
    return Report("kubota", _digest("kubota", pieces), tuple(records), tuple(checks))


_DRIVERS = {
    "symbol": _run_symbol,
    "torus": _run_torus,
    "svn": _run_svn,
    "slope": _run_slope,
    "kubota": _run_kubota,
}


def run(config: RunConfig) -> Report:
    """Dispatch a parsed invocation and time it."""
    start = time.perf_counter()
    report = _DRIVERS[config.subcommand](config.options)
    report.timing = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# emission and parsing
# ---------------------------------------------------------------------------

def emit(report: Report, mode: str) -> str:
    if mode == "machine":
        lines = [
            f"subcommand = {report.subcommand}",
            f"digest = {report.digest}",
            f"records = {len(report.records)}",
        ]
        for i, record in enumerate(report.records):
            for key, value in record:
                lines.append(f"record.{i}.{key} = {value}")
        for name, ok in report.checks:
            lines.append(f"check.{name} = {_fmt(ok)}")
        return "\n".join(lines) + "\n"
    if mode != "table":
        raise ValueError(f"unknown output mode {mode!r}")
    lines = [f"{report.subcommand}  (input {report.digest})", ""]
    if report.records:
        keys: List[str] = []
        for record in report.records:
            for key, _v in record:
                if key not in keys:
                    keys.append(key)
        table = [keys] + [
            [dict(record).get(key, "") for key in keys] for record in report.records
        ]
        widths = [max(len(row[j]) for row in table) for j in range(len(keys))]
        for r, row in enumerate(table):
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
            if r == 0:
                lines.append("  ".join("-" * w for w in widths))
    else:
        lines.append("(no records)")
    lines.append("")
    for name, ok in report.checks:
        lines.append(f"{'pass' if ok else 'FAIL'}  {name}")
    lines.append(f"time: {report.timing:.3f}s")
    return "\n".join(lines) + "\n"


def parse_machine_report(text: str) -> Report:
    """Inverse of machine-mode `emit`; round-trips exactly."""
    subcommand = digest = None
    count = 0
    record_maps: Dict[int, List[Tuple[str, str]]] = {}
    checks: List[Tuple[str, bool]] = []
    for raw in text.splitlines():
        if not raw.strip():
            continue
        key, sep, value = raw.partition(" = ")
        if not sep:
            raise ValueError(f"machine report: malformed line {raw!r}")
        if key == "subcommand":
            subcommand = value
        elif key == "digest":
            digest = value
        elif key == "records":
            count = int(value)
        elif key.startswith("record."):
            _r, idx, field_name = key.split(".", 2)
            record_maps.setdefault(int(idx), []).append((field_name, value))
        elif key.startswith("check."):
            if value not in ("true", "false"):
                raise ValueError(f"machine report: boolean expected in {raw!r}")
            checks.append((key[len("check."):], value == "true"))
        else:
            raise ValueError(f"machine report: unknown key {key!r}")
    if subcommand is None or digest is None:
        raise ValueError("machine report: missing subcommand or digest")
    if sorted(record_maps) != list(range(count)):
        raise ValueError("machine report: record indices do not match the count")
    records = tuple(tuple(record_maps[i]) for i in range(count))
    return Report(subcommand, digest, records, tuple(checks))


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artifact",
        description="exact verification toolkit for finite torus covers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=("table", "machine"), default="table",
                       help="output mode (machine is deterministic, no timing)")

    p = sub.add_parser("symbol", help="tame symbol of two residue classes")
    common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--x", required=True, metavar="v,u")
    p.add_argument("--y", required=True, metavar="v,u")

    p = sub.add_parser("torus", help="finite torus model: center and isotropic subgroups")
    common(p)
    p.add_argument("--config", required=True)
    p.add_argument("--center", action="store_true", help="list center generators")
    p.add_argument("--isotropics", action="store_true",
                   help="list maximal isotropic subgroups")
    p.add_argument("--tame-check", action="store_true", dest="tame_check",
                   help="include tame flags (implies --isotropics)")

    p = sub.add_parser("svn", help="uniqueness verification for cover representations")
    common(p)
    p.add_argument("--config", required=True)
    p.add_argument("--chi", help="comma list of exponents: one per center generator, then mu")
    p.add_argument("--all-chars", action="store_true", dest="all_chars")
    p.add_argument("--conductor", type=int)

    p = sub.add_parser("slope", help="criticality verdicts for weight/slope rows")
    common(p)
    p.add_argument("--config", required=True, help="root datum description")
    p.add_argument("--batch", required=True, help="file of 'weight ; slope' rows")

    p = sub.add_parser("kubota", help="Kubota symbol and homomorphism audit")
    common(p)
    p.add_argument("--matrix", metavar="a,b,c,d")
    p.add_argument("--audit", type=int, metavar="N")
    p.add_argument("--seed", type=int)
    p.add_argument("--bound", type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k not in ("subcommand", "mode")}
    config = RunConfig(args.subcommand, args.mode, options)
    try:
        report = run(config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, TypeError) as exc:
        # a module rejected the input; surface its message on one line
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit(report, config.mode))
    return 0 if all(ok for _name, ok in report.checks) else 1


if __name__ == "__main__":
    raise SystemExit(main())
