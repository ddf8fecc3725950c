"""Batch command line interface.

Every subcommand computes, renders either text or sorted-key JSON, and
exits with one of four codes: 0 for success, 1 when a verification or
comparison fails, 2 for invalid input, 3 when a stabilization cap is
exceeded.  Identical configurations produce byte-identical JSON except
for the timing field.  Reports reference characters and irreducibles by
the canonical orders fixed in ffield and funcfield, so runs are
comparable.
"""

import argparse
import json
import sys
import time

from . import abgrp, finmodel, kring, pvengine, symcross
from .errors import StabilizationError
from .exactla import IntMatrix
from .ffield import field_of_order
from .funcfield import irreducibles_normalized

FORMATS = ("text", "json")


class RunConfig:
    """Validated parameters shared by the subcommands."""

    def __init__(self, q, m=0, n=1, precision=symcross.DEFAULT_PRECISION,
                 cap=abgrp.LEVEL_CAP, fmt="text"):
        field_of_order(q)
        if m < 0:
            raise ValueError("tower depth m must be nonnegative")
        if n < 0:
            raise ValueError("level n must be nonnegative")
        if precision < 1:
            raise ValueError("precision must be at least 1")
        if cap < 1:
            raise ValueError("stabilization cap must be at least 1")
        if fmt not in FORMATS:
            raise ValueError("format must be one of %s" % (FORMATS,))
        self.q = q
        self.m = m
        self.n = n
        self.precision = precision
        self.cap = cap
        self.fmt = fmt


def _symbol_dict(sym):
    return {"base": sym.base, "character": sym.character,
            "indices": list(sym.indices), "sign": sym.sign}


def _symbol_text(sd):
    head = ("w(chi_%d)" if sd["base"] == "W" else "p(chi_%d)") \
        % sd["character"]
    parts = [head] + ["t(%d)" % i for i in sd["indices"]]
    return "%s[%s]" % ("-" if sd["sign"] < 0 else "", ", ".join(parts))


class KGroupReport:
    """Headline K-group report with a stable JSON schema.

    The schema round-trips: parse(to_json(report)) reproduces the report,
    timing included.  Generators are listed in ledger order as base kind,
    character index, unitary index list and sign.
    """

    def __init__(self, q, m, ranks, torsion, generators, comparison,
                 timing):
        self.q = q
        self.m = m
        self.ranks = ranks
        self.torsion = torsion
        self.generators = generators
        self.comparison = comparison
        self.timing = timing

    @classmethod
    def from_level(cls, q, m, graded, report, timing):
        ranks = {"K0": len(graded.k0), "K1": len(graded.k1)}
        torsion = {"K0": [], "K1": []}
        generators = {"K0": [_symbol_dict(s) for s in graded.k0],
                      "K1": [_symbol_dict(s) for s in graded.k1]}
        comparison = {
            "ok": report.ok,
            "matched": report.matched,
            "tower_only": [_symbol_dict(s) for s in report.tower_only],
            "closed_only": [_symbol_dict(s) for s in report.closed_only]}
        return cls(q, m, ranks, torsion, generators, comparison, timing)

    def to_dict(self):
        return {"command": "kgroups", "q": self.q, "m": self.m,
                "ranks": self.ranks, "torsion": self.torsion,
                "generators": self.generators,
                "comparison": self.comparison, "timing": self.timing}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def parse(cls, text):
        d = json.loads(text)
        if d.get("command") != "kgroups":
            raise ValueError("not a kgroups report")
        return cls(d["q"], d["m"], d["ranks"], d["torsion"],
                   d["generators"], d["comparison"], d["timing"])

    def __eq__(self, other):
        return (isinstance(other, KGroupReport)
                and self.to_dict() == other.to_dict())

    def __repr__(self):
        return ("KGroupReport(q=%d, m=%d, ranks=%r, ok=%r)"
                % (self.q, self.m, self.ranks, self.comparison["ok"]))


def cmd_kgroups(cfg):
    """Tower K-groups at depth m, checked against the closed form."""
    start = time.perf_counter()
    graded = pvengine.tower(cfg.q, cfg.m, cap=cfg.cap)
    closed = kring.closed_form(cfg.q, cfg.m)
    report = kring.compare(graded, closed)
    timing = time.perf_counter() - start
    return KGroupReport.from_level(cfg.q, cfg.m, graded, report, timing)


def _text_kgroups(report):
    lines = ["K-groups of the tower algebra over F_%d, depth m=%d"
             % (report.q, report.m)]
    for degree in ("K0", "K1"):
        lines.append("%s: rank %d, torsion none"
                     % (degree, report.ranks[degree]))
        for sd in report.generators[degree]:
            lines.append("  " + _symbol_text(sd))
    cmp_ = report.comparison
    unmatched = len(cmp_["tower_only"]) + len(cmp_["closed_only"])
    lines.append("closed-form comparison: %s (%d matched, %d unmatched)"
                 % ("PASS" if cmp_["ok"] else "FAIL", cmp_["matched"],
                    unmatched))
    for label, side in (("tower only", cmp_["tower_only"]),
                        ("closed form only", cmp_["closed_only"])):
        for sd in side:
            lines.append("  %s: %s" % (label, _symbol_text(sd)))
    lines.append("time: %.3fs" % report.timing)
    return "\n".join(lines) + "\n"


def cmd_connecting_matrix(q, n):
    """K_0 matrix of the refinement from level n to n + 1, with oracle."""
    start = time.perf_counter()
    mat = finmodel.induced_iota_matrix(q, n)
    size = q - 1
    expected = IntMatrix.identity(size) + IntMatrix.all_ones(size)
    ok = mat == expected
    return {"command": "connecting-matrix", "q": q, "n": n,
            "matrix": [list(row) for row in mat.entries],
            "expected": [list(row) for row in expected.entries],
            "ok": ok, "timing": time.perf_counter() - start}


def _matrix_lines(rows, indent="  "):
    cells = [[str(x) for x in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    return [indent + " ".join(c.rjust(width) for c in row)
            for row in cells]


def _text_connecting_matrix(payload):
    lines = ["refinement matrix on corner classes over F_%d, "
             "levels %d -> %d"
             % (payload["q"], payload["n"], payload["n"] + 1)]
    lines += _matrix_lines(payload["matrix"])
    lines.append("identity plus all-ones: %s"
                 % ("PASS" if payload["ok"] else "FAIL"))
    if not payload["ok"]:
        lines.append("expected:")
        lines += _matrix_lines(payload["expected"])
    lines.append("time: %.3fs" % payload["timing"])
    return "\n".join(lines) + "\n"


def cmd_verify(cfg, negative_control=False):
    """Run the element-level and matrix-model identity suites.

    The two suites run independently and the rows merge deterministically
    by check name.  With negative_control each suite appends a row that
    must fail, to prove failures are visible end to end.
    """
    start = time.perf_counter()
    field = field_of_order(cfg.q)
    checks = []
    for suite, rows in (
            ("elements", symcross.identity_checks(
                field, cfg.precision, negative_control=negative_control)),
            ("model", finmodel.identity_checks(
                cfg.q, n=cfg.n, negative_control=negative_control))):
        for name, ok, detail in rows:
            checks.append({"suite": suite, "name": name, "ok": bool(ok),
                           "detail": detail})
    checks.sort(key=lambda c: c["name"])
    failed = [c["name"] for c in checks if not c["ok"]]
    return {"command": "verify", "q": cfg.q, "n": cfg.n,
            "precision": cfg.precision,
            "negative_control": negative_control, "checks": checks,
            "passed": len(checks) - len(failed), "failed": len(failed),
            "failed_names": failed, "ok": not failed,
            "timing": time.perf_counter() - start}


def _text_verify(payload):
    lines = ["identity suites over F_%d (precision %d, model level %d)"
             % (payload["q"], payload["precision"], payload["n"])]
    for check in payload["checks"]:
        if check["ok"]:
            lines.append("  PASS  %s" % check["name"])
        else:
            lines.append("  FAIL  %s: %s"
                         % (check["name"], check["detail"]))
    lines.append("%d checks: %d passed, %d failed"
                 % (len(payload["checks"]), payload["passed"],
                    payload["failed"]))
    if payload["failed_names"]:
        lines.append("failing: %s" % "; ".join(payload["failed_names"]))
    lines.append("time: %.3fs" % payload["timing"])
    return "\n".join(lines) + "\n"


def cmd_colimit(cfg):
    """Structure of the corner-class colimit and the level embeddings."""
    start = time.perf_counter()
    tower = abgrp.refinement_tower(cfg.q)
    structure = abgrp.colimit_structure(tower)
    div, lat = abgrp.max_divisible(structure.group)
    generators = [
        {"flag": flag, "coordinates": [str(c) for c in vec]}
        for vec, flag in structure.group.generators]
    levels = []
    for level in range(cfg.n + 1):
        rows = structure.embedding(level)
        size = len(rows)
        images = [[str(rows[i][j]) for i in range(size)]
                  for j in range(size)]
        levels.append({"level": level, "images": images})
    return {"command": "colimit", "q": cfg.q,
            "divisible_rank": div, "lattice_rank": lat,
            "generators": generators, "levels": levels,
            "timing": time.perf_counter() - start}


def _text_colimit(payload):
    lines = ["colimit of the refinement tower over F_%d" % payload["q"],
             "group: divisible rank %d, lattice rank %d"
             % (payload["divisible_rank"], payload["lattice_rank"]),
             "generators:"]
    for gen in payload["generators"]:
        lines.append("  %-12s (%s)"
                     % (gen["flag"], ", ".join(gen["coordinates"])))
    lines.append("images of the level basis classes in the colimit:")
    for entry in payload["levels"]:
        parts = ["e_%d -> (%s)" % (j, ", ".join(img))
                 for j, img in enumerate(entry["images"])]
        lines.append("  level %d: %s" % (entry["level"], "; ".join(parts)))
    lines.append("time: %.3fs" % payload["timing"])
    return "\n".join(lines) + "\n"


def cmd_irreducibles(cfg):
    """The first n normalized irreducibles in canonical order."""
    start = time.perf_counter()
    field = field_of_order(cfg.q)
    polys = irreducibles_normalized(field, cfg.n)
    # Poly repr is Poly<...>; strip the wrapper for display
    names = [repr(p)[5:-1] for p in polys]
    return {"command": "irreducibles", "q": cfg.q, "count": cfg.n,
            "polynomials": names,
            "timing": time.perf_counter() - start}


def _text_irreducibles(payload):
    lines = ["first %d normalized irreducibles over F_%d "
             "(degree-ascending, constant term 1):"
             % (payload["count"], payload["q"])]
    for i, name in enumerate(payload["polynomials"], start=1):
        lines.append("  %d: %s" % (i, name))
    lines.append("time: %.3fs" % payload["timing"])
    return "\n".join(lines) + "\n"


def cmd_ring_table(cfg):
    """Multiplication table of the closed-form basis at depth m."""
    start = time.perf_counter()
    closed = kring.closed_form(cfg.q, cfg.m)
    basis = list(closed.k0) + list(closed.k1)
    products = []
    zero = 0
    for x in basis:
        for y in basis:
            p = kring.ring_product(x, y)
            if p is None:
                zero += 1
            products.append({"left": _symbol_dict(x),
                             "right": _symbol_dict(y),
                             "product": None if p is None
                             else _symbol_dict(p)})
    return {"command": "ring-table", "q": cfg.q, "m": cfg.m,
            "basis": {"K0": [_symbol_dict(s) for s in closed.k0],
                      "K1": [_symbol_dict(s) for s in closed.k1]},
            "products": products, "zero_products": zero,
            "timing": time.perf_counter() - start}


def _text_ring_table(payload):
    total = len(payload["products"])
    lines = ["closed-form ring table over F_%d, depth m=%d "
             "(%d products, %d zero)"
             % (payload["q"], payload["m"], total,
                payload["zero_products"])]
    for entry in payload["products"]:
        if entry["product"] is None:
            continue
        lines.append("  %s * %s = %s"
                     % (_symbol_text(entry["left"]),
                        _symbol_text(entry["right"]),
                        _symbol_text(entry["product"])))
    lines.append("zero products omitted: %d" % payload["zero_products"])
    lines.append("time: %.3fs" % payload["timing"])
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ffkt",
        description="exact K-theory of the polynomial-ring C*-algebra "
                    "over a finite field")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--q", type=int, required=True,
                       help="field order, a prime power")
        p.add_argument("--format", choices=FORMATS, default="text",
                       help="output format (default text)")
        p.add_argument("--out", metavar="PATH",
                       help="write the report here instead of stdout")

    p = sub.add_parser("kgroups",
                       help="tower K-groups checked against the closed "
                            "form")
    common(p)
    p.add_argument("--m", type=int, default=0, help="tower depth")
    p.add_argument("--cap", type=int, default=abgrp.LEVEL_CAP,
                   help="stabilization cap (default %d)" % abgrp.LEVEL_CAP)

    p = sub.add_parser("connecting-matrix",
                       help="induced refinement matrix on corner classes")
    common(p)
    p.add_argument("--n", type=int, default=1, help="starting level")

    p = sub.add_parser("verify", help="run the identity suites")
    common(p)
    p.add_argument("--n", type=int, default=1, help="matrix model level")
    p.add_argument("--precision", type=int,
                   default=symcross.DEFAULT_PRECISION,
                   help="symbolic level window (default %d)"
                        % symcross.DEFAULT_PRECISION)
    p.add_argument("--negative-control", action="store_true",
                   help="append checks that must fail")

    p = sub.add_parser("colimit",
                       help="structure of the corner-class colimit")
    common(p)
    p.add_argument("--n", type=int, default=1,
                   help="deepest level embedding to print")
    p.add_argument("--cap", type=int, default=abgrp.LEVEL_CAP,
                   help="stabilization cap (default %d)" % abgrp.LEVEL_CAP)

    p = sub.add_parser("irreducibles",
                       help="canonical normalized irreducibles")
    common(p)
    p.add_argument("--n", type=int, default=5, help="how many to list")

    p = sub.add_parser("ring-table",
                       help="multiplication table of the closed form")
    common(p)
    p.add_argument("--m", type=int, default=0, help="tower depth")
    return parser


def _run(args):
    if args.command == "kgroups":
        cfg = RunConfig(args.q, m=args.m, cap=args.cap, fmt=args.format)
        report = cmd_kgroups(cfg)
        code = 0 if report.comparison["ok"] else 1
        return code, _text_kgroups(report), report.to_dict()
    if args.command == "connecting-matrix":
        RunConfig(args.q, n=args.n, fmt=args.format)
        payload = cmd_connecting_matrix(args.q, args.n)
        code = 0 if payload["ok"] else 1
        return code, _text_connecting_matrix(payload), payload
    if args.command == "verify":
        cfg = RunConfig(args.q, n=args.n, precision=args.precision,
                        fmt=args.format)
        payload = cmd_verify(cfg, negative_control=args.negative_control)
        code = 0 if payload["ok"] else 1
        return code, _text_verify(payload), payload
    if args.command == "colimit":
        cfg = RunConfig(args.q, n=args.n, cap=args.cap, fmt=args.format)
        payload = cmd_colimit(cfg)
        return 0, _text_colimit(payload), payload
    if args.command == "irreducibles":
        cfg = RunConfig(args.q, n=args.n, fmt=args.format)
        payload = cmd_irreducibles(cfg)
        return 0, _text_irreducibles(payload), payload
    cfg = RunConfig(args.q, m=args.m, fmt=args.format)
    payload = cmd_ring_table(cfg)
    return 0, _text_ring_table(payload), payload


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, text, payload = _run(args)
    except StabilizationError as exc:
        print("stabilization cap exceeded: %s" % exc, file=sys.stderr)
        return 3
    except ValueError as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 2
    body = text if args.format == "text" else \
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(body)
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
