"""Command-line front end: ``posskit check|eval|valid|complete|dualize``.

Structure files are line oriented; ``#`` starts a comment. See the README for
the full list of directives.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from .balg import (FiniteBooleanAlgebra, FiniteLattice, canonical_extension, check_boolean_laws,
                   general_filter_frame, macneille, ro_algebra)
from .errors import CapExceeded, InputError
from .fomodel import FOModel, fo_eval, fo_extension, validate_fomodel
from .frames import (PossibilityFrame, frame_algebra, satisfies_filter_realization,
                     satisfies_separation, validate_frame)
from .heyting import (downset_algebra, dragalin_represent, fixpoint_algebra, is_locale)
from .modal import (CONDITIONS, MAX_VALUATIONS, Model, NeighborhoodFrame, QuasiNormalFrame,
                    RelationalFrame, check_n_condition, extension, is_r_tight, is_valid,
                    quasi_valid, relation_condition, validate_neighborhood_frame,
                    validate_relational_frame)
from .poset import Poset, is_separative, mask_of, members
from .syntax import parse
from .verdict import Check

KINDS = ("poset", "frame", "relframe", "nbframe", "ba", "lattice", "fomodel")
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


# structure files

@dataclass
class StructureFile:
    kind: str = "poset"
    elements: list[str] = field(default_factory=list)
    le: list[tuple[str, str]] = field(default_factory=list)
    admissible_full: bool = False
    props: dict[str, list[str]] = field(default_factory=dict)
    rels: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    nbs: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    designated: list[str] | None = None
    vals: dict[str, list[str]] = field(default_factory=dict)
    dom: list[str] = field(default_factory=list)
    eqs: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    preds: dict[str, int] = field(default_factory=dict)
    holds: dict[str, dict[str, list[tuple[str, ...]]]] = field(default_factory=dict)
    funs: dict[str, int] = field(default_factory=dict)
    maps: dict[str, dict[str, list[tuple[str, ...]]]] = field(default_factory=dict)
    exists: dict[str, list[str]] | None = None

    def poset(self) -> Poset:
        return Poset.from_pairs(self.elements, self.le)


_TOKEN = re.compile(r"\{[^}]*\}|->|=|[^\s{}=]+")


def _set(tok: str, lineno: int) -> list[str]:
    if not (tok.startswith("{") and tok.endswith("}")):
        raise InputError(f"line {lineno}: expected a set {{...}}, found {tok!r}")
    return [t.strip() for t in tok[1:-1].split(",") if t.strip()]


def parse_structure(text: str) -> StructureFile:
    sf = StructureFile()
    seen_kind = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = _TOKEN.findall(line)
        head, args = toks[0], toks[1:]

        def need(n, form):
            if len(args) != n:
                raise InputError(f"line {lineno}: expected `{head} {form}`")

        if head == "kind":
            need(1, "<kind>")
            if args[0] not in KINDS:
                raise InputError(f"line {lineno}: unknown kind {args[0]!r}")
            sf.kind, seen_kind = args[0], True
        elif head == "elements":
            sf.elements += args
        elif head == "le":
            need(2, "<a> <b>")
            sf.le.append((args[0], args[1]))
        elif head == "admissible":
            need(1, "full")
            if args[0] != "full":
                raise InputError(f"line {lineno}: only `admissible full` is supported")
            sf.admissible_full = True
        elif head == "prop":
            need(3, "<name> = {...}")
            sf.props[args[0]] = _set(args[2], lineno)
        elif head == "rel":
            need(3, "<index> <a> <b>")
            sf.rels.setdefault(args[0], []).append((args[1], args[2]))
        elif head == "nb":
            need(3, "<index> <el> {...}")
            sf.nbs.setdefault(args[0], {}).setdefault(args[1], []).extend(_set(args[2], lineno))
        elif head == "designated":
            need(1, "{...}")
            sf.designated = _set(args[0], lineno)
        elif head == "val":
            need(3, "<var> = <prop>|{...}")
            v = args[2]
            if v.startswith("{"):
                sf.vals[args[0]] = _set(v, lineno)
            elif v in sf.props:
                sf.vals[args[0]] = list(sf.props[v])
            else:
                raise InputError(f"line {lineno}: unknown proposition {v!r}")
        elif head == "dom":
            need(1, "{...}")
            sf.dom = _set(args[0], lineno)
        elif head == "eq":
            need(3, "<el> <g1> <g2>")
            sf.eqs.setdefault(args[0], []).append((args[1], args[2]))
        elif head in ("pred", "fun"):
            need(1, "<name>/<arity>")
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)/(\d+)", args[0])
            if not m:
                raise InputError(f"line {lineno}: expected <name>/<arity>")
            (sf.preds if head == "pred" else sf.funs)[m.group(1)] = int(m.group(2))
        elif head == "holds":
            if len(args) < 2:
                raise InputError(f"line {lineno}: expected `holds <P> <el> <g>...`")
            sf.holds.setdefault(args[0], {}).setdefault(args[1], []).append(tuple(args[2:]))
        elif head == "maps":
            if len(args) < 4 or args[-2] != "->":
                raise InputError(f"line {lineno}: expected `maps <f> <el> <g>... -> <g>`")
            sf.maps.setdefault(args[0], {}).setdefault(args[1], []).append(
                tuple(args[2:-2]) + (args[-1],))
        elif head == "exists":
            need(2, "<el> {...}")
            if sf.exists is None:
                sf.exists = {}
            sf.exists.setdefault(args[0], []).extend(_set(args[1], lineno))
        else:
            raise InputError(f"line {lineno}: unknown directive {head!r}")
    if not seen_kind:
        raise InputError("missing `kind` line")
    if not sf.elements:
        raise InputError("missing `elements` line")
    return sf


# building library objects

def _mask(P: Poset, names) -> int:
    return mask_of(P.index(n) for n in names)


def build_frame(sf: StructureFile) -> PossibilityFrame:
    P = sf.poset()
    if sf.admissible_full or sf.kind == "poset" or not sf.props:
        return PossibilityFrame.full(P)
    return PossibilityFrame(P, [_mask(P, v) for v in sf.props.values()])


def build_relframe(sf: StructureFile) -> RelationalFrame:
    base = build_frame(sf)
    P = base.poset
    for pairs in sf.rels.values():
        for a, b in pairs:
            P.index(a), P.index(b)
    return RelationalFrame(base, {i: [(P.index(a), P.index(b)) for a, b in pairs]
                                  for i, pairs in sf.rels.items()})


def build_nbframe(sf: StructureFile) -> NeighborhoodFrame:
    base = build_frame(sf)
    P = base.poset
    nbs = {}
    for i, table in sf.nbs.items():
        per = []
        for x in P.names:
            sets = []
            for name in table.get(x, []):
                if name not in sf.props:
                    raise InputError(f"neighborhood refers to unknown proposition {name!r}")
                sets.append(_mask(P, sf.props[name]))
            per.append(sets)
        for x in table:
            P.index(x)
        nbs[i] = per
    return NeighborhoodFrame(base, nbs)


def build_order(sf: StructureFile):
    P = sf.poset()
    if sf.kind == "ba":
        return FiniteBooleanAlgebra.from_order(P.leq, P.names)
    return FiniteLattice(P.leq, P.names)


def build_fomodel(sf: StructureFile) -> FOModel:
    P = sf.poset()
    if not sf.dom:
        raise InputError("fomodel needs a `dom` line")
    gi = {g: i for i, g in enumerate(sf.dom)}
    for g in {g for pairs in sf.eqs.values() for pr in pairs for g in pr}:
        if g not in gi:
            raise InputError(f"unknown guise {g!r}")
    rows = []
    for s in P.names:
        # equivalence closure of the listed pairs at s
        parent = list(range(len(sf.dom)))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        for a, b in sf.eqs.get(s, []):
            parent[find(gi[a])] = find(gi[b])
        rows.append(tuple(mask_of(b for b in range(len(sf.dom)) if find(b) == find(a))
                          for a in range(len(sf.dom))))
    for s in sf.eqs:
        P.index(s)
    for sym, table in list(sf.holds.items()) + list(sf.maps.items()):
        known = sf.preds if sym in sf.holds else sf.funs
        if sym not in known:
            raise InputError(f"undeclared symbol {sym!r}")
        for tup in (t for ts in table.values() for t in ts):
            if len(tup) != known[sym] + (0 if sym in sf.holds else 1):
                raise InputError(f"wrong number of arguments for {sym}")
    preds = {p: (a, sf.holds.get(p, {})) for p, a in sf.preds.items()}
    funs = {f: (a, sf.maps.get(f, {})) for f, a in sf.funs.items()}
    base = FOModel.build(P, sf.dom, preds=preds, funcs=funs, d=sf.exists,
                         relations=sf.rels if sf.rels else None)
    return FOModel(P, base.domain, tuple(rows), base.preds, base.funcs, base.d, base.relations)


# reports

@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    code: int = EXIT_OK


def _row(rep: Report, name: str, chk, required: bool):
    ok = bool(chk)
    witness = chk.witness if isinstance(chk, Check) else None
    verdict = ("ok" if ok else "FAIL") if required else ("yes" if ok else "no")
    rep.lines.append(f"{name:<28} {verdict}" + (f"  {witness}" if witness and not ok else ""))
    rep.data.setdefault("checks", []).append(
        {"condition": name, "ok": ok, "required": required, "witness": witness})
    if required and not ok:
        rep.code = EXIT_FAIL


def cmd_check(sf: StructureFile, args) -> Report:
    rep = Report()
    kind = sf.kind
    if kind == "poset":
        P = sf.poset()
        _row(rep, "partial order", Check(True), True)
        _row(rep, "separative", is_separative(P), False)
    elif kind in ("frame", "relframe", "nbframe"):
        F = build_frame(sf)
        chk = validate_frame(F)
        _row(rep, "admissible family", chk, True)
        if chk:
            _row(rep, "separation", satisfies_separation(F), False)
            _row(rep, "filter realization", satisfies_filter_realization(F), False)
        if kind == "relframe" and chk:
            R = build_relframe(sf)
            _row(rep, "box preserves admissible", validate_relational_frame(R), True)
            for i in R.index_names:
                for cond in CONDITIONS:
                    _row(rep, f"{cond} [{i}]", relation_condition(R.poset, R.rel(i), cond), False)
                _row(rep, f"R-tight [{i}]", is_r_tight(RelationalFrame(R.base, {i: R.rel(i)})), False)
        if kind == "nbframe" and chk:
            N = build_nbframe(sf)
            _row(rep, "box preserves admissible", validate_neighborhood_frame(N), True)
            for i in N.index_names:
                for cond in ("persistence", "refinability"):
                    _row(rep, f"N-{cond} [{i}]", check_n_condition(N, i, cond), True)
    elif kind in ("ba", "lattice"):
        P = sf.poset()
        try:
            L = build_order(sf)
            _row(rep, "lattice" if kind == "lattice" else "Boolean algebra", Check(True), True)
        except InputError as e:
            _row(rep, "lattice" if kind == "lattice" else "Boolean algebra", Check(False, str(e)), True)
            return rep
        if kind == "ba":
            err = check_boolean_laws(L)
            _row(rep, "Boolean laws", Check(err is None, err), True)
        else:
            _row(rep, "distributive", L.is_distributive(), False)
            _row(rep, "locale", is_locale(L), False)
    elif kind == "fomodel":
        _row(rep, "first-order model", validate_fomodel(build_fomodel(sf)), True)
    return rep


def _valuation(sf: StructureFile, P: Poset) -> dict[str, int]:
    return {v: _mask(P, els) for v, els in sf.vals.items()}


def _assignments(items) -> dict[str, str]:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise InputError(f"assignment {it!r} must look like x=guise")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_eval(sf: StructureFile, args) -> Report:
    rep = Report()
    if args.point is None or args.formula is None:
        raise InputError("eval needs -x <point> and -f <formula>")
    if sf.kind == "fomodel":
        M = build_fomodel(sf)
        P = M.poset
        x = P.index(args.point)
        f = M.parse(args.formula)
        g = _assignments(args.assign)
        value = fo_eval(M, x, g, f)
        forced = fo_extension(M, g, f)
    else:
        frame = _modal_frame(sf)
        P = frame.poset
        x = P.index(args.point)
        M = Model(frame, _valuation(sf, P))
        chk = M.check()
        if not chk:
            raise InputError(chk.witness)
        f = parse(args.formula)
        forced = extension(frame, M.val, f)
        value = bool(forced >> x & 1)
    rep.lines.append("true" if value else "false")
    if args.verbose:
        rep.lines.append(f"forced at {P.label(forced)}")
    rep.data = {"point": args.point, "formula": args.formula, "value": value,
                "forced": [P.names[i] for i in members(forced)]}
    rep.code = EXIT_OK if value else EXIT_FAIL
    return rep


def _modal_frame(sf: StructureFile):
    if sf.kind == "nbframe":
        return build_nbframe(sf)
    if sf.kind in ("poset", "frame", "relframe"):
        return build_relframe(sf)
    raise InputError(f"kind {sf.kind} does not support formula evaluation")


def cmd_valid(sf: StructureFile, args) -> Report:
    rep = Report()
    if args.formula is None:
        raise InputError("valid needs -f <formula>")
    frame = _modal_frame(sf)
    P = frame.poset
    f = parse(args.formula)
    cap = args.cap if args.cap is not None else MAX_VALUATIONS
    if sf.designated is not None:
        verdict = quasi_valid(QuasiNormalFrame(frame, _mask(P, sf.designated)), f, cap_vals=cap)
    else:
        verdict = is_valid(frame, f, cap_vals=cap)
    if verdict.valid:
        rep.lines.append("valid")
        rep.data = {"formula": args.formula, "valid": True}
        return rep
    rep.lines.append("countermodel")
    val = {v: [P.names[i] for i in members(U)] for v, U in verdict.valuation}
    for v, els in val.items():
        rep.lines.append(f"val {v} = {{{','.join(els)}}}")
    point = None if verdict.point is None else P.names[verdict.point]
    if point is not None:
        rep.lines.append(f"point {point}")
    rep.data = {"formula": args.formula, "valid": False, "valuation": val, "point": point}
    rep.code = EXIT_FAIL
    return rep


def dump_order(kind: str, labels, leq) -> list[str]:
    """Write an order in the file format, listing only covering pairs."""
    n = len(labels)
    names = [_safe(l) for l in labels]
    lines = [f"kind {kind}", "elements " + " ".join(names)]
    for a in range(n):
        for b in range(n):
            if a != b and leq[a][b] and not any(c not in (a, b) and leq[a][c] and leq[c][b]
                                                for c in range(n)):
                lines.append(f"le {names[a]} {names[b]}")
    return lines


def _safe(label: str) -> str:
    """Element names may not contain spaces, braces, commas or '='."""
    return re.sub(r"[\s=]", "_", label.replace("{", "[").replace("}", "]").replace(",", "."))


def dump_frame(F: PossibilityFrame, names=None) -> list[str]:
    P = F.poset
    names = names or list(P.names)
    lines = ["kind frame", "elements " + " ".join(names)]
    for a in range(P.size):
        for b in range(P.size):
            if P.lt(a, b) and not any(P.lt(a, c) and P.lt(c, b) for c in range(P.size)):
                lines.append(f"le {names[a]} {names[b]}")
    for k, U in enumerate(F.admissible):
        lines.append(f"prop U{k} = {{{','.join(names[i] for i in members(U))}}}")
    return lines


def cmd_complete(sf: StructureFile, args) -> Report:
    rep = Report()
    kind = args.construction
    if kind in ("macneille", "canonical"):
        if sf.kind != "ba":
            raise InputError(f"{kind} needs a `kind ba` input")
        B = build_order(sf)
        C = macneille(B)[0] if kind == "macneille" else canonical_extension(B)
        rep.lines = dump_order("ba", C.labels, C.leq)
    elif kind == "ro":
        if sf.kind not in ("poset", "frame"):
            raise InputError("ro needs a `kind poset` input")
        B = ro_algebra(sf.poset())
        rep.lines = dump_order("ba", B.labels, B.leq)
    elif kind == "dragalin":
        if sf.kind != "lattice":
            raise InputError("dragalin needs a `kind lattice` input")
        P, j = dragalin_represent(build_order(sf))
        L = fixpoint_algebra(downset_algebra(P), j).lattice()
        rep.lines = dump_order("lattice", L.labels, L.leq)
    else:
        raise InputError(f"unknown completion {kind!r}")
    rep.data = {"construction": kind, "output": rep.lines}
    return rep


def cmd_dualize(sf: StructureFile, args) -> Report:
    rep = Report()
    if sf.kind == "ba":
        G = general_filter_frame(build_order(sf))
        rep.lines = [f"# F{k} = {G.poset.names[k]}" for k in range(G.size)]
        rep.lines += dump_frame(G, [f"F{k}" for k in range(G.size)])
    elif sf.kind in ("frame", "poset"):
        B = frame_algebra(build_frame(sf))
        rep.lines = dump_order("ba", B.labels, B.leq)
    else:
        raise InputError("dualize needs a `kind ba` or `kind frame` input")
    rep.data = {"output": rep.lines}
    return rep


COMMANDS = {"check": cmd_check, "eval": cmd_eval, "valid": cmd_valid,
            "complete": cmd_complete, "dualize": cmd_dualize}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--cap", type=int, default=None, help="valuation budget for searches")
    ap = argparse.ArgumentParser(prog="posskit", description="Finite possibility semantics toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common]).add_argument("path")
    p = sub.add_parser("eval", parents=[common])
    p.add_argument("path")
    p.add_argument("-x", dest="point")
    p.add_argument("-f", dest="formula")
    p.add_argument("-g", dest="assign", action="append", help="FO assignment x=guise")
    p = sub.add_parser("valid", parents=[common])
    p.add_argument("path")
    p.add_argument("-f", dest="formula")
    p = sub.add_parser("complete", parents=[common])
    p.add_argument("construction", choices=["macneille", "canonical", "ro", "dragalin"])
    p.add_argument("path")
    sub.add_parser("dualize", parents=[common]).add_argument("path")
    return ap


def run(argv=None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        with open(args.path, encoding="utf-8") as fh:
            sf = parse_structure(fh.read())
        rep = COMMANDS[args.command](sf, args)
    except OSError as e:
        return EXIT_INPUT, f"error: {e}"
    except CapExceeded as e:
        return EXIT_CAP, f"cap exceeded: {e}"
    except InputError as e:
        return EXIT_INPUT, f"error: {e}"
    if args.json:
        return rep.code, json.dumps({"command": args.command, "exit": rep.code, **rep.data},
                                    sort_keys=True, ensure_ascii=False)
    return rep.code, "\n".join(rep.lines)


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stderr if code in (EXIT_INPUT, EXIT_CAP) else sys.stdout
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
