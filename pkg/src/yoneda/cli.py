"""Command line front end: ``algctl <command> [--preset NAME | --input FILE]``.

Presentation files look like::

    field Q
    gen a0 b0 c0
    rel a0*b0*c0
    rel c0*a0

Reports are deterministic; ``--json`` emits a document with the keys
``command``, ``params``, ``certificates`` and ``payload``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .field import QQ, field_from_name
from .freealg import Poly, PresentationError, make_presentation, word_str
from .rewrite import Algebra, CertificateError, NotConfluentError


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        self.line, self.col = line, col
        super().__init__("line %d, column %d: %s" % (line, col, msg))


class UsageError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[+\-*]))")


def _tokens(s, line, col0):
    pos = 0
    out = []
    while pos < len(s):
        if s[pos:].strip() == "":
            break
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            j = pos
            while j < len(s) and s[j].isspace():
                j += 1
            raise ParseError("unexpected character %r" % s[j], line, col0 + j + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    return out


def _parse_expr(toks, gens, line, endcol):
    """``[sign] term (sign term)*`` with ``term = [num *] name (* name)*`` or ``num``."""
    terms = {}
    i = 0
    n = len(toks)

    def err(msg, k):
        col = toks[k][2] if k < n else endcol
        raise ParseError(msg, line, col)

    if n == 0:
        raise ParseError("empty expression", line, endcol)
    first = True
    while i < n:
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            err("expected '+' or '-'", i)
        first = False
        coeff = Fraction(1)
        word = []
        if i < n and toks[i][0] == "num":
            coeff = Fraction(toks[i][1])
            i += 1
            if i < n and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
                if i >= n or toks[i][0] != "name":
                    err("expected a generator after '*'", i)
        elif i >= n or toks[i][0] != "name":
            err("expected a term", i)
        while i < n and toks[i][0] == "name":
            name, col = toks[i][1], toks[i][2]
            if name not in gens:
                raise ParseError("unknown generator %r" % name, line, col)
            word.append(gens.index(name))
            i += 1
            if i < n and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
                if i >= n or toks[i][0] != "name":
                    err("expected a generator after '*'", i)
        w = tuple(word)
        s = terms.get(w, 0) + sign * coeff
        if s:
            terms[w] = s
        else:
            terms.pop(w, None)
    return terms


def parse_presentation(text):
    """Parse the presentation grammar; errors carry line and column."""
    field = QQ
    gens = None
    rels = []
    saw_field = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col0 = len(body) - len(body.lstrip())
        kw, _, rest = stripped.partition(" ")
        rest_col = col0 + len(kw) + 1
        if kw == "field":
            if saw_field or gens is not None:
                raise ParseError("field must be declared once, before generators", lineno, col0 + 1)
            try:
                field = field_from_name(rest)
            except ValueError as e:
                raise ParseError(str(e), lineno, rest_col + 1)
            saw_field = True
        elif kw == "gen":
            if gens is not None:
                raise ParseError("generators already declared", lineno, col0 + 1)
            names = rest.split()
            if not names:
                raise ParseError("no generators listed", lineno, rest_col)
            for nm in names:
                if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm):
                    raise ParseError("bad generator name %r" % nm, lineno, rest_col + rest.index(nm) + 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate generator names", lineno, rest_col + 1)
            gens = tuple(names)
        elif kw == "rel":
            if gens is None:
                raise ParseError("relation before the generator declaration", lineno, col0 + 1)
            toks = _tokens(rest, lineno, rest_col)
            terms = _parse_expr(toks, gens, lineno, len(body) + 1)
            try:
                p = Poly({w: field(c) for w, c in terms.items()}, gens)
            except ZeroDivisionError as e:
                raise ParseError(str(e), lineno, rest_col + 1)
            if not p:
                continue
            if not p.is_homogeneous():
                raise ParseError("relation is inhomogeneous (degrees %s)" % sorted(p.degrees()),
                                 lineno, rest_col + 1)
            if p.degree() < 2:
                raise ParseError("relation has degree < 2", lineno, rest_col + 1)
            rels.append(p)
        else:
            raise ParseError("unknown keyword %r (expected field, gen or rel)" % kw, lineno, col0 + 1)
    if gens is None:
        raise ParseError("missing 'gen' line", 1, 1)
    try:
        return make_presentation(gens, rels, field)
    except (PresentationError, ZeroDivisionError) as e:
        raise ParseError(str(e), 1, 1)


def print_presentation(pres):
    return pres.to_text()


# ---------------------------------------------------------------------------
# commands


def _fmt(field, c):
    return field.to_str(c)


def _load(args):
    from .resolve import preset
    if args.preset and args.input:
        raise UsageError("use either --preset or --input")
    if args.preset:
        try:
            b = preset(args.preset, D=max(args.max_homological, 2))
        except ValueError as e:
            raise UsageError(str(e))
        return b, b.alg
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                pres = parse_presentation(fh.read())
        except OSError as e:
            raise UsageError(str(e))
        alg = Algebra.from_presentation(pres, confluence_bound=max(12, args.max_degree))
        from .resolve import PresetBundle
        return PresetBundle(args.input, alg), alg
    raise UsageError("one of --preset or --input is required")


def _class_name(labels, key):
    return labels.get(key, "e%d_%d" % key)


def cmd_basis(args, bundle, alg):
    degs = []
    for m in range(args.max_degree + 1):
        words = alg.basis(m)
        entry = {"m": m, "dim": len(words)}
        if len(words) <= args.list_limit:
            entry["words"] = [word_str(w, alg.gens) for w in words]
        else:
            entry["words_omitted"] = True
        degs.append(entry)
    lines = []
    for e in degs:
        shown = " ".join(e.get("words", ["..."]))
        lines.append("degree %d: dim %d  %s" % (e["m"], e["dim"], shown))
    return 0, {"degrees": degs}, lines


def cmd_hilbert(args, bundle, alg):
    dims = alg.hilbert(args.max_degree)
    return 0, {"dims": dims}, ["dims: " + " ".join(map(str, dims))]


def _resolution(args, alg):
    from .resolve import minimal_resolution
    return minimal_resolution(alg, args.max_homological, args.max_degree)


def cmd_resolve(args, bundle, alg):
    from .resolve import describe_betti, euler_characteristic
    res = _resolution(args, alg)
    chi, top = euler_characteristic(res)
    payload = {
        "betti": describe_betti(res),
        "stage_certified": res.stage_certified,
        "finished": res.finished,
        "euler": {"up_to": top, "ok": chi == [1] + [0] * top},
    }
    lines = ["Q_%d: B(%s)" % (b["d"], ",".join(map(str, b["shifts"]))) for b in payload["betti"]]
    if res.truncated:
        lines.append("warning: generators certified only up to internal degree %d from Q_%d on"
                     % (args.max_degree, res.truncated_at()))
    if res.finished:
        lines.append("resolution is finite")
    return 0, payload, lines


def cmd_k2(args, bundle, alg):
    from .k2 import k2_check
    res = _resolution(args, alg)
    rep = k2_check(alg, res, args.max_homological)
    degs = [{"d": x.d, "rows": x.rows, "rank": x.rank, "ok": x.ok,
             "dependent_rows": x.dependent_rows} for x in rep.degrees]
    w = rep.witness()
    payload = {"verdict": rep.verdict, "certified": rep.certified, "degrees": degs,
               "witness": None if w is None else {"d": w.d, "rows": w.dependent_rows}}
    lines = ["d=%d rows=%d rank=%d %s" % (x["d"], x["rows"], x["rank"], "ok" if x["ok"] else "DEPENDENT")
             for x in degs]
    lines.append("K2 up to d=%d: %s%s" % (args.max_homological, "yes" if rep.verdict else "no",
                                          "" if rep.certified else " (resolution truncated)"))
    return (0 if rep.verdict else 1), payload, lines


def cmd_ext(args, bundle, alg):
    res = _resolution(args, alg)
    labels = bundle.label_resolution(res, top=args.max_homological)
    classes = []
    table = {}
    for p, Q in enumerate(res.modules):
        for l, s in enumerate(Q.shifts):
            name = "1" if p == 0 else _class_name(labels, (p, l))
            classes.append({"p": p, "q": -s, "label": name})
            table[(p, -s)] = table.get((p, -s), 0) + 1
    payload = {"classes": classes,
               "table": [{"p": p, "q": q, "dim": n} for (p, q), n in sorted(table.items())]}
    lines = ["E^{%d,%d}: %d" % (p, q, n) for (p, q), n in sorted(table.items())]
    return 0, payload, lines


_CALL = re.compile(r"\s*m(\d+)\s*\(")


def _parse_call(s, pos, names):
    """``m<k>(arg, ...)`` where an argument is a class name or another call."""
    m = _CALL.match(s, pos)
    if not m:
        raise UsageError("expected m<k>(...) at position %d of %r" % (pos + 1, s))
    k = int(m.group(1))
    pos = m.end()
    args = []
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if _CALL.match(s, pos):
            sub, pos = _parse_call(s, pos, names)
            args.append(sub)
        else:
            mm = re.compile(r"[A-Za-z][A-Za-z0-9_]*").match(s, pos)
            if not mm:
                raise UsageError("expected a class name at position %d of %r" % (pos + 1, s))
            if mm.group(0) not in names:
                raise UsageError("unknown class %r (known: %s)" % (mm.group(0), ", ".join(sorted(names))))
            args.append(names[mm.group(0)])
            pos = mm.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos < len(s) and s[pos] == ",":
            pos += 1
            continue
        if pos < len(s) and s[pos] == ")":
            pos += 1
            break
        raise UsageError("expected ',' or ')' at position %d of %r" % (pos + 1, s))
    if len(args) != k:
        raise UsageError("m%d given %d arguments" % (k, len(args)))
    return ("m", k, args), pos


def _call_degree(node):
    if node[0] == "m":
        return sum(_call_degree(a) for a in node[2]) + 2 - node[1]
    return node[1][0]


def _call_total(node):
    if node[0] == "m":
        return max([sum(_call_degree(a) for a in node[2])] + [_call_total(a) for a in node[2]])
    return node[1][0]


def _ainf_setup(args, alg, bundle, J):
    from .ainfty import Merkulov, build_sdr
    from .resolve import minimal_resolution
    N = max(args.max_degree, 2 * J + 2)
    res = minimal_resolution(alg, J, N)
    if J > res.complex.length and not res.ended:
        raise UsageError("resolution too short for window %d" % J)
    sdr, _ = build_sdr(res, J, verify=False)
    labels = bundle.label_resolution(res, top=J)
    return res, sdr, Merkulov(sdr), labels


def _value_json(field, labels, e):
    return [{"basis": _class_name(labels, (e.n, l)), "coeff": _fmt(field, c)} for l, c in e.items()]


def cmd_ainf(args, bundle, alg):
    from .ainfty import basis_class, m_table
    if not args.eval and not args.table:
        raise UsageError("ainf needs --eval EXPR and/or --table")
    payload = {}
    lines = []
    tree = None
    if args.eval:
        # class names need a resolution; a provisional window is widened below
        J0 = args.window or max(args.max_homological, 4)
        labels0 = _ainf_setup(args, alg, bundle, J0)[3]
        names = {v: ("c", k) for k, v in labels0.items()}
        tree, end = _parse_call(args.eval, 0, names)
        if args.eval[end:].strip():
            raise UsageError("trailing text after expression: %r" % args.eval[end:])
    J = args.window
    if J is None:
        J = (_call_total(tree) + 1) if tree else max(args.max_homological, 4)
        if tree:
            J = max(J, 2)
    res, sdr, merk, labels = _ainf_setup(args, alg, bundle, J)
    field = alg.field
    if tree:
        def ev(node):
            if node[0] == "c":
                n, l = node[1]
                return basis_class(n, l)
            return merk.m_linear([ev(a) for a in node[2]])
        val = ev(tree)
        payload["expression"] = args.eval
        payload["degree"] = val.n
        payload["value"] = _value_json(field, labels, val)
        payload["zero"] = val.is_zero()
        shown = " + ".join("%s*%s" % (v["coeff"], v["basis"]) for v in payload["value"]) or "0"
        lines.append("%s = %s" % (args.eval, shown))
    if args.table:
        total = J - 1
        tab = m_table(merk, args.max_arity, total)
        entries = []
        for xs, v in sorted(tab.entries.items()):
            if v.is_zero():
                continue
            entries.append({"k": len(xs), "args": [_class_name(labels, x) for x in xs],
                            "value": _value_json(field, labels, v)})
        payload["table"] = entries
        payload["table_bounds"] = {"max_arity": args.max_arity, "max_total_degree": total}
        payload["zero_entries_omitted"] = len(tab.entries) - len(entries)
        for e in entries:
            shown = " + ".join("%s*%s" % (v["coeff"], v["basis"]) for v in e["value"])
            lines.append("m%d(%s) = %s" % (e["k"], ", ".join(e["args"]), shown))
    return 0, payload, lines, J


def cmd_stasheff(args, bundle, alg):
    from .ainfty import stasheff_check
    J = args.window or max(args.max_homological, 4)
    res, sdr, merk, labels = _ainf_setup(args, alg, bundle, J)
    rep = stasheff_check(merk, args.max_arity, J - 1)
    field = alg.field
    resid = [{"args": [_class_name(labels, x) for x in xs], "value": _value_json(field, labels, r)}
             for xs, r in rep.residuals]
    payload = {"checked": rep.checked, "ok": rep.ok, "residuals": resid,
               "max_arity": args.max_arity, "max_total_degree": J - 1}
    lines = ["checked %d tensors, %d nonzero residuals" % (rep.checked, len(resid))]
    return (0 if rep.ok else 1), payload, lines, J


def cmd_preset(args, bundle, alg):
    from .resolve import PRESET_NAMES
    if args.list or bundle is None:
        return 0, {"presets": list(PRESET_NAMES)}, list(PRESET_NAMES)
    text = alg.pres.to_text()
    payload = {"name": bundle.name, "presentation": text,
               "explicit_resolution": bundle.explicit is not None}
    if bundle.explicit is not None:
        payload["explicit_betti"] = [{"d": d, "shifts": list(Q.shifts)}
                                     for d, Q in enumerate(bundle.explicit.modules)]
    return 0, payload, text.rstrip("\n").split("\n")


COMMANDS = {
    "basis": cmd_basis, "hilbert": cmd_hilbert, "resolve": cmd_resolve, "k2": cmd_k2,
    "ext": cmd_ext, "ainf": cmd_ainf, "stasheff": cmd_stasheff, "preset": cmd_preset,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="algctl", description="Normal forms, resolutions, Ext and A-infinity "
                                           "structures of graded algebras.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--preset", help="B<n>, A1, A2, koszul2 or koszulmono2")
    p.add_argument("--input", help="presentation file")
    p.add_argument("--max-degree", type=int, default=8, help="internal degree bound N")
    p.add_argument("--max-homological", type=int, default=4, help="homological bound D")
    p.add_argument("--window", type=int, default=None, help="cochain window J")
    p.add_argument("--max-arity", type=int, default=4, help="largest k for --table and stasheff")
    p.add_argument("--eval", help='expression such as "m3(alpha0,beta0,gamma0)"')
    p.add_argument("--table", action="store_true", help="list nonzero m_k on basis tensors")
    p.add_argument("--list", action="store_true", help="with preset: list preset names")
    p.add_argument("--list-limit", type=int, default=200, help="basis: omit word lists longer than this")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seedless", action="store_true", help="no randomized checks (the default anyway)")
    return p


def run_command(argv):
    """Return ``(exit_code, report, text)`` without printing."""
    try:
        args = build_parser().parse_args(argv)
        for name in ("max_degree", "max_homological"):
            if getattr(args, name) < 0:
                raise UsageError("--%s must be nonnegative" % name.replace("_", "-"))
        if args.window is not None and args.window < 1:
            raise UsageError("--window must be positive")
        if args.command == "preset" and (args.list or not (args.preset or args.input)):
            bundle, alg = None, None
        else:
            bundle, alg = _load(args)
        out = COMMANDS[args.command](args, bundle, alg)
        code, payload, lines = out[:3]
        window = out[3] if len(out) > 3 else args.window
    except (UsageError, ParseError, NotConfluentError, CertificateError, PresentationError) as e:
        report = {"command": argv[0] if argv else None, "error": str(e)}
        return 2, report, "error: %s" % e
    params = {"preset": args.preset, "input": args.input, "seedless": args.seedless}
    if args.command == "ainf":
        params.update({"eval": args.eval, "table": args.table, "max_arity": args.max_arity})
    if args.command == "stasheff":
        params["max_arity"] = args.max_arity
    report = {
        "command": args.command,
        "params": params,
        "certificates": {"max_degree": args.max_degree, "max_homological": args.max_homological,
                         "window": window},
        "payload": payload,
    }
    return code, report, "\n".join(lines)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, report, text = run_command(argv)
    as_json = "--json" in argv
    if code == 2:
        if as_json:
            print(json.dumps(report, indent=2))
        print(text, file=sys.stderr)
        return code
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
