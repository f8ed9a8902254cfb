"""CPLEX-LP and fixed-MPS writers, and a reader for the LP files written here.

Coefficients are written as exact decimals when every number of a row has a
terminating decimal expansion. Otherwise the whole row (coefficients and
right-hand side) is multiplied by the least common denominator ``k`` of its
entries and preceded by a comment ``\\ scale <row> <k>`` (LP) or
``* scale <row> <k>`` (MPS); the reader divides it back out. A bound
without a terminating decimal is written rounded to 20 digits after a
comment ``\\ bound <var> lo|up <num>/<den>`` (``*`` in MPS) that holds
the exact value.
"""

from __future__ import annotations

import io
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import IO, Mapping

from .core import ZERO, InvalidInput
from .linsys import LinearSystem

LP_LINE_WIDTH = 250


def _terminates(v: Fraction) -> bool:
    d = v.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    return d == 1


def _fmt(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    with localcontext() as ctx:
        if _terminates(v):
            ctx.prec = 4 * v.denominator.bit_length() + len(str(v.numerator)) + 10
        else:
            ctx.prec = 20
        s = format(Decimal(v.numerator) / Decimal(v.denominator), "f")
    return s.rstrip("0").rstrip(".") if "." in s else s


def _row_scale(values) -> int:
    vals = [Fraction(v) for v in values]
    if all(_terminates(v) for v in vals):
        return 1
    k = 1
    for v in vals:
        k = k * v.denominator // _gcd(k, v.denominator)
    return k


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _expr(coeffs: Mapping[str, Fraction], scale: int) -> list[str]:
    terms = []
    for k, (name, a) in enumerate(coeffs.items()):
        a = a * scale
        mag = abs(a)
        body = name if mag == 1 else f"{_fmt(mag)} {name}"
        if k == 0:
            terms.append(f"-{body}" if a < 0 else body)
        else:
            terms.append(f"{'-' if a < 0 else '+'} {body}")
    return terms


def _wrap(head: str, terms: list[str], tail: str) -> list[str]:
    lines, cur = [], head
    for t in terms + ([tail] if tail else []):
        if len(cur) + 1 + len(t) > LP_LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   " + t
        else:
            cur = f"{cur} {t}" if cur else t
    lines.append(cur)
    return lines


def dumps_lp(system: LinearSystem) -> str:
    out = [f"\\ {system.name or 'orbikit system'}"]
    out.append("Maximize" if system.maximize else "Minimize")
    obj = system.objective or {}
    k = _row_scale(obj.values()) if obj else 1
    if k != 1:
        out.append(f"\\ scale obj {k}")
    out += _wrap(" obj:", _expr(obj, k), "")
    out.append("Subject To")
    for c in system.constraints:
        k = _row_scale(list(c.coeffs.values()) + [c.rhs])
        if k != 1:
            out.append(f"\\ scale {c.name} {k}")
        out += _wrap(f" {c.name}:", _expr(c.coeffs, k), f"{c.sense} {_fmt(c.rhs * k)}")
    out.append("Bounds")
    for v in system.variables:
        lo, up = v.lower, v.upper
        out += _exact_bound_comments("\\", v)
        if lo is None and up is None:
            out.append(f" {v.name} free")
        elif lo is None:
            out.append(f" -inf <= {v.name} <= {_fmt(up)}")
        elif up is None:
            out.append(f" {v.name} >= {_fmt(lo)}")
        else:
            out.append(f" {_fmt(lo)} <= {v.name} <= {_fmt(up)}")
    out.append("End")
    return "\n".join(out) + "\n"


def _exact_bound_comments(prefix: str, v) -> list[str]:
    return [
        f"{prefix} bound {v.name} {side} {val.numerator}/{val.denominator}"
        for side, val in (("lo", v.lower), ("up", v.upper))
        if val is not None and not _terminates(val)
    ]


def _mps_line(f1: str, f2: str, f3: str = "", f4: str = "") -> str:
    line = f" {f1:<2} {f2:<8}"
    if f3:
        line += f"  {f3:<8}"
    if f4:
        line += f"  {f4:>12}"
    return line.rstrip()


def dumps_mps(system: LinearSystem) -> str:
    """Fixed-column MPS: fields start at columns 2, 5, 15 and 25. Names longer
    than 8 characters push later fields right but keep them whitespace-separated."""
    out = [f"NAME          {system.name or 'ORBIKIT'}"]
    out += ["OBJSENSE", "    MAX" if system.maximize else "    MIN"]
    out.append("ROWS")
    out.append(" N  obj")
    scales = {}
    for c in system.constraints:
        out.append(f" {({'<=': 'L', '>=': 'G', '=': 'E'})[c.sense]}  {c.name}")
        scales[c.name] = _row_scale(list(c.coeffs.values()) + [c.rhs])
    obj = system.objective or {}
    scales["obj"] = _row_scale(obj.values()) if obj else 1
    for name, k in scales.items():
        if k != 1:
            out.append(f"* scale {name} {k}")
    out.append("COLUMNS")
    entries: dict[str, list] = {v.name: [] for v in system.variables}
    for name, a in obj.items():
        entries[name].append(("obj", a * scales["obj"]))
    for c in system.constraints:
        for name, a in c.coeffs.items():
            entries[name].append((c.name, a * scales[c.name]))
    for v in system.variables:
        rows = entries[v.name] or [("obj", ZERO)]
        for row, a in rows:
            out.append(_mps_line("", v.name, row, _fmt(a)))
    out.append("RHS")
    for c in system.constraints:
        if c.rhs:
            out.append(_mps_line("", "RHS", c.name, _fmt(c.rhs * scales[c.name])))
    out.append("BOUNDS")
    for v in system.variables:
        lo, up = v.lower, v.upper
        out += _exact_bound_comments("*", v)
        if lo is None and up is None:
            out.append(_mps_line("FR", "BND", v.name))
            continue
        if lo is None:
            out.append(_mps_line("MI", "BND", v.name))
        elif lo != 0:
            out.append(_mps_line("LO", "BND", v.name, _fmt(lo)))
        if up is not None:
            out.append(_mps_line("UP", "BND", v.name, _fmt(up)))
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def emit(system: LinearSystem, fmt: str, sink: IO) -> None:
    """Write ``system`` as ``lp`` or ``mps`` to a text or binary stream."""
    if fmt == "lp":
        text = dumps_lp(system)
    elif fmt == "mps":
        text = dumps_mps(system)
    else:
        raise InvalidInput(f"unknown format {fmt!r}")
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("ascii"))


# --------------------------------------------------------------------------
# reading

_SECTION = re.compile(
    r"^\s*(maximi[sz]e|max|minimi[sz]e|min|subject\s+to|such\s+that|st|s\.t\.|bounds?|end)\s*$", re.I
)
_TOKEN = re.compile(
    r"\s*(?:(?P<sense><=|>=|=<|=>|=|<|>)|(?P<label>[A-Za-z_][\w.~\[\]]*)\s*:|(?P<sign>[+-])"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][\w.~\[\]]*))"
)
_SENSES = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse LP text near {text[pos:pos + 30]!r}")
        pos = m.end()
        kind = m.lastgroup
        yield kind, m.group(kind)


def _parse_rows(text: str) -> list[tuple[str | None, dict, str | None, Fraction | None]]:
    """Split a section into ``(label, coeffs, sense, rhs)`` records."""
    rows = []
    label, coeffs, sign, coef, sense = None, {}, 1, None, None
    rhs_sign = 1
    started = False

    def flush():
        rows.append((label, coeffs, sense, None))

    for kind, val in _tokens(text):
        if sense is not None:
            if kind == "sign":
                rhs_sign = -1 if val == "-" else 1
                continue
            if kind == "num":
                rows.append((label, coeffs, sense, rhs_sign * Fraction(val)))
                label, coeffs, sign, coef, sense, rhs_sign, started = None, {}, 1, None, None, 1, False
                continue
            raise InvalidInput(f"unexpected {val!r} after a sense")
        if kind == "label":
            if started:
                flush()
                coeffs, sign, coef = {}, 1, None
            label, started = val, True
        elif kind == "sign":
            sign = -1 if val == "-" else 1
            started = True
        elif kind == "num":
            coef = Fraction(val)
            started = True
        elif kind == "name":
            a = sign * (coef if coef is not None else 1)
            coeffs[val] = coeffs.get(val, ZERO) + a
            sign, coef, started = 1, None, True
        elif kind == "sense":
            sense = _SENSES[val]
    if started:
        flush()
    return rows


def _parse_bound(line: str):
    parts = line.split()
    num = lambda s: None if s.lower() in ("-inf", "-infinity") else Fraction(s)  # noqa: E731
    if len(parts) == 2 and parts[1].lower() == "free":
        return parts[0], None, None, True
    if len(parts) == 3:
        name, op, val = parts
        if op in (">=", "=>"):
            return name, num(val), None, False
        if op in ("<=", "=<"):
            return name, None, Fraction(val), False
        if op == "=":
            return name, Fraction(val), Fraction(val), False
    if len(parts) == 5 and parts[1] in ("<=", "=<") and parts[3] in ("<=", "=<"):
        return parts[2], num(parts[0]), None if parts[4].lower() in ("inf", "+inf") else Fraction(parts[4]), False
    raise InvalidInput(f"unsupported bound line {line!r}")


def read_lp(text: str) -> LinearSystem:
    """Parse the LP subset produced by :func:`dumps_lp` (no ranges, no integers)."""
    sections: dict[str, list[str]] = {"obj": [], "rows": [], "bounds": []}
    scales: dict[str, int] = {}
    exact: dict[tuple[str, str], Fraction] = {}
    name = ""
    maximize = True
    current = None
    first_comment = True
    for raw in text.splitlines():
        if raw.lstrip().startswith("\\"):
            body = raw.lstrip()[1:].strip()
            m = re.match(r"scale\s+(\S+)\s+(\d+)$", body)
            b = re.match(r"bound\s+(\S+)\s+(lo|up)\s+(-?\d+/\d+)$", body)
            if m:
                scales[m.group(1)] = int(m.group(2))
            elif b:
                exact[b.group(1), b.group(2)] = Fraction(b.group(3))
            elif first_comment and current is None:
                name = body
            first_comment = False
            continue
        line = raw.split("\\", 1)[0]
        m = _SECTION.match(line)
        if m:
            word = m.group(1).lower()
            if word.startswith("max"):
                current, maximize = "obj", True
            elif word.startswith("min"):
                current, maximize = "obj", False
            elif word.startswith("bound"):
                current = "bounds"
            elif word == "end":
                current = None
            else:
                current = "rows"
            continue
        if not line.strip():
            continue
        if current is None:
            raise InvalidInput(f"text outside any section: {line!r}")
        sections[current].append(line)

    bounds = {}
    order = []
    for line in sections["bounds"]:
        vname, lo, up, free = _parse_bound(line)
        if vname not in bounds:
            order.append(vname)
            bounds[vname] = [ZERO, None]
        if free:
            bounds[vname] = [None, None]
        else:
            if lo is not None or line.split()[0].lower() in ("-inf", "-infinity"):
                bounds[vname][0] = lo
            if up is not None:
                bounds[vname][1] = up

    for (vname, side), val in exact.items():
        if vname in bounds:
            bounds[vname][side == "up"] = val

    obj_rows = _parse_rows(" ".join(sections["obj"]))
    con_rows = _parse_rows(" ".join(sections["rows"]))
    for _, coeffs, _, _ in obj_rows + con_rows:
        for v in coeffs:
            if v not in bounds:
                order.append(v)
                bounds[v] = [ZERO, None]

    system = LinearSystem(name=name)
    for v in order:
        system.add_variable(v, *bounds[v])
    for label, coeffs, sense, rhs in con_rows:
        if sense is None or label is None:
            raise InvalidInput(f"incomplete constraint {label!r}")
        k = scales.get(label, 1)
        system.add_constraint(label, {v: a / k for v, a in coeffs.items()}, sense, rhs / k)
    obj = {}
    for label, coeffs, _, _ in obj_rows:
        k = scales.get(label or "obj", 1)
        obj.update({v: a / k for v, a in coeffs.items()})
    system.set_objective(obj or None, maximize)
    return system
