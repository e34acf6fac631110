# app/utils/parsing.py — domain mini-grammar, points CSV, set generators, corpus files
from __future__ import annotations

import csv
import io
import math
from typing import List, Tuple

from app.services.domains import (
    Annulus,
    Domain,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
)
from app.services.perfectness import CompactSetSample, cantor_iterate, geometric_gap_set
from app.utils.errors import BadParameters, DomainSpecError, ParseError, PointFormatError
from app.utils.sphere import INFINITY, SpherePoint, SphericalIsometry

DOMAIN_GRAMMAR = """\
domain  := disk:<cx>,<cy>,<R>        Euclidean disk |z - c| < R
         | half:<nx>,<ny>,<c>        half-plane Re(conj(n) z) > c
         | ext:<R>                   exterior disk |z| > R (contains inf)
         | punct:<R>                 punctured disk 0 < |z| < R
         | ann:<r>                   annulus r < |z| < 1, 0 < r < 1
         | isom:<theta>,<ax>,<ay>|<domain>
         | isom:<theta>,inf|<domain> image under z -> e^{i theta}(z-a)/(1+conj(a)z)
point   := <re>+<im>i | <re>-<im>i | <re> | inf
set     := cantor:<level> | geom:<base>,linear|quadratic,<n>
"""

_ARITY = {"disk": 3, "half": 3, "ext": 1, "punct": 1, "ann": 1}


# -----------------------------------------------------------------------------
# domains
# -----------------------------------------------------------------------------

def _number(token: str, text: str, pos: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DomainSpecError(f"expected a number, got {token.strip()!r}", text, pos) from None
    if not math.isfinite(value):
        raise DomainSpecError(f"expected a finite number, got {token.strip()!r}", text, pos)
    return value


def _split_args(body: str, start: int) -> List[Tuple[str, int]]:
    """Comma-separated tokens with their absolute offsets."""
    out: List[Tuple[str, int]] = []
    pos = start
    for token in body.split(","):
        out.append((token, pos))
        pos += len(token) + 1
    return out


def _parse_domain(text: str, start: int) -> Domain:
    s = text[start:]
    colon = s.find(":")
    if colon <= 0:
        raise DomainSpecError("expected '<kind>:' prefix", text, start)
    kind = s[:colon].strip().lower()
    body_start = start + colon + 1

    if kind == "isom":
        bar = text.find("|", body_start)
        if bar < 0:
            raise DomainSpecError("isom needs '|<domain>' after its parameters", text, len(text))
        args = _split_args(text[body_start:bar], body_start)
        if len(args) == 2 and args[1][0].strip().lower() == "inf":
            theta = _number(args[0][0], text, args[0][1])
            center = INFINITY
        elif len(args) == 3:
            theta = _number(args[0][0], text, args[0][1])
            center = SpherePoint(_number(args[1][0], text, args[1][1]), _number(args[2][0], text, args[2][1]))
        else:
            raise DomainSpecError("isom takes <theta>,<ax>,<ay> or <theta>,inf", text, body_start)
        return IsometryImage(SphericalIsometry(theta, center), _parse_domain(text, bar + 1))

    if kind not in _ARITY:
        raise DomainSpecError(f"unknown domain kind {kind!r}", text, start)
    args = _split_args(text[body_start:], body_start)
    if len(args) != _ARITY[kind]:
        raise DomainSpecError(f"{kind} takes {_ARITY[kind]} parameter(s), got {len(args)}", text, body_start)
    v = [_number(tok, text, pos) for tok, pos in args]
    try:
        if kind == "disk":
            return EuclideanDisk(complex(v[0], v[1]), v[2])
        if kind == "half":
            return HalfPlane(complex(v[0], v[1]), v[2])
        if kind == "ext":
            return ExteriorDisk(v[0])
        if kind == "punct":
            return PuncturedDisk(v[0])
        return Annulus(v[0])
    except BadParameters as e:
        raise DomainSpecError(str(e), text, body_start) from None


def parse_domain(text: str) -> Domain:
    s = str(text).strip()
    if not s:
        raise DomainSpecError("empty domain spec", s, 0)
    return _parse_domain(s, 0)


def parse_corpus(text: str) -> List[Domain]:
    """One domain spec per line; blank lines and '#' comments are ignored."""
    corpus: List[Domain] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            corpus.append(parse_domain(line))
        except DomainSpecError as e:
            raise DomainSpecError(f"line {lineno}: {e}", line, e.position) from None
    return corpus


# -----------------------------------------------------------------------------
# compact-set samples
# -----------------------------------------------------------------------------

def parse_points_csv(text: str, label: str = "points") -> CompactSetSample:
    """Rows `re,im`; an optional `re,im` header; at most one `inf` row."""
    points: List[complex] = []
    has_inf = False
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or not any(cells) or cells[0].startswith("#"):
            continue
        if lineno == 1 and [c.lower() for c in cells] == ["re", "im"]:
            continue
        if len(cells) == 1 and cells[0].lower() == "inf":
            if has_inf:
                raise PointFormatError(f"line {lineno}: more than one inf row", ",".join(cells), 0)
            has_inf = True
            continue
        if len(cells) != 2:
            raise PointFormatError(f"line {lineno}: expected 're,im'", ",".join(cells), 0)
        try:
            re_, im_ = float(cells[0]), float(cells[1])
        except ValueError:
            raise PointFormatError(f"line {lineno}: not a number", ",".join(cells), 0) from None
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise PointFormatError(f"line {lineno}: finite coordinates only", ",".join(cells), 0)
        points.append(complex(re_, im_))
    return CompactSetSample(tuple(points), contains_infinity=has_inf, label=label)


def format_points_csv(E: CompactSetSample) -> str:
    lines = ["re,im"] + [f"{p.real!r},{p.imag!r}" for p in E.points]
    if E.contains_infinity:
        lines.append("inf")
    return "\n".join(lines) + "\n"


def parse_generator(text: str) -> CompactSetSample:
    s = str(text).strip()
    head, sep, body = s.partition(":")
    if not sep:
        raise ParseError("expected cantor:<level> or geom:<base>,<rule>,<n>", s, 0)
    offset = len(head) + 1
    if head == "cantor":
        try:
            level = int(body)
        except ValueError:
            raise ParseError("cantor level must be an integer", s, offset) from None
        return cantor_iterate(level)
    if head == "geom":
        parts = body.split(",")
        if len(parts) != 3:
            raise ParseError("geom takes <base>,<rule>,<n>", s, offset)
        try:
            base, n = float(parts[0]), int(parts[2])
        except ValueError:
            raise ParseError("geom base must be a number and n an integer", s, offset) from None
        rule = parts[1].strip()
        if rule not in ("linear", "quadratic"):
            raise ParseError(f"unknown exponent rule {rule!r}", s, offset + len(parts[0]) + 1)
        return geometric_gap_set(base, rule, n)  # type: ignore[arg-type]
    raise ParseError(f"unknown generator {head!r}", s, 0)
