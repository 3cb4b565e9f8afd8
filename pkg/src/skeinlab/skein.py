"""Bracket skein algebra of a disk with n holes, over exact geometry.

Diagrams are closed rational polylines with over/under data at every
transverse double point.  `resolve` performs the two-smoothing state sum
and classifies every resulting embedded loop by the set of holes it
encloses, producing an element of the free module on laminar multicurves.
`multiply` stacks diagrams (first factor on top) and resolves.

All geometry is exact (`fractions.Fraction`); scalars live in the
half-integer Laurent ring of :mod:`skeinlab.ring`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .geom import (
    OVERLAP,
    POINT,
    Point,
    cross,
    point_segment_dist2,
    segment_intersection,
    sub,
    winding_contribution,
)
from .ring import Laurent, ONE

Component = Tuple[int, ...]
Multicurve = Tuple[Component, ...]

HOLE_RADIUS = Fraction(1, 4)
_RADIUS2 = HOLE_RADIUS * HOLE_RADIUS
# Value of a null-homotopic loop: -(q + q^{-1}).
MINUS_ALPHA = Laurent({2: -1, -2: -1})

# Vertical clearance kept between curve profiles and the hole ordinate.
_PIN = Fraction(5, 16)
_HALF = Fraction(1, 2)

DEFAULT_STATE_CAP = 24


class DiagramError(ValueError):
    """Malformed or geometrically invalid diagram input."""


@dataclass(frozen=True)
class Board:
    """Disk with `n_holes` punctures at (1,0) .. (n,0), radius 1/4 each."""

    n_holes: int

    def __post_init__(self) -> None:
        if self.n_holes < 0:
            raise ValueError("hole count must be nonnegative")

    def centers(self) -> List[Point]:
        return [(Fraction(i), Fraction(0)) for i in range(1, self.n_holes + 1)]


# ---------------------------------------------------------------------------
# Multicurves


def is_laminar(components: Iterable[Component]) -> bool:
    """True when every pair of hole sets is nested or disjoint."""
    sets = [frozenset(c) for c in components]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            a, b = sets[i], sets[j]
            if not (a <= b or b <= a or not (a & b)):
                return False
    return True


def canonical_multicurve(components: Iterable[Iterable[int]], board: Board) -> Multicurve:
    """Validate and sort a multiset of enclosed-hole sets."""
    comps: List[Component] = []
    for raw in components:
        comp = tuple(sorted(set(raw)))
        if not comp:
            raise ValueError("multicurve components must be nonempty")
        if comp[0] < 1 or comp[-1] > board.n_holes:
            raise ValueError(f"hole index out of range in component {comp}")
        comps.append(comp)
    if not is_laminar(comps):
        raise ValueError(f"multicurve is not laminar: {comps}")
    return tuple(sorted(comps))


def render_multicurve(m: Multicurve) -> str:
    return "{" + "|".join(",".join(str(i) for i in comp) for comp in m) + "}"


# ---------------------------------------------------------------------------
# Skein elements


class SkeinElement:
    """Finitely supported map from laminar multicurves to Laurent scalars."""

    __slots__ = ("board", "terms")

    def __init__(self, board: Board, terms: Dict[Multicurve, Laurent]):
        self.board = board
        self.terms: Dict[Multicurve, Laurent] = {
            m: c for m, c in terms.items() if not c.is_zero()
        }

    @classmethod
    def zero(cls, board: Board) -> "SkeinElement":
        return cls(board, {})

    @classmethod
    def unit(cls, board: Board) -> "SkeinElement":
        return cls(board, {(): ONE})

    @classmethod
    def basis(cls, board: Board, m: Iterable[Iterable[int]]) -> "SkeinElement":
        return cls(board, {canonical_multicurve(m, board): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self.board == other.board and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.board, frozenset(self.terms.items())))

    def __add__(self, other: "SkeinElement") -> "SkeinElement":
        if not isinstance(other, SkeinElement):
            return NotImplemented
        self._check_board(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Laurent.zero()) + c
        return SkeinElement(self.board, out)

    def __sub__(self, other: "SkeinElement") -> "SkeinElement":
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self + other.scale(-1)

    def __neg__(self) -> "SkeinElement":
        return self.scale(-1)

    def scale(self, coeff: "Laurent | int") -> "SkeinElement":
        return SkeinElement(self.board, {m: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other: "SkeinElement | Laurent | int") -> "SkeinElement":
        if isinstance(other, (Laurent, int)):
            return self.scale(other)
        if isinstance(other, SkeinElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other: "Laurent | int") -> "SkeinElement":
        if isinstance(other, (Laurent, int)):
            return self.scale(other)
        return NotImplemented

    def _check_board(self, other: "SkeinElement") -> None:
        if self.board != other.board:
            raise ValueError("elements live on different boards")

    def render(self) -> str:
        """One line per basis multicurve, canonical order."""
        if not self.terms:
            return "0"
        lines = []
        for m in sorted(self.terms):
            coeff = self.terms[m]
            text = coeff.render()
            if len(coeff.terms) > 1:
                text = f"({text})"
            lines.append(f"{text} * {render_multicurve(m)}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"SkeinElement({self.render()!r})"


# ---------------------------------------------------------------------------
# Diagrams

Branch = Tuple[int, int, Fraction]  # (polyline index, segment index, parameter)


@dataclass(frozen=True)
class Crossing:
    point: Point
    branches: Tuple[Branch, Branch]
    over_branch: int  # index into `branches`


def _segments(poly: Sequence[Point]) -> List[Tuple[Point, Point]]:
    return [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def _fmt_point(p: Point) -> str:
    return f"({p[0]},{p[1]})"


def _find_crossings(
    board: Board, polylines: Sequence[Sequence[Point]], ids: Sequence[str]
) -> List[Tuple[Point, Branch, Branch]]:
    """Validate geometry and return raw crossings (unsorted over data)."""
    if len(ids) != len(polylines):
        raise DiagramError("curve id list does not match polyline list")
    if len(set(ids)) != len(ids):
        raise DiagramError("duplicate curve id")
    for pi, poly in enumerate(polylines):
        if len(poly) < 3:
            raise DiagramError(f"curve '{ids[pi]}' needs at least 3 vertices")
        for a, b in _segments(poly):
            if a == b:
                raise DiagramError(
                    f"curve '{ids[pi]}' has a zero-length edge at {_fmt_point(a)}"
                )
    # Hole clearance, exact: squared distance must exceed (1/4)^2.
    for pi, poly in enumerate(polylines):
        for a, b in _segments(poly):
            x0, x1 = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
            y0, y1 = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
            for hole, center in enumerate(board.centers(), start=1):
                cx, cy = center
                if (
                    x0 > cx + HOLE_RADIUS
                    or x1 < cx - HOLE_RADIUS
                    or y0 > cy + HOLE_RADIUS
                    or y1 < cy - HOLE_RADIUS
                ):
                    continue
                if point_segment_dist2(center, a, b) <= _RADIUS2:
                    raise DiagramError(
                        f"curve '{ids[pi]}' meets hole {hole}: edge "
                        f"{_fmt_point(a)}-{_fmt_point(b)}"
                    )
    segs = [
        (pi, si, a, b)
        for pi, poly in enumerate(polylines)
        for si, (a, b) in enumerate(_segments(poly))
    ]
    boxes = []
    for _, _, a, b in segs:
        x0, x1 = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
        y0, y1 = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
        boxes.append((x0, x1, y0, y1))
    contacts: List[Tuple[Point, Branch, Branch]] = []
    for idx1 in range(len(segs)):
        p1, s1, a1, b1 = segs[idx1]
        bx = boxes[idx1]
        for idx2 in range(idx1 + 1, len(segs)):
            by = boxes[idx2]
            # Closed-box overlap keeps endpoint contacts for the checks below.
            if bx[1] < by[0] or by[1] < bx[0] or bx[3] < by[2] or by[3] < bx[2]:
                continue
            p2, s2, a2, b2 = segs[idx2]
            hit = segment_intersection(a1, b1, a2, b2)
            if hit is None:
                continue
            kind, pt, t, u = hit
            if p1 == p2:
                n = len(polylines[p1])
                adjacent = (s2 - s1) % n == 1 or (s1 - s2) % n == 1
                if adjacent:
                    # Consecutive edges may only share their joint vertex.
                    if kind == OVERLAP:
                        raise DiagramError(
                            f"curve '{ids[p1]}' doubles back along itself near "
                            f"{_fmt_point(a2)}"
                        )
                    joint = a2 if (s2 - s1) % n == 1 else a1
                    if pt != joint:
                        raise DiagramError(
                            f"curve '{ids[p1]}' touches itself at {_fmt_point(pt)}"
                        )
                    continue
            if kind == OVERLAP:
                raise DiagramError(
                    f"collinear overlap between '{ids[p1]}' and '{ids[p2]}' near "
                    f"{_fmt_point(a2)}"
                )
            if not (0 < t < 1 and 0 < u < 1):
                raise DiagramError(
                    f"non-transverse contact between '{ids[p1]}' and '{ids[p2]}' "
                    f"at {_fmt_point(pt)}"
                )
            contacts.append((pt, (p1, s1, t), (p2, s2, u)))
    seen: Dict[Point, Tuple[Branch, Branch]] = {}
    for pt, br1, br2 in contacts:
        if pt in seen:
            raise DiagramError(f"triple point at {_fmt_point(pt)}")
        seen[pt] = (br1, br2)
    contacts.sort(key=lambda c: c[0])
    return contacts


class Diagram:
    """Validated link diagram: closed polylines plus over/under data.

    `over_tokens` follows the file format: one token per crossing in
    lexicographic (x, y) order of the crossing coordinates, naming the
    over curve; a self-crossing uses the curve id with a `+`/`-` suffix,
    `-` meaning the branch with the lower traversal parameter is on top.
    """

    __slots__ = ("board", "polylines", "ids", "crossings", "over_tokens")

    def __init__(
        self,
        board: Board,
        polylines: Sequence[Sequence[Point]],
        over_tokens: Sequence[str],
        ids: Optional[Sequence[str]] = None,
    ):
        if ids is None:
            ids = [f"c{i}" for i in range(len(polylines))]
        polys = [tuple(p) for p in polylines]
        contacts = _find_crossings(board, polys, ids)
        if len(over_tokens) != len(contacts):
            raise DiagramError(
                f"crossing count mismatch: diagram has {len(contacts)} crossings, "
                f"over list has {len(over_tokens)}"
            )
        crossings: List[Crossing] = []
        for (pt, br1, br2), token in zip(contacts, over_tokens):
            crossings.append(
                Crossing(pt, (br1, br2), self._over_from_token(ids, pt, br1, br2, token))
            )
        self.board = board
        self.polylines: Tuple[Tuple[Point, ...], ...] = tuple(polys)
        self.ids: Tuple[str, ...] = tuple(ids)
        self.crossings: Tuple[Crossing, ...] = tuple(crossings)
        self.over_tokens: Tuple[str, ...] = tuple(over_tokens)

    @staticmethod
    def _over_from_token(
        ids: Sequence[str], pt: Point, br1: Branch, br2: Branch, token: str
    ) -> int:
        if br1[0] == br2[0]:
            name = ids[br1[0]]
            if token not in (name + "+", name + "-"):
                raise DiagramError(
                    f"self-crossing of '{name}' at {_fmt_point(pt)} needs token "
                    f"'{name}+' or '{name}-', got '{token}'"
                )
            g1 = br1[1] + br1[2]
            g2 = br2[1] + br2[2]
            lower_first = g1 < g2
            if token.endswith("-"):
                return 0 if lower_first else 1
            return 1 if lower_first else 0
        if token == ids[br1[0]]:
            return 0
        if token == ids[br2[0]]:
            return 1
        raise DiagramError(
            f"over token '{token}' at {_fmt_point(pt)} names neither "
            f"'{ids[br1[0]]}' nor '{ids[br2[0]]}'"
        )

    @classmethod
    def from_over_rule(
        cls,
        board: Board,
        polylines: Sequence[Sequence[Point]],
        ids: Sequence[str],
        over_of: Callable[[Point, Branch, Branch], int],
    ) -> "Diagram":
        """Build a diagram choosing the over branch programmatically."""
        polys = [tuple(p) for p in polylines]
        contacts = _find_crossings(board, polys, ids)
        tokens: List[str] = []
        for pt, br1, br2 in contacts:
            which = over_of(pt, br1, br2)
            if br1[0] == br2[0]:
                g_over = (br1 if which == 0 else br2)
                g_other = (br2 if which == 0 else br1)
                lower = g_over[1] + g_over[2] < g_other[1] + g_other[2]
                tokens.append(ids[br1[0]] + ("-" if lower else "+"))
            else:
                tokens.append(ids[(br1 if which == 0 else br2)[0]])
        return cls(board, polys, tokens, ids)

    def __repr__(self) -> str:
        return (
            f"Diagram(holes={self.board.n_holes}, curves={len(self.polylines)}, "
            f"crossings={len(self.crossings)})"
        )


# ---------------------------------------------------------------------------
# Diagram file format

def parse_diagram(text: str) -> Diagram:
    """Parse the line-oriented diagram format (see README)."""
    board: Optional[Board] = None
    ids: List[str] = []
    polylines: List[List[Point]] = []
    over: Optional[List[str]] = None
    curve_lines: Dict[str, int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if board is None:
            if not line.startswith("board holes="):
                raise DiagramError(f"line {ln}: expected 'board holes=<n>'")
            try:
                board = Board(int(line[len("board holes="):]))
            except ValueError as exc:
                raise DiagramError(f"line {ln}: bad hole count ({exc})") from None
            continue
        if line.startswith("curve"):
            body = line[len("curve"):]
            if ":" not in body:
                raise DiagramError(f"line {ln}: curve line needs ':'")
            name, _, coords = body.partition(":")
            name = name.strip()
            if not name:
                raise DiagramError(f"line {ln}: curve needs an id")
            if name in curve_lines:
                raise DiagramError(f"line {ln}: duplicate curve id '{name}'")
            pts: List[Point] = []
            rest = coords.strip()
            while rest:
                if not rest.startswith("("):
                    raise DiagramError(f"line {ln}: expected '(' in '{rest}'")
                close = rest.find(")")
                if close < 0:
                    raise DiagramError(f"line {ln}: unclosed coordinate")
                inner = rest[1:close]
                parts = inner.split(",")
                if len(parts) != 2:
                    raise DiagramError(f"line {ln}: bad coordinate '({inner})'")
                try:
                    pts.append((Fraction(parts[0].strip()), Fraction(parts[1].strip())))
                except (ValueError, ZeroDivisionError):
                    raise DiagramError(
                        f"line {ln}: bad rational in '({inner})'"
                    ) from None
                rest = rest[close + 1:].strip()
            if len(pts) < 3:
                raise DiagramError(f"line {ln}: curve '{name}' needs >= 3 vertices")
            curve_lines[name] = ln
            ids.append(name)
            polylines.append(pts)
            continue
        if line.startswith("over"):
            if over is not None:
                raise DiagramError(f"line {ln}: duplicate 'over' line")
            body = line[len("over"):].strip()
            if not body.startswith(":"):
                raise DiagramError(f"line {ln}: over line needs ':'")
            over = body[1:].split()
            continue
        raise DiagramError(f"line {ln}: unrecognized line '{line}'")
    if board is None:
        raise DiagramError("line 1: missing 'board holes=<n>' header")
    try:
        return Diagram(board, polylines, over or [], ids)
    except DiagramError as exc:
        # Attach the source line of the first named curve, when present.
        msg = str(exc)
        for name, ln in curve_lines.items():
            if f"'{name}'" in msg:
                raise DiagramError(f"line {ln}: {msg}") from None
        raise


def render_diagram(d: Diagram) -> str:
    lines = [f"board holes={d.board.n_holes}"]
    for name, poly in zip(d.ids, d.polylines):
        coords = " ".join(f"({p[0]},{p[1]})" for p in poly)
        lines.append(f"curve {name} : {coords}")
    lines.append("over : " + " ".join(d.over_tokens) if d.over_tokens else "over :")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# State-sum resolution

_IN, _OUT = 0, 1
Port = Tuple[int, int, int]  # (crossing index, branch index, _IN/_OUT)


@dataclass
class _Arc:
    start: Port  # leaves this crossing/branch
    end: Port  # arrives at this crossing/branch
    winding: Tuple[int, ...]


def _branch_point(polylines, br: Branch) -> Point:
    poly = polylines[br[0]]
    a = poly[br[1]]
    b = poly[(br[1] + 1) % len(poly)]
    t = br[2]
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _branch_direction(polylines, br: Branch) -> Point:
    poly = polylines[br[0]]
    a = poly[br[1]]
    b = poly[(br[1] + 1) % len(poly)]
    return sub(b, a)


def _path_winding(pts: Sequence[Point], centers: Sequence[Point]) -> Tuple[int, ...]:
    out = [0] * len(centers)
    for i in range(len(pts) - 1):
        for h, c in enumerate(centers):
            out[h] += winding_contribution(pts[i], pts[i + 1], c)
    return tuple(out)


def _loop_winding_closed(poly: Sequence[Point], centers: Sequence[Point]) -> Tuple[int, ...]:
    pts = list(poly) + [poly[0]]
    return _path_winding(pts, centers)


def _classify_windings(w: Sequence[int]) -> Component:
    """Enclosed hole set of an embedded loop from its winding vector."""
    nonzero = [x for x in w if x != 0]
    if nonzero:
        if any(abs(x) != 1 for x in nonzero) or len({x > 0 for x in nonzero}) != 1:
            raise AssertionError(f"non-embedded loop winding {tuple(w)}")
    return tuple(i + 1 for i, x in enumerate(w) if x != 0)


def _smoothing_pairs(d_over: Point, d_under: Point, k: int, ob: int):
    """Port pairings of the two smoothings at crossing k.

    The h = q^{1/2} smoothing joins each over-strand end to the
    under-strand end lying clockwise from it; the convention is pinned by
    the positive-curl test (resolve of a positive curl = -q^{3/2} times
    the uncurled loop).
    """
    ub = 1 - ob
    s = cross(d_over, d_under)
    if s > 0:
        a_pairs = (
            ((k, ob, _IN), (k, ub, _OUT)),
            ((k, ob, _OUT), (k, ub, _IN)),
        )
        b_pairs = (
            ((k, ob, _IN), (k, ub, _IN)),
            ((k, ob, _OUT), (k, ub, _OUT)),
        )
    else:
        a_pairs = (
            ((k, ob, _IN), (k, ub, _IN)),
            ((k, ob, _OUT), (k, ub, _OUT)),
        )
        b_pairs = (
            ((k, ob, _IN), (k, ub, _OUT)),
            ((k, ob, _OUT), (k, ub, _IN)),
        )
    return a_pairs, b_pairs


def _resolve_component(
    d: Diagram,
    polys: Sequence[int],
    cross_ids: Sequence[int],
    state_cap: int,
) -> Dict[Multicurve, Laurent]:
    """State sum over one crossing-connected group of polylines."""
    centers = d.board.centers()
    if not cross_ids:
        (pi,) = polys
        w = _loop_winding_closed(d.polylines[pi], centers)
        comp = _classify_windings(w)
        if comp:
            return {(comp,): ONE}
        return {(): MINUS_ALPHA}

    c = len(cross_ids)
    if c > state_cap:
        raise ValueError(
            f"crossing component has {c} crossings, exceeding the state cap "
            f"{state_cap}"
        )

    # Passages of each polyline through its crossings, by traversal order.
    passages: Dict[int, List[Tuple[Fraction, int, int]]] = {pi: [] for pi in polys}
    for k in cross_ids:
        for b, br in enumerate(d.crossings[k].branches):
            passages[br[0]].append((br[1] + br[2], k, b))
    arcs: List[_Arc] = []
    for pi in polys:
        ps = sorted(passages[pi])
        poly = d.polylines[pi]
        n = len(poly)
        for i, (g1, k1, b1) in enumerate(ps):
            g2, k2, b2 = ps[(i + 1) % len(ps)]
            p_start = _branch_point(d.polylines, d.crossings[k1].branches[b1])
            p_end = _branch_point(d.polylines, d.crossings[k2].branches[b2])
            dist = (g2 - g1) % n
            if dist == 0:
                dist = Fraction(n)
            first_vertex = int(g1) + 1
            last_vertex = int(g1 + dist)
            pts = [p_start]
            pts.extend(poly[v % n] for v in range(first_vertex, last_vertex + 1))
            pts.append(p_end)
            arcs.append(
                _Arc(
                    start=(k1, b1, _OUT),
                    end=(k2, b2, _IN),
                    winding=_path_winding(pts, centers),
                )
            )

    arc_at: Dict[Port, Tuple[int, int]] = {}
    for ai, arc in enumerate(arcs):
        arc_at[arc.start] = (ai, +1)
        arc_at[arc.end] = (ai, -1)

    pairings = []  # per crossing: (a_pairs, b_pairs)
    for k in cross_ids:
        crossing = d.crossings[k]
        ob = crossing.over_branch
        d_over = _branch_direction(d.polylines, crossing.branches[ob])
        d_under = _branch_direction(d.polylines, crossing.branches[1 - ob])
        pairings.append(_smoothing_pairs(d_over, d_under, k, ob))

    n_holes = len(centers)
    out: Dict[Multicurve, Laurent] = {}
    for state in range(1 << c):
        partner: Dict[Port, Port] = {}
        b_count = 0
        for bit, (a_pairs, b_pairs) in enumerate(pairings):
            use_b = (state >> bit) & 1
            b_count += use_b
            for p1, p2 in (b_pairs if use_b else a_pairs):
                partner[p1] = p2
                partner[p2] = p1
        coeff = Laurent.h_power(c - 2 * b_count)
        visited = [False] * len(arcs)
        comps: List[Component] = []
        empties = 0
        for a0 in range(len(arcs)):
            if visited[a0]:
                continue
            w = [0] * n_holes
            entry: Port = arcs[a0].start
            port = entry
            while True:
                ai, sign = arc_at[port]
                visited[ai] = True
                arc = arcs[ai]
                for h in range(n_holes):
                    w[h] += sign * arc.winding[h]
                exit_port = arc.end if sign > 0 else arc.start
                port = partner[exit_port]
                if port == entry:
                    break
            comp = _classify_windings(w)
            if comp:
                comps.append(comp)
            else:
                empties += 1
        if empties:
            coeff = coeff * MINUS_ALPHA ** empties
        if not is_laminar(comps):
            raise AssertionError(f"state produced non-laminar family {comps}")
        key = tuple(sorted(comps))
        acc = out.get(key, Laurent.zero()) + coeff
        if acc.is_zero():
            out.pop(key, None)
        else:
            out[key] = acc
    return out


def resolve(d: Diagram, state_cap: int = DEFAULT_STATE_CAP) -> SkeinElement:
    """Bracket state sum of a diagram, expanded in the multicurve basis."""
    # Group polylines by crossing connectivity; the state sum factors.
    parent = list(range(len(d.polylines)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for crossing in d.crossings:
        a = find(crossing.branches[0][0])
        b = find(crossing.branches[1][0])
        parent[a] = b
    groups: Dict[int, List[int]] = {}
    for pi in range(len(d.polylines)):
        groups.setdefault(find(pi), []).append(pi)
    group_cross: Dict[int, List[int]] = {g: [] for g in groups}
    for k, crossing in enumerate(d.crossings):
        group_cross[find(crossing.branches[0][0])].append(k)

    total: Dict[Multicurve, Laurent] = {(): ONE}
    for g, polys in sorted(groups.items()):
        part = _resolve_component(d, polys, group_cross[g], state_cap)
        merged: Dict[Multicurve, Laurent] = {}
        for m1, c1 in total.items():
            for m2, c2 in part.items():
                key = tuple(sorted(m1 + m2))
                acc = merged.get(key, Laurent.zero()) + c1 * c2
                if acc.is_zero():
                    merged.pop(key, None)
                else:
                    merged[key] = acc
        total = merged
    for m in total:
        if not is_laminar(m):
            raise AssertionError(f"non-laminar resolution term {m}")
    return SkeinElement(d.board, total)


# ---------------------------------------------------------------------------
# Canonical crossingless diagrams for basis multicurves


class _Node:
    __slots__ = ("holes", "hole_set", "kids", "sigma", "ext", "profile")

    def __init__(self, holes: Component, copy_index: int):
        self.holes = holes
        self.hole_set = frozenset(holes)
        self.kids: List["_Node"] = []
        self.sigma = (holes[0], holes[-1], len(holes), holes, copy_index)
        self.ext = Fraction(0)
        self.profile: Dict[int, Tuple[Fraction, Fraction]] = {}

    @property
    def span(self) -> Tuple[int, int]:
        return (self.holes[0], self.holes[-1])


def _laminar_forest(components: Multicurve) -> List[_Node]:
    counts: Dict[Component, int] = {}
    for comp in components:
        counts[comp] = counts.get(comp, 0) + 1
    distinct = sorted(counts)
    chains: Dict[Component, List[_Node]] = {}
    for comp in distinct:
        chain = [_Node(comp, i) for i in range(counts[comp])]
        for outer, inner in zip(chain, chain[1:]):
            outer.kids.append(inner)
        chains[comp] = chain
    roots: List[_Node] = []
    for comp in distinct:
        comp_set = set(comp)
        best: Optional[Component] = None
        for other in distinct:
            if other == comp:
                continue
            if comp_set < set(other) and (best is None or len(other) < len(best)):
                best = other
        if best is None:
            roots.append(chains[comp][0])
        else:
            chains[best][-1].kids.append(chains[comp][0])
    for chain in chains.values():
        for node in chain:
            node.kids.sort(key=lambda k: k.sigma)
    roots.sort(key=lambda r: r.sigma)
    return roots


def _place_kids(
    kids: List[_Node], s: int, lo: Fraction, hi: Fraction, owner_pins: bool
) -> None:
    present = [k for k in kids if k.span[0] <= s <= k.span[1]]
    if not present:
        return
    if owner_pins:
        central = next((k for k in present if s in k.hole_set), None)
        if central is None:
            below, above = present, []
        else:
            below = [k for k in present if k is not central and k.sigma < central.sigma]
            above = [k for k in present if k is not central and k.sigma > central.sigma]
        db = (-_PIN - lo) / (len(below) + 1)
        da = (hi - _PIN) / (len(above) + 1)
        for j, kid in enumerate(below):
            _assign(kid, s, lo + j * db + db / 4, lo + (j + 1) * db - db / 4)
        for j, kid in enumerate(above):
            _assign(
                kid,
                s,
                _PIN + (1 + j) * da + da / 4,
                _PIN + (2 + j) * da - da / 4,
            )
        if central is not None:
            _assign(central, s, -_PIN - 3 * db / 4, _PIN + 3 * da / 4)
    else:
        step = (hi - lo) / (len(present) + 1)
        for j, kid in enumerate(present):
            _assign(kid, s, lo + j * step + step / 4, lo + (j + 1) * step - step / 4)


def _assign(node: _Node, s: int, lo: Fraction, hi: Fraction) -> None:
    node.profile[s] = (lo, hi)
    _place_kids(node.kids, s, lo, hi, owner_pins=(s in node.hole_set))


def _node_polyline(node: _Node) -> List[Point]:
    s0, s1 = node.span
    x_left = Fraction(s0) - HOLE_RADIUS - node.ext
    x_right = Fraction(s1) + HOLE_RADIUS + node.ext
    lo = {s: node.profile[s][0] for s in range(s0, s1 + 1)}
    hi = {s: node.profile[s][1] for s in range(s0, s1 + 1)}
    q38, q58 = Fraction(3, 8), Fraction(5, 8)
    pts: List[Point] = [(x_left, lo[s0])]
    for s in range(s0, s1):
        if lo[s] != lo[s + 1]:
            pts.append((s + q38, lo[s]))
            pts.append((s + q58, lo[s + 1]))
    pts.append((x_right, lo[s1]))
    pts.append((x_right, hi[s1]))
    for s in range(s1 - 1, s0 - 1, -1):
        if hi[s] != hi[s + 1]:
            pts.append((s + q58, hi[s + 1]))
            pts.append((s + q38, hi[s]))
    pts.append((x_left, hi[s0]))
    return pts


def canonical_diagram(m: Iterable[Iterable[int]], board: Board) -> Diagram:
    """Crossingless diagram resolving to exactly 1 times the multicurve.

    Each component becomes an x-monotone closed band: horizontal top and
    bottom profiles constant near each hole column, joined by vertical
    caps.  At a column the band either straddles the hole (enclosing it)
    or passes entirely below/above it; nesting follows the laminar
    forest, and a fixed per-sibling order keeps the bands disjoint.
    """
    mc = canonical_multicurve(m, board)
    roots = _laminar_forest(mc)
    order: List[_Node] = []
    queue = list(roots)
    while queue:
        node = queue.pop(0)
        order.append(node)
        queue.extend(node.kids)
    total = len(order)
    for k, node in enumerate(order):
        node.ext = Fraction(total - k, 8 * (total + 1))
    for s in range(1, board.n_holes + 1):
        _place_kids(roots, s, -_HALF, _HALF, owner_pins=True)
    polylines = [_node_polyline(node) for node in order]
    ids = [f"k{i}" for i in range(len(order))]
    return Diagram(board, polylines, [], ids)


# ---------------------------------------------------------------------------
# Stacking product

_PERTURB_PRIMES = (
    1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049,
    1051, 1061, 1063, 1069, 1087, 1091, 1093, 1097,
)
_STACK_CENTER = (Fraction(1, 2), Fraction(1, 3))


def stacking_diagram(ma: Multicurve, mb: Multicurve, board: Board) -> Diagram:
    """Diagram of the product of two basis multicurves (first factor on top).

    When the combined family is already laminar the joint canonical
    diagram is crossing-free and used directly.  Otherwise the second
    factor is scaled by 1 + 1/p about a fixed off-grid center for
    successive primes p until the overlay is in general position; every
    crossing is decorated first-factor-over-second.
    """
    union = tuple(sorted(ma + mb))
    if is_laminar(union):
        return canonical_diagram(union, board)
    da = canonical_diagram(ma, board)
    db = canonical_diagram(mb, board)
    cx, cy = _STACK_CENTER
    last_error: Optional[Exception] = None
    for p in _PERTURB_PRIMES:
        scale = 1 + Fraction(1, p)
        polys: List[Sequence[Point]] = list(da.polylines)
        for poly in db.polylines:
            polys.append(
                tuple((cx + scale * (x - cx), cy + scale * (y - cy)) for x, y in poly)
            )
        ids = [f"a{i}" for i in range(len(da.polylines))] + [
            f"b{i}" for i in range(len(db.polylines))
        ]
        n_a = len(da.polylines)

        def a_over(pt: Point, br1: Branch, br2: Branch) -> int:
            first_is_a = br1[0] < n_a
            second_is_a = br2[0] < n_a
            if first_is_a == second_is_a:
                raise DiagramError(
                    f"stacking overlay self-contact at {_fmt_point(pt)}"
                )
            return 0 if first_is_a else 1

        try:
            return Diagram.from_over_rule(board, polys, ids, a_over)
        except DiagramError as exc:
            last_error = exc
    raise DiagramError(
        f"general position failed after {len(_PERTURB_PRIMES)} perturbation "
        f"retries: {last_error}"
    )


@lru_cache(maxsize=8192)
def _basis_product(
    n_holes: int, ma: Multicurve, mb: Multicurve, state_cap: int
) -> Tuple[Tuple[Multicurve, Laurent], ...]:
    board = Board(n_holes)
    d = stacking_diagram(ma, mb, board)
    result = resolve(d, state_cap)
    return tuple(sorted(result.terms.items()))


def multiply(
    a: SkeinElement,
    b: SkeinElement,
    board: Optional[Board] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> SkeinElement:
    """Stacking product: diagrams of `a` on top of diagrams of `b`."""
    if board is None:
        board = a.board
    if a.board != board or b.board != board:
        raise ValueError("elements live on different boards")
    out: Dict[Multicurve, Laurent] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            scale = ca * cb
            for m, coeff in _basis_product(board.n_holes, ma, mb, state_cap):
                acc = out.get(m, Laurent.zero()) + scale * coeff
                if acc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = acc
    return SkeinElement(board, out)


# ---------------------------------------------------------------------------
# Identity verification and classical evaluation


@dataclass
class IdentityReport:
    ok: bool
    lhs_value: SkeinElement
    rhs_value: SkeinElement
    first_discrepancy: Optional[str] = None

    def render(self) -> str:
        if self.ok:
            return "PASS"
        return f"FAIL: {self.first_discrepancy}"


def verify_skein_identity(
    lhs: Sequence[Tuple["Laurent | int", Diagram]],
    rhs: Sequence[Tuple["Laurent | int", Diagram]],
    state_cap: int = DEFAULT_STATE_CAP,
) -> IdentityReport:
    """Resolve both sides and compare basis expansions."""
    boards = {d.board for _, d in lhs} | {d.board for _, d in rhs}
    if len(boards) > 1:
        raise ValueError("identity mixes diagrams on different boards")
    board = boards.pop() if boards else Board(0)
    lhs_value = SkeinElement.zero(board)
    rhs_value = SkeinElement.zero(board)
    for coeff, d in lhs:
        lhs_value = lhs_value + resolve(d, state_cap).scale(coeff)
    for coeff, d in rhs:
        rhs_value = rhs_value + resolve(d, state_cap).scale(coeff)
    diff = lhs_value - rhs_value
    if diff.is_zero():
        return IdentityReport(True, lhs_value, rhs_value)
    m = min(diff.terms)
    detail = (
        f"{render_multicurve(m)}: lhs={lhs_value.terms.get(m, Laurent.zero()).render()} "
        f"rhs={rhs_value.terms.get(m, Laurent.zero()).render()}"
    )
    return IdentityReport(False, lhs_value, rhs_value, detail)


Matrix2 = Tuple[Tuple[complex, complex], Tuple[complex, complex]]


def _as_matrix(m: object) -> Matrix2:
    rows = [tuple(complex(v) for v in row) for row in m]  # type: ignore[union-attr]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("representation matrices must be 2x2")
    return (rows[0], rows[1])  # type: ignore[return-value]


def _m2_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return (
        (
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ),
        (
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ),
    )


_M2_ID: Matrix2 = ((1.0, 0.0), (0.0, 1.0))


def epsilon_of_element(a: SkeinElement, rho: Sequence[object]) -> complex:
    """Classical trace evaluation of a skein element.

    `rho` assigns a unit-determinant 2x2 complex matrix to each hole; a
    component enclosing holes i1 < ... < ik contributes
    -tr(rho[i1] ... rho[ik]), multicurve values multiply, and scalars are
    specialized at h = -1.
    """
    mats = [_as_matrix(m) for m in rho]
    if len(mats) != a.board.n_holes:
        raise ValueError(
            f"need {a.board.n_holes} matrices, got {len(mats)}"
        )
    for i, m in enumerate(mats, start=1):
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if abs(det - 1) > 1e-9:
            raise ValueError(f"matrix for hole {i} has determinant {det}, not 1")
    value = 0j
    for m, coeff in a.terms.items():
        term = complex(coeff.specialize_classical())
        for comp in m:
            prod = _M2_ID
            for i in comp:
                prod = _m2_mul(prod, mats[i - 1])
            term *= -(prod[0][0] + prod[1][1])
        value += term
    return value
