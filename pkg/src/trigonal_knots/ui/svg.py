"""
Static SVG pictures of schemes, traced curves, knot diagrams and braids.

Canvas sizes depend only on the object drawn and every coordinate is
rounded, so the same input always produces the same bytes.
"""

from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import drawsvg as draw

from trigonal_knots.core.curvetrace import CurveEvent, CurveEvents, EventKind, PolyMap
from trigonal_knots.core.lscheme import Kind, LScheme
from trigonal_knots.core.polyalg import T_SYM
from trigonal_knots.core.twobridge import KnotDiagram

BACKGROUND = '#ffffff'
INK = '#1f2933'
ACCENT = '#c0392b'
FONT = 'DejaVu Sans, sans-serif'

STEP = 40
MARGIN = 30
LEVEL_GAP = 30
STROKE = 2

Drawable = Union[LScheme, CurveEvents, KnotDiagram, Sequence[int]]


def _r(value: float) -> float:
    return round(value, 2)


def _canvas(width: float, height: float) -> draw.Drawing:
    d = draw.Drawing(_r(width), _r(height))
    d.append(draw.Rectangle(0, 0, _r(width), _r(height), fill=BACKGROUND))
    return d


def _level(j: float) -> float:
    """Screen y of sheet height j (1 is the lowest sheet)."""
    return MARGIN + (3 - j) * LEVEL_GAP


def render_scheme(scheme: LScheme) -> draw.Drawing:
    """One column per symbol; the terminal is written after the last column."""
    width = 2 * MARGIN + STEP * (len(scheme.body) + 1)
    d = _canvas(width, 2 * MARGIN + 2 * LEVEL_GAP)
    for i, symbol in enumerate(scheme.body):
        x = MARGIN + STEP * (i + 0.5)
        y = _level(symbol.index + 0.5)
        half = LEVEL_GAP / 2
        if symbol.kind is Kind.SOLITARY:
            d.append(draw.Circle(_r(x), _r(y), 4, fill=INK, class_='dot'))
        elif symbol.kind is Kind.CROSSING:
            group = draw.Group(class_='crossing', stroke=INK, stroke_width=STROKE)
            group.append(draw.Line(_r(x - half), _r(y - half), _r(x + half), _r(y + half)))
            group.append(draw.Line(_r(x - half), _r(y + half), _r(x + half), _r(y - half)))
            d.append(group)
        else:
            tip = x - half if symbol.kind is Kind.MIN else x + half
            back = x + half if symbol.kind is Kind.MIN else x - half
            d.append(draw.Path(
                stroke=INK, stroke_width=STROKE, fill='none', class_='cusp',
            ).M(_r(back), _r(y - half)).Q(_r(tip), _r(y), _r(back), _r(y + half)))
    d.append(draw.Text(
        scheme.terminal.value, 16, _r(MARGIN + STEP * (len(scheme.body) + 0.5)), _r(_level(2)),
        fill=ACCENT, font_family=FONT, class_='terminal',
    ))
    return d


def _sample(polymap: PolyMap, params: Sequence[float],
            samples: int) -> List[Tuple[float, float]]:
    """Points of t -> (P(t), Q(t)) over the parameter range of params, padded."""
    lo, hi = (min(params), max(params)) if params else (-1.0, 1.0)
    pad = 0.15 * ((hi - lo) or 1.0)
    lo, hi = lo - pad, hi + pad
    points = []
    for k in range(samples + 1):
        t = lo + (hi - lo) * k / samples
        points.append((float(polymap.P.eval(t)), float(polymap.Q.eval(t))))
    return points


def _viewport(points: Sequence[Tuple[float, float]], size: int) -> Callable:
    xs, ys = [p[0] for p in points], [p[1] for p in points]
    x0, y0 = min(xs), min(ys)
    scale = (size - 2 * MARGIN) / max(max(xs) - x0, max(ys) - y0, 1e-9)

    def screen(px: float, py: float) -> Tuple[float, float]:
        return _r(MARGIN + (px - x0) * scale), _r(size - MARGIN - (py - y0) * scale)

    return screen


def _strand(d: draw.Drawing, points: Sequence[Tuple[float, float]], screen: Callable) -> None:
    flat = [c for point in points for c in screen(*point)]
    d.append(draw.Lines(*flat, close=False, fill='none', stroke=INK, stroke_width=STROKE,
                        class_='strand'))


def _event_parameters(traced: CurveEvents) -> List[float]:
    params: List[float] = []
    for event in traced.events:
        if event.kind is EventKind.CROSSING:
            params.extend(event.parameters)
        elif event.kind is EventKind.SOLITARY:
            # real part of the conjugate pair
            params.append(event.root.as_float() / 2)
        else:
            params.append(event.root.as_float())
    return params


def _event_point(traced: CurveEvents, event: CurveEvent) -> Tuple[float, float]:
    u = event.root.as_float()
    if event.kind in (EventKind.CROSSING, EventKind.SOLITARY):
        return float(event.x), float(traced.reducer.half_sum(traced.polymap.Q).eval(u))
    return float(event.x), float(traced.polymap.Q.eval(u))


def render_curve_events(traced: CurveEvents, size: int = 400, samples: int = 240) -> draw.Drawing:
    """The real curve with a marker and its scheme token at every event."""
    points = _sample(traced.polymap, _event_parameters(traced), samples)
    marks = [(_event_point(traced, e), e) for e in traced.events]
    screen = _viewport(points + [m for m, _ in marks], size)
    d = _canvas(size, size)
    _strand(d, points, screen)
    for point, event in marks:
        cx, cy = screen(*point)
        d.append(draw.Circle(cx, cy, 4, fill=ACCENT, class_='event'))
        d.append(draw.Text(event.symbol.token, 12, _r(cx + 6), _r(cy - 6),
                           fill=ACCENT, font_family=FONT))
    return d


def render_knot_diagram(diagram: KnotDiagram, size: int = 400, samples: int = 240) -> draw.Drawing:
    """The xy-projection with a break in the lower strand at every crossing."""
    params = [end for c in diagram.crossings for end in (float(c.s), float(c.t))]
    params += [e.root.as_float() for e in diagram.traced.events
               if e.kind.symbol_kind in (Kind.MIN, Kind.MAX)]
    points = _sample(diagram.traced.polymap, params, samples)
    screen = _viewport(points, size)
    d = _canvas(size, size)
    _strand(d, points, screen)

    p, q = diagram.traced.polymap.P, diagram.traced.polymap.Q
    dp, dq = p.diff(T_SYM), q.diff(T_SYM)
    for crossing in diagram.crossings:
        over = crossing.t if crossing.over == 't' else crossing.s
        t = float(over)
        cx, cy = screen(float(p.eval(t)), float(q.eval(t)))
        vx, vy = float(dp.eval(t)), -float(dq.eval(t))
        norm = (vx * vx + vy * vy) ** 0.5 or 1.0
        reach = 9
        d.append(draw.Circle(cx, cy, 6, fill=BACKGROUND, class_='gap'))
        d.append(draw.Line(
            _r(cx - reach * vx / norm), _r(cy - reach * vy / norm),
            _r(cx + reach * vx / norm), _r(cy + reach * vy / norm),
            stroke=INK, stroke_width=STROKE, class_='over',
        ))
    return d


def render_braid(word: Sequence[int]) -> draw.Drawing:
    """Three strands, bottom to top, with one slot per letter."""
    d = _canvas(2 * MARGIN + STEP * max(len(word), 1), 2 * MARGIN + 2 * LEVEL_GAP)
    for i, letter in enumerate(word):
        left, right = MARGIN + STEP * i, MARGIN + STEP * (i + 1)
        j = abs(letter)
        slot = draw.Group(class_='slot', stroke=INK, stroke_width=STROKE, fill='none')
        for level in (1, 2, 3):
            if level not in (j, j + 1):
                slot.append(draw.Line(left, _r(_level(level)), right, _r(_level(level))))
        low, high = _level(j), _level(j + 1)
        # positive letters carry the rising strand over
        over = (left, low, right, high) if letter > 0 else (left, high, right, low)
        under = (left, high, right, low) if letter > 0 else (left, low, right, high)
        slot.append(draw.Line(*[_r(v) for v in over]))
        mx, my = (under[0] + under[2]) / 2, (under[1] + under[3]) / 2
        gap = 0.25
        slot.append(draw.Line(_r(under[0]), _r(under[1]),
                              _r(mx - gap * (mx - under[0])), _r(my - gap * (my - under[1]))))
        slot.append(draw.Line(_r(mx + gap * (under[2] - mx)), _r(my + gap * (under[3] - my)),
                              _r(under[2]), _r(under[3])))
        d.append(slot)
    return d


def render(obj: Drawable) -> draw.Drawing:
    if isinstance(obj, LScheme):
        return render_scheme(obj)
    if isinstance(obj, CurveEvents):
        return render_curve_events(obj)
    if isinstance(obj, KnotDiagram):
        return render_knot_diagram(obj)
    return render_braid(tuple(obj))


def emit_svg(obj: Drawable, path: Union[str, Path]) -> Path:
    """Write the picture of obj to path; OSError propagates."""
    path = Path(path)
    render(obj).save_svg(str(path))
    return path


def as_svg(obj: Drawable) -> str:
    return render(obj).as_svg()
