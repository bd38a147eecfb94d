"""Sweep configuration files.

The format is flat ``key = value`` text with ``[section]`` headers::

    scheme = "scheme1"
    theta = 0.1
    beta = 0.2
    loss = 0.0
    rounds = "inf"

    [sweep.beta]
    start = 0.05
    stop = 0.5
    num = 50
    spacing = "linear"      # or "log"

    [sweep.n]
    values = [1, 2, 10, 100]

    [mc]
    trials = 2000
    seed = 42

Values are numbers, quoted strings, the bare words ``inf``/``true``/``false``,
or one-line lists of numbers. ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

from .analytic import INFINITE, Scheme, parse_rounds
from .errors import ParseError, ValidationError

AXIS_NAMES = ("theta", "beta", "loss", "n")
FORMATS = ("csv", "json")
MAX_SWEPT_AXES = 2

_TOP_KEYS = {
    "scheme", "theta", "beta", "loss", "epsilon", "photons", "rounds",
    "angle_unit", "output_path", "output_format",
}
_AXIS_KEYS = {"start", "stop", "num", "spacing", "values"}
_MC_KEYS = {"trials", "seed"}

_SECTION = re.compile(r"^\[\s*([A-Za-z_][\w.]*)\s*\]$")
_ASSIGN = re.compile(r"^([A-Za-z_]\w*)\s*=\s*(.+)$")


@dataclass(frozen=True)
class Axis:
    """A swept parameter: explicit ``values`` or ``num`` points from ``start`` to ``stop``."""

    name: str
    values: tuple | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = None
    spacing: str = "linear"

    def points(self) -> list:
        if self.values is not None:
            pts = list(self.values)
        elif self.spacing == "log":
            pts = np.geomspace(self.start, self.stop, self.num).tolist()
        else:
            pts = np.linspace(self.start, self.stop, self.num).tolist()
        if self.name == "n":
            return [v if math.isinf(v) else int(round(v)) for v in pts]
        return [float(v) for v in pts]

    def __len__(self) -> int:
        return len(self.values) if self.values is not None else self.num


@dataclass(frozen=True)
class SweepSpec:
    scheme: Scheme = Scheme.SCHEME_I
    theta: float = 0.1
    beta: float = 0.2
    loss: float = 0.0
    epsilon: float = 0.0
    photons: float = 1e6
    rounds: float | int = INFINITE
    angle_unit: str = "rad"
    axes: tuple[Axis, ...] = ()
    output_path: str | None = None
    output_format: str = "csv"
    trials: int = 2000
    seed: int = 42

    def axis(self, name: str) -> Axis | None:
        return next((a for a in self.axes if a.name == name), None)

    @property
    def row_count(self) -> int:
        return math.prod(len(a) for a in self.axes) if self.axes else 1


# --- parsing -------------------------------------------------------------------

def _strip_comment(line: str) -> str:
    out, quote = [], None
    for ch in line:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        out.append(ch)
    return "".join(out).strip()


def _scalar(text: str, lineno: int):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("inf", "+inf"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"cannot read value {text!r}", lineno) from None


def _value(text: str, lineno: int):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError("unterminated list", lineno)
        body = text[1:-1].strip()
        if not body:
            return []
        return [_scalar(item, lineno) for item in body.split(",") if item.strip()]
    return _scalar(text, lineno)


def _raw_sections(text: str) -> dict[str, dict]:
    sections: dict[str, dict] = {"": {}}
    current = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", lineno)
            sections[current] = {}
            continue
        m = _ASSIGN.match(line)
        if not m:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, val = m.group(1), m.group(2)
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", lineno)
        sections[current][key] = (_value(val, lineno), lineno)
    return sections


def _number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    return float(value)


def _check_unknown(keys, allowed, where):
    unknown = sorted(set(keys) - allowed)
    if unknown:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _axis(name: str, entries: dict) -> Axis:
    _check_unknown(entries, _AXIS_KEYS, f"[sweep.{name}]")
    get = {k: v for k, (v, _) in entries.items()}
    if "values" in get:
        if set(get) - {"values"}:
            raise ValidationError(f"sweep.{name}: give either values or start/stop/num")
        vals = get["values"]
        if not isinstance(vals, list) or not vals:
            raise ValidationError(f"sweep.{name}.values must be a non-empty list")
        return Axis(name, values=tuple(vals))
    missing = {"start", "stop", "num"} - set(get)
    if missing:
        raise ValidationError(f"sweep.{name} is missing {', '.join(sorted(missing))}")
    num = get["num"]
    if isinstance(num, bool) or not isinstance(num, int) or num < 1:
        raise ValidationError(f"sweep.{name}.num must be an integer >= 1")
    spacing = str(get.get("spacing", "linear"))
    if spacing not in ("linear", "log"):
        raise ValidationError(f"sweep.{name}.spacing must be 'linear' or 'log'")
    return Axis(name, start=_number(f"sweep.{name}.start", get["start"]),
                stop=_number(f"sweep.{name}.stop", get["stop"]), num=num, spacing=spacing)


def parse_config(text: str) -> SweepSpec:
    sections = _raw_sections(text)
    top = {k: v for k, (v, _) in sections.pop("").items()}
    _check_unknown(top, _TOP_KEYS, "top level")
    kwargs = {}
    if "scheme" in top:
        kwargs["scheme"] = Scheme.parse(top["scheme"])
    for key in ("theta", "beta", "loss", "epsilon", "photons"):
        if key in top:
            kwargs[key] = _number(key, top[key])
    if "rounds" in top:
        kwargs["rounds"] = top["rounds"]
    for key in ("angle_unit", "output_path", "output_format"):
        if key in top:
            kwargs[key] = str(top[key])

    axes = []
    for name, entries in sections.items():
        if name == "mc":
            _check_unknown(entries, _MC_KEYS, "[mc]")
            for key, (val, _) in entries.items():
                kwargs["trials" if key == "trials" else "seed"] = val
        elif name.startswith("sweep."):
            axis_name = name.split(".", 1)[1]
            if axis_name not in AXIS_NAMES:
                raise ValidationError(f"cannot sweep {axis_name!r}; choose from {AXIS_NAMES}")
            axes.append(_axis(axis_name, entries))
        else:
            raise ValidationError(f"unknown section [{name}]")
    kwargs["axes"] = tuple(axes)
    return validate(SweepSpec(**kwargs))


def validate(spec: SweepSpec) -> SweepSpec:
    """Check ranges and normalize types; returns the normalized spec."""
    scheme = Scheme.parse(spec.scheme)
    rounds = parse_rounds(spec.rounds)
    if spec.angle_unit not in ("rad", "deg"):
        raise ValidationError("angle_unit must be 'rad' or 'deg'")
    for name in ("theta", "beta", "epsilon", "loss", "photons"):
        if not math.isfinite(getattr(spec, name)):
            raise ValidationError(f"{name} must be finite")
    if not 0.0 <= spec.loss < 1.0:
        raise ValidationError("loss_L must be in [0,1)")
    if spec.photons <= 0:
        raise ValidationError("photons_N must be > 0")
    if spec.output_format not in FORMATS:
        raise ValidationError(f"output_format must be one of {FORMATS}")
    if isinstance(spec.trials, bool) or not isinstance(spec.trials, int) or spec.trials < 2:
        raise ValidationError("trials must be an integer >= 2")
    if isinstance(spec.seed, bool) or not isinstance(spec.seed, int) or not 0 <= spec.seed < 2**64:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    if len(spec.axes) > MAX_SWEPT_AXES:
        raise ValidationError(f"at most {MAX_SWEPT_AXES} swept axes per run")
    names = [a.name for a in spec.axes]
    if len(set(names)) != len(names):
        raise ValidationError("an axis is swept twice")
    for axis in spec.axes:
        if len(axis) < 1:
            raise ValidationError(f"sweep.{axis.name} is empty")
        if axis.values is None and axis.spacing == "log" and (axis.start <= 0 or axis.stop <= 0):
            raise ValidationError(f"sweep.{axis.name}: log spacing needs positive start and stop")
        pts = axis.points()
        if axis.name == "n":
            for v in axis.values if axis.values is not None else pts:
                parse_rounds(v)
        else:
            for v in pts:
                _number(f"sweep.{axis.name}", v)
                if not math.isfinite(v):
                    raise ValidationError(f"sweep.{axis.name} values must be finite")
            if axis.name == "loss" and not all(0.0 <= v < 1.0 for v in pts):
                raise ValidationError("loss_L must be in [0,1)")
    return replace(spec, scheme=scheme, rounds=rounds)


# --- rendering -----------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return '"inf"' if value > 0 else "-inf"
        return repr(value)
    return str(value)


def render(spec: SweepSpec) -> str:
    lines = [
        f"scheme = {_fmt(spec.scheme.value)}",
        f"theta = {_fmt(float(spec.theta))}",
        f"beta = {_fmt(float(spec.beta))}",
        f"loss = {_fmt(float(spec.loss))}",
        f"epsilon = {_fmt(float(spec.epsilon))}",
        f"photons = {_fmt(float(spec.photons))}",
        f"rounds = {_fmt(spec.rounds)}",
        f"angle_unit = {_fmt(spec.angle_unit)}",
        f"output_format = {_fmt(spec.output_format)}",
    ]
    if spec.output_path is not None:
        lines.append(f"output_path = {_fmt(spec.output_path)}")
    for axis in spec.axes:
        lines.append("")
        lines.append(f"[sweep.{axis.name}]")
        if axis.values is not None:
            vals = ", ".join("inf" if isinstance(v, float) and math.isinf(v) else _fmt(v)
                             for v in axis.values)
            lines.append(f"values = [{vals}]")
        else:
            lines += [f"start = {_fmt(float(axis.start))}", f"stop = {_fmt(float(axis.stop))}",
                      f"num = {axis.num}", f"spacing = {_fmt(axis.spacing)}"]
    lines += ["", "[mc]", f"trials = {spec.trials}", f"seed = {spec.seed}"]
    return "\n".join(lines) + "\n"
