"""Text file formats: programs, distributions, schedules, calibrations.

All formats are plain text, deterministic, and round-trip exactly:
floats serialize via repr (shortest exact decimal), except pulse times
and voltages which are fixed to 4 decimals to match the hardware's
resolution.
"""

from __future__ import annotations

from typing import Mapping

from .errors import ParseError
from .pulses import Calibration, PulseEvent, PulseSchedule
from .state import CoinOp, CoinProgram, DistributionSchedule, GeneralCoinOp, WalkerState

PROGRAM_VERSION = 1
SHIFT_CONVENTION = "right"  # coin-|0> amplitude moves to x+1


def _f(v: float) -> str:
    return repr(float(v))


def program_to_text(p: CoinProgram) -> str:
    a, b = p.initial.pair(0)
    lines = [
        f"version {PROGRAM_VERSION}",
        f"steps {p.steps}",
        f"convention {SHIFT_CONVENTION}",
        f"initial {_f(a.real)} {_f(a.imag)} {_f(b.real)} {_f(b.imag)}",
    ]
    for (t, x), op in sorted(p.cells.items()):
        lines.append(f"{t} {x} {_f(op.theta)}")
    if p.final_layer is not None:
        for x, op in sorted(p.final_layer.items()):
            lines.append(
                f"F {x} {_f(op.m00)} {_f(op.m01)} {_f(op.m10)} {_f(op.m11)}"
            )
    return "\n".join(lines) + "\n"


def program_from_text(text: str) -> CoinProgram:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) < 5:
        raise ParseError("program file too short")
    header = {}
    try:
        for ln in lines[:4]:
            key, _, rest = ln.partition(" ")
            header[key] = rest
        version = int(header["version"])
        steps = int(header["steps"])
        convention = header["convention"]
        re_a, im_a, re_b, im_b = (float(v) for v in header["initial"].split())
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad program header: {exc}") from exc
    if version != PROGRAM_VERSION:
        raise ParseError(f"unsupported program version {version}")
    if convention != SHIFT_CONVENTION:
        raise ParseError(f"unsupported shift convention {convention!r}")
    cells: dict[tuple[int, int], CoinOp] = {}
    final: dict[int, GeneralCoinOp] = {}
    for ln in lines[4:]:
        parts = ln.split()
        try:
            if parts[0] == "F":
                if len(parts) != 6:
                    raise ValueError("expected 6 fields")
                x = int(parts[1])
                final[x] = GeneralCoinOp(*(float(v) for v in parts[2:6]))
            else:
                if len(parts) != 3:
                    raise ValueError("expected 3 fields")
                t, x = int(parts[0]), int(parts[1])
                cells[(t, x)] = CoinOp(float(parts[2]))
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad program line {ln!r}: {exc}") from exc
    initial = WalkerState(
        step=0, amplitudes={0: (complex(re_a, im_a), complex(re_b, im_b))}
    )
    return CoinProgram(
        steps=steps, cells=cells, initial=initial, final_layer=final or None
    )


def distribution_to_text(
    p: Mapping[int, float], sigma: Mapping[int, float] | None = None
) -> str:
    lines = []
    for x in sorted(p):
        if sigma is not None:
            lines.append(f"{x} {_f(p[x])} {_f(sigma.get(x, 0.0))}")
        else:
            lines.append(f"{x} {_f(p[x])}")
    return "\n".join(lines) + "\n"


def distribution_from_text(text: str) -> dict[int, float]:
    out = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"bad distribution line {ln!r}")
        try:
            out[int(parts[0])] = float(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad distribution line {ln!r}: {exc}") from exc
    if not out:
        raise ParseError("empty distribution file")
    return out


def schedule_targets_to_text(sched: DistributionSchedule) -> str:
    lines = []
    for t in range(sched.steps + 1):
        for x in sorted(sched.rows[t]):
            lines.append(f"{t} {x} {_f(sched.rows[t][x])}")
    return "\n".join(lines) + "\n"


def schedule_targets_from_text(text: str) -> DistributionSchedule:
    rows: dict[int, dict[int, float]] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"bad target line {ln!r}")
        try:
            t, x, prob = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad target line {ln!r}: {exc}") from exc
        rows.setdefault(t, {})[x] = prob
    if not rows:
        raise ParseError("empty schedule file")
    rows.setdefault(0, {0: 1.0})
    return DistributionSchedule(steps=max(rows), rows=rows)


def calibration_to_text(cal: Calibration) -> str:
    return "\n".join(f"{_f(p)} {_f(v)}" for p, v in cal.anchors) + "\n"


def calibration_from_text(text: str) -> Calibration:
    anchors = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad calibration line {ln!r}")
        try:
            anchors.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"bad calibration line {ln!r}: {exc}") from exc
    if len(anchors) < 2:
        raise ParseError("calibration needs at least two anchors")
    return Calibration(anchors=tuple(anchors))


SCHEDULE_HEADER = "time_ns,voltage_v,width_ns,step,position,arm"


def pulse_schedule_to_text(ps: PulseSchedule) -> str:
    lines = [SCHEDULE_HEADER]
    for e in ps.events:
        lines.append(
            f"{e.time_ns:.4f},{e.voltage_v:.4f},{e.width_ns:.4f},"
            f"{e.step},{e.position},{e.arm}"
        )
    return "\n".join(lines) + "\n"


def pulse_schedule_from_text(text: str) -> PulseSchedule:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != SCHEDULE_HEADER:
        raise ParseError("missing or unexpected pulse schedule header")
    events = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise ParseError(f"bad schedule line {ln!r}")
        try:
            events.append(
                PulseEvent(
                    time_ns=float(parts[0]),
                    voltage_v=float(parts[1]),
                    width_ns=float(parts[2]),
                    step=int(parts[3]),
                    position=int(parts[4]),
                    arm=parts[5],
                )
            )
        except ValueError as exc:
            raise ParseError(f"bad schedule line {ln!r}: {exc}") from exc
    return PulseSchedule(events=tuple(events))
