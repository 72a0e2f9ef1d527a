"""Group counts as one merge threshold varies."""
from __future__ import annotations

from dataclasses import replace

from .errors import ValidationError
from .formation import FormationConfig, form_groups
from .graph import ConnectionSnapshot
from .merging import MergeConfig, merge_pass

__all__ = ["SWEEP_PARAMS", "sweep", "sweep_points", "format_sweep_csv"]

SWEEP_PARAMS = ("s_lo", "k_hi")


def sweep_points(start, stop, step) -> list:
    """Inclusive range; integers stay integers."""
    if step <= 0:
        raise ValidationError(f"sweep step must be positive, got {step}")
    if stop < start:
        raise ValidationError(f"sweep range is empty: {start} > {stop}")
    points = []
    i = 0
    while True:
        v = start + i * step
        if not all(isinstance(x, int) for x in (start, step)):
            v = round(v, 10)
        if v > stop + 1e-9:
            break
        points.append(v)
        i += 1
    return points


def sweep(snapshot: ConnectionSnapshot, param: str, start, stop, step,
          formation: FormationConfig | None = None, merge: MergeConfig | None = None) -> list[tuple]:
    """``(value, group count)`` for each point; other settings stay as given."""
    if param not in SWEEP_PARAMS:
        raise ValidationError(f"cannot sweep {param!r}; choose from {SWEEP_PARAMS}")
    merge = merge or MergeConfig()
    points = sweep_points(start, stop, step)
    configs = []
    for v in points:
        if param == "k_hi" and (int(v) != v or v < 0):
            raise ValidationError(f"k_hi must be a non-negative integer, got {v}")
        value = int(v) if param == "k_hi" else v
        configs.append((v, replace(merge, **{param: value})))
    # formation does not depend on the swept thresholds
    formed = form_groups(snapshot, formation)
    return [(v, len(merge_pass(formed, snapshot, cfg))) for v, cfg in configs]


def _fmt(v) -> str:
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return repr(v) if isinstance(v, float) else str(v)


def format_sweep_csv(param: str, rows) -> str:
    return "param,value,groups\n" + "".join(f"{param},{_fmt(v)},{n}\n" for v, n in rows)
