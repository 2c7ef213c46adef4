"""Closed-form pathlength and switch-count formulas and the comparison tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from decimal import Decimal, ROUND_HALF_UP

METHODS = ("boustrophedon", "alternative")
TABLE_RADIUS = 5.0
TABLE_SIZES = ((12.0, 100.0), (12.0, 500.0), (36.0, 100.0), (36.0, 500.0))
TABLE_LANE_COUNTS = {"odd": (5, 51), "even": (4, 50)}


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round half away from zero (Python's round() is half-to-even)."""
    q = Decimal(1).scaleb(-ndigits)
    d = Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP)
    return float(d)


def round_int(x: float) -> int:
    return int(round_half_away(x, 0))


def quarter_arc(R: float) -> float:
    return 2.0 * R * math.pi / 4.0


@dataclass(frozen=True)
class AnalyticConstants:
    c1: float
    c2: float
    c3: float
    c4: float

    @property
    def c21_tilde(self) -> float:
        return self.c2 - self.c1

    @property
    def c43_tilde(self) -> float:
        return self.c4 - self.c3

    @classmethod
    def for_field(cls, W: float, H: float, R: float) -> "AnalyticConstants":
        q = quarter_arc(R)
        return cls(
            c1=3 * H - 14 * R + 6 * q + 2 * W,
            c2=3 * H - 12 * R + 6 * q + 3 * W,
            c3=3 * H - 12 * R + 6 * q + 2 * W,
            c4=2 * H - 8 * R + 4 * q + 2 * W,
        )


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def per_lane_term(method: str, W: float, H: float, R: float) -> float:
    """Pathlength added per mainfield lane (same for both parities)."""
    _check_method(method)
    lateral = 4 * W if method == "boustrophedon" else 3 * W
    return H - 4 * R + 2 * quarter_arc(R) + lateral


def pathlength_formula(method: str, N: int, W: float, H: float, R: float) -> float:
    _check_method(method)
    c = AnalyticConstants.for_field(W, H, R)
    if N % 2:
        offset = c.c1 if method == "boustrophedon" else c.c2
    else:
        offset = c.c3 if method == "boustrophedon" else c.c4
    return N * per_lane_term(method, W, H, R) + offset


def on_count_formula(method: str, N: int) -> int:
    _check_method(method)
    if method == "boustrophedon":
        return N + 1
    return 3 * (N + 1) // 2 if N % 2 else 3 * N // 2 + 1


def deltas(N: int, W: float, H: float, R: float) -> tuple:
    """(alternative minus Boustrophedon pathlength, extra ON states of the alternative)."""
    c = AnalyticConstants.for_field(W, H, R)
    if N % 2:
        return -N * W + c.c21_tilde, (N + 1) // 2
    return -N * W + c.c43_tilde, N // 2


def area_ha(N: int, W: float, H: float) -> float:
    """Area enclosed by the headland centerline, rounded to 0.1 ha (fit to the tables)."""
    return round_half_away((N + 1) * W * H / 1e4, 1)


def time_savings(delta_L: float, speed_kmh: float) -> float:
    """Minutes saved by driving ``|delta_L|`` metres less at ``speed_kmh``."""
    if not speed_kmh > 0:
        raise ValueError("speed must be positive")
    return abs(delta_L) / (speed_kmh * 1000.0 / 60.0)


def relative_savings(N: int, W: float, H: float, R: float) -> float:
    """Pathlength change of the alternative relative to Boustrophedon, in percent."""
    return 100.0 * deltas(N, W, H, R)[0] / pathlength_formula("boustrophedon", N, W, H, R)


@dataclass(frozen=True)
class ComparisonRow:
    W: float
    H: float
    N: int
    R: float
    area_ha: float
    L_boustrophedon: float
    N_ON_boustrophedon: int
    L_alternative: float
    N_ON_alternative: int
    delta_L: float
    delta_N_ON: int

    def rounded(self) -> dict:
        return {
            "W": round_int(self.W), "H": round_int(self.H), "area_ha": self.area_ha,
            "N": self.N,
            "L_b": round_int(self.L_boustrophedon), "NON_b": self.N_ON_boustrophedon,
            "L_a": round_int(self.L_alternative), "NON_a": self.N_ON_alternative,
            "dL": round_int(self.delta_L), "dNON": self.delta_N_ON,
        }

    def to_json(self) -> dict:
        return asdict(self)


CSV_COLUMNS = ("W", "H", "area_ha", "N", "L_b", "NON_b", "L_a", "NON_a", "dL", "dNON")


def build_comparison_table(specs) -> list:
    """One row per ``(N, W, H, R)`` tuple or FieldSpec."""
    rows = []
    for spec in specs:
        if hasattr(spec, "lane_count"):
            N, W, H, R = spec.lane_count, spec.working_width, spec.lane_length, spec.turn_radius
        else:
            N, W, H, R = spec
        L_b = pathlength_formula("boustrophedon", N, W, H, R)
        L_a = pathlength_formula("alternative", N, W, H, R)
        on_b = on_count_formula("boustrophedon", N)
        on_a = on_count_formula("alternative", N)
        rows.append(ComparisonRow(W, H, N, R, area_ha(N, W, H), L_b, on_b, L_a, on_a,
                                  L_a - L_b, on_a - on_b))
    return rows


def table_setups(parity: str, R: float = TABLE_RADIUS) -> list:
    """The eight ``(N, W, H, R)`` setups of one published table, in table order."""
    small, big = TABLE_LANE_COUNTS[parity]
    return [(N, W, H, R) for W, H in TABLE_SIZES for N in (small, big)]
