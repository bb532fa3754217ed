from __future__ import annotations

from typing import Any, Iterable, Sequence

from ..models import Params
from .symbols import Region, kernel_symbols, region_tag

TABLE_COLUMNS = [
    "xi1", "xi2", "t", "region",
    "re_l1", "im_l1", "re_l2", "im_l2",
    "K1", "K2", "K3", "K4", "K5",
]


def kernel_table(
    xis: Iterable[Sequence[float]], times: Iterable[float], p: Params
) -> list[dict[str, Any]]:
    """Rows of (xi, t, region, roots, Re K1..K5) for plotting and regression baselines.

    The origin gets the propagator's convention: roots 0 and K = (1, 0, 0, 0, 1).
    """
    times = [float(t) for t in times]
    rows: list[dict[str, Any]] = []
    for xi in xis:
        xi1, xi2 = float(xi[0]), float(xi[1])
        tag = region_tag((xi1, xi2), p)
        for t in times:
            if tag is Region.ZERO:
                l1 = l2 = 0j
                ks: tuple[complex, ...] = (1, 0, 0, 0, 1)
            else:
                ev = kernel_symbols((xi1, xi2), t, p)
                l1, l2, ks = ev.lambda1, ev.lambda2, ev.K
            row: dict[str, Any] = {
                "xi1": xi1,
                "xi2": xi2,
                "t": t,
                "region": tag.value,
                "re_l1": float(l1.real),
                "im_l1": float(l1.imag),
                "re_l2": float(l2.real),
                "im_l2": float(l2.imag),
            }
            for i, k in enumerate(ks, start=1):
                row[f"K{i}"] = float(complex(k).real)
            rows.append(row)
    return rows
