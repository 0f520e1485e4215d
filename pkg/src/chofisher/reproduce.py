"""Regenerate the reference tables and figure data as CSV, plus SVG charts for figures."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from ._accel import backend
from .eigensolve import solve_energy
from .model import UNCONFINED, StateSpec, System, format_state_label
from .momentum import TransformSettings
from .observables import analyze_state
from .svgplot import Series, line_chart
from .sweep import canonical, format_value, log_range
from .wavefun import DEFAULT_ORDER

SMALL_RADII = (0.01, 0.05, 0.1, 0.2, 0.5)
MEDIUM_RADII = (0.1, 0.5, 1.0, 2.0, 7.0)
FIG_RADII = tuple(log_range(0.1, 20.0, 40))
FIG2_OMEGA2 = (1.0, 2.0, 4.0, 8.0, 32.0)
TARGETS = ("table1", "table2", "table3", "table4", "fig1", "fig2")


@dataclass(frozen=True)
class Table:
    name: str
    header: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass(frozen=True)
class Options:
    order: int = DEFAULT_ORDER
    settings: TransformSettings | None = None
    workers: int = 1
    fmt: str = "csv"


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _radius_header(radii) -> tuple[str, ...]:
    return tuple(f"rc={format_value(float(r))}" for r in radii)


def _fisher(spec: StateSpec, opts: Options):
    return analyze_state(spec, order=opts.order, settings=opts.settings).fisher


def _spec(system: System, n_r: int, l: int, m: int, radius, omega: float = 1.0) -> StateSpec:
    if radius is UNCONFINED or (isinstance(radius, float) and math.isinf(radius)):
        return StateSpec(n_r, l, m, omega, UNCONFINED, System.FHO)
    return StateSpec(n_r, l, m, omega, float(radius), system)


def table1(opts: Options) -> Table:
    rows = []
    for system in (System.CHO, System.PISB):
        for l in range(5):
            energies = [solve_energy(_spec(system, 0, l, 0, r)).energy for r in SMALL_RADII]
            rows.append((system.value, l, *energies))
    return Table("table1", ("system", "l", *_radius_header(SMALL_RADII)), tuple(rows))


def table2(opts: Options) -> Table:
    keys = [(system, l) for system in (System.CHO, System.PISB) for l in range(5)]
    specs = [_spec(system, 0, l, 0, r) for system, l in keys for r in SMALL_RADII]
    reports = _map(lambda s: _fisher(s, opts), specs, opts.workers)
    n = len(SMALL_RADII)
    rows = []
    for quantity in ("I_r", "I_p"):
        for i, (system, l) in enumerate(keys):
            block = reports[i * n:(i + 1) * n]
            vals = [f.i_r if quantity == "I_r" else f.i_p for f in block]
            rows.append((quantity, system.value, l, *vals))
    return Table("table2", ("quantity", "system", "l", *_radius_header(SMALL_RADII)), tuple(rows))


def _m_table(name: str, first: tuple[str, ...], keys: list[tuple[int, int, int]], key_label: Callable, opts: Options) -> Table:
    radii = (*MEDIUM_RADII, UNCONFINED)
    specs = [_spec(System.CHO, n_r, l, m, r) for n_r, l, m in keys for r in radii]
    reports = _map(lambda s: _fisher(s, opts), specs, opts.workers)
    header = ("quantity", *first, *_radius_header(MEDIUM_RADII), "rc=inf")
    return Table(name, header, tuple(_m_rows(keys, reports, len(radii), key_label)))


def _m_rows(keys, reports, n, key_label):
    rows = []
    # group keys by state so I_r rows of a state precede its I_p rows
    groups: dict = {}
    for i, key in enumerate(keys):
        groups.setdefault(key[:2], []).append((i, key))
    for members in groups.values():
        for quantity in ("I_r", "I_p"):
            for i, key in members:
                block = reports[i * n:(i + 1) * n]
                vals = [f.i_r if quantity == "I_r" else f.i_p for f in block]
                rows.append((quantity, *key_label(key), *vals))
    return rows


def table3(opts: Options) -> Table:
    keys = [(0, l, m) for l in (1, 2, 3) for m in range(l + 1)]
    return _m_table("table3", ("state", "m"), keys, lambda k: (format_state_label(k[0], k[1]), k[2]), opts)


def table4(opts: Options) -> Table:
    keys = [(1, l, 1) for l in range(1, 10)]
    table = _m_table("table4", ("l",), keys, lambda k: (k[1],), opts)
    # all I_r rows first, then all I_p rows
    rows = sorted(table.rows, key=lambda r: (r[0] != "I_r", r[1]))
    return Table(table.name, table.header, tuple(rows))


FIG_HEADER = ("label", "m", "omega2", "rc", "energy", "I_r", "I_p")


def _figure_rows(label_n_r: int, l: int, ms, omega2s, opts: Options) -> list[tuple]:
    radii = (*FIG_RADII, UNCONFINED)
    jobs = [(m, w2, r) for m in ms for w2 in omega2s for r in radii]

    def run(job):
        m, w2, r = job
        spec = _spec(System.CHO, label_n_r, l, m, r, canonical(math.sqrt(w2)))
        a = analyze_state(spec, order=opts.order, settings=opts.settings)
        return (spec.label, m, w2, float(spec.r_c), a.level.energy, a.fisher.i_r, a.fisher.i_p)

    return _map(run, jobs, opts.workers)


def fig1(opts: Options) -> Table:
    return Table("fig1", FIG_HEADER, tuple(_figure_rows(0, 4, range(5), (1.0,), opts)))


def fig2(opts: Options) -> Table:
    return Table("fig2", FIG_HEADER, tuple(_figure_rows(0, 1, (0, 1), FIG2_OMEGA2, opts)))


BUILDERS = {"table1": table1, "table2": table2, "table3": table3, "table4": table4, "fig1": fig1, "fig2": fig2}


def write_table(table: Table, out_dir: Path, fmt: str = "csv") -> Path:
    path = Path(out_dir) / f"{table.name}.{fmt}"
    delimiter = "," if fmt == "csv" else "\t"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
    return path


def figure_series(table: Table, quantity: str, m: int | None = None) -> list[Series]:
    """Group figure rows into one plotted series per (m, omega^2)."""
    col = table.header.index(quantity)
    groups: dict = {}
    limits: dict = {}
    for row in table.rows:
        row_m, w2, rc = row[1], row[2], row[3]
        if m is not None and row_m != m:
            continue
        key = (row_m, w2)
        if math.isinf(rc):
            limits[key] = row[col]
        else:
            groups.setdefault(key, []).append((rc, row[col]))
    series = []
    for (row_m, w2), pts in groups.items():
        name = f"|m|={row_m}" if m is None else f"w^2={format_value(w2)}"
        series.append(Series(name, tuple(p[0] for p in pts), tuple(p[1] for p in pts), limits.get((row_m, w2))))
    return series


def write_figures(table: Table, out_dir: Path) -> list[Path]:
    paths = []
    if table.name == "fig1":
        panels = [(q, None, f"fig1_{q}.svg", f"{q} of 1g vs r_c") for q in ("I_r", "I_p")]
    else:
        panels = [
            (q, m, f"fig2_{q}_m{m}.svg", f"{q} of 1p, |m|={m}, vs r_c")
            for q in ("I_r", "I_p")
            for m in (0, 1)
        ]
    for quantity, m, fname, title in panels:
        svg = line_chart(figure_series(table, quantity, m), title, "r_c (bohr)", quantity)
        path = Path(out_dir) / fname
        path.write_text(svg, encoding="utf-8")
        paths.append(path)
    return paths


def reproduce(targets: Sequence[str], out_dir: Path, opts: Options) -> list[Path]:
    """Build each target, write its files, and record run metadata in run.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for target in targets:
        table = BUILDERS[target](opts)
        written.append(write_table(table, out_dir, opts.fmt))
        if target.startswith("fig"):
            written.extend(write_figures(table, out_dir))
    meta = {
        "targets": list(targets),
        "files": [p.name for p in written],
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
        "backend": backend(),
        "python": platform.python_version(),
        "quad_order": opts.order,
    }
    (out_dir / "run.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return written
