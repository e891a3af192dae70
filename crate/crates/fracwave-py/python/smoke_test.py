"""Smoke test for the fracwave_py extension.

Uses an installed module when available (``maturin develop`` or
``pip install .``); otherwise loads the library produced by
``cargo build --release -p fracwave-py``.
"""

import importlib
import json
import math
import os
import shutil
import sys
import tempfile
from pathlib import Path


def load():
    try:
        return importlib.import_module("fracwave_py")
    except ImportError:
        pass
    root = Path(__file__).resolve().parents[3]
    target = Path(os.environ.get("CARGO_TARGET_DIR", root / "target"))
    for profile in ("release", "debug"):
        for name in ("libfracwave_py.so", "libfracwave_py.dylib", "fracwave_py.dll"):
            lib = target / profile / name
            if lib.exists():
                tmp = Path(tempfile.mkdtemp())
                suffix = ".pyd" if name.endswith(".dll") else ".so"
                shutil.copy(lib, tmp / f"fracwave_py{suffix}")
                sys.path.insert(0, str(tmp))
                return importlib.import_module("fracwave_py")
    raise SystemExit("fracwave_py not found; build it with `cargo build --release -p fracwave-py`")


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    fw = load()

    solvable, margin, regime = fw.condition_closed_form(0.5, [0.3])
    assert solvable and regime == "time-white"
    close(margin, 0.3, 1e-12)
    assert not fw.condition_closed_form(1.0, [0.3, 0.3, 0.3])[0]
    verdict, slope, _ = fw.classify_numeric(0.5, [0.3])
    assert verdict == "convergent" and slope < 0

    rows = fw.phase_diagram(1, [0.6, 1.0], [0.5])
    assert [r[0] for r in rows] == [0.6, 1.0] and all(r[2] for r in rows)

    close(fw.g1(2.0, 1.0), 1 - math.cos(2.0), 1e-8)
    close(fw.g(1.0, 0.7), 0.5 * fw.g1(1.0, 0.7) - 0.25 * fw.g2(1.0, 0.7), 1e-12)
    prof = fw.g_profile([0.5, 1.0, 2.0], 0.7)
    assert len(prof) == 3 and prof[1][0] == 1.0
    close(fw.hyp1f2(0.5, 1.5, 1.5, 0.0), 1.0, 1e-15)

    # Time-white noise at H = 1/2: Var u(t, x) = t^2 / 4.
    close(fw.variance(2.0, 0.5), 1.0, 1e-8)
    close(fw.cov(1.0, 0.0, 1.0, 0.0, 0.3), fw.variance(1.0, 0.3), 1e-10)
    close(fw.d1(1.0, 0.0, 1.0, 0.0, 0.3), 0.0, 1e-12)
    assert fw.d2_sq(1.0, 0.1, 0.0, 0.5, 0.3) >= 0.0
    assert fw.d3_sq(1.0, 0.1, 0.0, 0.5, 0.3) >= 0.0
    assert fw.phi0(1.0, 1.0) == 1.0
    close(fw.phi(1.0, 8.0, 0.3), 1 + math.sqrt(3), 1e-12)
    assert fw.d1h(1.0, 0.0, 1.0, 0.0, 0.3) == 0.0

    values, shape = fw.simulate([0.5, 1.0], 0.0, 0.25, 3, 0.3, 5, seed=11)
    assert shape == (5, 2, 3) and len(values) == 30
    again, _ = fw.simulate([0.5, 1.0], 0.0, 0.25, 3, 0.3, 5, seed=11)
    assert values == again

    r_min, r_max, n = fw.metric_ratio([0.5, 1.0], [0.5, 1.0], [0.0, 0.5], 0.3)
    assert 0 < r_min <= r_max and n == 6

    cfg = json.dumps({"n_reps": 20, "tau_list": [0.125, 0.25], "l": 1.0})
    report = json.loads(fw.holder_time(cfg))
    assert report["experiment"] == "holder_time" and len(report["estimates"]) == 8
    report.pop("runtime_s")
    again = json.loads(fw.holder_time(cfg))
    again.pop("runtime_s")
    assert report == again

    for bad in (lambda: fw.condition_closed_form(0.4, [0.3]), lambda: fw.holder_time('{"n_reps": 1}'),
                lambda: fw.holder_time('{"bogus": 1}')):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("fracwave_py smoke test passed")


if __name__ == "__main__":
    main()
