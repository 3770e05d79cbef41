"""Cross-checks between the compiled kernels and the numpy fallback.

Everything here asserts bit-identical floats: the two backends implement
the same IEEE-754 operation sequences.
"""

import numpy as np
import pytest

from feemarket import _kernels_py as kpy
from feemarket import prng
from feemarket._backend import backend_name
from tests.conftest import random_instance

kc = pytest.importorskip("feemarket._kernels")

needs_compiled = pytest.mark.skipif(
    backend_name() != "compiled", reason="compiled backend not active"
)


def _cases(count, seed, n_max=48, n_min=1):
    for t in range(count):
        yield t, random_instance(prng.split_seed(seed, t), n_max, n_min, discrete=bool(t % 2)).values


def test_mono_scan_matches():
    assert kc.mono_scan(np.empty(0)) == kpy.mono_scan(np.empty(0)) == (0.0, 0)
    for t, vals in _cases(400, 1):
        assert kc.mono_scan(vals) == kpy.mono_scan(vals)
        cap = 1 + t % (len(vals) + 2)
        assert kc.mono_scan_capped(vals, cap) == kpy.mono_scan_capped(vals, cap)


def test_insert_outcome_matches():
    for t, vals in _cases(400, 2):
        u = prng.uniforms(prng.split_seed(3, t), 2)
        b = float(u[0] * 12)
        copies = 1 + int(u[1] * 4)
        assert kc.insert_outcome(vals, b, copies) == kpy.insert_outcome(vals, b, copies)
        assert kc.insert_outcome(vals, float(vals[0]), 1) == kpy.insert_outcome(vals, float(vals[0]), 1)


def test_multibid_scan_matches():
    for t, vals in _cases(400, 4):
        assert kc.multibid_scan(vals) == kpy.multibid_scan(vals)


def test_delta_sweep_matches_both_modes():
    for t, vals in _cases(150, 5, n_max=28, n_min=2):
        idx = np.arange(len(vals), dtype=np.int64)
        for mode in (0, 1):
            a = kc.delta_sweep(vals, idx, mode)
            b = kpy.delta_sweep(vals, idx, mode)
            assert np.array_equal(a, b), (mode, vals.tolist())


def test_rsop_eval_matches():
    for t, vals in _cases(300, 6):
        labels = prng.bits(prng.split_seed(7, t), len(vals))
        assert kc.rsop_eval(vals, labels) == kpy.rsop_eval(vals, labels)


def test_rsop_all_partitions_matches():
    for t, vals in _cases(60, 8, n_max=11):
        assert np.array_equal(kc.rsop_all_partitions(vals), kpy.rsop_all_partitions(vals))


@needs_compiled
def test_active_backend_is_compiled():
    assert backend_name() == "compiled"


def test_forced_pure_python_env(tmp_path):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import feemarket; print(feemarket.backend_name())"],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "FEEMARKET_PURE_PYTHON": "1"},
    )
    assert out.stdout.strip() == "python"
