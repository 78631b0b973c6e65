import os
import subprocess
import sys

from hypothesis import given
from hypothesis import strategies as st

from foundry import _kernels_py, kernels


@given(st.integers(1, 8), st.data())
def test_count_minor_bases_backends_agree(n, data):
    full = (1 << n) - 1
    bases = data.draw(st.lists(st.integers(0, full), max_size=40, unique=True))
    C = data.draw(st.integers(0, full))
    D = full & ~C & data.draw(st.integers(0, full))
    assert kernels.count_minor_bases(bases, C, D) == _kernels_py.count_minor_bases(bases, C, D)


@given(st.integers(0, 7), st.data())
def test_subset_ranks_backends_agree(n, data):
    full = (1 << n) - 1
    indep = sorted(set(data.draw(st.lists(st.integers(0, full), max_size=30))) | {0})
    assert list(kernels.subset_ranks(n, indep)) == list(_kernels_py.subset_ranks(n, indep))


def test_pure_backend_selected_by_environment():
    env = dict(os.environ, FOUNDRY_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from foundry import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
