import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from foundry.matroid import Matroid, mask

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def column_matroid(p, columns):
    """Matroid of the columns of a matrix over the prime field ``F_p``."""
    n = len(columns)
    rows = len(columns[0])

    def rank(cols):
        mat = [list(c) for c in cols]
        rk = 0
        for j in range(rows):
            piv = next((i for i in range(rk, len(mat)) if mat[i][j] % p), None)
            if piv is None:
                continue
            mat[rk], mat[piv] = mat[piv], mat[rk]
            inv = pow(mat[rk][j], p - 2, p)
            for i in range(len(mat)):
                if i != rk and mat[i][j] % p:
                    f = mat[i][j] * inv % p
                    mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rk])]
            rk += 1
        return rk

    r = rank(columns)
    bases = [mask(S) for S in itertools.combinations(range(n), r) if rank([columns[i] for i in S]) == r]
    return Matroid(n, bases)


@st.composite
def small_matroids(draw, max_n=6, primes=(2, 3)):
    """Column matroids of random nonzero matrices over small prime fields."""
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(2, max_n))
    rows = draw(st.integers(1, min(3, n)))
    cols = draw(
        st.lists(st.lists(st.integers(0, p - 1), min_size=rows, max_size=rows), min_size=n, max_size=n)
    )
    if not any(any(c) for c in cols):
        cols[0] = [1] + [0] * (rows - 1)
    return column_matroid(p, cols)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
