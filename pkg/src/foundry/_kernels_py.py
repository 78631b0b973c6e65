"""Pure-Python bitmask kernels (fallback for the compiled ``_kernels``)."""


def count_minor_bases(bases, contract, delete):
    """Number of bases containing ``contract`` and avoiding ``delete``."""
    return sum(1 for b in bases if b & contract == contract and not b & delete)


def subset_ranks(n, independent):
    """Rank of every subset of ``range(n)`` from the independent sets."""
    size = 1 << n
    rank = [0] * size
    for X in range(1, size):
        if X in independent:
            rank[X] = bin(X).count("1")
            continue
        best = 0
        x = X
        while x:
            low = x & -x
            r = rank[X ^ low]
            if r > best:
                best = r
            x ^= low
        rank[X] = best
    return rank
