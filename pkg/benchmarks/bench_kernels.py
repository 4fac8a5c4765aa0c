"""Time the numba and numpy kernel backends on arguments captured from a real run.

    python benchmarks/bench_kernels.py [catalog id]   (default pg32)

The workload validates the building and its spherical double and runs one
extension; every kernel call made along the way is recorded, and the first
few calls of each kernel are replayed on both backends.
"""

import sys
import time
from contextlib import contextmanager


from twinbuild import _kernels as K
from twinbuild.isom import identity_isometry, main_extension, seed_domain
from twinbuild.twin import spherical_double
from twinbuild.workbench.catalog import generate_building

REPLAY = 20


@contextmanager
def recording(calls):
    saved = {name: getattr(K, name) for name in K._IMPLS}

    def wrap(name, fn):
        def rec(*args):
            calls.setdefault(name, []).append(args)
            return fn(*args)

        return rec

    for name, fn in saved.items():
        setattr(K, name, wrap(name, fn))
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(K, name, fn)


def workload(cid):
    b = generate_building(cid)
    t = spherical_double(b)
    if t.group.rank >= 3:
        cbar = (0, int(t.opposites(0)[0]))
        main_extension(identity_isometry(t, seed_domain(t, cbar)), cbar)


def best_of(fn, args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(cid="pg32"):
    calls = {}
    with recording(calls):
        workload(cid)
    print(f"workload: {cid}")
    print(f"{'kernel':16s} {'calls':>6s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, arglist in sorted(calls.items()):
        nb, npy = K.implementations(name)
        sample = arglist[:REPLAY]
        for args in sample[:1]:
            nb(*args)  # compile outside the timing
        t_nb = sum(best_of(nb, a) for a in sample)
        t_np = sum(best_of(npy, a, 1) for a in sample)
        print(f"{name:16s} {len(arglist):6d} {1e3 * t_nb:10.2f} {1e3 * t_np:10.2f} {t_np / max(t_nb, 1e-9):8.1f}x")


if __name__ == "__main__":
    main(*sys.argv[1:])
