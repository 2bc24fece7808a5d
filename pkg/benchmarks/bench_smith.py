"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_smith.py [--repeat N]

Both kernels run on the same inputs: random dense matrices of a few sizes and
the sparse incoming differentials that the cohomology routines decompose.
Diagonals are compared so a speedup never hides a wrong answer.
"""

import argparse
import random
import timeit

from galcoh import _smith_py
from galcoh.cohomology import boundary_rows, coboundary_rows
from galcoh.gmodule import GModule, regular_module
from galcoh.groups import FiniteGroup

try:
    from galcoh import _smith_ext
except ImportError:
    _smith_ext = None


def dense_case(n: int, bound: int, seed: int):
    rng = random.Random(seed)
    rows = [{j: v for j in range(n) if (v := rng.randint(-bound, bound))} for _ in range(n)]
    return f"dense {n}x{n} |a|<={bound}", rows, n


def bar_cases():
    s3 = FiniteGroup.symmetric(3)
    z6 = FiniteGroup.cyclic(6)
    out = []
    for name, m, r in [("Z over S3, d^2", GModule.trivial(s3), 2),
                       ("Z[C6], d^2", regular_module(z6), 2),
                       ("Z over C6, d^3", GModule.trivial(z6), 3)]:
        rows = coboundary_rows(m, r)
        out.append((f"cochains: {name}", rows, m.group.order ** r * m.ngens))
    m = GModule.trivial(FiniteGroup.dihedral(4))
    out.append(("chains: Z over D8, del_3", boundary_rows(m, 3), 8 ** 3))
    return out


def run(kernel, rows, ncols):
    return kernel.smith_sparse([dict(r) for r in rows], ncols, True, True)[0]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [dense_case(n, b, n) for n, b in [(10, 10), (25, 10), (40, 5)]] + bar_cases()
    kernels = [("python", _smith_py)] + ([("cython", _smith_ext)] if _smith_ext else [])
    if _smith_ext is None:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'case':38s} " + " ".join(f"{k:>10s}" for k, _ in kernels) + ("    speedup" if len(kernels) == 2 else ""))
    for label, rows, ncols in cases:
        diags = [run(k, rows, ncols) for _, k in kernels]
        if any(d != diags[0] for d in diags):
            raise SystemExit(f"{label}: kernels disagree")
        times = [min(timeit.repeat(lambda k=k: run(k, rows, ncols), number=1, repeat=args.repeat))
                 for _, k in kernels]
        cells = " ".join(f"{t * 1e3:8.1f}ms" for t in times)
        speed = f"  {times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{label:38s} {cells}{speed}")


if __name__ == "__main__":
    main()
