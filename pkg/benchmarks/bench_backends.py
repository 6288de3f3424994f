"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import random
import sys
import timeit

from commonpairs import _pycore
from commonpairs.graphs import complete, cycle
from commonpairs.kernels import kernel_K

try:
    from commonpairs import _core
except ImportError:
    _core = None


def _cases():
    rng = random.Random(0)
    g8 = [rng.getrandbits(28) for _ in range(5)]
    k = kernel_K()
    mat, w, _, _ = k._integer_form
    c7 = cycle(7)
    pairs7 = [(a - 1, b - 1, 0) for a, b in c7.edges]
    c5 = cycle(5)
    return [
        ("orbit_sweep(6)", lambda m: m.orbit_sweep(6)),
        ("canon_mask x5 (n=8)", lambda m: [m.canon_mask(8, x) for x in g8]),
        ("aut_count(K7)", lambda m: m.aut_count(7, complete(7).mask)),
        ("block_sum C7 on K (4 blocks)", lambda m: m.block_sum(7, pairs7, [mat], w)),
        ("hom_inj C5 -> K8", lambda m: m.hom_inj_count(
            5, [(a - 1, b - 1) for a, b in c5.edges], 8, complete(8).adjacency())),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; only the pure-Python timings are shown")
    print(f"{'kernel':32} {'python [s]':>12} {'compiled [s]':>13} {'speed-up':>9}")
    for name, fn in _cases():
        if _core is not None and fn(_pycore) != fn(_core):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        tp = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat))
        if _core is None:
            print(f"{name:32} {tp:12.4f} {'-':>13} {'-':>9}")
            continue
        tc = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        print(f"{name:32} {tp:12.4f} {tc:13.5f} {tp / tc:8.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
