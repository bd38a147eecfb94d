"""Time the compiled and pure-Python pulse propagators on the same loops.

    python benchmarks/bench_backends.py [--rounds 100000] [--repeat 3]
"""

import argparse
import math
import timeit

from rpsm import oracle, pulse
from rpsm.analytic import ExperimentParams, Scheme

CASES = [
    ("scheme1", ExperimentParams(0.1, 0.2, scheme=Scheme.SCHEME_I)),
    ("scheme2", ExperimentParams(0.1, 0.2, scheme=Scheme.SCHEME_II)),
]


def time_case(params, rounds, backend, repeat):
    forward, optics = oracle.loop_optics(params)
    # floor=0 keeps every round running so both backends do the same work
    call = lambda: pulse.propagate(forward, optics.entry, optics.filtered, optics.exit_map,
                                   optics.gain, rounds, floor=0.0, keep=False, backend=backend)
    n_calls = 1 if backend == "python" else 10
    return min(timeit.repeat(call, number=n_calls, repeat=repeat)) / n_calls


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rounds", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = sorted(pulse.BACKENDS)
    print(f"rounds per pulse: {args.rounds}, backends: {', '.join(backends)}")
    print(f"{'case':<10}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, params in CASES:
        t = {b: time_case(params, args.rounds, b, args.repeat) for b in backends}
        speedup = t["python"] / t["compiled"] if "compiled" in t else math.nan
        print(f"{name:<10}" + "".join(f"{t[b] * 1e3:>11.2f} ms" for b in backends)
              + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
