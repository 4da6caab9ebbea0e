"""Wall-clock comparison of the numba kernels against the numpy fallback.

Each task runs once per backend as a warmup (absorbing JIT compilation),
then `--repeats` timed runs; the table reports the minimum.  Backends
share iteration order, so outputs are asserted identical along the way.
"""
import argparse
import time

from e8ks.census import enumerate_family_proofs
from e8ks.coloring import colorable
from e8ks.families import Family, family_for_selector
from e8ks.proofs import is_critical
from e8ks.rays import build_rays
from e8ks.structure import build_graph, enumerate_bases
from e8ks.subsystems import extract_E7
from e8ks.symmetry import count_basis_symmetries

BACKENDS = ("numba", "numpy")


def build_tasks():
    system = build_rays()
    graph = build_graph(system)
    table = enumerate_bases(graph)
    e7 = extract_E7(table, graph, 1)
    type1 = family_for_selector(table, "type1")
    type3 = family_for_selector(table, "type3")
    type4 = family_for_selector(table, "type4")
    census1 = enumerate_family_proofs(type1, graph)
    biggest = census1.proof_from_mask(census1.samples["45_4 50_2-35_8"])
    # prefix of the 45-basis family: small enough kernel for a quick sweep
    sub3 = Family(
        type3.profiles,
        type3.bases[:35],
        tuple(sorted({i for b in type3.bases[:35] for i in b})),
    )

    return {
        "clique enumeration (2025 bases)": lambda b: enumerate_bases(graph, backend=b),
        "uncolorability (63 rays, 135 bases)": lambda b: colorable(
            e7.bases, graph, mode="strict", backend=b
        ),
        "criticality (35-basis proof)": lambda b: is_critical(
            biggest, graph, mode="weak", backend=b
        ),
        "family sweep (kernel dim 11)": lambda b: enumerate_family_proofs(
            sub3, graph, backend=b
        ),
        "ordering sweep (8! candidates)": lambda b: count_basis_symmetries(
            system, table.bases[0], table.bases[0], backend=b
        ),
        "random exploration (200 draws)": lambda b: enumerate_family_proofs(
            type4, graph, seed=3, samples=200, backend=b
        ),
    }


def time_task(fn, backend: str, repeats: int) -> float:
    fn(backend)  # warmup; JIT compile on the numba side
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3, help="timed runs per task")
    args = parser.parse_args()

    print("building shared inputs...", flush=True)
    tasks = build_tasks()

    width = max(len(name) for name in tasks)
    header = f"{'task':<{width}}  {'numba':>10}  {'numpy':>10}  {'ratio':>7}"
    print(header)
    print("-" * len(header))
    for name, fn in tasks.items():
        times = {b: time_task(fn, b, args.repeats) for b in BACKENDS}
        ratio = times["numpy"] / times["numba"]
        print(
            f"{name:<{width}}  {times['numba']:>9.3f}s  {times['numpy']:>9.3f}s"
            f"  {ratio:>6.1f}x",
            flush=True,
        )


if __name__ == "__main__":
    main()
