#!/usr/bin/env python3
"""Smoke test for the _ctsboot extension module.

Builds nothing itself: run `cargo build -p ctsboot-python` (or --release)
first, then `python3 python/smoke_test.py`. The script copies the built
cdylib next to a temp directory under the import name Python expects.
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_extension() -> Path:
    candidates = []
    for profile in ("release", "debug"):
        for stem in ("lib_ctsboot", "_ctsboot"):
            for suffix in (".so", ".dylib"):
                candidates.append(ROOT / "target" / profile / f"{stem}{suffix}")
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "could not find the built extension; run `cargo build -p ctsboot-python` first"
    )


def main() -> None:
    built = locate_extension()
    tmp = Path(tempfile.mkdtemp(prefix="ctsboot-smoke-"))
    shutil.copy2(built, tmp / "_ctsboot.so")
    sys.path.insert(0, str(tmp))
    import _ctsboot as ct

    # Series construction: explicit alphabet and inference.
    s = ct.Series(["1", "2", "1", "3"], alphabet=["1", "2", "3"])
    assert len(s) == 4
    assert s.labels == ["1", "2", "1", "3"]
    assert s.indices == [0, 1, 0, 2]
    inferred = ct.Series(["1", "3", "1"])
    assert inferred.alphabet == ["1", "2", "3"], inferred.alphabet

    # Scenario simulation is deterministic in the seed.
    x = ct.simulate_scenario(1, 400, delta=0.0, seed=1)
    assert len(x) == 400 and x.alphabet == ["1", "2", "3"]
    assert ct.simulate_scenario(1, 400, delta=0.0, seed=1).labels == x.labels

    # Distances: zero on identical input, positive across distinct series.
    y = ct.simulate_scenario(1, 400, delta=0.1, seed=2)
    assert ct.distance(x, x, metric="cc") == 0.0
    assert ct.distance(x, y, metric="cc") > 0.0
    assert ct.distance(x, y, metric="b") > 0.0
    assert ct.distance(x, y, metric="mle") > 0.0

    # A bootstrap test runs, is deterministic, and never rejects x vs x.
    out = ct.run_test(x, y, metric="cc", method="mbb", replicates=99, seed=3)
    again = ct.run_test(x, y, metric="cc", method="mbb", replicates=99, seed=3)
    assert (out.observed, out.critical, out.pvalue, out.reject) == (
        again.observed,
        again.critical,
        again.pvalue,
        again.reject,
    )
    assert 0.0 < out.pvalue <= 1.0 and out.replicates == 99
    assert out.block_size is not None and out.cont_prob is None
    null = ct.run_test(x, x, metric="cc", method="sb", replicates=99, seed=4)
    assert null.pvalue == 1.0 and not null.reject

    # Corpus pipeline: p-value matrix -> clustering, plus an embedding.
    corpus = [ct.simulate_scenario(1, 120, seed=10 + i) for i in range(3)]
    pvals = ct.pvalue_matrix(corpus, replicates=39, seed=5)
    assert len(pvals) == 3 and all(pvals[i][i] == 1.0 for i in range(3))
    assert pvals[0][1] == pvals[1][0]
    assignments = ct.pvalue_clustering(pvals, alpha=0.05)
    assert len(assignments) == 3 and min(assignments) == 0

    coords, padded = ct.classical_mds(
        [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]], dim=2
    )
    assert len(coords) == 3 and len(coords[0]) == 2 and not padded
    d01 = sum((a - b) ** 2 for a, b in zip(coords[0], coords[1])) ** 0.5
    assert abs(d01 - 1.0) < 1e-8

    # FASTA encoding under the default hydrophobicity classes.
    records = ct.encode_fasta(">p1\nRGL\n")
    assert records[0][0] == "p1" and records[0][1].labels == ["3", "2", "1"]

    # Errors surface as ValueError.
    try:
        ct.Series(["a", "b"], alphabet=["a"])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid alphabet must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
