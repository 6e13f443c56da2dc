"""Smoke test for the cxint_py extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml --release`,
then run `python python/smoke_test.py`.
"""

import json
import math

import cxint_py as cx


def main():
    assert cx.sigma(2, 4) == 2
    assert cx.sigma(3, 7) == 3
    table = cx.sigma_table(10, 15)
    assert table[4][15] == 21 and table[10][10] == 1 and table[3][2] is None
    assert cx.expected_counts(True, 4, 2) == (2, 0)
    assert cx.expected_counts(False, 4, 2) == (1, 1)

    j0 = cx.standard_j(2)
    assert cx.orientation(j0) == 1
    assert cx.orientation(cx.random_orthogonal_j(3, -1, 5)) == -1

    sig = cx.Signature.parse("1.5707963267948966:1;l=1;s=0")
    pair = sig.canonical_pair()
    assert pair.n == 3 and pair.is_orthogonal and pair.same_orientation
    back = cx.classify(pair)
    assert back.approx_eq(sig), str(back)
    assert back.blocks[0][1] == 1 and abs(back.blocks[0][0] - math.pi / 2) < 1e-9

    again = cx.StructurePair.from_json(pair.to_json())
    assert again.j1 == pair.j1

    report = cx.common_invariant_planes(pair, 1)
    assert report["raw_count_same"] == 1 and report["generic"]
    assert report["isolated_points"][0]["local_sign"] == 1
    json.dumps(report)

    equal = cx.StructurePair(j0, j0)
    assert cx.common_invariant_planes(equal, 1)["raw_count_same"] == "infinite"

    try:
        cx.classify(cx.StructurePair([[0, -1], [1, 0]], [[0, -2], [0.5, 0]]))
    except cx.CxintError as e:
        assert "NotOrthogonal" in str(e)
    else:
        raise AssertionError("non-orthogonal pair was classified")
    try:
        cx.StructurePair([[1, 0], [0, 1]], j0[:2])
    except ValueError:
        pass
    else:
        raise AssertionError("identity accepted as a complex structure")

    run = cx.run_trials("orth-same", 4, 2, 20, 7)
    assert run["pass_count"] == 20 and run["fail_count"] == 0
    run = cx.run_trials("general-same", 2, 1, 20, 3)
    assert run["fail_count"] == 0

    r4 = cx.example_r4(1.2, 0.8)
    signs = sorted(p["local_sign"] for p in r4["planes"])
    assert signs == [-1, 1] and r4["signed_total"] == 0
    assert abs(cx.example_r4_boundary(1 / math.sqrt(2))["u_max"] - 0.6) < 1e-6

    random_pair = cx.StructurePair.random("general-opposite", 3, 1)
    assert not random_pair.same_orientation and not random_pair.is_orthogonal
    print("smoke test passed")


if __name__ == "__main__":
    main()
