"""Smoke test for the compiled extension.

Build it with
    cargo build --release -p pinwheel-py --features extension-module
    cp target/release/libpinwheel_py.so python/pinwheel_py.so
and run this file from the repository root.
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pinwheel_py as pw  # noqa: E402


def main():
    for n in range(4):
        patch = json.loads(pw.supertile("triangle", n))
        assert len(patch["tiles"]) == 5**n, n
    assert pw.patch_size(pw.supertile("kite", 1)) > 0

    pts = pw.aorta_points(4)
    assert pts[0] == (-0.5, 0.0) and pts[-1] == (0.0, 0.5)
    assert all(pw.ifs_invariant(d) for d in range(5))
    assert abs(pw.dimension() - math.log(3) / math.log(math.sqrt(5))) < 1e-12

    faces, chiral, achiral = pw.fractile_counts(3)
    assert (chiral, achiral) == (18, 13), (faces, chiral, achiral)

    perron, areas, freqs = pw.spectral(False)
    assert abs(perron - 5) < 1e-9
    assert areas == ["1", "1", "1", "6/5", "9/5", "1", "9/5", "6/5", "9/5", "6/5", "7/5", "7/5", "13/5"]
    printed = [.1412, .1225, .1039, .1, .1, .1, .0843, .0784, .0784, .0353, .0245, .0157, .0157]
    assert all(abs(a - b) < 5e-5 for a, b in zip(freqs, printed))
    assert len(pw.substitution_matrix(True)) == 18
    assert len(json.loads(pw.catalog_json())["classes"]) == 13

    assert pw.reflection_fixed_classes() == [4, 6, 10]
    assert pw.orientation_count(4) >= 3
    assert pw.discrepancy(2 * math.atan(0.5), 10_000) < 0.05

    try:
        pw.supertile("hexagon", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown prototile accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
