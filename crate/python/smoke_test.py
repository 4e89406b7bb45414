"""Smoke test for the hyperlab_py extension module."""

import json
import math

import hyperlab_py as h


def main():
    m = h.UniModularMat(2, 1, 1, 1)
    z1, z2 = m.to_gauss_pair()
    assert h.UniModularMat.from_gauss_pair(z1, z2) == m
    theta1, theta2, r = m.cartan_angles()
    assert r > 0

    for n in (7, 10, 23):
        reps = h.enumerate_norm(n)
        assert all(g.nu_h() == n for g in reps)
        re, im = h.s_e_direct(0, 0, n)
        assert abs(re - len(reps)) < 1e-9 and abs(im) < 1e-9

    report = h.count_range(10_000)
    assert abs(report.ratio - 1) < 0.1, report.ratio
    json.loads(report.to_json())

    q = h.QuatMat(6, 0, 3, 1)
    assert q.delta() == 142
    assert (q @ q.inverse()).coords() == (1, 0, 0, 0)
    assert abs(q.decompose().v - math.log(6 + math.sqrt(35))) < 1e-12

    hc = h.count_range_h(10_000)
    assert abs(hc.ratio - 1) < 0.1, hc.ratio
    assert h.s_h(1, 2, 50) == (0.0, 0.0)

    k = h.constants(100_000)
    assert abs(k["c"] - 2 * k["c_prime"]) < 1e-12

    pts = h.build_sample("h", 20_000)
    table = h.weyl_table(pts, 2)
    assert table[(0, 0)] == 1.0
    assert h.box_discrepancy(pts, 8) < 0.1

    try:
        h.UniModularMat(1, 1, 1, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("determinant check did not raise")

    print("smoke test ok")


if __name__ == "__main__":
    main()
