"""Smoke test for the compiled extension module.

Build with `maturin develop -m crates/python/Cargo.toml`, or with
`cargo build --release -p groovesim-py --features extension-module` and
copy target/release/libgroovesim_py.so to groovesim_py.so on PYTHONPATH.
"""

import math
import sys

import groovesim_py as gs


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    failures = []

    def check(name, ok):
        print(("PASS" if ok else "FAIL"), name)
        if not ok:
            failures.append(name)

    h = gs.hbar_eff(100e-9, 80e-6, 1.443e-25)
    check("rubidium at 100 nm / 80 us gives hbar near 6", close(h, 6.0, 0.3))

    check("valley floor at U = 0", close(gs.groove(0.5 * 1.8903, 0.0), 0.0, 1e-9))
    check("groove even in x", gs.groove(0.7, 3.0) == gs.groove(-0.7, 3.0))

    e_s, e_a, omega, gap = gs.doublet()
    check("E_A > E_S", e_a > e_s)
    check("2 hbar Omega = E_A - E_S", close(gap, e_a - e_s, 1e-12))

    left, right = gs.paraxial_split()
    check("50-50 split", close(left, 0.5, 0.02) and close(right, 0.5, 0.02))

    aa, bb, ab = gs.beamsplitter("boson")
    check("bosons bunch", ab < 1e-12 and close(aa + bb, 1.0, 1e-12))
    check("fermions antibunch", close(gs.beamsplitter("fermion")[2], 1.0, 1e-12))
    check("P_same node at sqrt(3)", gs.same_channel_probability(math.sqrt(3.0)) < 1e-12)

    check("twelve recipes", len(gs.recipes()) == 12)
    try:
        gs.run("fig99")
        check("unknown recipe rejected", False)
    except ValueError as e:
        check("unknown recipe rejected", "fig2" in str(e))

    passed, checks = gs.run("fig2", output_dir="out/py_smoke_fig2")
    check("fig2 recipe passes its own checks", passed and len(checks) > 0)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
