#!/usr/bin/env python3
"""Smoke test for the camforge_py extension module.

Builds the cdylib with cargo (feature `extension-module`), places it on the
import path under the module name, and exercises the bound API end to end.

Usage: python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module(out_dir: Path) -> None:
    subprocess.run(
        [
            "cargo",
            "build",
            "-p",
            "camforge-py",
            "--release",
            "--features",
            "extension-module",
        ],
        cwd=ROOT,
        check=True,
    )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    built = ROOT / "target" / "release" / "libcamforge_py.so"
    if not built.exists():  # e.g. macOS
        built = ROOT / "target" / "release" / "libcamforge_py.dylib"
    shutil.copy(built, out_dir / f"camforge_py{suffix}")


def approx(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        build_module(Path(tmp))
        sys.path.insert(0, tmp)
        import camforge_py as cf

        # Force parsing normalizes polynomials.
        assert cf.parse_force("5000*X^3 + 0*X") == "5000*X^3"

        # The softening-cubic walkthrough: six branches in fixed order.
        branches = cf.design("5000*X^3", 100.0, 0.1, 0.2)
        labels = [b.label for b in branches]
        assert labels == ["Y11", "Y21", "Y12", "Y22", "Y14", "Y24"], labels

        # The zero-preload K<0 branch is the parabola Y = 5 X^2.
        y14 = next(b for b in branches if b.label == "Y14")
        assert y14.stiffness == -100.0
        assert approx(y14.height(0.1), 0.05, 1e-9)
        assert approx(y14.slope(0.1), 1.0, 1e-6)
        assert approx(y14.restoring_force(0.1), 5.0, 1e-9)
        lo, hi = y14.domain
        assert approx(lo, -0.2, 1e-5) and approx(hi, 0.2, 1e-5)
        assert y14.boundary_kinds == ("TravelLimit", "TravelLimit")
        assert y14.residual(129) < 1e-9

        # Mirror branch: negated profile, same force.
        y24 = next(b for b in branches if b.label == "Y24")
        assert y24.height(0.1) == -y14.height(0.1)
        assert y24.restoring_force(0.1) == y14.restoring_force(0.1)

        # Track dynamics agree with the reference system.
        samples, termination = cf.simulate(
            "5000*X^3", 100.0, 0.1, 0.2, "Y14", 1.0, 0.05, 0.0, 1e-4, 0.2
        )
        ref_samples, ref_termination = cf.reference("5000*X^3", 1.0, 0.05, 0.0, 1e-4, 0.2)
        assert termination == "Completed" and ref_termination == "Completed"
        assert len(samples) == len(ref_samples)
        sup = max(abs(a[1] - b[1]) for a, b in zip(samples, ref_samples))
        assert sup < 1e-6, sup
        # Energy stays nearly constant along the track trajectory.
        energies = [s[3] for s in samples]
        assert max(energies) - min(energies) <= 1e-6 * max(1.0, abs(energies[0]))

        # Spring-assembly laws: frozen oracle values.
        assert approx(cf.gsm_force(100.0, 30.0, 0.05, 0.2, 0.1), 5.732050807568877)
        assert approx(cf.gsm_stiffness(100.0, 30.0, 0.05, 0.2, 0.1), 63.09401076758504)
        # Quasi-zero stiffness at K1 = 2 K2, B = 0.
        assert abs(cf.gsm_stiffness(100.0, 50.0, 0.0, 0.2, 0.1)) < 1e-12

        # Errors surface as ValueError.
        try:
            cf.design("sin(X", 100.0, 0.1, 0.2)
        except ValueError:
            pass
        else:
            raise AssertionError("malformed expression must raise")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
