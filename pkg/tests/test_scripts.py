import pathlib
import subprocess
import sys

import pytest

SCRIPTS = pathlib.Path(__file__).resolve().parents[1] / "scripts"

CASES = {
    "fingen_grid.py": ["--seeds", ":0", ":1", "1:0", "--scales", "1", "2"],
    "locfin_pairs.py": ["--pairs", ":0,:1", "1:0,:0"],
    "oracle_min_modulus.py": ["--max-n", "6"],
    "abelian_census.py": ["--max-order", "16"],
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_script_runs(name):
    proc = subprocess.run([sys.executable, str(SCRIPTS / name), *CASES[name]], capture_output=True, text=True,
                          timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip()
    assert "False" not in proc.stdout
    if name == "abelian_census.py":
        assert " 0 disagreements" in proc.stdout
