import json
import os
import subprocess
import tempfile

import pytest

import kinder


def test_report_envelope():
    rep = kinder.run("arith", op="legendre", k=10, p=2)
    assert rep["schema"] == "kinder-report"
    assert rep["version"] == "1.0"
    assert rep["results"]["valuation"] == 8


def test_arith_helpers():
    assert kinder.gaussian_binomial(4, 2, 2) == 35
    assert kinder.legendre_valuation(10, 2) == 8
    assert kinder.mu(360) == 3
    assert kinder.nu_p(48, 2) == 4


def test_exhaustive_span():
    rep = kinder.run("generic", mode="exhaustive", kind="span", n=2, s=3, q=2)
    assert rep["results"]["frequency"] == pytest.approx(0.65625)
    assert rep["results"]["paper_bound"] == pytest.approx(0.625)


def test_errors_map_to_exceptions():
    with pytest.raises(kinder.InvalidArgument):
        kinder.run("generic", kind="span", n=2, s=3, q=2)  # missing seed
    with pytest.raises(kinder.CapExceeded):
        kinder.run("generic", mode="exhaustive", kind="span", n=4, s=8, q=5)
    with pytest.raises(kinder.KinderError):
        kinder.run("arith", op="nope")


def test_code_classes():
    codes, classes, bound = kinder.code_class_count(2, 1)
    assert (codes, classes) == (3, 2)
    assert bound == pytest.approx(1.0)


def test_suzuki_round_trip_and_cli():
    cert = kinder.suzuki_search(2, 7)
    assert cert is not None
    assert kinder.suzuki_verify(cert)
    data = json.loads(cert)
    data["S"][0] = "0" * len(data["S"][0])
    assert not kinder.suzuki_verify(json.dumps(data))

    cli = os.environ.get("KINDER_CLI")
    if not cli:
        pytest.skip("KINDER_CLI not set")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "cert.json")
        with open(path, "w") as fh:
            fh.write(cert)
        out = subprocess.run([cli, "suzuki-verify", "--cert", path], capture_output=True, text=True)
        assert out.returncode == 0
        assert json.loads(out.stdout)["results"]["valid"] is True


def test_single_criterion():
    r = kinder.run_criterion("1")
    assert r["pass"], r["detail"]
