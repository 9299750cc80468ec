import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympow_padic.cli import main, run
from sympow_padic.errors import SchemaError
from sympow_padic.iwasawa import AlgebraConfig, Growth, Poly
from sympow_padic.lfactory import random_lambda_element
from sympow_padic.padic import PadicScalar
from sympow_padic.serialize import (
    SCHEMA_VERSION,
    dumps,
    element_from_json,
    element_to_json,
    loads,
    scalar_from_json,
    scalar_to_json,
)
from sympow_padic.special import pollack_log


def report(argv):
    code, rep, msg, _ = run(argv + ["--no-timings"])
    return code, rep


def test_analyze_hasse():
    code, rep = report(["analyze", "--p", "5", "--k", "2", "--m", "2", "--eps-p", "-1"])
    assert code == 0
    assert rep["payload"]["structure"]["hasse_invariant"]["closed_form"] == "1"
    assert len(rep["payload"]["structure"]["hodge_polygon"]) == 4
    assert len(rep["payload"]["structure"]["newton_polygon"]) == 4


def test_analyze_trivial_zeros():
    code, rep = report(["analyze", "--p", "5", "--k", "3", "--m", "3", "--alpha", "+"])
    assert code == 0
    js = {r["j"] for entry in rep["payload"]["zeros"]["signs"].values() for r in entry["records"]}
    assert js == {1, 2}


def test_missing_alpha_is_usage_error():
    assert main(["analyze", "--p", "5", "--k", "3", "--m", "3"]) == 2


def test_bad_flag_is_usage_error():
    assert main(["analyze", "--bogus"]) == 2
    assert main(["verify", "nosuch"]) == 2


def test_verify_matrix():
    assert main(["verify", "matrix", "--rtilde", "4", "--out", "/dev/null"]) == 0


def test_verify_kl():
    code, rep = report(["verify", "kl", "--p", "5", "--eta", "-3", "--level", "5"])
    assert code == 0 and rep["passed"]


def test_verify_appendix_forms():
    code, rep = report(["verify", "appendix", "--p", "5", "--k", "2"])
    assert code == 1  # the printed identity needs Tw_1
    assert rep["checks"][0]["corrected_valuation"] >= rep["checks"][0]["target"]
    code, _ = report(["verify", "appendix", "--p", "5", "--k", "2", "--form", "corrected"])
    assert code == 0


def test_precision_shortfall_exit():
    code, rep = report(["check-decomposition", "--p", "5", "--m", "3", "--k", "2", "--alpha", "+",
                        "--prec-p", "10", "--prec-T", "20"])
    assert code == 3 and rep is None


def test_efactor_exit_codes():
    base = ["efactor", "--p", "3", "--m", "3", "--k", "2", "--alpha", "-"]
    assert report(base)[0] == 1
    assert report(base + ["--form", "corrected"])[0] == 0
    assert report(["efactor", "--p", "3", "--m", "2", "--theta", "1,0,0", "--j", "5"])[0] == 2


def test_report_fields():
    code, rep = report(["check-decomposition", "--p", "5", "--m", "2", "--k", "2", "--prec-p", "30",
                        "--prec-T", "60"])
    assert code == 0
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["tool"]["name"] == "sympow"
    for key in ("p", "k", "m", "eps_p", "N", "M", "slack", "seed", "chi_gamma0"):
        assert key in rep["config"]
    assert set(rep["payload"]["expansion"]) == {"+", "-"}


def test_other_commands_run():
    assert report(["kl", "--p", "3", "--eta", "-4", "--prec-p", "6", "--prec-T", "16"])[0] == 0
    assert report(["special", "--p", "3", "--b", "1", "--c-max", "3"])[0] == 0
    assert report(["assemble", "--p", "5", "--m", "3", "--alpha", "root", "--eps-p", "1",
                   "--signs", "+-"])[0] == 0
    assert report(["zeros", "--p", "5", "--m", "5", "--k", "3", "--alpha", "-"])[0] == 0


@pytest.mark.parametrize("argv", [
    ["assemble", "--p", "5", "--m", "3", "--alpha", "+", "--seed", "7"],
    ["verify", "appendix", "--k", "3"],
    ["zeros", "--p", "3", "--m", "4", "--k", "3"],
])
def test_determinism(argv):
    a = dumps(report(argv)[1])
    b = dumps(report(argv)[1])
    assert a == b
    with_t = run(argv)[1]
    assert "timings" in with_t
    with_t.pop("timings")
    assert dumps(with_t) == a


def test_console_script(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "sympow_padic.cli", "verify", "matrix", "--rtilde", "3",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert loads(out.read_text())["passed"] is True


scalars = st.builds(lambda v, u, n: PadicScalar.from_fraction(u * Fraction(5) ** v, 5, n),
                    st.integers(-3, 3), st.integers(1, 10 ** 30), st.integers(1, 40))


@given(scalars)
def test_scalar_round_trip(x):
    assert scalar_from_json(json.loads(json.dumps(scalar_to_json(x)))) == x


@given(st.integers(0, 10 ** 6))
def test_element_round_trip(seed):
    cfg = AlgebraConfig(5, 40, 12)
    h = random_lambda_element(cfg, random.Random(seed))
    text = dumps(element_to_json(h))
    back = element_from_json(loads(text))
    assert back.branches == h.branches and back.config == cfg and back.tail == h.tail


def test_truncation_metadata_preserved():
    cfg = AlgebraConfig(3, 8, 20)
    h = pollack_log("-", 2, cfg)
    d = element_to_json(h)
    assert d["N"] == 8 and d["M"] == 20 and d["tail"]["kind"] == "growth"
    back = element_from_json(json.loads(json.dumps(d)))
    assert isinstance(back.tail, Growth) and back.tail == h.tail
    assert isinstance(element_from_json(element_to_json(cfg.one())).tail, Poly)


def test_pole_divisor_round_trip():
    from sympow_padic.kubota import kl_element

    L = kl_element("triv", AlgebraConfig(3, 4, 8), 4)
    d = element_to_json(L)
    assert d["pole_divisor"] != "none"
    assert element_from_json(d).poles == L.poles


def test_schema_mismatch():
    d = element_to_json(AlgebraConfig(3, 4, 4).one())
    d["schema_version"] = 99
    with pytest.raises(SchemaError):
        element_from_json(d)
    with pytest.raises(SchemaError):
        loads('{"schema_version": 0}')
