import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from pmdweak.jones import Z_AXIS, Axis
from pmdweak.netspec import (
    GRID_ENV_VAR,
    ConstraintError,
    DuplicateKeyError,
    Experiment,
    MissingFieldError,
    Network,
    Pdl,
    Pmd,
    SpecError,
    SpecSyntaxError,
    UnknownKeyError,
    db_to_mu,
    load_experiment,
    mu_to_db,
    parse_experiment,
    to_canonical,
)

from conftest import FIXTURE_NAMES, FIXTURES

MINIMAL = {
    "network": {"trunks": [{"kind": "pmd", "dgd": 1.0, "vector": [0, 0, 1]}]},
    "pulse": {"t_c": 10.0},
    "input_state": {"angles": [math.pi / 2, 0.0]},
}


def doc(**changes):
    d = json.loads(json.dumps(MINIMAL))
    d.update(changes)
    return json.dumps(d)


def test_minimal_defaults(monkeypatch):
    monkeypatch.delenv(GRID_ENV_VAR, raising=False)
    spec = parse_experiment(json.dumps(MINIMAL))
    assert spec.grid.n == 4096
    assert spec.grid.t_span == 16 * 10.0 + 2 * 1.0
    assert spec.pulse.omega0 == 1216.0
    assert spec.network.name == "network"
    assert spec.network.trunks == (Pmd(1.0, Z_AXIS),)
    canon = json.loads(to_canonical(spec))
    assert canon["grid"] == {"n": 4096, "t_span": 162.0}
    assert canon["pulse"]["omega0"] == 1216.0


def test_env_grid_override(monkeypatch):
    monkeypatch.setenv(GRID_ENV_VAR, "8192")
    assert parse_experiment(json.dumps(MINIMAL)).grid.n == 8192


def test_db_conversion():
    assert db_to_mu(3.0) == pytest.approx(0.3453877639491068, rel=1e-15)
    for db in (0.0, 0.1, 3.0, 17.5):
        assert mu_to_db(db_to_mu(db)) == pytest.approx(db, rel=1e-12, abs=1e-15)
    # dB is the max/min intensity transmission ratio of the filter
    mu = db_to_mu(3.0)
    assert 10 * math.log10(math.exp(mu) / math.exp(-mu)) == pytest.approx(3.0, rel=1e-12)


def test_pdl_db_canonicalizes_to_mu():
    d = json.loads(doc())
    d["network"]["trunks"].append({"kind": "pdl", "pdl_db": 3.0, "angles": [1.0, 0.5]})
    spec = parse_experiment(json.dumps(d))
    canon = json.loads(to_canonical(spec))
    trunk = canon["network"]["trunks"][1]
    assert "pdl_db" not in trunk
    assert trunk["mu"] == pytest.approx(db_to_mu(3.0), rel=1e-15)


def test_axis_vector_normalized():
    d = json.loads(doc())
    d["network"]["trunks"][0]["vector"] = [0, 0, 1.0000001]
    spec = parse_experiment(json.dumps(d))
    assert spec.network.trunks[0].axis == Z_AXIS
    d["network"]["trunks"][0]["vector"] = [0, 0, 1.01]
    with pytest.raises(ConstraintError):
        parse_experiment(json.dumps(d))


def test_polarizer_roundtrip():
    d = json.loads(doc())
    d["network"]["trunks"].append({"kind": "pdl", "polarizer": True, "vector": [1, 0, 0]})
    spec = parse_experiment(json.dumps(d))
    assert spec.network.trunks[1].is_polarizer
    assert parse_experiment(to_canonical(spec)) == spec


@pytest.mark.parametrize("text,exc,needle", [
    ('{"network": 1,', SpecSyntaxError, "line 1"),
    ('{"pulse": {"t_c": 1}, "pulse": {"t_c": 2}}', DuplicateKeyError, "pulse"),
    (doc(extra=1), UnknownKeyError, "extra"),
    (doc(pulse={"t_c": 1.0, "tc": 2}), UnknownKeyError, "pulse.tc"),
    (doc(pulse={"omega0": 3.0}), MissingFieldError, "pulse.t_c"),
    (doc(pulse={"t_c": -1.0}), ConstraintError, "t_c"),
    (doc(pulse={"t_c": True}), ConstraintError, "t_c"),
    (doc(network={"trunks": []}), ConstraintError, "trunks"),
    (doc(network={"trunks": [{"kind": "pmd", "dgd": -0.5, "vector": [0, 0, 1]}]}),
     ConstraintError, "dgd"),
    (doc(network={"trunks": [{"kind": "pmd", "dgd": 1.0}]}), MissingFieldError, "angles"),
    (doc(network={"trunks": [{"kind": "pdl", "mu": 1.0, "pdl_db": 3.0, "vector": [0, 0, 1]}]}),
     ConstraintError, "exactly one"),
    (doc(network={"trunks": [{"kind": "pdl", "mu": -1.0, "vector": [0, 0, 1]}]}),
     ConstraintError, "flip"),
    (doc(network={"trunks": [{"kind": "xyz"}]}), ConstraintError, "kind"),
    (doc(grid={"n": 100}), ConstraintError, "grid.n"),
    (doc(grid={"n": 64}), ConstraintError, "coarse"),
    (doc(grid={"t_span": 10.0}), ConstraintError, "t_span"),
    ('{"pulse": {"t_c": NaN}}', ConstraintError, "NaN"),
    ("[1, 2]", ConstraintError, "object"),
    ("", SpecSyntaxError, "line"),
])
def test_error_categories(text, exc, needle):
    with pytest.raises(exc) as info:
        parse_experiment(text)
    assert needle in str(info.value)


def test_deep_nesting_is_a_syntax_error():
    with pytest.raises(SpecError):
        parse_experiment("[" * 100000 + "]" * 100000)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_roundtrip(name):
    spec = load_experiment(FIXTURES / f"{name}.json")
    canon = to_canonical(spec)
    again = parse_experiment(canon)
    assert again == spec
    assert to_canonical(again) == canon


def test_load_missing_file(tmp_path):
    with pytest.raises(SpecError):
        load_experiment(tmp_path / "nope.json")


def test_network_properties():
    net = Network([Pmd(0.1, Z_AXIS), Pdl(0.5, Z_AXIS), Pmd(0.2, Z_AXIS)])
    assert net.is_alternating and net.has_pdl
    assert net.total_dgd == pytest.approx(0.3)
    assert net.scaled(0.5).total_dgd == pytest.approx(0.15)
    assert not Network([Pmd(0.1, Z_AXIS), Pdl(0.5, Z_AXIS)]).is_alternating
    assert not Network([Pmd(0.1, Z_AXIS), Pdl(0.0, Z_AXIS), Pmd(0.1, Z_AXIS)]).has_pdl


def test_experiment_input_state():
    spec = parse_experiment(doc())
    assert spec.input_state == pytest.approx([math.sqrt(0.5), math.sqrt(0.5)])
    assert isinstance(spec, Experiment)


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-10**6, 10**6) | st.floats(allow_nan=False) | st.text(max_size=5),
    lambda children: st.lists(children, max_size=4) | st.dictionaries(
        st.sampled_from(["network", "trunks", "kind", "pmd", "pdl", "dgd", "mu", "pdl_db",
                         "polarizer", "angles", "vector", "pulse", "t_c", "omega0",
                         "input_state", "grid", "n", "t_span", "name", "x"]),
        children, max_size=5),
    max_leaves=20,
)


@settings(max_examples=300)
@given(json_values)
def test_parser_total_on_structured_input(value):
    try:
        parse_experiment(json.dumps(value))
    except SpecError:
        pass


@settings(max_examples=300)
@given(st.text(max_size=200))
def test_parser_total_on_text(text):
    try:
        parse_experiment(text)
    except SpecError:
        pass
