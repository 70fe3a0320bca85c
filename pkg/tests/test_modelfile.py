import pytest

from ahsm.modelfile import ModelFileError, dump_model, load_model, parse_model
from ahsm.pde_generators import random_polynomial_pde

from conftest import assert_same

CH_MODEL = """\
model ch {
    indep: x, t;
    dep: u;
    func: F;
    E0: dt(u) + dx(F(u)*u_x);
    E1: u_xxxx;
}
"""


def test_parse_ch_model(ch_generic):
    spec = parse_model(CH_MODEL)
    assert spec.name == "ch"
    assert spec.namespace.funcs == ("F",)
    pde = spec.to_pde()
    assert_same(pde.E0, ch_generic.E0)
    assert_same(pde.E1, ch_generic.E1)


def test_sections_in_any_order_and_default_perturbation():
    spec = parse_model("model heat { E0: u_t - k*u_xx; param: k; dep: u; indep: x, t; }")
    assert spec.namespace.params == ("k",)
    assert spec.E1 == 0


def test_other_dependent_variable():
    spec = parse_model("model kdv { indep: x, t; dep: v; E0: v_t + 6*v*v_x; E1: v_xxx; }")
    assert spec.to_pde().placeholder.func.__name__ == "v"


def test_error_inside_expression_has_file_position():
    src = "model bad {\n    indep: x, t;\n    dep: u;\n    E0: dt(u) + * u;\n}\n"
    with pytest.raises(ModelFileError) as info:
        parse_model(src)
    assert (info.value.line, info.value.col) == (4, 17)


@pytest.mark.parametrize(
    "src",
    [
        "model m { indep: x, t; dep: u; param: eps; E0: u_t; }",
        "model m { indep: x, t; dep: u; param: theta; E0: u_t; }",
        "model m { indep: x, t; dep: u; param: q; E0: u_t; }",
        "model m { indep: x, t; dep: u; param: d; E0: u_t; }",
        "model m { indep: x, t; dep: u; param: dx; E0: u_t; }",
        "model m { indep: x, t; dep: u; func: u1; E0: u_t; }",
    ],
)
def test_reserved_names(src):
    with pytest.raises(ModelFileError):
        parse_model(src)


@pytest.mark.parametrize(
    "src",
    [
        "modle m { indep: x, t; dep: u; E0: u_t; }",
        "model m { indep: x, t; dep: u; E0: u_t; ",
        "model m { indep: x, t; dep: u, v; E0: u_t; }",
        "model m { indep: x, t; dep: u; }",
        "model m { indep: x, t; dep: u; E0: u_t; E0: u_x; }",
        "model m { indep: x, t; dep: u; param: k, k; E0: u_t; }",
        "model m { indep: x, t; dep: u; colour: red; E0: u_t; }",
        "model m { indep: x, t; dep: u; E0: u_t + eps*u; }",
    ],
)
def test_malformed_models(src):
    with pytest.raises(ModelFileError):
        parse_model(src)


def test_dump_reads_back(ch_generic):
    spec = parse_model(dump_model(ch_generic))
    assert spec.name == ch_generic.name
    assert_same(spec.E0, ch_generic.E0)
    assert_same(spec.E1, ch_generic.E1)


def test_dump_random_pde():
    pde = random_polynomial_pde(7)
    spec = parse_model(dump_model(pde))
    assert_same(spec.E0, pde.E0)
    assert_same(spec.E1, pde.E1)


def test_load_model(tmp_path):
    path = tmp_path / "ch.model"
    path.write_text(CH_MODEL)
    pde = load_model(path)
    assert pde.name == "ch"
    with pytest.raises(OSError):
        load_model(tmp_path / "missing.model")
