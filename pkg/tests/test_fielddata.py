import json
import math
import shutil

import pytest

from normtori.cyclo import CycloElement, power
from normtori.fielddata import (DataParseError, DataValidationError, FieldData, data_dir,
                                dump_field, field_from_dict, field_to_dict, load_extension,
                                load_field, log_matrix, regulator_of_field, validate_field)

LOG = math.log(2 + math.sqrt(3))


@pytest.fixture
def qi():
    return load_field(data_dir() / "qi.field")


@pytest.fixture
def qz():
    return load_field(data_dir() / "qzeta12.field")


@pytest.fixture
def workdir(tmp_path):
    for name in ("qi.field", "qzeta12.field", "qzeta12-over-qi.ext"):
        shutil.copy(data_dir() / name, tmp_path / name)
    return tmp_path


def edit(path, **changes):
    d = json.loads(path.read_text())
    for k, v in changes.items():
        if v is None:
            d.pop(k)
        else:
            d[k] = v
    path.write_text(json.dumps(d))


def test_shipped_fields(qi, qz):
    assert (qi.conductor, qi.degree, qi.r2, qi.class_number, qi.torsion_order) == (12, 2, 1, 1, 4)
    assert qi.torsion_generator == CycloElement.zeta(12, 3)
    assert qi.fundamental_units == ()
    assert qi.fixer == (1, 5)
    assert (qz.degree, qz.r2, qz.torsion_order) == (4, 2, 12)
    assert qz.places == [1, 5]


def test_regulators(qi, qz):
    assert regulator_of_field(qi) == 1.0
    assert abs(regulator_of_field(qz) - LOG) < 1e-15
    assert abs(regulator_of_field(qz) - 1.316957896924817) < 1e-12


def _with_unit(f: FieldData, u: CycloElement) -> FieldData:
    d = field_to_dict(f)
    d["fundamental_units"] = [[str(c) for c in u.coefficients]]
    return field_from_dict(d)


def test_regulator_invariance(qz):
    u = qz.fundamental_units[0]
    z = CycloElement.zeta(12)
    for v in (power(u, -1), u * z ** 5, power(u, -1) * z ** 7):
        assert abs(regulator_of_field(_with_unit(qz, v)) - regulator_of_field(qz)) < 1e-12
    flipped = abs(log_matrix(qz.fundamental_units, list(reversed(qz.places)))[0][0])
    assert abs(flipped - regulator_of_field(qz)) < 1e-12


def test_wrong_torsion_order_rejected(workdir):
    edit(workdir / "qi.field", torsion_order=2)
    with pytest.raises(DataValidationError) as info:
        load_field(workdir / "qi.field")
    assert any("torsion" in v for v in info.value.violations)


def test_wrong_root_of_unity_count_rejected(workdir):
    # zeta^6 = -1 has order 2, but Q(i) holds 4 roots of unity
    edit(workdir / "qi.field", torsion_order=2, torsion_generator=["-1", "0", "0", "0"])
    with pytest.raises(DataValidationError):
        load_field(workdir / "qi.field")


def test_every_violation_is_listed(workdir):
    edit(workdir / "qzeta12.field", torsion_order=6, class_number=0, class_group=[3])
    with pytest.raises(DataValidationError) as info:
        load_field(workdir / "qzeta12.field")
    assert len(info.value.violations) >= 3


def test_wrong_regulator_rejected(workdir):
    edit(workdir / "qzeta12.field", regulator="1.3")
    with pytest.raises(DataValidationError):
        load_field(workdir / "qzeta12.field")


def test_non_unit_rejected(workdir):
    edit(workdir / "qzeta12.field", fundamental_units=[["2", "0", "0", "0"]])
    with pytest.raises(DataValidationError):
        load_field(workdir / "qzeta12.field")


def test_parse_errors_are_distinct(workdir):
    edit(workdir / "qi.field", r2=None)
    with pytest.raises(DataParseError):
        load_field(workdir / "qi.field")
    (workdir / "bad.field").write_text("{not json")
    with pytest.raises(DataParseError):
        load_field(workdir / "bad.field")
    assert not issubclass(DataParseError, DataValidationError)
    assert not issubclass(DataValidationError, DataParseError)


def test_round_trip(qi, qz, tmp_path):
    for f in (qi, qz):
        text = dump_field(f)
        (tmp_path / "x.field").write_text(text)
        again = load_field(tmp_path / "x.field")
        assert again == f
        assert dump_field(again) == text


def test_unit_coordinates(qz):
    u, z = qz.fundamental_units[0], CycloElement.zeta(12)
    assert qz.unit_coordinates(power(u, 3) * z ** 7) == [7, 3]
    assert qz.unit_coordinates(power(u, -2)) == [0, -2]
    with pytest.raises(ValueError):
        qz.unit_coordinates(CycloElement.from_int(12, 2))


def test_shipped_extension():
    ext = load_extension(data_dir() / "qzeta12-over-qi.ext")
    assert ext.galois_order == 2 and ext.sigma == 5
    assert ext.unit_action.tolist() == [[5, 9], [0, -1]]
    assert ext.ramified == (("3", 2),)
    assert ext.ramification_product == 2 and ext.l0_index == 2


@pytest.mark.parametrize("changes", [
    {"sigma": 7},                               # moves i
    {"unit_action": [[5, 3], [0, -1]]},         # wrong image of 1 - zeta^5
    {"ramified": [["3", 3]]},                   # e must divide [L:K]
    {"ramified": [["3", 1]]},
    {"ramified": [["3", 2], ["3", 2]]},
    {"l0_index": 1},
    {"galois_order": 4},
])
def test_extension_violations(workdir, changes):
    edit(workdir / "qzeta12-over-qi.ext", **changes)
    with pytest.raises(DataValidationError):
        load_extension(workdir / "qzeta12-over-qi.ext")


def test_extension_missing_ramification(workdir):
    edit(workdir / "qzeta12-over-qi.ext", ramified=None)
    with pytest.raises(DataParseError):
        load_extension(workdir / "qzeta12-over-qi.ext")


def test_validate_reports_clean_field(qz):
    assert validate_field(qz) == []
