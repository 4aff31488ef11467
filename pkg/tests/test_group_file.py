import pytest

from src.core.errors import GroupFileError
from src.core.permutation import parse_cycles
from src.utils.group_file import parse_catalog_text, parse_group_text, read_group_file

S4_TEXT = """
# symmetric group on 4 points
name: S4
degree: 4
gen: (1,2,3,4)
gen: (1,2)   # a transposition
"""


def test_parse_group_text():
    definition = parse_group_text(S4_TEXT)
    assert definition.name == "S4"
    assert definition.degree == 4
    assert definition.generators == [parse_cycles("(1,2,3,4)", 4), parse_cycles("(1,2)", 4)]
    assert definition.build().order == 24


def test_read_group_file(tmp_path):
    path = tmp_path / "s4.grp"
    path.write_text(S4_TEXT)
    assert read_group_file(path).build().order == 24
    with pytest.raises(GroupFileError):
        read_group_file(tmp_path / "missing.grp")


@pytest.mark.parametrize("text, line", [
    ("degree: 4\ngen: (1,2)\ncolour: red\n", 3),
    ("degree: 4\ngen: (1,5)\n", 2),
    ("degree: four\ngen: (1,2)\n", 1),
    ("gen: (1,2)\n", 1),
    ("degree: 3\n", 1),
    ("degree: 3\ndegree: 3\ngen: (1,2)\n", 2),
    ("degree: 3\njust text\n", 2),
    ("degree: 3\ngen: (1,2)\nexpect_order: 2\n", 3),
])
def test_errors_name_the_line(text, line):
    with pytest.raises(GroupFileError) as info:
        parse_group_text(text)
    assert info.value.line == line


def test_catalog_text_with_expectations():
    text = """
name: c3
degree: 3
gen: (1,2,3)
expect_order: 3
expect_nilpotent: true
expect_fitting_height: 1

name: s3
degree: 3
gen: (1,2,3)
gen: (1,2)
expect_order: 6
expect_fitting_height: none
"""
    first, second = parse_catalog_text(text)
    assert first.name == "c3"
    assert first.expectations == {"expect_order": 3, "expect_nilpotent": True, "expect_fitting_height": 1}
    assert second.expectations["expect_fitting_height"] is None
    assert second.build().order == 6


def test_catalog_definitions_start_with_a_name():
    with pytest.raises(GroupFileError) as info:
        parse_catalog_text("degree: 3\nname: x\n")
    assert info.value.line == 1


def test_expected_order_is_checked():
    (definition,) = parse_catalog_text("name: bad\ndegree: 3\ngen: (1,2,3)\nexpect_order: 6\n")
    with pytest.raises(GroupFileError, match="expected 6"):
        definition.build()


def test_read_rejects_non_utf8_files(tmp_path):
    path = tmp_path / "latin1.grp"
    path.write_bytes("name: Gruppeä\ndegree: 3\n".encode("latin-1"))
    with pytest.raises(GroupFileError, match="not UTF-8"):
        read_group_file(path)
