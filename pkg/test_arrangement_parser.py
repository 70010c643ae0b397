# coding:utf-8
"""
排列文件解析测试
"""
from fractions import Fraction

import pytest

from arrangement import EmptyArrangementError, NotReducedError, ZeroFormError
from arrangement_parser import (ParseError, format_arrangement, format_rational, parse_arrangement,
                                parse_rational)
from verification_harness import fixture_arrangement


def test_parse_two_coordinate_forms():
    arr = parse_arrangement("1 0 0 0\n0 1 0 0\n")
    assert arr.d == 2
    assert arr.n == 4


def test_comments_and_blank_lines_are_skipped():
    text = "# 两条坐标超平面\n\n1 0   # x1\n   \n0 1\n"
    arr = parse_arrangement(text)
    assert arr.d == 2
    assert arr.forms[1].coeffs == (0, 1)


def test_rational_coefficients():
    arr = parse_arrangement("1/2 -1 0 0\n0 0 1 +3\n")
    assert arr.forms[0].coeffs == (1, -2, 0, 0)


def test_proportional_rows_are_rejected():
    with pytest.raises(NotReducedError):
        parse_arrangement("1/2 -1 0 0\n1 -2 0 0\n")


def test_zero_row_is_rejected():
    with pytest.raises(ZeroFormError):
        parse_arrangement("0 0 0 0\n")


def test_ragged_rows_report_line_number():
    with pytest.raises(ParseError) as info:
        parse_arrangement("1 0 0\n# 注释\n0 1\n")
    assert info.value.line == 3
    assert info.value.message.startswith("第 3 行")


@pytest.mark.parametrize("token", ["1.5", "1/0", "x", "1/-2", "--1"])
def test_bad_tokens(token):
    with pytest.raises(ParseError):
        parse_arrangement(f"1 0\n{token} 1\n")


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("+4") == 4
    with pytest.raises(ParseError) as info:
        parse_rational("2/0", 7)
    assert info.value.line == 7


def test_empty_input():
    with pytest.raises(EmptyArrangementError):
        parse_arrangement("# 只有注释\n\n")


def test_format_rational():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-3, 4)) == "-3/4"


@pytest.mark.parametrize("name", ["A1", "A4", "A5"])
def test_format_then_parse(name):
    arr = fixture_arrangement(name)
    text = format_arrangement(arr)
    assert text.endswith("\n")
    assert parse_arrangement(text).forms == arr.forms
