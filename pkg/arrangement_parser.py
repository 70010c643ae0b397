# coding:utf-8
"""
排列文件解析模块 - 每行一个超平面，系数为整数或 p/q，'#' 之后为注释
"""
import logging
import re
from fractions import Fraction
from typing import List, Optional

from arrangement import Arrangement, ArrangementError, EmptyArrangementError, validate_arrangement

logger = logging.getLogger(__name__)

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class ParseError(ArrangementError):
    """排列文件格式错误，line 为出错的行号（从 1 开始）"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"第 {line} 行: " if line is not None else ""
        super().__init__(prefix + message, {"line": line})


def parse_rational(token: str, line: Optional[int] = None) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"无法解析的有理数 {token!r}", line)
    if "/" in token and int(token.split("/")[1]) == 0:
        raise ParseError(f"分母为零: {token!r}", line)
    return Fraction(token)


def parse_arrangement(text: str) -> Arrangement:
    """
    解析排列文本

    Args:
        text: 文件内容

    Returns:
        校验后的 Arrangement
    """
    rows: List[List[Fraction]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        row = [parse_rational(tok, lineno) for tok in body.split()]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"列数 {len(row)} 与首行 {width} 不一致", lineno)
        rows.append(row)

    if not rows:
        raise EmptyArrangementError("文件中没有任何超平面")
    arr = validate_arrangement(rows, width)
    logger.debug(f"📋 解析排列: d={arr.d}, n={arr.n}")
    return arr


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_arrangement(arr: Arrangement) -> str:
    """parse_arrangement 的逆操作"""
    return "\n".join(" ".join(format_rational(c) for c in f.coeffs) for f in arr.forms) + "\n"
