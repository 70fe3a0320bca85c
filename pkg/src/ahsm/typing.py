from fractions import Fraction
from pathlib import Path
from typing import Union

import sympy

PathLike = Union[str, Path]

# Anything read exactly as a rational: "0.5478", 3, Fraction(1, 10), ...
RationalLike = Union[str, int, float, Fraction, sympy.Rational]
