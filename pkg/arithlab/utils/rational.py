# rational number helpers
# valuations, reduction mod p and square classes for Fractions

from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from sympy import factorint

from arithlab.core.errors import BadReduction

Rational = Union[int, Fraction]


def as_fraction(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def parse_fraction(text: Union[str, int]) -> Fraction:
    """Parse a "p/q" string (or plain integer) into a Fraction"""
    return Fraction(str(text).strip())


def format_fraction(x: Rational) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def int_valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer"""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: int) -> int:
    """
    p-adic valuation of a nonzero rational

    Args:
        x: nonzero rational
        p: rational prime

    Returns:
        v_p(numerator) - v_p(denominator)
    """
    x = as_fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def mod_p(x: Rational, p: int) -> int:
    """Reduce a p-integral rational into {0..p-1}"""
    x = as_fraction(x)
    if x.denominator % p == 0:
        raise BadReduction(f"{format_fraction(x)} is not integral at {p}")
    return (x.numerator * pow(x.denominator, -1, p)) % p


def rational_sqrt(x: Rational) -> Optional[Fraction]:
    """Exact square root of a rational, or None when x is not a square"""
    x = as_fraction(x)
    if x < 0:
        return None
    num_root = isqrt(x.numerator)
    den_root = isqrt(x.denominator)
    if num_root * num_root == x.numerator and den_root * den_root == x.denominator:
        return Fraction(num_root, den_root)
    return None


def squarefree_part(x: Rational) -> int:
    """
    Squarefree integer representing the square class of a nonzero rational

    p/q has the same class as p*q, so we strip square factors from that product
    """
    x = as_fraction(x)
    if x == 0:
        raise ValueError("square class of zero")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    core = 1
    for prime, exp in factorint(abs(n)).items():
        if exp % 2:
            core *= prime
    return sign * core


def prime_support(x: Rational) -> set:
    """Primes dividing the numerator or denominator"""
    x = as_fraction(x)
    support = set(factorint(abs(x.numerator)).keys()) | set(factorint(x.denominator).keys())
    support.discard(1)
    return support


def odd_part_mod8(x: Rational) -> int:
    """Residue mod 8 of a 2-adic unit n/d (n, d odd), using 1/d = d mod 8"""
    x = as_fraction(x)
    return (x.numerator * x.denominator) % 8
