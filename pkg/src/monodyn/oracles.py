"""Published closed-form polynomials used as independent checks.

These are transcribed, not derived: magnitude polynomials for Model 1
2-cycles and Model 2 (standard parameters) 2-, 3- and 4-cycles, the
3-cycle threshold polynomial SP in K, and the 4-cycle magnitude factor C4.
"""

from fractions import Fraction

from .exactalg import ParamPoly, UniPoly, symbols

_K, _d, _e, _f = ParamPoly.var("K"), ParamPoly.var("d"), ParamPoly.var("e"), ParamPoly.var("f")


def _poly_K(coeffs_high_first):
    K = _K
    r = ParamPoly()
    n = len(coeffs_high_first) - 1
    for i, c in enumerate(coeffs_high_first):
        r = r + c * K ** (n - i)
    return r


def sp_polynomial():
    """SP(K): its positive real roots are the 3-cycle thresholds."""
    f1 = _poly_K([972, 19440, 127575, 162000, -1552500, -6412500, -5062500, 23437500, 67187500])
    f2 = _poly_K([
        8503056, 191318760, 1523464200, 3754532250, -14134854375, -101982543750,
        -146939062500, 399469218750, 1522072265625, 261457031250, -4576816406250,
        -1938867187500, 13981445312500,
    ])
    return f1, f2


def sp_univariate():
    """SP as a UniPoly in K with rational coefficients."""
    f1, f2 = sp_polynomial()
    return _as_uni(f1 * f2, "K")


def c4_polynomial():
    """C4(K, d), degree 8 in d."""
    K, d = _K, _d
    rows = [
        [1],
        [-126, -210],
        [6660, 21300, 17800],
        [-192024, -874800, -1382400, -731000],
        [3285360, 18688320, 41115600, 39438000, 13350000],
        [-33957792, -221940000, -588016800, -728172000, -379740000, -45500000],
        [206172864, 1453101120, 4191652800, 5433912000, 2183760000, -1105200000, -478000000],
        [-672686208, -4870886400, -14246409600, -16185744000, 2054160000, 13262400000,
         -7632000000, -11520000000],
        [906992640, 6500113920, 18223833600, 13351392000, -25284960000, -27302400000,
         65376000000, 30720000000, -102400000000],
    ]
    r = ParamPoly()
    for i, row in enumerate(rows):
        # row i multiplies d^(8-i); its entries are K^8, K^7, ... downwards.
        coeff = ParamPoly()
        for j, c in enumerate(row):
            coeff = coeff + c * K ** (8 - j)
        r = r + coeff * d ** (8 - i)
    return r


def model1_two_cycle_magnitude():
    """f^3 d^3 - 12 f^2 d^2 - 60 f d + 216 e^2 f^3 - 64."""
    e, f, d = _e, _f, _d
    return f**3 * d**3 - 12 * f**2 * d**2 - 60 * f * d + 216 * e**2 * f**3 - 64


def model2_two_cycle_magnitudes():
    K, d = _K, _d
    return [K * d - 24 * K - 80, K * d - 6 * K + 10]


def model2_three_cycle_magnitude():
    K, d = _K, _d
    return (K**4 * d**4 + (-54 * K**4 - 90 * K**3) * d**3
            + (972 * K**4 + 2700 * K**3 + 1800 * K**2) * d**2
            + (-6696 * K**4 - 19440 * K**3 - 5400 * K**2 + 27000 * K) * d
            + 15552 * K**4 + 38880 * K**3 - 32400 * K**2 - 162000 * K + 270000)


def model2_four_cycle_magnitudes():
    K, d = _K, _d
    return [
        K * d - 12 * K + 20,
        K * d - 48 * K - 160,
        K**2 * d**2 + (-36 * K**2 - 60 * K) * d + 288 * K**2 + 960 * K + 1600,
        c4_polynomial(),
    ]


def magnitude_oracles(m, n):
    """Oracle polynomials in d for the magnitude of an n-cycle of map m, or None.

    Available for Model 1 with n = 2 and for Model 2 at the standard
    (a, b, c, d) with n in {2, 3, 4}.
    """
    from .models import MODEL1, STANDARD

    if m.model == MODEL1:
        if n != 2:
            return None
        polys = [model1_two_cycle_magnitude()]
        vals = {"e": m.params["e"], "f": m.params["f"]}
    else:
        if any(m.params[k] != v for k, v in STANDARD.items()):
            return None
        table = {2: model2_two_cycle_magnitudes, 3: lambda: [model2_three_cycle_magnitude()],
                 4: model2_four_cycle_magnitudes}
        if n not in table:
            return None
        polys = table[n]()
        vals = {"K": m.params["K"]}
    return [_as_uni(p.subs(vals), "d") for p in polys]


def _as_uni(p, var):
    p = p.compact()
    if p.is_constant():
        return UniPoly([p.constant_value()], var)
    if p.variables != (var,):
        raise ValueError(f"expected a polynomial in {var} only, got {p.variables}")
    deg = p.degree(var)
    cs = [Fraction(0)] * (deg + 1)
    for (k,), c in p.terms.items():
        cs[k] = c
    return UniPoly(cs, var)


__all__ = [
    "sp_polynomial",
    "sp_univariate",
    "c4_polynomial",
    "model1_two_cycle_magnitude",
    "model2_two_cycle_magnitudes",
    "model2_three_cycle_magnitude",
    "model2_four_cycle_magnitudes",
    "magnitude_oracles",
    "symbols",
]
