"""Linear dispersion codebooks over the normalized codeword map.

A code is defined by a parameter set, a symbol basis for packing four
complex (QAM) symbols into each field coefficient, and an optional
renormalization variant.  Sixteen real PAM symbols enter per codeword:
four per field coefficient x_j, real and imaginary parts on each of the
two basis elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import CodeParams, build_params, normalized_codeword
from .numberfield import FieldContext, FieldElement


class UnsupportedBasisError(ValueError):
    """The requested symbol basis is not defined for this field."""


class UnsupportedVariantError(ValueError):
    """The requested code variant is not defined for these parameters."""


TARGET_ENERGY = 16.0  # average squared Frobenius norm per codeword


@dataclass(frozen=True)
class SymbolBasis:
    id: str
    beta1: FieldElement
    beta2: FieldElement


def _independent(ctx: FieldContext, b1: FieldElement, b2: FieldElement) -> bool:
    # Coordinates over the {1, w} block structure are Gaussian rationals
    # (p + q*w') via the pairs (a1, a2) and (a3, a4).  The basis is usable
    # when the 2x2 Gaussian-rational coordinate matrix is nonsingular.
    def pairs(x):
        a1, a2, a3, a4 = x.coords
        return (a1, a2), (a3, a4)

    (p11, q11), (p12, q12) = pairs(b1)
    (p21, q21), (p22, q22) = pairs(b2)
    # det = (p11+q11*i)(p22+q22*i) - (p12+q12*i)(p21+q21*i) in Q(i)
    re = p11 * p22 - q11 * q22 - (p12 * p21 - q12 * q21)
    im = p11 * q22 + q11 * p22 - (p12 * q21 + q12 * p21)
    return re != 0 or im != 0


def make_basis(ctx: FieldContext, basis_id: str) -> SymbolBasis:
    """Build one of the three symbol bases.

    B2 = {1, w} always works.  B1 is the integral basis {1, (1+w)/2} when
    -c = 1 mod 4 (else it falls back to {1, w}) and needs c' = 1.  B3 is
    the rebalanced basis {2, w}, defined only for c = 3.
    """
    if basis_id == "B2":
        b1, b2 = ctx.one(), ctx.omega()
    elif basis_id == "B1":
        if ctx.cprime != 1:
            raise UnsupportedBasisError("B1 is defined over Q(i, sqrt(-c)) only (c' = 1)")
        if (-ctx.c) % 4 == 1:
            b1, b2 = ctx.one(), (ctx.one() + ctx.omega()) * Fraction(1, 2)
        else:
            b1, b2 = ctx.one(), ctx.omega()
    elif basis_id == "B3":
        if ctx.c != 3:
            raise UnsupportedBasisError("B3 = {2, w} is defined for c = 3 only")
        b1, b2 = ctx.element(2), ctx.omega()
    else:
        raise UnsupportedBasisError(f"unknown basis id {basis_id!r}")
    if not _independent(ctx, b1, b2):
        raise UnsupportedBasisError(f"basis {basis_id} is degenerate for this field")
    return SymbolBasis(basis_id, b1, b2)


@dataclass
class DispersionCode:
    """A fully built linear dispersion code with its sixteen generators."""

    params: CodeParams
    basis: SymbolBasis
    variant: str                  # "plain" or "C4"
    generators: np.ndarray        # (16, 4, 4) complex, energy scale applied
    energy_scale: float
    block_scale: float            # 1 for plain, |embed(a)|^(1/4) for C4

    @property
    def name(self) -> str:
        base = self.params.name or f"c{self.params.ctx.c}cp{self.params.ctx.cprime}"
        return f"{base}-{self.basis.id}" + ("" if self.variant == "plain" else f"-{self.variant}")


def _symbols_to_coefficients(code: DispersionCode, s) -> tuple:
    """Pack sixteen real symbols into the four field coefficients.

    x_j = (s[4j] + s[4j+1]*w')*beta1 + (s[4j+2] + s[4j+3]*w')*beta2.
    For c' = 1 the unit w' is literally i, which is the QAM packing; for
    other c' it plays the role of the imaginary unit inside L.
    """
    ctx = code.params.ctx
    wp = ctx.omega_prime()
    if len(s) != 16:
        raise ValueError(f"need 16 real symbols, got {len(s)}")
    vals = [Fraction(x) for x in s]
    xs = []
    for j in range(4):
        s1, s2, s3, s4 = vals[4 * j: 4 * j + 4]
        xs.append((ctx.element(s1) + wp * s2) * code.basis.beta1
                  + (ctx.element(s3) + wp * s4) * code.basis.beta2)
    return tuple(xs)


def _encode_unscaled(code: DispersionCode, s) -> np.ndarray:
    xs = _symbols_to_coefficients(code, s)
    m = normalized_codeword(code.params, xs)
    if code.variant == "C4":
        m[0:2, 2:4] *= code.block_scale
        m[2:4, 0:2] /= code.block_scale
    return m


def encode(code: DispersionCode, s) -> np.ndarray:
    """Energy-normalized 4x4 codeword for sixteen real symbols."""
    return _encode_unscaled(code, s) * code.energy_scale


def build_code(params: CodeParams, basis_id: str = "B2", variant: str = "plain") -> DispersionCode:
    """Assemble a DispersionCode and fix its energy normalization.

    The scale is chosen in closed form so that uniform unit PAM symbols
    (the 4-QAM real components, +-1) give E||X||_F^2 = TARGET_ENERGY:
    with zero-mean uncorrelated symbols that expectation is simply the
    sum of squared generator norms.
    """
    if variant not in ("plain", "C4"):
        raise UnsupportedVariantError(f"unknown variant {variant!r}")
    if params.conditions.alpha is None:
        raise ValueError("shaping conditions failed, cannot build codewords")
    basis = make_basis(params.ctx, basis_id)
    block_scale = abs(params.a.embed()) ** 0.25 if variant == "C4" else 1.0
    code = DispersionCode(params, basis, variant, np.zeros((16, 4, 4), dtype=complex), 1.0, block_scale)
    gens = np.stack([
        _encode_unscaled(code, [1 if i == j else 0 for j in range(16)])
        for i in range(16)
    ])
    total = float(np.sum(np.abs(gens) ** 2))
    scale = math.sqrt(TARGET_ENERGY / total)
    code.generators = gens * scale
    code.energy_scale = scale
    return code


def c4_transform(code: DispersionCode) -> DispersionCode:
    """The renormalized variant of the first reference code.

    Rebuilds the parameters with k = lprime = 4/7 and compensates the
    off-diagonal blocks by |embed(a)|^(1/4) (top-right multiplied,
    bottom-left divided), which leaves every determinant unchanged.
    """
    p = code.params
    if (p.ctx.c, p.ctx.cprime) != (3, 1) or p.name != "example1":
        raise UnsupportedVariantError("the C4 renormalization is defined for the first reference code only")
    scaled = build_params(p.ctx, p.u, k=Fraction(4, 7), lprime=Fraction(4, 7), name=p.name)
    return build_code(scaled, code.basis.id, variant="C4")


# ----------------------------------------------------------------------
# minimum determinant search


@dataclass(frozen=True)
class MinDetResult:
    strategy: str
    candidates: int
    min_abs_det: float            # with the energy scale factored out
    witness: tuple                # the 16 symbol differences
    det: complex


def _sparse_difference_vectors() -> np.ndarray:
    """All difference vectors supported on at most two field coefficients.

    PAM differences per real symbol are {-2, 0, 2}; each field coefficient
    owns four consecutive symbols.  Duplicates across coefficient pairs are
    harmless for a minimum.
    """
    deltas = (-2, 0, 2)
    combos = np.array(list(itertools.product(deltas, repeat=8)), dtype=float)
    combos = combos[np.any(combos != 0, axis=1)]
    out = []
    for j, k in itertools.combinations(range(4), 2):
        block = np.zeros((len(combos), 16))
        block[:, 4 * j: 4 * j + 4] = combos[:, :4]
        block[:, 4 * k: 4 * k + 4] = combos[:, 4:]
        out.append(block)
    return np.concatenate(out)


def min_det_search(code: DispersionCode, strategy: str = "sparse_exhaustive",
                   n: int = 1000, seed: int = 0) -> MinDetResult:
    """Minimum |det| over codeword differences, energy scale factored out.

    "sparse_exhaustive" enumerates every difference supported on at most
    two field coefficients; "random" samples n full-width differences from
    {-2, 0, 2}^16.  A strictly positive minimum over the sparse set is the
    evidence expected from a division algebra (nonvanishing determinants).
    """
    if strategy == "sparse_exhaustive":
        S = _sparse_difference_vectors()
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        S = (rng.integers(-1, 2, size=(n, 16)) * 2).astype(float)
        S = S[np.any(S != 0, axis=1)]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    A = code.generators / code.energy_scale
    X = np.einsum("ni,ijk->njk", S, A)
    dets = np.linalg.det(X)
    i = int(np.argmin(np.abs(dets)))
    return MinDetResult(strategy, len(S), float(abs(dets[i])),
                        tuple(int(v) for v in S[i]), complex(dets[i]))


# ----------------------------------------------------------------------
# serialization


def export_generators(code: DispersionCode) -> dict:
    """JSON-ready description of the generator set (row-major re/im pairs)."""
    return {
        "name": code.name,
        "basis": code.basis.id,
        "variant": code.variant,
        "energy_scale": code.energy_scale,
        "block_scale": code.block_scale,
        "generators": [
            [[[float(z.real), float(z.imag)] for z in row] for row in g]
            for g in code.generators
        ],
    }
