import random
from collections.abc import Sequence
from itertools import product

from ..exactpoly import Monomial, Poly, RingSpec


def monomials_up_to(ring: RingSpec, variables: Sequence[str], max_deg: int) -> list[Monomial]:
    """Все мономы от variables полной степени ≤ max_deg, в порядке возрастания степени."""
    idx = [ring.index(v) for v in variables]
    out = []
    for powers in product(range(max_deg + 1), repeat=len(idx)):
        if sum(powers) > max_deg:
            continue
        exps = [0] * ring.arity
        for i, e in zip(idx, powers, strict=True):
            exps[i] = e
        out.append(tuple(exps))
    out.sort(key=lambda e: (sum(e), e))
    return out


def random_poly(
    rng: random.Random,
    ring: RingSpec,
    variables: Sequence[str],
    max_deg: int,
    max_coeff: int,
    density: float = 0.5,
) -> Poly:
    coeffs = {}
    for exps in monomials_up_to(ring, variables, max_deg):
        if rng.random() < density:
            coeffs[exps] = rng.randint(-max_coeff, max_coeff)
    return Poly.from_dict(ring, coeffs)


def random_point(ring: RingSpec, rng: random.Random, bound: int = 9) -> dict[str, int]:
    """Случайная целая точка; переменным с laurent-флагом ноль не достаётся."""
    point = {}
    for name in ring.variables:
        value = rng.randint(-bound, bound)
        if name in ring.laurent and value == 0:
            value = 1
        point[name] = value
    return point
