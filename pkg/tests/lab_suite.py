"""Random symbol and operator generators shared by the lab tests and the acceptance run."""

import numpy as np

from fracindex.lab import GradedOperator, LoopSymbol


def shift_diagonal(ks) -> LoopSymbol:
    """diag(e^{i k_1 θ}, ..., e^{i k_s θ}) as an exact symbol."""
    return LoopSymbol.diagonal([LoopSymbol.monomial(k) for k in ks])


def random_perturbation(rng, size: int, bandwidth: int = 2, strength: float = 0.4) -> LoopSymbol:
    """Trig polynomial P with Σ_j ||P_j||_2 = strength, so ||P(θ)|| <= strength < 1 everywhere."""
    raw = {j: rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
           for j in range(-bandwidth, bandwidth + 1)}
    total = sum(np.linalg.norm(b, 2) for b in raw.values())
    return LoopSymbol(size, {j: b * (strength / total) for j, b in raw.items()}, exact=False)


def random_perturbed_symbol(rng, max_size: int = 2, max_shift: int = 3):
    """(a, expected winding) with a = diag(e^{ik θ}) (Id + P), elliptic by construction."""
    size = int(rng.integers(1, max_size + 1))
    ks = [int(k) for k in rng.integers(-max_shift, max_shift + 1, size=size)]
    ident = LoopSymbol.monomial(0, 1, size)
    strength = float(rng.uniform(0.05, 0.6))
    a = shift_diagonal(ks) @ (ident + random_perturbation(rng, size, strength=strength))
    return a, sum(ks)


def random_pair(rng):
    """Two equally sized random perturbed symbols."""
    size = int(rng.integers(1, 3))
    out = []
    for _ in range(2):
        ks = [int(k) for k in rng.integers(-2, 3, size=size)]
        ident = LoopSymbol.monomial(0, 1, size)
        out.append(shift_diagonal(ks) @ (ident + random_perturbation(rng, size, strength=0.3)))
    return tuple(out)


def random_graded_operator(rng, max_dim: int = 12, with_gram: bool = True) -> GradedOperator:
    """Random D+ of random shape and rank, optionally with random inner products.

    Entries are scaled so ||D+|| is O(1): the supertrace tolerance is absolute,
    while the roundoff in forming D+*D+ grows like eps ||D+||^2 t.
    """
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    r = int(rng.integers(0, min(m, n) + 1))
    left = rng.normal(size=(n, r)) + 1j * rng.normal(size=(n, r))
    right = rng.normal(size=(r, m)) + 1j * rng.normal(size=(r, m))
    d = (left @ right) / (2 * max(m, n, 1))
    if not with_gram:
        return GradedOperator(d)

    def gram(k):
        x = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
        return (x @ x.conj().T) / (2 * k) + np.eye(k)

    return GradedOperator(d, gram(m), gram(n))


def monomial_suite():
    """Exact symbols used for the adjoint and additivity sweeps."""
    suite = [LoopSymbol.monomial(k) for k in range(-3, 4)]
    suite += [shift_diagonal([1, -1]), shift_diagonal([2, 1]), shift_diagonal([0, -2, 1])]
    suite.append(LoopSymbol.blocks([[LoopSymbol.monomial(0), LoopSymbol.monomial(1)],
                                    [LoopSymbol.monomial(0, 0), LoopSymbol.monomial(0)]]))
    return suite


def numeric_suite(seed: int = 7, count: int = 6):
    rng = np.random.default_rng(seed)
    suite = [LoopSymbol.numeric({0: 2.0, 1: 1.0}), LoopSymbol.numeric({0: 2.0, 1: 0.5, -1: 0.5})]
    suite += [random_perturbed_symbol(rng)[0] for _ in range(count)]
    return suite
