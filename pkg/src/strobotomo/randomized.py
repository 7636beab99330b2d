"""Random matrices, states and generators for sweeps, tests and benchmarks."""
import numpy as np

from .dynamics import DensityMatrix, build_gkls


def random_complex(rng, n, scale=1.0):
    return scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)


def random_hermitian(rng, n, scale=1.0):
    a = random_complex(rng, n, scale)
    return 0.5 * (a + a.conj().T)


def random_density(rng, n, rank=None):
    """Random state from a Ginibre matrix; full rank unless ``rank`` is given."""
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def random_gkls(rng, n, n_dissipators=None, scale=1.0):
    """Random Hamiltonian with up to three random Lindblad operators."""
    if n_dissipators is None:
        n_dissipators = int(rng.integers(0, 4))
    h = random_hermitian(rng, n, scale)
    diss = [(random_complex(rng, n, scale / np.sqrt(n)), float(rng.uniform(0.1, 1.0)))
            for _ in range(n_dissipators)]
    return build_gkls(h, diss)
