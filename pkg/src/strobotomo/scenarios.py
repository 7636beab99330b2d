"""Built-in problems: a one-observable qubit and a two-observable ququart."""
import numpy as np

from .dynamics import DensityMatrix, build_gkls
from .io import ProblemConfig
from .observability import ObservableSet

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)
LOWER = np.array([[0, 1], [0, 0]], dtype=np.complex128)   # |0><1|


def qubit_demo(noise_std=0.0, seed=0):
    """H = sigma_z, one observable sigma_x + sigma_z + I, grid g = mu = 3 on (0, 1]."""
    gen = build_gkls(SZ)
    rho0 = DensityMatrix(0.5 * (I2 + 0.3 * SX - 0.4 * SY + 0.5 * SZ))
    return ProblemConfig(
        generator=gen,
        observables=ObservableSet((SX + SZ + I2,), ("sx+sz+I",)),
        rho0=rho0,
        time_grid={"mode": "uniform", "T": 1.0, "g": 3},
        noise_std=noise_std,
        seed=seed,
        identity_augmented=True,
    )


def qubit_degenerate(noise_std=0.0, seed=0):
    """The qubit demo sampled at t = pi, 2pi, 3pi, where every rotation is trivial."""
    base = qubit_demo(noise_std, seed)
    return ProblemConfig(base.generator, base.observables, base.rho0,
                         {"mode": "explicit", "times": [np.pi, 2 * np.pi, 3 * np.pi]},
                         noise_std, seed, True)


def ququart_generator():
    """Two identical driven, damped qubits without coupling.

    The Liouvillian is ``L1 (x) 1 + 1 (x) L1``, so every eigenvalue
    ``l_a + l_b`` with a != b appears twice and a single observable cannot
    reach all 16 directions.
    """
    k = np.kron
    h1 = 0.5 * SZ + 0.3 * SX
    h = k(h1, I2) + k(I2, h1)
    return build_gkls(h, [(k(LOWER, I2), 0.3), (k(I2, LOWER), 0.3)])


def ququart_state():
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(np.complex128)
    rho[0, 1] = rho[1, 0] = 0.1
    rho[0, 3], rho[3, 0] = 0.05j, -0.05j
    rho[1, 2] = rho[2, 1] = -0.05
    return DensityMatrix(rho)


def ququart_observables():
    k = np.kron
    return ObservableSet((k(SX, SZ) + k(SZ, I2), k(SY, SX) + k(I2, SX)),
                         ("sx.sz+sz.1", "sy.sx+1.sx"))


def ququart_demo(noise_std=0.0, seed=0):
    """n = 4 with r = 2 observables, g = mu = 10 instants on (0, 10]."""
    return ProblemConfig(
        generator=ququart_generator(),
        observables=ququart_observables(),
        rho0=ququart_state(),
        time_grid={"mode": "uniform", "T": 10.0, "g": 10},
        noise_std=noise_std,
        seed=seed,
        identity_augmented=True,
    )
