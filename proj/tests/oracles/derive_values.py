"""Independent reference values for the C++ unit tests.

Uses numpy/scipy only (no code shared with the library). Values printed here
are frozen into the tests; rerun after changing any fixture state.

    python3 tests/oracles/derive_values.py
"""

import numpy as np
from scipy.linalg import fractional_matrix_power, expm, sqrtm
from scipy.optimize import minimize

np.set_printoptions(precision=17)


def psd_power(a, t):
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    cut = 1e-12 * max(w.max(), 0)
    wp = np.array([x**t if x > cut else 0.0 for x in w])
    return (v * wp) @ v.conj().T


# Fixture states (same entries appear in the C++ tests).
RHO3 = np.array([[0.5, 0.1 + 0.05j, 0.02],
                 [0.1 - 0.05j, 0.3, -0.04j],
                 [0.02, 0.04j, 0.2]])
SIGMA3 = np.array([[0.4, 0.05, 0.0],
                   [0.05, 0.35, 0.03j],
                   [0.0, -0.03j, 0.25]])
# Two-qubit mixed fixture: 0.7 |phi><phi| + 0.3 |01><01| with
# phi = 0.8|00> + 0.6i|11>.
phi = np.array([0.8, 0, 0, 0.6j])
RHO_AB = 0.7 * np.outer(phi, phi.conj()) + 0.3 * np.diag([0, 1, 0, 0])


def tsallis_entropy(r, q):
    return (1 - np.trace(fractional_matrix_power(r, q)).real) / (q - 1)


def rel_entropy(r, s, q):
    return (np.trace(fractional_matrix_power(r, q) @ fractional_matrix_power(s, 1 - q)).real - 1) / (q - 1)


def coherence(r, q):
    c = np.diag(fractional_matrix_power(r, q)).real
    n = np.sum(c ** (1 / q))
    return (1 - n**q) / (1 - q), (1 - n) / (1 - q)


def bloch(theta, phase):
    return np.array([[np.cos(theta / 2), -np.exp(-1j * phase) * np.sin(theta / 2)],
                     [np.exp(1j * phase) * np.sin(theta / 2), np.cos(theta / 2)]])


def discord_value(r, q, x):
    ua, ub = bloch(x[0], x[1]), bloch(x[2], x[3])
    w = np.kron(ua, ub)
    p = psd_power(r, q)
    c = np.real(np.einsum("ij,ik,kj->j", w.conj(), p, w))
    c = np.where(c < 1e-15, 0, c)
    n = np.sum(c ** (1 / q))
    return (1 - n**q) / (1 - q)


def correlation_value(r, q, x):
    ua = bloch(x[0], x[1])
    p = psd_power(r, q)
    n = 0.0
    for i in range(2):
        u = np.kron(ua[:, i:i + 1], np.eye(2))
        block = u.conj().T @ p @ u
        n += np.trace(psd_power(block, 1 / q)).real
    return (1 - n**q) / (1 - q)


def global_min(f, dim, grid=24):
    best = None
    axes = [np.linspace(0, np.pi, grid)] + [np.linspace(0, 2 * np.pi, grid, endpoint=False)]
    axes = (axes * 2)[:dim]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = np.array([f(x) for x in pts])
    for idx in np.argsort(vals)[:12]:
        res = minimize(f, pts[idx], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
        if best is None or res.fun < best:
            best = res.fun
    return best


if __name__ == "__main__":
    for q in (0.5, 2.0):
        print(f"S_q(RHO3), q={q}: {tsallis_entropy(RHO3, q)!r}")
        print(f"D_q(RHO3||SIGMA3), q={q}: {rel_entropy(RHO3, SIGMA3, q)!r}")
        c1, c2 = coherence(RHO3, q)
        print(f"C_I(RHO3), q={q}: {c1!r}")
        print(f"C_II(RHO3), q={q}: {c2!r}")
    for q in (0.5, 2.0):
        d = global_min(lambda x: discord_value(RHO_AB, q, x), 4, grid=14)
        qq = global_min(lambda x: correlation_value(RHO_AB, q, x), 2, grid=60)
        print(f"D(RHO_AB), q={q}: {d!r}")
        print(f"Q(RHO_AB), q={q}: {qq!r}")
    # pure closed form example: sqrt(0.8)|00> + sqrt(0.2)|11>, q = 0.5
    print("closed D, alpha^2=(0.8,0.2), q=0.5:", (1 - (0.8**2 + 0.2**2) ** 0.5) / 0.5)
    # Pauli-y rotation: exp(-i (pi/4) Y) |0>
    y = np.array([[0, -1j], [1j, 0]])
    print("exp(-i pi/4 Y)|0> =", expm(-1j * np.pi / 4 * y)[:, 0])
