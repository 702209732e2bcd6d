"""Truncated two-mode number-basis oracle.

Everything the closed forms claim is reproducible here by dense linear
algebra on a finite basis.  The four quadratic generators all preserve the
total excitation number, so ordering the basis by blocks of fixed total
makes every operator in this module exactly block diagonal: the truncation
at total <= size introduces no error inside any block.  The only
approximation anywhere is the finite-difference time derivative inside the
two verification residuals.

Conditioning, not truncation, is the real constraint: the group factors
grow like exp(|gamma| * k) on block k, so checks that invert or normalize
by the map are run on the low blocks and the `buffer` arguments exist to
keep state-mapping honest when vectors were produced by operators that do
mix blocks (position, momentum).
"""

import numpy as np

from .dyson import scenario_params
from .energy import f_pm
from .errors import ConstraintViolationError, TruncationError
from .invariants import alpha_coeffs

MIN_SIZE = 2
MAX_SIZE = 60

_SUPPORT_TOL = 1e-14


class FockBasis:
    """Two-mode number states (na, nb) with na + nb <= size.

    Flat ordering is by total k = na + nb, first-mode count descending
    inside each block, so index(na, nb) = k (k + 1) / 2 + nb and the block
    of total k occupies a contiguous slice of length k + 1.
    """

    def __init__(self, size):
        if not MIN_SIZE <= size <= MAX_SIZE:
            raise ConstraintViolationError(
                f"basis size must satisfy {MIN_SIZE} <= size <= {MAX_SIZE}, got {size}"
            )
        self.size = int(size)
        self.states = [
            (k - nb, nb) for k in range(self.size + 1) for nb in range(k + 1)
        ]
        self.dim = (self.size + 1) * (self.size + 2) // 2

    def index(self, na, nb):
        if na < 0 or nb < 0 or na + nb > self.size:
            raise ConstraintViolationError(f"state ({na}, {nb}) outside the basis")
        k = na + nb
        return k * (k + 1) // 2 + nb

    def block_slice(self, k):
        if not 0 <= k <= self.size:
            raise ConstraintViolationError(f"block {k} outside the basis")
        offset = k * (k + 1) // 2
        return slice(offset, offset + k + 1)

    def blocks(self):
        return range(self.size + 1)


def build_generators(basis):
    """Dense matrices of the four generators on the truncated basis.

    First two are the mode numbers plus one half on the diagonal; the
    mixing pair has elements sqrt((na + 1) nb) / 2 between (na, nb) and
    (na + 1, nb - 1), real for the symmetric one and -i / +i for the
    antisymmetric one.  All four are Hermitian and block diagonal.
    """
    dim = basis.dim
    k1 = np.zeros((dim, dim), dtype=complex)
    k2 = np.zeros((dim, dim), dtype=complex)
    k3 = np.zeros((dim, dim), dtype=complex)
    k4 = np.zeros((dim, dim), dtype=complex)
    for idx, (na, nb) in enumerate(basis.states):
        k1[idx, idx] = na + 0.5
        k2[idx, idx] = nb + 0.5
        if nb >= 1:
            jdx = basis.index(na + 1, nb - 1)
            amp = 0.5 * np.sqrt((na + 1) * nb)
            k3[jdx, idx] += amp
            k4[jdx, idx] += -1j * amp
        if na >= 1:
            jdx = basis.index(na - 1, nb + 1)
            amp = 0.5 * np.sqrt(na * (nb + 1))
            k3[jdx, idx] += amp
            k4[jdx, idx] += 1j * amp
    return k1, k2, k3, k4


def element_matrix(elem, basis, gens=None):
    """Matrix of a Lie-algebra element (complex coefficients allowed)."""
    if gens is None:
        gens = build_generators(basis)
    c = elem.vector
    return c[0] * gens[0] + c[1] * gens[1] + c[2] * gens[2] + c[3] * gens[3]


def _block_expm(h_block, scale):
    # h_block Hermitian; scale real
    vals, vecs = np.linalg.eigh(h_block)
    return (vecs * np.exp(scale * vals)) @ vecs.conj().T


def build_eta(basis, gens, params):
    """Ordered-product group map, assembled block by block.

    Diagonal pair first, then the two mixing factors; each mixing factor is
    a Hermitian exponential done by exact eigendecomposition per block.
    """
    k1, k2, k3, k4 = gens
    eta = np.zeros((basis.dim, basis.dim), dtype=complex)
    d1 = np.real(np.diag(k1))
    d2 = np.real(np.diag(k2))
    for k in basis.blocks():
        sl = basis.block_slice(k)
        diag = np.exp(params.gamma1 * d1[sl] + params.gamma2 * d2[sl])
        e3 = _block_expm(k3[sl, sl], params.gamma3)
        e4 = _block_expm(k4[sl, sl], params.gamma4)
        eta[sl, sl] = diag[:, None] * (e3 @ e4)
    return eta


def build_eta_inverse(basis, gens, params):
    """Exact inverse: reversed factors with negated parameters."""
    k1, k2, k3, k4 = gens
    inv = np.zeros((basis.dim, basis.dim), dtype=complex)
    d1 = np.real(np.diag(k1))
    d2 = np.real(np.diag(k2))
    for k in basis.blocks():
        sl = basis.block_slice(k)
        diag = np.exp(-(params.gamma1 * d1[sl] + params.gamma2 * d2[sl]))
        e3 = _block_expm(k3[sl, sl], -params.gamma3)
        e4 = _block_expm(k4[sl, sl], -params.gamma4)
        inv[sl, sl] = (e4 @ e3) * diag[None, :]
    return inv


def _eta_time_derivative(basis, gens, scenario, consts, t, fd_step):
    # central difference, falling back to one-sided at the domain edges
    t_lo, t_hi = 0.0, scenario.t_max()

    def eta_at(s):
        return build_eta(
            basis, gens, scenario_params(consts, scenario.lam, s, q1=scenario.q1)
        )

    if t - fd_step >= t_lo and t + fd_step <= t_hi:
        return (eta_at(t + fd_step) - eta_at(t - fd_step)) / (2.0 * fd_step)
    if t - fd_step < t_lo:
        return (
            -3.0 * eta_at(t) + 4.0 * eta_at(t + fd_step) - eta_at(t + 2.0 * fd_step)
        ) / (2.0 * fd_step)
    return (
        3.0 * eta_at(t) - 4.0 * eta_at(t - fd_step) + eta_at(t - 2.0 * fd_step)
    ) / (2.0 * fd_step)


def verify_dyson(scenario, basis, times, gens=None, fd_step=1e-5, buffer=2):
    """Worst per-block relative residual of the intertwining relation.

    The map composed with the non-Hermitian generator plus i times the map's
    time derivative must equal the Hermitian image composed with the map;
    the residual of each block is normalized by that block's spectral norm
    of the map.  Blocks above size - buffer are skipped (their norms are
    dominated by the fastest-growing singular direction and the
    finite-difference step stops being the leading error there).
    """
    if gens is None:
        gens = build_generators(basis)
    consts = scenario.ep_constants()
    k_top = basis.size - buffer
    worst = 0.0
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        params = scenario_params(consts, scenario.lam, t, q1=scenario.q1)
        eta = build_eta(basis, gens, params)
        eta_dot = _eta_time_derivative(basis, gens, scenario, consts, t, fd_step)
        a_t = float(scenario.a(t))
        lam_t = float(scenario.lam(t))
        f_plus, f_minus = f_pm(scenario, t)
        ham = a_t * (gens[0] + gens[1]) + 1j * lam_t * gens[2]
        herm = f_plus * gens[0] + f_minus * gens[1]
        resid = eta @ ham + 1j * eta_dot - herm @ eta
        for k in range(k_top + 1):
            sl = basis.block_slice(k)
            rel = np.linalg.norm(resid[sl, sl], 2) / np.linalg.norm(eta[sl, sl], 2)
            worst = max(worst, rel)
    return worst


def verify_quasi_hermiticity(scenario, basis, times, gens=None, fd_step=1e-5, buffer=2):
    """Worst per-block relative residual of the metric compatibility law.

    The adjoint generator composed with the metric, minus the metric
    composed with the generator, must equal i times the metric's time
    derivative; normalized per block by the metric's spectral norm.
    """
    if gens is None:
        gens = build_generators(basis)
    consts = scenario.ep_constants()
    k_top = basis.size - buffer
    worst = 0.0
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        params = scenario_params(consts, scenario.lam, t, q1=scenario.q1)
        eta = build_eta(basis, gens, params)
        eta_dot = _eta_time_derivative(basis, gens, scenario, consts, t, fd_step)
        rho = eta.conj().T @ eta
        rho_dot = eta_dot.conj().T @ eta + eta.conj().T @ eta_dot
        a_t = float(scenario.a(t))
        lam_t = float(scenario.lam(t))
        ham = a_t * (gens[0] + gens[1]) + 1j * lam_t * gens[2]
        resid = ham.conj().T @ rho - rho @ ham - 1j * rho_dot
        for k in range(k_top + 1):
            sl = basis.block_slice(k)
            rel = np.linalg.norm(resid[sl, sl], 2) / np.linalg.norm(rho[sl, sl], 2)
            worst = max(worst, rel)
    return worst


def sort_along_line(vals):
    """Deterministic order for eigenvalues that lie on a line in the plane.

    Lexicographic complex sorting is unstable when real parts agree up to
    rounding (the broken-spectrum blocks are exactly that case), so the
    values are projected onto the direction of their largest deviation from
    the mean and ordered by that projection.  Stable whenever the spacing
    along the line dominates the rounding noise.
    """
    vals = np.asarray(vals, dtype=complex)
    if vals.size < 2:
        return vals.copy()
    dev = vals - vals.mean()
    pivot = dev[np.argmax(np.abs(dev))]
    if abs(pivot) == 0.0:
        return np.sort_complex(vals)
    direction = pivot / abs(pivot)
    # orient by the dominant component; the minor one is rounding noise
    if abs(direction.real) >= abs(direction.imag):
        if direction.real < 0:
            direction = -direction
    elif direction.imag < 0:
        direction = -direction
    keys = dev / direction
    order = np.lexsort((keys.imag, keys.real))
    return vals[order]


def broken_spectrum_numeric(a_value, lam_value, basis, gens=None):
    """Eigenvalues of the equal-frequency non-Hermitian generator, per block.

    Block of total k carries a_value (k + 1) on the diagonal plus i lam
    times the symmetric mixing generator; returns a list over blocks of
    eigenvalue arrays ordered along the (vertical) line they lie on.
    """
    if gens is None:
        gens = build_generators(basis)
    ham = a_value * (gens[0] + gens[1]) + 1j * lam_value * gens[2]
    out = []
    for k in basis.blocks():
        sl = basis.block_slice(k)
        out.append(sort_along_line(np.linalg.eigvals(ham[sl, sl])))
    return out


def _block_spin(basis, gens, k):
    # the three traceless directions on the block: mixing pair and half the
    # number imbalance
    sl = basis.block_slice(k)
    return (
        gens[2][sl, sl],
        gens[3][sl, sl],
        0.5 * (gens[0][sl, sl] - gens[1][sl, sl]),
    )


def _line_eigenvalues(v, j_ops, center, k):
    """Eigenvalues of center I + v . J on a block, conditioning-proof.

    v is a complex 3-vector with p = Re v, q = Im v, p . q = 0 and
    mu^2 = |p|^2 - |q|^2 > 0 (the reality conditions).  In the ladder basis
    of the real direction p x q the matrix is exactly tridiagonal;
    unscaling the hyperbolic factor exp(zeta J) with sinh(zeta) = |q| / mu
    leaves an exactly normal matrix, so the eigenvalues come out accurate
    to machine precision instead of degrading like exp(zeta k).  The scale
    orientation is picked as the candidate with the smaller Frobenius norm
    (the wrong sign inflates one off-diagonal by exp(2 zeta)).  Snapshots
    violating the reality conditions fall back to the plain solver.
    """
    j1, j2, j3 = j_ops
    block = center * np.eye(k + 1, dtype=complex)
    block += v[0] * j1 + v[1] * j2 + v[2] * j3
    p, q = v.real, v.imag
    mu2 = float(p @ p - q @ q)
    pn, qn = np.linalg.norm(p), np.linalg.norm(q)
    if mu2 <= 0.0 or qn <= 1e-13 * max(pn, 1.0):
        return np.linalg.eigvals(block)
    axis = np.cross(p, q)
    axis_norm = np.linalg.norm(axis)
    if axis_norm <= 1e-13 * pn * qn:
        return np.linalg.eigvals(block)
    axis = axis / axis_norm
    zeta = float(np.arcsinh(qn / np.sqrt(mu2)))
    ladder = axis[0] * j1 + axis[1] * j2 + axis[2] * j3
    _, w = np.linalg.eigh(ladder)
    tri = w.conj().T @ block @ w
    # everything outside the three diagonals is structurally zero
    tri = np.triu(np.tril(tri, 1), -1)
    m = np.arange(k + 1) - 0.5 * k
    best = None
    for s in (1.0, -1.0):
        cand = tri * np.exp(s * zeta * (m[None, :] - m[:, None]))
        nrm = np.linalg.norm(cand)
        if best is None or nrm < best[0]:
            best = (nrm, cand)
    return np.linalg.eigvals(best[1])


def invariant_eigen_flow(coeffs, lam, times, basis, gens=None):
    """Sorted invariant eigenvalues per block at times[0], and their drift.

    A plain eigensolver cannot certify constancy here: the invariant's
    eigenvector condition number grows exponentially in both the block
    index and the integrated driver, swamping the interesting scale long
    before the top block.  Each block is center I plus a complex 3-vector
    contracted with the block's traceless directions, which
    _line_eigenvalues diagonalizes through its exact normal form instead.
    Returns (reference, drift): the sorted eigenvalue arrays at times[0]
    and the largest absolute deviation from them over the later times.
    """
    if gens is None:
        gens = build_generators(basis)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    spin_ops = [_block_spin(basis, gens, k) for k in basis.blocks()]

    def block_eigs(t):
        a1, a2, a3, a4 = alpha_coeffs(coeffs, lam, float(t))
        v = np.array([a3, a4, a1 - a2], dtype=complex)
        center = 0.5 * (a1 + a2)
        eigs = []
        for k in basis.blocks():
            vals = _line_eigenvalues(v, spin_ops[k], center * (k + 1), k)
            eigs.append(sort_along_line(vals))
        return eigs

    reference = block_eigs(times[0])
    drift = 0.0
    for t in times[1:]:
        for ref, now in zip(reference, block_eigs(t)):
            drift = max(drift, float(np.max(np.abs(now - ref))))
    return reference, drift


def map_state(basis, gens, params, psi, inverse=False, buffer=2):
    """Apply the frame map (or its inverse) to a basis-expanded state.

    inverse=False sends a state of the non-Hermitian frame to the Hermitian
    frame; inverse=True undoes it.  The map itself is block exact, but a
    vector produced by block-mixing operators is only trustworthy below the
    truncation edge, so any support on the top `buffer` blocks beyond
    1e-14 of the norm raises TruncationError.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (basis.dim,):
        raise ConstraintViolationError(
            f"state must have length {basis.dim}, got shape {psi.shape}"
        )
    total = np.linalg.norm(psi)
    if total > 0.0 and buffer > 0:
        edge = basis.block_slice(max(basis.size - buffer + 1, 0)).start
        spill = np.linalg.norm(psi[edge:])
        if spill > _SUPPORT_TOL * total:
            raise TruncationError(
                f"state has relative support {spill / total:.3e} on the top "
                f"{buffer} blocks; result would not be truncation safe"
            )
    mat = build_eta_inverse(basis, gens, params) if inverse else build_eta(
        basis, gens, params
    )
    return mat @ psi


def metric_floor(params, k):
    """Closed-form positive lower bound on the metric block's smallest eigenvalue.

    The smallest singular value of a product is at least the product of the
    smallest singular values.  The diagonal factor's smallest entry on the
    block of total k sits at one of the two endpoints; each Hermitian
    mixing factor has singular values no smaller than exp(-|gamma| k / 2)
    because the mixing generators have spectrum in [-k/2, k/2] there.
    The metric block inherits the square of the bound.  Strictly positive
    for every finite parameter set, which is the point.
    """
    g1, g2 = params.gamma1, params.gamma2
    lowest_diag = min(g1 * k, g2 * k) + 0.5 * (g1 + g2)
    sigma = np.exp(lowest_diag - 0.5 * (abs(params.gamma3) + abs(params.gamma4)) * k)
    return float(sigma * sigma)


def metric_spectrum_report(basis, gens, params):
    """Per-block rigorous floors next to observed smallest metric eigenvalues.

    Returns (floors, observed); observed[k] is the squared smallest singular
    value of the map's block, which equals the metric block's smallest
    eigenvalue.  floors[k] <= observed[k] certifies positivity without
    trusting the numerics; the observed value shows the actual margin.
    """
    eta = build_eta(basis, gens, params)
    floors = []
    observed = []
    for k in basis.blocks():
        sl = basis.block_slice(k)
        floors.append(metric_floor(params, k))
        sigma = np.linalg.svd(eta[sl, sl], compute_uv=False)
        observed.append(float(sigma[-1] ** 2))
    return floors, observed
