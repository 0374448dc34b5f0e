"""Adiabatic gate: Gaussian-pulse propagation, CPHASE-phase extraction,
tau scanning, eigenspectrum tracking and interference diagnostics.

The control stays near its instantaneous eigenstates while the Rabi
frequency is ramped smoothly; logical states acquire state-dependent
dressed phases. Propagation is dense adaptive-step integration of
dU/dt = -i H(t) U over the pulse window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, linear_sum_assignment

from .core import DIM, LOGICAL_INDICES, SystemParams, basis_ket, dag, flat_index
from .dynamic import LogicalGate, gate_from_block
from .entangling import MAX_ENTANGLING_POWER, entangling_power_closed
from .hamiltonian import DRIVE, build_full

# leakage above this marks a gate ill-defined for entangling purposes
LEAKAGE_VALID_LIMIT = 1e-3


class IntegrationError(RuntimeError):
    """Adaptive-step propagation failed to reach the window end."""


@dataclass(frozen=True)
class PulseProfile:
    """Time-dependent Rabi frequency with constant detuning.

    Gaussian: omega(t) = omega0 * exp(-(t/tau)^2), window at least +-5 tau
    so the boundary amplitude is below 2e-11 of the peak. Rectangular:
    omega0 on [-tau/2, tau/2].
    """

    shape: str
    omega0: float
    tau: float
    delta: float = 0.0
    window: tuple | None = None

    def __post_init__(self):
        if self.shape not in ("gaussian", "rectangular"):
            raise ValueError(f"unknown pulse shape {self.shape!r}")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if self.window is None:
            w = (-5.0 * self.tau, 5.0 * self.tau) if self.shape == "gaussian" \
                else (-0.5 * self.tau, 0.5 * self.tau)
            object.__setattr__(self, "window", w)
        elif self.shape == "gaussian":
            lo, hi = self.window
            if lo > -5.0 * self.tau or hi < 5.0 * self.tau:
                raise ValueError("gaussian window must cover +-5 tau")

    def omega(self, t):
        if self.shape == "gaussian":
            return self.omega0 * np.exp(-((t / self.tau) ** 2))
        lo, hi = self.window
        return self.omega0 * ((t >= lo) & (t <= hi)) if np.ndim(t) \
            else (self.omega0 if lo <= t <= hi else 0.0)

    def omega_dot(self, t):
        if self.shape == "gaussian":
            return -2.0 * t / self.tau ** 2 * self.omega(t)
        return 0.0 * np.asarray(t, dtype=float)

    def replace(self, **changes):
        from dataclasses import replace as _replace

        if "tau" in changes and "window" not in changes:
            changes["window"] = None
        return _replace(self, **changes)


def gaussian_pulse(omega0, tau, delta, window_mult=5.0):
    return PulseProfile(shape="gaussian", omega0=omega0, tau=tau, delta=delta,
                        window=(-window_mult * tau, window_mult * tau))


def adiabaticity_metric(pulse: PulseProfile, t):
    """Landau-Zener figure (omega' * delta - omega * delta') / (2 (delta^2+omega^2)^{3/2}).

    Detuning is constant here, so only the first term contributes; values
    far below 1 mean eigenstate following.
    """
    om = pulse.omega(t)
    om_dot = pulse.omega_dot(t)
    return (om_dot * pulse.delta) / (2.0 * (pulse.delta ** 2 + om ** 2) ** 1.5)


def max_adiabaticity_metric(pulse: PulseProfile, n_grid=4001):
    """max_t |metric(t)| over the pulse window, by dense-grid search."""
    lo, hi = pulse.window
    ts = np.linspace(lo, hi, n_grid)
    vals = np.abs(adiabaticity_metric(pulse, ts))
    return float(vals.max())


def _hamiltonian_parts(params: SystemParams, pulse: PulseProfile):
    h0 = build_full(params, 0.0, delta=pulse.delta)
    return h0, DRIVE


def propagate_pulse(params: SystemParams, pulse: PulseProfile, tol=1e-10):
    """Time-ordered 16x16 propagator over the pulse window.

    tol is the target propagator accuracy; the solver runs at rtol=tol/1000
    (global error accumulation over the long window eats roughly that
    factor) so the unitarity defect stays below 10*tol with margin.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    h0, v = _hamiltonian_parts(params, pulse)

    def rhs(t, y):
        u = y.reshape(DIM, DIM)
        h = h0 + pulse.omega(t) * v
        return (-1j * (h @ u)).ravel()

    lo, hi = pulse.window
    sol = solve_ivp(rhs, (lo, hi), np.eye(DIM, dtype=complex).ravel(),
                    method="DOP853", rtol=tol * 1e-3, atol=tol * 1e-5)
    if not sol.success:
        raise IntegrationError(f"propagation failed: {sol.message}")
    return sol.y[:, -1].reshape(DIM, DIM)


def extract_logical_gate(u16) -> LogicalGate:
    """Logical 4x4 block (control |0>, orbital |g> in and out) with leakage."""
    block = u16[np.ix_(LOGICAL_INDICES, LOGICAL_INDICES)]
    return gate_from_block(block)


@dataclass(frozen=True)
class CphaseReport:
    """Diagonal phases and the controlled-phase combination of a gate.

    phi = phi00 - phi01 - phi10 + phi11 reduced to (-pi, pi];
    offdiag_norm = |chi| + |chi'| of the central block. Gates with
    offdiag_norm above 0.1 carry non_diagonal=True: the phases are then
    only formal.
    """

    phi: float
    offdiag_norm: float
    phases: tuple
    non_diagonal: bool


def wrap_angle(x):
    """Reduce an angle to (-pi, pi]."""
    return np.pi - (np.pi - x) % (2.0 * np.pi)


def cphase_report(gate: LogicalGate, leakage_limit=LEAKAGE_VALID_LIMIT):
    if gate.leakage > leakage_limit:
        raise ValueError(f"leakage {gate.leakage:.3e} above {leakage_limit:.0e}; "
                         "phases are not meaningful")
    u = gate.matrix
    phases = tuple(float(np.angle(u[i, i])) for i in range(4))
    phi = wrap_angle(phases[0] - phases[1] - phases[2] + phases[3])
    off = float(abs(u[1, 2]) + abs(u[2, 1]))
    return CphaseReport(phi=float(phi), offdiag_norm=off, phases=phases,
                        non_diagonal=off > 0.1)


@dataclass(frozen=True)
class TauScanResult:
    tau_star: float
    phi: float
    gate: LogicalGate
    entangling_power: float
    taus: np.ndarray
    phis: np.ndarray
    phis_unwrapped: np.ndarray
    leakages: np.ndarray
    offdiags: np.ndarray


class NoCrossingError(RuntimeError):
    """phi(tau) never reaches pi (mod 2 pi) in the scanned range."""

    def __init__(self, message, taus, phis, leakages):
        super().__init__(message)
        self.taus = taus
        self.phis = phis
        self.leakages = leakages


def _phi_at(params, pulse_template, tau, tol):
    gate = extract_logical_gate(
        propagate_pulse(params, pulse_template.replace(tau=tau), tol=tol))
    rep = cphase_report(gate)
    return rep.phi, gate, rep


def find_cphase_tau(params: SystemParams, pulse_template: PulseProfile,
                    tau_range, n_scan=17, phi_tol=1e-3, scan_tol=1e-8,
                    refine_tol=1e-9):
    """Scan pulse durations for phi = pi (mod 2 pi) and bisect the crossing.

    The scan is unwrapped for branch continuity; the first bracketed
    crossing is refined with brentq until |phi - pi| < phi_tol. Raises
    NoCrossingError (carrying the trace) when the range has no crossing.
    """
    lo, hi = tau_range
    taus = np.linspace(lo, hi, n_scan)
    phis, leaks, offs = [], [], []
    for tau in taus:
        phi, gate, rep = _phi_at(params, pulse_template, tau, scan_tol)
        phis.append(phi)
        leaks.append(gate.leakage)
        offs.append(rep.offdiag_norm)
    phis = np.array(phis)
    unwrapped = np.unwrap(phis)
    # distance to the nearest pi + 2 pi k, continuous within one branch
    resid = wrap_angle(unwrapped - np.pi)
    bracket = None
    for i in range(len(taus) - 1):
        if resid[i] == 0.0 or resid[i] * resid[i + 1] < 0.0:
            if abs(resid[i + 1] - resid[i]) < np.pi:  # same branch
                bracket = (taus[i], taus[i + 1])
                break
    if bracket is None:
        raise NoCrossingError("no phi = pi crossing in range", taus, phis,
                              np.array(leaks))

    def objective(tau):
        phi, _, _ = _phi_at(params, pulse_template, tau, scan_tol)
        return wrap_angle(phi - np.pi)

    tau_star = brentq(objective, *bracket, xtol=1e-3, rtol=1e-12)
    phi, gate, rep = _phi_at(params, pulse_template, tau_star, refine_tol)
    if abs(wrap_angle(phi - np.pi)) > phi_tol:
        raise NoCrossingError(
            f"refinement landed at phi={phi:.6f}, outside pi +- {phi_tol}",
            taus, phis, np.array(leaks))
    e_val = entangling_power_closed(gate.matrix) if gate.leakage < 1e-6 else np.nan
    return TauScanResult(tau_star=float(tau_star), phi=float(phi), gate=gate,
                         entangling_power=float(e_val), taus=taus, phis=phis,
                         phis_unwrapped=unwrapped, leakages=np.array(leaks),
                         offdiags=np.array(offs))


# ---------------------------------------------------------------------------
# eigenspectrum tracking

BASIS_LABELS = tuple(
    f"{'ge'[orb]}|{q}{c}{qp}>"
    for orb in (0, 1) for q in (0, 1) for c in (0, 1) for qp in (0, 1))


@dataclass(frozen=True)
class EigenspectrumResult:
    """Eigenvalue curves over a detuning-ratio grid, branch-continued.

    energies[i, b] is the b-th branch at ratios[i]; labels[b] names the
    computational-basis state the branch connects to at the largest ratio.
    ambiguous[i, b] marks points where the continuation overlap was not
    decisive, with the competing label in alt_labels.
    """

    ratios: np.ndarray
    energies: np.ndarray
    labels: tuple
    ambiguous: np.ndarray
    alt_labels: dict


def eigenspectrum(params: SystemParams, omega, ratios, ambiguity_overlap=0.25):
    """Instantaneous spectrum of build_full over a Delta/Omega grid.

    Branches are continued by maximal eigenvector overlap from the largest
    ratio downward, so each curve keeps the identity of its large-detuning
    computational-basis limit.
    """
    ratios = np.sort(np.asarray(ratios, dtype=float))
    n = len(ratios)
    energies = np.zeros((n, DIM))
    ambiguous = np.zeros((n, DIM), dtype=bool)
    alt_labels = {}

    # start from the most diagonal point: largest Delta/Omega
    h = build_full(params, omega, delta=ratios[-1] * omega)
    w, vecs = np.linalg.eigh(h)
    overlap = np.abs(vecs) ** 2  # [component, eigvec]
    row, col = linear_sum_assignment(-overlap.T)  # eig -> basis component
    branch_of_basis = {int(c): int(r) for r, c in zip(row, col)}
    order = [branch_of_basis[b] for b in range(DIM)]
    labels = tuple(BASIS_LABELS[b] for b in range(DIM))
    energies[-1] = w[order]
    prev = vecs

    for i in range(n - 2, -1, -1):
        h = build_full(params, omega, delta=ratios[i] * omega)
        w, vecs = np.linalg.eigh(h)
        ov = np.abs(dag(vecs) @ prev) ** 2  # [new, old]
        row, col = linear_sum_assignment(-ov)
        mapping = {int(o): int(nw) for nw, o in zip(row, col)}
        new_order = [mapping[o] for o in order]
        for b, nw in enumerate(new_order):
            competitors = np.delete(ov[:, order[b]], nw)
            if competitors.size and competitors.max() > ambiguity_overlap:
                ambiguous[i, b] = True
                rival = int(np.argsort(ov[:, order[b]])[-2])
                # rival's basis identity = whichever branch currently owns it
                owners = [labels[k] for k, v in enumerate(new_order) if v == rival]
                alt_labels[(i, b)] = owners[0] if owners else "?"
        order = new_order
        energies[i] = w[order]
        prev = vecs
    return EigenspectrumResult(ratios=ratios, energies=energies, labels=labels,
                               ambiguous=ambiguous, alt_labels=alt_labels)


def tracked_pair_gap(params: SystemParams, pulse: PulseProfile, n_steps=60):
    """Instantaneous splitting at pulse peak of the two eigenstates
    adiabatically connected to |100>|g> and |001>|g>."""
    targets = np.stack([basis_ket(0, 1, 0, 0), basis_ket(0, 0, 0, 1)], axis=1)
    h = build_full(params, 0.0, delta=pulse.delta)
    w, vecs = np.linalg.eigh(h)
    ov = np.abs(dag(vecs) @ targets) ** 2
    row, col = linear_sum_assignment(-ov)
    idx = [int(row[list(col).index(k)]) for k in range(2)]
    prev = vecs
    for om in np.linspace(0.0, pulse.omega0, n_steps)[1:]:
        h = build_full(params, om, delta=pulse.delta)
        w, vecs = np.linalg.eigh(h)
        ov = np.abs(dag(vecs) @ prev) ** 2
        row, col = linear_sum_assignment(-ov)
        mapping = {int(o): int(nw) for nw, o in zip(row, col)}
        idx = [mapping[i] for i in idx]
        prev = vecs
    return float(abs(w[idx[0]] - w[idx[1]]))


# ---------------------------------------------------------------------------
# interference diagnostics

@dataclass(frozen=True)
class InterferenceTrace:
    times: np.ndarray
    pop_100: np.ndarray
    pop_001: np.ndarray
    pop_other: np.ndarray
    final_100: float
    final_001: float


def interference_trace(params: SystemParams, pulse: PulseProfile,
                       amp_100, amp_001, n_times=4001, tol=1e-10):
    """Populations of |100>|g> and |001>|g> while the pulse runs.

    The initial state is amp_100 |100>|g> + amp_001 |001>|g>, normalized.
    """
    norm = np.hypot(abs(amp_100), abs(amp_001))
    if norm == 0.0:
        raise ValueError("initial amplitudes are both zero")
    psi0 = (amp_100 * basis_ket(0, 1, 0, 0) + amp_001 * basis_ket(0, 0, 0, 1)) / norm
    h0, v = _hamiltonian_parts(params, pulse)

    def rhs(t, y):
        return -1j * ((h0 + pulse.omega(t) * v) @ y)

    lo, hi = pulse.window
    times = np.linspace(lo, hi, n_times)
    sol = solve_ivp(rhs, (lo, hi), psi0, method="DOP853", t_eval=times,
                    rtol=tol * 1e-1, atol=tol * 1e-3)
    if not sol.success:
        raise IntegrationError(f"propagation failed: {sol.message}")
    i100 = flat_index(0, 1, 0, 0)
    i001 = flat_index(0, 0, 0, 1)
    p100 = np.abs(sol.y[i100, :]) ** 2
    p001 = np.abs(sol.y[i001, :]) ** 2
    other = 1.0 - p100 - p001
    return InterferenceTrace(times=times, pop_100=p100, pop_001=p001,
                             pop_other=other, final_100=float(p100[-1]),
                             final_001=float(p001[-1]))


def measure_oscillation_period(times, values, t_center=0.0, window=None):
    """Oscillation period from refined extrema spacing near t_center.

    window bounds the extremum search (defaults to the middle third of the
    trace). Returns the mean spacing between consecutive maxima and between
    consecutive minima; raises if fewer than two of either are found.
    """
    times = np.asarray(times)
    values = np.asarray(values)
    if window is None:
        span = times[-1] - times[0]
        window = span / 6.0
    mask = np.abs(times - t_center) <= window
    t, v = times[mask], values[mask]
    if len(t) < 5:
        raise ValueError("window too narrow for period measurement")
    dt = t[1] - t[0]
    maxima, minima = [], []
    for i in range(1, len(t) - 1):
        if v[i] > v[i - 1] and v[i] > v[i + 1]:
            a, b, c = v[i - 1], v[i], v[i + 1]
            maxima.append(t[i] + 0.5 * (a - c) / (a - 2 * b + c) * dt)
        elif v[i] < v[i - 1] and v[i] < v[i + 1]:
            a, b, c = v[i - 1], v[i], v[i + 1]
            minima.append(t[i] + 0.5 * (a - c) / (a - 2 * b + c) * dt)
    spacings = np.diff(maxima).tolist() + np.diff(minima).tolist()
    if not spacings:
        raise ValueError("no repeated extrema found in the window")
    return float(np.mean(spacings))


# ---------------------------------------------------------------------------
# detuning calibration for maximal entangling power

def calibrate_detuning(params: SystemParams, pulse_template: PulseProfile,
                       delta_range, step=0.01, from_low=True,
                       e_threshold=2e-3, scan_tol=1e-7,
                       leakage_limit=LEAKAGE_VALID_LIMIT):
    """First detuning in the range whose gate reaches maximal e(U).

    Scans delta in `step` increments (upward from the low edge when
    from_low, else downward) and returns the first value whose extracted
    gate is valid (leakage within limit) and whose entangling power lies
    within e_threshold of the 2/9 ceiling. Falls back to the argmax over
    the scan when no point qualifies. Returns (delta_star, e_value).
    """
    lo, hi = delta_range
    grid = np.arange(lo, hi + 0.5 * step, step)
    if not from_low:
        grid = grid[::-1]
    best = (None, -np.inf)
    for dl in grid:
        pulse = pulse_template.replace(delta=float(dl))
        gate = extract_logical_gate(propagate_pulse(params, pulse, tol=scan_tol))
        if gate.leakage > leakage_limit:
            continue
        e_val = entangling_power_closed(gate.matrix) if gate.leakage < 1e-6 \
            else np.nan
        if np.isnan(e_val):
            continue
        if e_val > MAX_ENTANGLING_POWER - e_threshold:
            return float(dl), float(e_val)
        if e_val > best[1]:
            best = (float(dl), float(e_val))
    if best[0] is None:
        raise ValueError("no valid gate found in the detuning range")
    return best
