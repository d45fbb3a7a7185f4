"""Row builders behind the command-line tables. Every number in a row comes
from a radial, angular or oracle call; nothing here is formatted."""
from __future__ import annotations

import math

import numpy as np

from . import oracle, radial
from .angular import RingParams, solve_angular
from .radial import ConstraintError, InadmissibleStateError
from .specfun import DomainError, PoleError

STATE_ERRORS = (InadmissibleStateError, DomainError, PoleError, ConstraintError, ZeroDivisionError)


def effective_l(l_index: int, D: int, ring: RingParams | None, Lam: float) -> float:
    """Integer l without a ring term; with one, the quantised polar l of state l_index."""
    if ring is None or ring.is_zero():
        return float(l_index)
    return solve_angular(ring, D, Lam, l_index).l


def _fd_levels(params, D, l, count, rmax_factor, grid_points):
    grid = oracle.Grid(0.0, rmax_factor / params.lam, grid_points)
    approx = oracle.radial_solve(radial.approximated_potential(params, D, l), grid, count, params.mu, params.hbar)
    exact = oracle.radial_solve(radial.exact_potential(params, D, l), grid, count, params.mu, params.hbar)
    return approx.eigenvalues, exact.eigenvalues


def spectrum_rows(
    params: radial.PotentialParams,
    D: int,
    n_max: int,
    l_max: int,
    numeric: bool = False,
    form: str = "corrected",
    ring: RingParams | None = None,
    Lam: float = 0.0,
    rmax_factor: float = 20.0,
    grid_points: int = 4000,
) -> list[dict]:
    """One row per (n, l), ordered by n and then l."""
    rows = []
    ringed = ring is not None and not ring.is_zero()
    for li in range(l_max + 1):
        try:
            l = effective_l(li, D, ring, Lam)
        except (DomainError, ValueError) as exc:
            for n in range(n_max + 1):
                rows.append(_row(n, li, math.nan, D, ringed, numeric, error=f"angular: {exc}"))
            continue
        num_a = num_e = None
        num_err = ""
        if numeric:
            try:
                num_a, num_e = _fd_levels(params, D, l, n_max + 1, rmax_factor, grid_points)
            except (oracle.ConvergenceError, ValueError) as exc:
                num_err = f"oracle: {exc}"
        try:
            flags = ";".join(radial.bound_state_window(params, D, l).failed()) or "ok"
        except DomainError as exc:
            flags = f"window: {exc}"
        for n in range(n_max + 1):
            row = _row(n, li, l, D, ringed, numeric)
            row["bound_flags"] = flags
            errors = []
            try:
                row["E_analytic"] = radial.energy_physical(n, l, D, params, form)
                radial.radial_eigenstate(n, l, D, params, form, normalization="closed")
            except STATE_ERRORS as exc:
                errors.append(f"{type(exc).__name__}: {exc}")
            if numeric:
                if num_a is not None:
                    row["E_numeric"] = float(num_a[n])
                    row["E_numeric_exact"] = float(num_e[n])
                    if not math.isnan(row["E_analytic"]):
                        row["rel_diff"] = abs(row["E_analytic"] - num_a[n]) / abs(num_a[n])
                else:
                    errors.append(num_err)
            row["error"] = " | ".join(errors)
            rows.append(row)
    rows.sort(key=lambda r: r["n"])  # stable: n-major, then l
    return rows


def _row(n, li, l, D, ringed, numeric, error=""):
    row = {"n": n}
    if ringed:
        row["n_theta"] = li
    row.update({"l": l, "D": D, "E_analytic": math.nan})
    if numeric:
        row.update({"E_numeric": math.nan, "E_numeric_exact": math.nan, "rel_diff": math.nan})
    row.update({"bound_flags": "", "error": error})
    return row


def wavefunction_table(
    params: radial.PotentialParams,
    D: int,
    n: int,
    l: float,
    samples: int = 2001,
    rmax_factor: float = 20.0,
    form: str = "corrected",
):
    """(header, r, g) for the normalised n-th radial state on [0, r_max]."""
    st = radial.radial_eigenstate(n, l, D, params, form, normalization="closed")
    rmax = radial.default_rmax(params.lam, st.sech_power, rmax_factor)
    r = np.linspace(0.0, rmax, samples)
    g = radial.radial_wavefunction(st, r)
    header = {
        "n": n, "l": l, "D": D, "energy": st.energy, "omega": st.omega,
        "jacobi_a": st.jacobi_a, "jacobi_b": st.jacobi_b, "r_max": rmax,
    }
    return header, r, g


OSCILLATOR_RMAX_LENGTHS = 12.0


def limiting_rows(
    omega: float,
    alpha: float,
    lam: float,
    D: int,
    n_max: int,
    l_max: int,
    mu: float = 1.0,
    hbar: float = 1.0,
    numeric: bool = False,
    grid_points: int = 4000,
) -> list[dict]:
    """tanh-potential levels at the limiting-map inputs next to the oscillator.

    error is |E_numeric_exact - shift - E_osc_numeric| with --numeric (both
    oracles on one grid of 12 oscillator lengths), otherwise
    |E_analytic - shift - E_osc|.
    """
    A, B, shift = radial.limiting_case_map(omega, alpha, lam, mu, hbar)
    p = radial.PotentialParams(A, B, lam, mu=mu, hbar=hbar)
    rows = []
    length = math.sqrt(hbar / (mu * omega))
    grid = oracle.Grid(0.0, OSCILLATOR_RMAX_LENGTHS * length, grid_points)
    for l in range(l_max + 1):
        if numeric:
            t = oracle.radial_solve(radial.exact_potential(p, D, l), grid, n_max + 1, mu, hbar).eigenvalues
            o = oracle.radial_solve(radial.oscillator_potential(omega, alpha, mu, hbar, D, l), grid, n_max + 1, mu, hbar).eigenvalues
        for n in range(n_max + 1):
            row = {"n": n, "l": l, "D": D, "A": A, "B": B, "shift": shift}
            E_osc = radial.oscillator_energy(n, omega, alpha, mu, hbar, D, l)
            try:
                E = radial.energy_physical(n, l, D, p)
                err = ""
            except DomainError as exc:
                E, err = math.nan, f"DomainError: {exc}"
            row.update({"E_analytic": E, "E_oscillator": E_osc})
            if numeric:
                row.update({"E_numeric_exact": float(t[n]), "E_osc_numeric": float(o[n]),
                            "abs_error": abs(float(t[n]) - shift - float(o[n]))})
            else:
                row["abs_error"] = abs(E - shift - E_osc)
            row["error"] = err
            rows.append(row)
    rows.sort(key=lambda r: r["n"])
    return rows
