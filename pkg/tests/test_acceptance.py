"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.  Every
tolerance is pinned here, not calibrated elsewhere.
"""

import math

import numpy as np

from hyperradial import (
    CLOSED_FORM,
    QUADRATURE,
    HyperDimension,
    PhysicalParams,
    RadialGrid,
    RadialState,
    StateFamily,
    default_time_step,
    energy_report,
    energy_scaling_table,
    fermion_trap_energy,
    fit_power_law,
    fit_window,
    gamma_ratio,
    gamma_ratio_asymptotic,
    make_state,
    propagate_free,
    raman_nath_slope,
    raman_nath_slope_closed,
    slope_scaling_table,
    u2_eigenstate_residual,
    unit_sphere_volume,
    v_q,
)

U0, U1, U2 = StateFamily.U0, StateFamily.U1, StateFamily.U2
PARAMS = PhysicalParams()
DIMS = (4, 5, 6, 9, 12, 30, 60, 150)
BETA_KAPPAS = (0.25, 1.0, 4.0)


def report(label: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, f"{label}: {detail}"


def measure_tdse_slope(state: RadialState, n_points: int = 4096) -> float:
    grid = RadialGrid.for_state(state, n_points)
    window = fit_window(state)
    dt = min(default_time_step(state, grid), window / 300.0)
    result = propagate_free(state, grid, dt)
    return result.measured_slope(window)


def test_criterion_01_closed_form_vs_quadrature():
    worst = 0.0
    for family in (U0, U1):
        for d in DIMS:
            state = make_state(family, d, PARAMS)
            closed = energy_report(state, CLOSED_FORM)
            quad = energy_report(state, QUADRATURE)
            for c, q in ((closed.t_r, quad.t_r), (closed.t_v, quad.t_v)):
                worst = max(worst, abs(q - c) / abs(c))
    for bk in BETA_KAPPAS:
        params = PhysicalParams(beta=bk)
        for d in DIMS:
            state = RadialState(family=U2, dim=HyperDimension(d), params=params)
            closed = energy_report(state, CLOSED_FORM)
            quad = energy_report(state, QUADRATURE)
            for c, q in ((closed.t_r, quad.t_r), (closed.t_v, quad.t_v)):
                worst = max(worst, abs(q - c) / abs(c))
    report(
        "criterion 1 (closed form vs quadrature)",
        worst <= 1e-8,
        f"max relative deviation {worst:.3e} over u0/u1/u2, D in {DIMS}, bk in {BETA_KAPPAS}",
    )


def test_criterion_02_thermodynamic_law():
    worst_u0 = 0.0
    worst_u1_margin = math.inf
    for n in range(2, 51):
        d = 3 * n
        total_u0 = energy_report(make_state(U0, d, PARAMS)).total
        worst_u0 = max(worst_u0, abs(total_u0 / (1.5 * n) - 1.0))
        total_u1 = energy_report(make_state(U1, d, PARAMS)).total
        worst_u1_margin = min(worst_u1_margin, 5.0 / d - abs(total_u1 / (0.5 * d) - 1.0))
    ok = worst_u0 <= 1e-12 and worst_u1_margin >= 0.0
    report(
        "criterion 2 (thermodynamic law)",
        ok,
        f"u0 max |T/(3N/2 eps) - 1| = {worst_u0:.2e}; "
        f"u1 stays inside 5/D with margin >= {worst_u1_margin:.3f}",
    )


def test_criterion_03_quadratic_enhancement():
    table = energy_scaling_table(U2, range(10, 101), PARAMS, component="t_v")
    t_v = lambda n: (3 * n - 1) * (3 * n - 3) / 4.0
    doubling = t_v(100) / t_v(50)
    ok = abs(table.fit_exponent - 2.0) <= 0.05 and doubling >= 3.9
    report(
        "criterion 3 (quadratic enhancement)",
        ok,
        f"T_V exponent {table.fit_exponent:.4f} (target 2.00 +- 0.05), "
        f"T_V(100)/T_V(50) = {doubling:.4f} (>= 3.9)",
    )


def test_criterion_04_eigenstate_residual():
    radii = np.geomspace(0.1, 10.0, 400)
    residual = u2_eigenstate_residual(PARAMS, radii)
    report(
        "criterion 4 (u2 zero-energy eigenstate)",
        residual <= 1e-8,
        f"finite-difference residual {residual:.3e} of max |u2''| over [0.1, 10]",
    )


def test_criterion_05_ehrenfest_raman_nath():
    cases = [
        (make_state(U0, 6, PARAMS), "u0 D=6"),
        (make_state(U1, 9, PARAMS), "u1 D=9"),
        (make_state(U2, 30, PARAMS), "u2 D=30"),
    ]
    details = []
    ok = True
    for state, label in cases:
        target = raman_nath_slope(state)
        err_ref = abs(measure_tdse_slope(state, 4096) / target - 1.0)
        err_fine = abs(measure_tdse_slope(state, 8192) / target - 1.0)
        shrink = err_ref / err_fine if err_fine > 0 else math.inf
        ok &= err_ref <= 0.01 and shrink >= 3.0
        details.append(f"{label}: err {err_ref:.2e}, refinement shrink {shrink:.1f}x")
    report("criterion 5 (Ehrenfest / Raman-Nath)", ok, "; ".join(details))


def test_criterion_06_slope_scaling():
    targets = {U0: (0.5, 0.03), U1: (0.5, 0.05), U2: (2.0, 0.02)}
    parts = []
    ok = True
    for family, (target, tol) in targets.items():
        table = slope_scaling_table(family, range(20, 201), PARAMS)
        within = abs(table.fit_exponent - target) <= tol
        ok &= within
        parts.append(
            f"{family.value} exponent {table.fit_exponent:.4f} "
            f"(target {target} +- {tol}{'' if within else ', exceeded'})"
        )
    # TDSE spot checks against the analytic slopes at three particle numbers
    spot_ns = (10, 20, 40)
    for family in (U0, U2):
        measured, analytic = [], []
        for n in spot_ns:
            state = make_state(family, 3 * n, PARAMS)
            measured.append(measure_tdse_slope(state))
            analytic.append(raman_nath_slope_closed(state))
        worst = max(abs(m / a - 1.0) for m, a in zip(measured, analytic))
        ok &= worst <= 0.02
        alpha, _ = fit_power_law(spot_ns, measured)
        parts.append(
            f"{family.value} TDSE spot checks off by <= {worst:.2e} "
            f"(measured 3-point alpha {alpha:.3f})"
        )
    report("criterion 6 (slope scaling)", ok, "; ".join(parts))


def test_criterion_07_asymptotic_gamma_ratios():
    shift_pairs = [(-0.5, 0.0), (0.5, 2.0)]
    at_300 = []
    monotone = True
    for b1, b2 in shift_pairs:
        errors = []
        for d in (30, 100, 300, 1000):
            exact = gamma_ratio(0.5 * d + b1, 0.5 * d + b2)
            errors.append(abs(gamma_ratio_asymptotic(0.5, d, b1, b2) / exact - 1.0))
        at_300.append(errors[2])
        monotone &= errors == sorted(errors, reverse=True)
    ok = all(err <= 0.01 for err in at_300) and monotone
    report(
        "criterion 7 (asymptotic gamma ratios)",
        ok,
        f"errors at D=300: {at_300[0]:.2%} and {at_300[1]:.2%} (<= 1%), "
        f"monotone improvement over D in (30, 100, 300, 1000): {monotone}",
    )


def test_criterion_08_unit_sphere_geometry():
    volumes = {d: unit_sphere_volume(HyperDimension(d)) for d in range(1, 21)}
    peak = max(volumes, key=volumes.get)
    decreasing = all(volumes[d] > volumes[d + 1] for d in range(5, 20))
    ok = peak == 5 and decreasing
    report(
        "criterion 8 (unit-sphere volume)",
        ok,
        f"argmax V_D = {peak} (expect 5), strictly decreasing for D in (5, 20]: {decreasing}",
    )


def test_criterion_09_sign_structure():
    radii = np.geomspace(1e-3, 1e3, 25)
    dims = sorted(set(np.geomspace(4, 3000, 40).astype(int)) | {4, 3000})
    positive = all(
        np.all(np.asarray(v_q(HyperDimension(d), PARAMS, radii)) > 0) for d in dims
    )
    zero = all(
        np.all(np.asarray(v_q(HyperDimension(d), PARAMS, radii)) == 0.0) for d in (1, 3)
    )
    negative = np.all(np.asarray(v_q(HyperDimension(2), PARAMS, radii)) < 0)
    ok = positive and zero and negative
    report(
        "criterion 9 (centrifugal sign structure)",
        ok,
        f"V_Q > 0 on {len(dims)} dimensions in [4, 3000]: {positive}; "
        f"zero at D in (1, 3): {zero}; negative at D=2: {bool(negative)}",
    )


def test_criterion_10_fermion_reference():
    exact = all(
        fermion_trap_energy(n, PARAMS).summed == fermion_trap_energy(n, PARAMS).closed
        for n in range(1, 1001)
    )
    report(
        "criterion 10 (fermion ladder)",
        exact,
        "summed and closed forms identical for N in 1..1000",
    )


def test_criterion_11_propagator_quality():
    # norm drift over 1e4 steps at the reference grid
    state = make_state(U0, 6, PARAMS)
    grid = RadialGrid.for_state(state)
    result = propagate_free(state, grid, n_steps=10_000, record_every=100)
    drift = float(np.max(np.abs(result.norm - result.norm[0])))

    # second order in time: Richardson against a dt/8 reference (D=3 keeps
    # the Hamiltonian potential-free so the dt error dominates round-off)
    state3 = make_state(U0, 3, PARAMS)
    grid3 = RadialGrid.for_state(state3, 1024)
    t_end = 0.2048
    p_at = {}
    for divider in (1, 2, 8):
        dt = 1.6e-3 / divider
        run = propagate_free(state3, grid3, dt, int(round(t_end / dt)), record_every=64)
        p_at[divider] = run.p_r_mean[-1]
    ratio = abs(p_at[1] - p_at[8]) / abs(p_at[2] - p_at[8])
    ok = drift <= 1e-6 and 3.0 <= ratio <= 5.0
    report(
        "criterion 11 (propagator quality)",
        ok,
        f"norm drift {drift:.2e} per 1e4 steps (<= 1e-6); "
        f"dt-halving error ratio {ratio:.2f} (expect ~4)",
    )
