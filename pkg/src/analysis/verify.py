"""
One-shot invariant suite behind the `verify` command.

Why this exists:
- Re-checks every numerical property the package relies on (double cover,
  representation property, frame asymmetry, exchange phases, exclusion
  parity, CG coefficients, canonical kets, frame limits) from a single
  seeded run.
- Each check yields a CheckResult instead of raising, so one failure does not
  hide the others.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Sequence

import numpy as np
import pandas as pd

from src.analysis.phase_sweep import phase_sweep
from src.errors import SpinStatsError
from src.geometry.frames import (
    bisecting_frames,
    bisecting_offset,
    limit_frames,
    pair_geometry,
    parallel_frames,
    relating_rotor,
)
from src.quantum.states import (
    StateVector,
    apply_rotation,
    canonical_from_helicity,
    canonical_ket,
    helicity_ket,
    inner_product,
    make_ket,
    phase_ratio,
    scale,
    terms_equal,
)
from src.quantum.states import norm as ket_norm
from src.quantum.twoparticle import enumerate_order_free, exchange, norm, permute, symmetrize
from src.spin.coupling import allowed_totals, clebsch_gordan, exclusion_report
from src.spin.rotor import (
    TWO_PI,
    HalfSpin,
    as_matrix,
    compose,
    from_axis_angle,
    random_rotor,
    random_unit_vector,
    rotate_vector,
)
from src.spin.wigner import dmatrix, little_d_matrix
from src.utils.config import Tolerances
from src.validation.checks import CheckResult, unitarity_deviation

logger = logging.getLogger(__name__)

SPIN_RANGE = [HalfSpin(t) for t in range(6)]
EXCLUSION_SPINS = [HalfSpin(t) for t in range(5)]
SPECIES = (("species", "x"),)

Check = Callable[[np.random.Generator, Tolerances], tuple[float, float]]


def _max(values: Sequence[float] | np.ndarray) -> float:
    return float(np.max(values)) if len(values) else 0.0


# ---------------------------------------------------------------------
# Rotor checks (return (max deviation, tolerance))
# ---------------------------------------------------------------------

def check_rotor_double_cover(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for _ in range(200):
        n = random_unit_vector(rng)
        theta = float(rng.uniform(-4 * math.pi, 4 * math.pi))
        a = from_axis_angle(n, theta + 2 * math.pi).as_array()
        b = from_axis_angle(n, theta).as_array()
        devs.append(np.max(np.abs(a + b)))
    return _max(devs), tol.double_cover


def check_rotor_homomorphism(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for _ in range(1000):
        a, b = random_rotor(rng), random_rotor(rng)
        v = rng.normal(size=3)
        devs.append(np.max(np.abs(rotate_vector(compose(a, b), v) - rotate_vector(a, rotate_vector(b, v)))))
    return _max(devs), tol.representation


def check_rotor_compose(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Unit norm is kept by compose, and compose is associative."""
    devs = []
    for _ in range(1000):
        a, b, c = random_rotor(rng), random_rotor(rng), random_rotor(rng)
        ab = compose(a, b)
        devs.append(abs(float(np.linalg.norm(ab.as_array())) - 1.0))
        left = compose(ab, c).as_array()
        right = compose(a, compose(b, c)).as_array()
        devs.append(np.max(np.abs(left - right)))
    return _max(devs), tol.double_cover


# ---------------------------------------------------------------------
# Wigner checks
# ---------------------------------------------------------------------

def check_dmatrix_double_cover(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        d = dmatrix(s, TWO_PI)
        devs.append(np.max(np.abs(d - s.exchange_sign * np.eye(s.multiplicity))))
        r = random_rotor(rng)
        devs.append(np.max(np.abs(dmatrix(s, -r) - s.exchange_sign * dmatrix(s, r))))
    return _max(devs), tol.double_cover


def check_dmatrix_representation(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for _ in range(500):
            a, b = random_rotor(rng), random_rotor(rng)
            devs.append(np.max(np.abs(dmatrix(s, compose(a, b)) - dmatrix(s, a) @ dmatrix(s, b))))
    return _max(devs), tol.representation


def check_dmatrix_unitarity(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for _ in range(50):
            d = dmatrix(s, random_rotor(rng))
            devs.append(unitarity_deviation(d))
            devs.append(abs(abs(np.linalg.det(d)) - 1.0))
    return _max(devs), tol.representation


def check_little_d_oracle(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for _ in range(20):
            beta = float(rng.uniform(0.0, math.pi))
            d = dmatrix(s, from_axis_angle([0.0, 1.0, 0.0], beta))
            devs.append(np.max(np.abs(d - little_d_matrix(s, beta))))
    return _max(devs), tol.representation


# ---------------------------------------------------------------------
# Frame checks
# ---------------------------------------------------------------------

def _frame_pairs(rng: np.random.Generator, count: int) -> list[tuple[np.ndarray, np.ndarray]]:
    pairs = []
    for i in range(count):
        v_a = random_unit_vector(rng)
        if i % 10 == 0:
            # Nearly coincident: |v_a - v_b| = 1e-8.
            axis = np.cross(v_a, random_unit_vector(rng))
            axis /= np.linalg.norm(axis)
            v_b = rotate_vector(from_axis_angle(axis, 1e-8), v_a)
        else:
            v_b = random_unit_vector(rng)
        pairs.append((v_a, v_b))
    return pairs


def check_frame_asymmetry(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for v_a, v_b in _frame_pairs(rng, 1000):
        b_a, b_b = bisecting_frames(v_a, v_b)
        devs.append(abs(float(np.dot(b_a.y, b_b.y)) + 1.0))
    return _max(devs), tol.frame


def check_relating_rotor(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for v_a, v_b in _frame_pairs(rng, 200):
        g = pair_geometry(v_a, v_b)
        r = relating_rotor(g, 1)
        b_a, b_b = bisecting_frames(v_a, v_b)
        devs.append(np.max(np.abs(rotate_vector(r, v_a) - v_b)))
        devs.append(np.max(np.abs(b_a.rotated(r).matrix() - b_b.matrix())))
        devs.append(np.max(np.abs(compose(r, r).as_array() - TWO_PI.as_array())))
    return _max(devs), tol.representation


def check_relating_rotor_senses(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """R_k(+pi) and R_k(-pi) are distinct rotors with the same SO(3) action."""
    devs = []
    for v_a, v_b in _frame_pairs(rng, 200):
        g = pair_geometry(v_a, v_b)
        plus, minus = relating_rotor(g, 1), relating_rotor(g, -1)
        # The two senses differ by a 2*pi turn, i.e. they are negatives.
        devs.append(0.0 if np.max(np.abs(plus.as_array() - minus.as_array())) > 1.0 else 1.0)
        devs.append(np.max(np.abs(as_matrix(plus) - as_matrix(minus))))
        devs.append(np.max(np.abs(rotate_vector(minus, v_a) - v_b)))
    return _max(devs), tol.representation


def check_bisecting_offset(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """One turn by theta about each particle's own y-axis takes parallel onto bisecting frames."""
    devs = []
    for _ in range(200):
        v_a, v_b = random_unit_vector(rng), random_unit_vector(rng)
        r_a, r_b = bisecting_offset(v_a, v_b)
        for par, bis, r in zip(parallel_frames(v_a, v_b), bisecting_frames(v_a, v_b), (r_a, r_b)):
            devs.append(np.max(np.abs(par.rotated(r).matrix() - bis.matrix())))
        devs.append(abs(r_a.w - r_b.w))
    return _max(devs), tol.representation


def check_limit_frames(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Coincident-limit frames agree with bisecting frames at a 1e-8 separation."""
    devs = []
    for _ in range(100):
        v = random_unit_vector(rng)
        hint = np.cross(v, random_unit_vector(rng))
        hint /= np.linalg.norm(hint)
        v_near = v + 1e-8 * np.cross(hint, v)
        v_near /= np.linalg.norm(v_near)
        near = bisecting_frames(v, v_near)
        limit = limit_frames(v, hint)
        for f_near, f_lim in zip(near, limit):
            devs.append(np.max(np.abs(f_near.matrix() - f_lim.matrix())))
    return _max(devs), 1e-6


# ---------------------------------------------------------------------
# State checks
# ---------------------------------------------------------------------

def check_state_representation(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for _ in range(20):
            m = s.components()[int(rng.integers(s.multiplicity))]
            v = make_ket(SPECIES, rng.normal(size=3), s, m, random_rotor(rng))
            a, b = random_rotor(rng), random_rotor(rng)
            lhs = apply_rotation(a, apply_rotation(b, v))
            rhs = apply_rotation(compose(a, b), v)
            devs.append(0.0 if terms_equal(lhs.terms, rhs.terms, atol=tol.representation) else 1.0)
            devs.append(abs(inner_product(lhs, lhs).real - 1.0))
    return _max(devs), tol.representation


def check_helicity(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for _ in range(10):
            p = rng.normal(size=3)
            r = random_rotor(rng)
            p_new = rotate_vector(r, p)
            for lam in s.components():
                moved = apply_rotation(r, helicity_ket(SPECIES, p, s, lam))
                for lam2 in s.components():
                    overlap = abs(inner_product(helicity_ket(SPECIES, p_new, s, lam2), moved))
                    devs.append(abs(overlap - (1.0 if lam2 == lam else 0.0)))
            m = s.components()[int(rng.integers(s.multiplicity))]
            same = terms_equal(
                canonical_from_helicity(SPECIES, p, s, m).terms,
                canonical_ket(SPECIES, p, s, m).terms,
                atol=tol.representation,
            )
            devs.append(0.0 if same else 1.0)
    return _max(devs), tol.representation


def check_canonical_form(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Equivalent descriptions of one ket store the same term map."""
    devs = []
    for s in SPIN_RANGE:
        for _ in range(20):
            m = s.components()[int(rng.integers(s.multiplicity))]
            p = rng.normal(size=3)
            r = random_rotor(rng)
            v = make_ket(SPECIES, p, s, m, r)
            # Listing order and sub-tolerance momentum noise do not matter.
            shuffled = StateVector.from_terms(reversed(v.terms))
            nudged = make_ket(SPECIES, p + 1e-13, s, m, r)
            devs.append(0.0 if (shuffled == v and nudged == v) else 1.0)
            # A 4*pi turn is the identity; a 2*pi turn is the (-1)^(2s) sign.
            four_pi = make_ket(SPECIES, p, s, m, compose(TWO_PI, compose(TWO_PI, r)))
            two_pi = make_ket(SPECIES, p, s, m, compose(TWO_PI, r))
            devs.append(0.0 if terms_equal(four_pi.terms, v.terms, atol=tol.double_cover) else 1.0)
            flipped = scale(v, s.exchange_sign)
            devs.append(0.0 if terms_equal(two_pi.terms, flipped.terms, atol=tol.double_cover) else 1.0)
    return _max(devs), 0.5


def check_phase_factors(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """phase_ratio between descriptions related by a turn about z is the D-matrix diagonal entry."""
    devs = []
    z_axis = [0.0, 0.0, 1.0]
    for s in SPIN_RANGE:
        for _ in range(20):
            i = int(rng.integers(s.multiplicity))
            m = s.components()[i]
            p = rng.normal(size=3)
            r = random_rotor(rng)
            turn = from_axis_angle(z_axis, float(rng.uniform(-2 * math.pi, 2 * math.pi)))
            old = make_ket(SPECIES, p, s, m, r)
            new = make_ket(SPECIES, p, s, m, compose(r, turn))
            devs.append(abs(phase_ratio(new, old) - dmatrix(s, turn)[i, i]))
            devs.append(abs(phase_ratio(apply_rotation(TWO_PI, old), old) - s.exchange_sign))
    return _max(devs), tol.representation


def check_symmetrize(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Unit norm, exact permutation symmetry, and exchange = permute without a labelling record."""
    devs = []
    for s in SPIN_RANGE:
        for _ in range(20):
            comps = s.components()
            shared = rng.normal(size=3)
            kets = []
            for _ in range(2):
                m = comps[int(rng.integers(s.multiplicity))]
                p = shared if rng.random() < 0.5 else rng.normal(size=3)
                kets.append(make_ket(SPECIES, p, s, m, random_rotor(rng)))
            t = symmetrize(kets[0], kets[1])
            devs.append(abs(norm(t) - 1.0))
            devs.append(abs(ket_norm(kets[0]) - 1.0))
            exact = permute(t) == t and exchange(t) == permute(t)
            devs.append(0.0 if exact else 1.0)
    return _max(devs), tol.representation


# ---------------------------------------------------------------------
# Coupling checks
# ---------------------------------------------------------------------

def _cg_matrix(s1: HalfSpin, s2: HalfSpin) -> np.ndarray:
    cols = [(m1, m2) for m1 in s1.components() for m2 in s2.components()]
    rows = [(S, M) for S in allowed_totals(s1, s2) for M in S.components()]
    out = np.zeros((len(rows), len(cols)))
    for i, (S, M) in enumerate(rows):
        for j, (m1, m2) in enumerate(cols):
            if m1.twice + m2.twice == M.twice:
                out[i, j] = clebsch_gordan(s1, m1, s2, m2, S, M)
    return out


def check_cg_orthogonality(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s1 in SPIN_RANGE:
        for s2 in SPIN_RANGE:
            c = _cg_matrix(s1, s2)
            devs.append(np.max(np.abs(c @ c.T - np.eye(c.shape[0]))))
    return _max(devs), tol.cg


def check_cg_swap_symmetry(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in SPIN_RANGE:
        for S in allowed_totals(s, s):
            sign = 1.0 if ((S.twice - 2 * s.twice) // 2) % 2 == 0 else -1.0
            for M in S.components():
                for m1 in s.components():
                    m2 = HalfSpin(M.twice - m1.twice)
                    if not m2.is_component_of(s):
                        continue
                    a = clebsch_gordan(s, m1, s, m2, S, M)
                    b = clebsch_gordan(s, m2, s, m1, S, M)
                    devs.append(abs(a - sign * b))
    return _max(devs), tol.cg


def _ladder(s: HalfSpin) -> tuple[np.ndarray, np.ndarray]:
    """J_z and J_- in the m = s..-s basis (Condon-Shortley phases)."""
    ms = [c.value for c in s.components()]
    jz = np.diag(ms)
    lower = np.zeros((s.multiplicity, s.multiplicity))
    for i, m in enumerate(ms[:-1]):
        lower[i + 1, i] = math.sqrt(s.value * (s.value + 1) - m * (m - 1))
    return jz, lower


def check_cg_total_spin(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Coefficients agree with eigenvectors of the coupled J^2."""
    devs = []
    small = SPIN_RANGE[:4]
    for s1 in small:
        for s2 in small:
            z1, l1 = _ladder(s1)
            z2, l2 = _ladder(s2)
            e1, e2 = np.eye(s1.multiplicity), np.eye(s2.multiplicity)
            jz = np.kron(z1, e2) + np.kron(e1, z2)
            lower = np.kron(l1, e2) + np.kron(e1, l2)
            j_sq = lower @ lower.T + jz @ jz + jz
            pairs = [(m1, m2) for m1 in s1.components() for m2 in s2.components()]
            for S in allowed_totals(s1, s2):
                idx = [i for i, (m1, m2) in enumerate(pairs) if m1.twice + m2.twice == S.twice]
                w, vecs = np.linalg.eigh(j_sq[np.ix_(idx, idx)])
                k = int(np.argmin(np.abs(w - S.value * (S.value + 1))))
                state = np.zeros(len(pairs))
                state[idx] = vecs[:, k]
                ref = pairs.index((s1, HalfSpin(S.twice - s1.twice)))
                state *= np.sign(state[ref])
                for M in S.components():
                    for i, (m1, m2) in enumerate(pairs):
                        expected = (
                            clebsch_gordan(s1, m1, s2, m2, S, M) if m1.twice + m2.twice == M.twice else 0.0
                        )
                        devs.append(abs(state[i] - expected))
                    if M.twice > -S.twice:
                        state = lower @ state / math.sqrt((S.value + M.value) * (S.value - M.value + 1))
    return _max(devs), 1e-10


def check_exclusion_parity(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    devs = []
    for s in EXCLUSION_SPINS:
        df = exclusion_report(SPECIES, random_unit_vector(rng), s, random_rotor(rng), tol=tol.exclusion)
        for S, value in zip(df["S"], df["norm"]):
            odd = HalfSpin.parse(S).twice % 4 == 2
            devs.append(value if odd else abs(value - 1.0))
    return _max(devs), tol.exclusion


def check_exclusion_allowed(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    """Every even S has a unit-norm state and is reported allowed; odd S is reported excluded."""
    devs = []
    for s in EXCLUSION_SPINS:
        for sign in (1, -1):
            df = exclusion_report(SPECIES, random_unit_vector(rng), s, random_rotor(rng), sign, tol=tol.exclusion)
            totals = [HalfSpin.parse(S) for S in df["S"]]
            devs.append(0.0 if [S.twice for S in totals] == list(range(0, 2 * s.twice + 1, 2)) else 1.0)
            for S, value, status in zip(totals, df["norm"], df["status"]):
                even = S.twice % 4 == 0
                if even:
                    devs.append(abs(value - 1.0))
                devs.append(0.0 if status == ("allowed" if even else "excluded") else 1.0)
    return _max(devs), tol.exclusion


def check_order_free(rng: np.random.Generator, tol: Tolerances) -> tuple[float, float]:
    result = enumerate_order_free(2, 2)
    ok = result.count == 3 and result.multisets == ((2, 0), (1, 1), (0, 2)) and result.ordered_count == 4
    return (0.0 if ok else 1.0), 0.5


CHECKS: list[tuple[str, Check]] = [
    ("rotor_double_cover", check_rotor_double_cover),
    ("rotor_homomorphism", check_rotor_homomorphism),
    ("rotor_compose", check_rotor_compose),
    ("dmatrix_double_cover", check_dmatrix_double_cover),
    ("dmatrix_representation", check_dmatrix_representation),
    ("dmatrix_unitarity", check_dmatrix_unitarity),
    ("little_d_oracle", check_little_d_oracle),
    ("frame_y_asymmetry", check_frame_asymmetry),
    ("relating_rotor", check_relating_rotor),
    ("relating_rotor_senses", check_relating_rotor_senses),
    ("bisecting_offset", check_bisecting_offset),
    ("limit_frames", check_limit_frames),
    ("state_representation", check_state_representation),
    ("helicity", check_helicity),
    ("canonical_form", check_canonical_form),
    ("phase_factors", check_phase_factors),
    ("symmetrize", check_symmetrize),
    ("cg_orthogonality", check_cg_orthogonality),
    ("cg_swap_symmetry", check_cg_swap_symmetry),
    ("cg_total_spin", check_cg_total_spin),
    ("exclusion_parity", check_exclusion_parity),
    ("exclusion_allowed", check_exclusion_allowed),
    ("order_free", check_order_free),
]


def _run(name: str, fn: Check, rng: np.random.Generator, tol: Tolerances) -> CheckResult:
    try:
        dev, limit = fn(rng, tol)
    except SpinStatsError as exc:
        logger.warning("verify: %s raised %s", name, exc)
        return CheckResult(name, False, float("inf"), str(exc))
    return CheckResult(name, bool(dev <= limit), dev, f"limit {limit:.0e}")


def run_checks(seed: int, trials: int, tol: Tolerances, spins: Sequence[HalfSpin] = SPIN_RANGE) -> list[CheckResult]:
    """Run every check; generators are derived from (seed, check index)."""
    results = []
    for i, (name, fn) in enumerate(CHECKS):
        results.append(_run(name, fn, np.random.default_rng([seed, 1000 + i]), tol))
        logger.info("verify: %s -> %s", name, "ok" if results[-1].ok else "FAILED")

    try:
        sweep = phase_sweep(spins, trials, seed, None, tol.exchange)
    except SpinStatsError as exc:
        logger.warning("verify: phase sweep raised %s", exc)
        results.append(CheckResult("exchange_phase", False, float("inf"), str(exc)))
    else:
        for construction in ("labeled", "symmetric"):
            part = sweep[sweep["construction"] == construction]
            dev = float(part["max_dev"].max())
            results.append(
                CheckResult(f"exchange_{construction}", dev <= tol.exchange, dev, f"limit {tol.exchange:.0e}")
            )
        perm_ok = bool(sweep["permutation_ok"].all())
        results.append(CheckResult("permutation_eigenvalue", perm_ok, 0.0 if perm_ok else 1.0))
    return results


def results_table(results: Sequence[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"name": r.name, "ok": r.ok, "max_dev": r.max_dev, "message": r.message} for r in results],
        columns=["name", "ok", "max_dev", "message"],
    )
