"""Orchestration: per-k estimation across variants, error budgets,
value reconstruction, delta gross margin, resource reports and the
experiment harness.

All artifacts (JSON/CSV) are deterministic under a fixed seed: outputs
carry the seed and no timestamps.
"""

import csv
import json
import math
import os
from dataclasses import dataclass, field, asdict

import numpy as np

from . import classical, encoding, inner, qae, qhp
from .classical import DEFAULT_PARAMS, PolyCoeffs, SigmoidParams
from .encoding import boe_width, normalize_affine, normalize_sqrt, validate_raw
from .errors import AssumptionError
from .sim import RngStream

QUANTUM_VARIANTS = ("a", "b", "c", "d")
ALL_VARIANTS = QUANTUM_VARIANTS + (
    "classical_exact", "classical_poly", "classical_sampling")


@dataclass
class ContractSpec:
    params: SigmoidParams
    asp: float
    season_normal: np.ndarray = None


@dataclass
class VariantConfig:
    variant: str
    K: int = 2
    eta: float = 0.0
    epsilon: float = 0.05        # target relative error on V
    beta: float = 0.9            # overall confidence
    s: int = 1                   # BOE split level (variant d)
    style: str = "no_mid_reset"  # QHP style for variants a/b
    engine: str = "iqae"         # QAE engine for variants c/d
    eval_qubits: int = 6
    medians: int = 1
    shots: int = 100             # IQAE shots per round / canonical per run
    fit_mode: str = "taylor"
    fit_domain: tuple = None
    seed: int = 0
    forced_epsilon_k: float = None

    def __post_init__(self):
        if self.variant not in ALL_VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")

    def qae_config(self):
        return qae.QaeConfig(engine=self.engine, m=self.eval_qubits,
                             medians=self.medians, shots=self.shots)


@dataclass
class ErrorBudget:
    epsilon_k: dict
    alpha_k: dict
    weights: dict
    skipped: list


@dataclass
class RunReport:
    variant: str
    seed: int
    V: float
    v_star: float = None        # classical polynomial value
    v_exact: float = None       # exact sigmoid value when computable
    per_k: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def rel_error_vs_star(self):
        if self.v_star in (None, 0.0):
            return None
        return abs(self.V - self.v_star) / abs(self.v_star)

    def rel_error_vs_exact(self):
        if self.v_exact in (None, 0.0):
            return None
        return abs(self.V - self.v_exact) / abs(self.v_exact)

    def to_dict(self):
        return {
            "variant": self.variant,
            "seed": self.seed,
            "V": self.V,
            "v_star": self.v_star,
            "v_exact": self.v_exact,
            "rel_error_vs_star": self.rel_error_vs_star(),
            "rel_error_vs_exact": self.rel_error_vs_exact(),
            "per_k": self.per_k,
            "config": self.config,
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def allocate_budget(coeffs, rho_T, epsilon, beta, K, quadratic=False):
    """Per-k accuracy eps_k = eps rho_T^{k-1} K^{-1} |b_k|^{-1} and default
    confidences alpha_k = (K-1+beta)/K.

    quadratic=True applies the sqrt-encoding scaling rho^{2(k-1)}.
    """
    b = np.asarray(coeffs.b, dtype=float)
    if np.all(b == 0.0):
        raise ValueError("all polynomial coefficients are zero")
    epsilon_k = {}
    skipped = []
    alpha = (K - 1 + beta) / K
    for k in range(K + 1):
        bk = b[k] if k < b.size else 0.0
        if bk == 0.0:
            skipped.append(k)
            continue
        power = 2 * (k - 1) if quadratic else (k - 1)
        epsilon_k[k] = epsilon * rho_T**power / (K * abs(bk))
    return ErrorBudget(epsilon_k=epsilon_k,
                       alpha_k={k: alpha for k in epsilon_k},
                       weights={k: 1.0 / K for k in epsilon_k},
                       skipped=skipped)


def constant_term_y0(series_E):
    """y_0 = sum_j E_j (classical); y'_0 = rho_E^{-1} y_0 = sum_j E'_j."""
    y0 = float(np.sum(series_E.values))
    return y0, y0 / series_E.rho


def _estimate_power(config, k, series_T, series_E, sqrtT, sqrtE,
                    eps_k, alpha_k, rng):
    variant = config.variant
    if variant == "a":
        return inner.estimate_yk_swap(series_T, series_E, k, eps_k, alpha_k, rng)
    if variant == "b":
        return inner.estimate_yk_variant_ab(series_T, series_E, k, config.style,
                                            eps_k, alpha_k, rng)
    if variant == "c":
        return qae.estimate_yk_variant_c(series_T, series_E, k, eps_k, alpha_k,
                                         config.qae_config(), rng)
    if variant == "d":
        return qae.estimate_ytilde_variant_d(sqrtT, sqrtE, k, config.s, eps_k,
                                             alpha_k, config.qae_config(), rng)
    raise ValueError(f"no quantum estimator for variant {variant!r}")


def _per_k_resources(config, k, n):
    if config.variant == "a":
        return {"width": qhp.width_formula(k, "mid_reset", True, n),
                "depth_bound": qhp.depth_bound(k, "mid_reset", True, n, n)}
    if config.variant == "b":
        return {"width": qhp.width_formula(k, config.style, False, n),
                "depth_bound": qhp.depth_bound(k, config.style, False, n, n)}
    if config.variant == "c":
        return {"width": k * n + 1, "depth_bound": (k + 1) * n + k + 1}
    if config.variant == "d":
        w = boe_width(1 << n, config.s)
        return {"width": (k + 1) * w + 2,
                "depth_bound": None}
    return {}


def evaluate(config, rawT, rawE, contract=None, coeffs=None):
    """Estimate V = sum_k b_k y'_k for the requested variant."""
    t = validate_raw(rawT)
    e = validate_raw(rawE)
    params = contract.params if contract is not None else DEFAULT_PARAMS
    if coeffs is None:
        coeffs = classical.fit_polynomial(params, config.eta, config.K,
                                          config.fit_mode, config.fit_domain)

    try:
        v_exact = classical.exact_value(t, e, params)
    except ValueError:
        v_exact = None
    v_star = classical.classical_poly_value(t, e, coeffs)

    base = {"K": config.K, "eta": config.eta, "epsilon": config.epsilon,
            "beta": config.beta, "variant": config.variant,
            "fit_mode": coeffs.fit_mode, "b": [float(x) for x in coeffs.b]}

    if config.variant == "classical_exact":
        return RunReport(variant=config.variant, seed=config.seed, V=v_exact,
                         v_star=v_star, v_exact=v_exact, config=base)
    if config.variant == "classical_poly":
        return RunReport(variant=config.variant, seed=config.seed, V=v_star,
                         v_star=v_star, v_exact=v_exact, config=base)

    rng = RngStream(config.seed)
    streams = rng.split(config.K + 1)

    if config.variant == "classical_sampling":
        total = 0.0
        per_k = []
        b = coeffs.b
        for k in range(config.K + 1):
            if b[k] == 0.0:
                continue
            if k == 0:
                y_prime = float(np.sum(e))
                per_k.append({"k": 0, "y_prime_hat": y_prime, "queries": 0,
                              "method": "classical"})
            else:
                eps_k = config.forced_epsilon_k or config.epsilon
                alpha_k = (config.K - 1 + config.beta) / config.K
                y_prime, queries = classical.estimate_yk_sampling(
                    t, e, config.eta, k, eps_k, alpha_k, streams[k])
                per_k.append({"k": k, "y_prime_hat": y_prime, "queries": queries,
                              "method": "sampling"})
            total += float(b[k]) * per_k[-1]["y_prime_hat"]
        return RunReport(variant=config.variant, seed=config.seed, V=total,
                         v_star=v_star, v_exact=v_exact, per_k=per_k, config=base)

    # quantum variants
    series_T = normalize_affine(t, config.eta)
    series_E = normalize_affine(e, 0.0)
    sqrtT = sqrtE = None
    if config.variant == "d":
        sqrtT = normalize_sqrt(t, config.eta)
        sqrtE = normalize_sqrt(e, 0.0)
        budget = allocate_budget(coeffs, sqrtT.rho, config.epsilon, config.beta,
                                 config.K, quadratic=True)
    else:
        budget = allocate_budget(coeffs, series_T.rho, config.epsilon,
                                 config.beta, config.K)

    n = series_T.n_qubits
    per_k = []
    total = 0.0
    tasks = []
    for k in range(config.K + 1):
        if k in budget.skipped:
            continue
        bk = float(coeffs.b[k])
        if k == 0:
            _y0, y0_prime = constant_term_y0(series_E)
            per_k.append({"k": 0, "y_hat": None, "y_prime_hat": y0_prime,
                          "epsilon_k": 0.0, "alpha_k": 1.0, "cost": 0,
                          "method": "classical"})
            total += bk * y0_prime
            continue
        eps_k = config.forced_epsilon_k or budget.epsilon_k[k]
        tasks.append((k, bk, eps_k, budget.alpha_k[k]))

    def worker(task):
        k, _bk, eps_k, alpha_k = task
        return _estimate_power(config, k, series_T, series_E, sqrtT, sqrtE,
                               eps_k, alpha_k, streams[k])

    threads = max(1, int(os.environ.get("QSIM_THREADS", "1")))
    if threads > 1 and len(tasks) > 1:
        # each power has its own pre-split stream, so results are identical
        # to the serial order regardless of scheduling
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            estimates = list(pool.map(worker, tasks))
    else:
        estimates = [worker(t) for t in tasks]

    for (k, bk, eps_k, alpha_k), est in zip(tasks, estimates):
        row = {"k": k, "y_hat": est.y_hat, "y_prime_hat": est.y_prime_hat,
               "epsilon_k": eps_k, "alpha_k": alpha_k,
               "cost": est.shots_used, "method": est.method}
        row.update(_per_k_resources(config, k, n))
        per_k.append(row)
        total += bk * est.y_prime_hat

    return RunReport(variant=config.variant, seed=config.seed, V=total,
                     v_star=v_star, v_exact=v_exact, per_k=per_k, config=base)


def conversion_ratio_rk(v, rho_T, rho_E, k, quadratic=False):
    """r_k = |v| rho_T^k rho_E (or the sqrt-encoding analogue)."""
    if quadratic:
        return abs(v) * rho_T ** (2 * k) * rho_E**2
    return abs(v) * rho_T**k * rho_E


def delta_gross_margin(config, rawT, contract, rawE):
    """Delta GM = sum_j (f(T'_j) - f(tau'_j)) (asp - E'_j).

    Decomposed into four positive bilinear evaluations: the asp part uses
    a constant price series, and the combination is classical.
    """
    if contract.season_normal is None:
        raise ValueError("contract has no season-normal series")
    tau = validate_raw(contract.season_normal)
    e = validate_raw(rawE)
    asp_series = np.full_like(e, float(contract.asp))
    if contract.asp <= 0 or np.any(e <= 0):
        raise AssumptionError("asp and price series must be positive")

    pieces = []
    for i, (tt, ee) in enumerate([(rawT, asp_series), (rawT, e),
                                  (tau, asp_series), (tau, e)]):
        sub = VariantConfig(**{**asdict(config), "seed": config.seed + i,
                               "fit_domain": config.fit_domain})
        pieces.append(evaluate(sub, tt, ee, contract=contract).V)
    return (pieces[0] - pieces[1]) - (pieces[2] - pieces[3])


def resource_report(config, N, K=None, s=None, epsilon=None, coeffs=None):
    """Closed-form width/depth/sample entries per power k.

    Exact values where a closed formula exists for our constructions;
    symbolic strings otherwise.  Since no data series is attached,
    epsilon_k entries are reported at unit normalization (rho = 1).
    """
    K = K if K is not None else config.K
    s = s if s is not None else config.s
    epsilon = epsilon if epsilon is not None else config.epsilon
    n = int(math.log2(N))
    if (1 << n) != N:
        raise ValueError("N must be a power of two")
    if coeffs is None:
        coeffs = classical.fit_polynomial(DEFAULT_PARAMS, config.eta, K, "taylor")
    variant = config.variant
    rows = []
    for k in range(1, K + 1):
        bk = float(coeffs.b[k])
        row = {"k": k, "b_k": bk}
        if bk != 0.0:
            row["epsilon_k_unit_rho"] = epsilon / (K * abs(bk))
            row["epsilon_k_formula"] = "epsilon*rho_T^(k-1)/(K*|b_k|)"
        if variant == "a":
            row["width"] = 2 * n
            row["width_with_ancilla"] = qhp.width_formula(k, "mid_reset", True, n)
            row["depth_bound"] = qhp.depth_bound(k, "mid_reset", True, n, n)
            row["samples"] = "O(rho_E^2 rho_T^2k y'_k^-2 eps^-2)"
        elif variant == "b":
            row["width"] = k * n
            row["depth_bound"] = qhp.depth_bound(k, "no_mid_reset", False, n, n)
            row["samples"] = "O(rho_E^2 rho_T^2k y'_k^-2 eps^-2)"
        elif variant == "c":
            row["width"] = k * n + 1
            row["depth"] = "2*C_load + O_k(lg N)"
            row["oracle_complexity"] = "O(rho_E rho_T^k y'_k^-1 eps^-1)"
            row["samples"] = "O_alpha(1)"
            c = max(2, k * n)
            row["mcx_decomposed"] = {"controls": k * n, "ancillas": max(0, c - 2),
                                     "toffolis": 2 * c - 3}
        elif variant == "d":
            w = boe_width(N, s)
            row["boe_width"] = w
            row["boe_depth"] = (1 << s) + (n * n - n - s * s + s) // 2 + 1
            row["width"] = (k + 1) * w + 2
            row["oracle_complexity"] = "O(rho~_E rho~_T^k y~'_k^-1 eps^-1)"
            row["samples"] = "O_alpha(1)"
        elif variant == "classical_sampling":
            row["queries"] = (classical.sampling_group_count(config.beta)
                              * classical.sampling_group_size(epsilon))
            row["samples"] = "O(eps^-2 lg(1/(1-alpha)))"
        else:
            row["note"] = "direct classical evaluation, O(N) per value"
        rows.append(row)
    return {"variant": variant, "N": N, "K": K, "s": s, "epsilon": epsilon,
            "rows": rows}


# ---------------------------------------------------------------------------
# Experiment harness
# ---------------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.12g}"
    return x


def _write_sidecar(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def _pair_with_overlap(p):
    """Two positive 2-vectors with inner product p."""
    phi = 0.5 * math.asin(p)
    return [math.cos(phi), math.sin(phi)], [math.sin(phi), math.cos(phi)]


def run_experiment(name, config, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    handlers = {
        "compare_inner": _experiment_compare_inner,
        "error_scaling_k": _experiment_error_scaling_k,
        "qae_vs_classical": _experiment_qae_vs_classical,
        "end_to_end": _experiment_end_to_end,
        "resource_table": _experiment_resource_table,
    }
    if name not in handlers:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(handlers)}")
    return handlers[name](dict(config), out_dir)


def _experiment_compare_inner(config, out_dir):
    seed = int(config.setdefault("seed", 0))
    shots = int(config.setdefault("shots", 10000))
    repeats = int(config.setdefault("repeats", 100))
    ps = config.setdefault("p_values", [0.072, 0.767])
    rng = RngStream(seed)
    rows = []
    summary = {}
    for p in ps:
        v0, v1 = _pair_with_overlap(p)
        ser_a = normalize_affine(v0, 0.0)
        ser_b = normalize_affine(v1, 0.0)
        for method in ("swap", "ancilla_free"):
            estimates = []
            for rep in range(repeats):
                stream = rng.child()
                if method == "swap":
                    est = inner.estimate_yk_swap(ser_a, ser_b, 1, 0.05, 0.9,
                                                 stream, shots=shots)
                else:
                    est = inner.estimate_yk_variant_ab(ser_a, ser_b, 1,
                                                       "no_mid_reset", 0.05,
                                                       0.9, stream, shots=shots)
                estimates.append(est.y_hat)
                rows.append([method, p, rep, est.y_hat])
            summary[f"var_{method}_p{p}"] = float(np.var(estimates))
            summary[f"mean_{method}_p{p}"] = float(np.mean(estimates))
    for p in ps:
        summary[f"variance_ratio_p{p}"] = (summary[f"var_swap_p{p}"]
                                           / summary[f"var_ancilla_free_p{p}"])
    _write_csv(os.path.join(out_dir, "compare_inner.csv"),
               ["method", "p", "repeat", "estimate"], rows)
    _write_sidecar(os.path.join(out_dir, "compare_inner.json"),
                   {"experiment": "compare_inner", "config": config,
                    "summary": summary})
    return summary


def _base_fixture(N):
    """Deterministic positive fixture obtained by tiling a base block."""
    base_t = np.array([12.0, 17.0, 23.0, 28.0])
    base_e = np.array([30.0, 24.0, 36.0, 28.0])
    reps = N // 4
    return np.tile(base_t, reps), np.tile(base_e, reps)


def _experiment_error_scaling_k(config, out_dir):
    seed = int(config.setdefault("seed", 0))
    Ns = config.setdefault("N_values", [4, 8, 16, 32])
    ks = config.setdefault("k_values", [1, 2])
    repeats = int(config.setdefault("repeats", 20))
    eps0 = float(config.setdefault("epsilon0", 0.1))
    eta = float(config.setdefault("eta", 0.0))
    rng = RngStream(seed)
    rows = []
    summary = {"ratios": {}}
    qcfg = qae.QaeConfig(engine="iqae", shots=int(config.setdefault("shots", 100)))
    for k in ks:
        means = {}
        for N in Ns:
            t, e = _base_fixture(N)
            ser_t = normalize_affine(t, eta)
            ser_e = normalize_affine(e, 0.0)
            y_exact = float(np.sum(ser_e.values * ser_t.values**k))
            y_prime_exact = y_exact / (ser_t.rho**k * ser_e.rho)
            eps_k = eps0 * N ** (-(k - 1) / 2.0)
            errs = []
            for rep in range(repeats):
                est = qae.estimate_yk_variant_c(ser_t, ser_e, k, eps_k, 0.9,
                                                qcfg, rng.child())
                rel = abs(est.y_prime_hat - y_prime_exact) / abs(y_prime_exact)
                errs.append(rel)
                rows.append([k, N, rep, eps_k, est.y_hat, y_exact, rel])
            means[N] = float(np.mean(errs))
        ratio = max(means.values()) / min(means.values())
        summary[f"k{k}_mean_rel_err"] = means
        summary["ratios"][f"k{k}"] = ratio
    _write_csv(os.path.join(out_dir, "error_scaling_k.csv"),
               ["k", "N", "repeat", "epsilon_k", "y_hat", "y_exact", "rel_error"],
               rows)
    _write_sidecar(os.path.join(out_dir, "error_scaling_k.json"),
                   {"experiment": "error_scaling_k", "config": config,
                    "summary": summary})
    return summary


def _experiment_qae_vs_classical(config, out_dir):
    seed = int(config.setdefault("seed", 0))
    k = int(config.setdefault("k", 2))
    repeats = int(config.setdefault("repeats", 12))
    epsilons = config.setdefault(
        "epsilons", [0.2, 0.141, 0.1, 0.0707, 0.05, 0.0354, 0.025, 0.0177])
    eta = float(config.setdefault("eta", 0.0))
    rng = RngStream(seed)
    t, e = _base_fixture(4)
    ser_t = normalize_affine(t, eta)
    ser_e = normalize_affine(e, 0.0)
    y_exact = float(np.sum(ser_e.values * ser_t.values**k))
    y_prime_exact = y_exact / (ser_t.rho**k * ser_e.rho)
    qcfg = qae.QaeConfig(engine="iqae", shots=int(config.setdefault("shots", 100)))

    rows = []
    curves = {"iqae": [], "classical": []}
    for eps in epsilons:
        errs_q, calls_q, errs_c, calls_c = [], [], [], []
        for rep in range(repeats):
            est = qae.estimate_yk_variant_c(ser_t, ser_e, k, eps, 0.9, qcfg,
                                            rng.child())
            errs_q.append(abs(est.y_prime_hat - y_prime_exact) / y_prime_exact)
            calls_q.append(est.shots_used)
            rows.append(["iqae", eps, rep, est.shots_used, errs_q[-1]])
            val, queries = classical.estimate_yk_sampling(t, e, eta, k, eps, 0.9,
                                                          rng.child())
            errs_c.append(abs(val - y_prime_exact) / y_prime_exact)
            calls_c.append(queries)
            rows.append(["classical", eps, rep, queries, errs_c[-1]])
        curves["iqae"].append((float(np.mean(calls_q)), float(np.mean(errs_q))))
        curves["classical"].append((float(np.mean(calls_c)), float(np.mean(errs_c))))

    slopes = {}
    for method, pts in curves.items():
        x = np.log10([p[0] for p in pts])
        y = np.log10([max(p[1], 1e-12) for p in pts])
        slopes[method] = float(np.polyfit(x, y, 1)[0])
    _write_csv(os.path.join(out_dir, "qae_vs_classical.csv"),
               ["method", "epsilon", "repeat", "cost", "rel_error"], rows)
    summary = {"slopes": slopes, "curves": curves}
    _write_sidecar(os.path.join(out_dir, "qae_vs_classical.json"),
                   {"experiment": "qae_vs_classical", "config": config,
                    "summary": summary})
    return summary


def _experiment_end_to_end(config, out_dir):
    seeds = config.setdefault("seeds", [0, 1, 2, 3, 4])
    K = int(config.setdefault("K", 3))
    variant = config.setdefault("variant", "c")
    forced = config.setdefault("forced_epsilon_k", 0.04)
    eta = float(config.setdefault("eta", 0.0))
    shots = int(config.setdefault("shots", 100))
    t = np.asarray(config.setdefault("rawT", [5.0, 8.0, 11.0, 14.0]), dtype=float)
    e = np.asarray(config.setdefault("rawE", [30.0, 24.0, 36.0, 28.0]), dtype=float)
    rows = []
    rels = []
    for seed in seeds:
        cfg = VariantConfig(variant=variant, K=K, eta=eta, epsilon=0.05,
                            beta=0.9, seed=int(seed), shots=shots,
                            forced_epsilon_k=forced)
        report = evaluate(cfg, t, e)
        rel = report.rel_error_vs_exact()
        rels.append(rel)
        rows.append([seed, report.V, report.v_exact, report.v_star, rel])
    summary = {"mean_rel_error": float(np.mean(rels)),
               "rel_errors": [float(r) for r in rels]}
    _write_csv(os.path.join(out_dir, "end_to_end.csv"),
               ["seed", "V", "v_exact", "v_star", "rel_error"], rows)
    _write_sidecar(os.path.join(out_dir, "end_to_end.json"),
                   {"experiment": "end_to_end", "config": config,
                    "summary": summary})
    return summary


def _experiment_resource_table(config, out_dir):
    N = int(config.setdefault("N", 16))
    K = int(config.setdefault("K", 3))
    s = int(config.setdefault("s", 2))
    epsilon = float(config.setdefault("epsilon", 0.05))
    tables = {}
    rows = []
    for variant in QUANTUM_VARIANTS:
        cfg = VariantConfig(variant=variant, K=K, s=s, epsilon=epsilon)
        table = resource_report(cfg, N, K=K, s=s, epsilon=epsilon)
        tables[variant] = table
        for row in table["rows"]:
            rows.append([variant, row["k"], row.get("width"),
                         row.get("depth_bound", row.get("depth")),
                         row.get("samples", row.get("oracle_complexity"))])
    _write_csv(os.path.join(out_dir, "resource_table.csv"),
               ["variant", "k", "width", "depth", "cost"], rows)
    _write_sidecar(os.path.join(out_dir, "resource_table.json"),
                   {"experiment": "resource_table", "config": config,
                    "summary": tables})
    return tables
