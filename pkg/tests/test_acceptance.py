"""End-to-end acceptance checks.

The ten-seed suite is trained once per session (about 40 minutes on one
slow core; the GRU-SVM dominates). Each test records a one-line verdict
that is printed in the terminal summary.
"""

import hashlib
import time

import numpy as np
import pytest

from acceptance_log import record
from gradcheck import max_rel_error, numerical_grad, rel_error
from wdbc_ml.dataset import one_hot, standardize
from wdbc_ml.harness.config import default_suite
from wdbc_ml.harness.runner import median_accuracies, run_seeds, run_suite
from wdbc_ml.harness.tables import write_suite_outputs
from wdbc_ml.linear_models import cross_entropy, mse_loss, softmax, svm_loss
from wdbc_ml.metrics import ConfusionCounts, rates
from wdbc_ml.neighbors import NeighborIndex, l1_distance, l2_distance, nn_classify
from wdbc_ml.neural_models import gru_svm_loss, init_gru_svm, init_mlp, mlp_backward, mlp_forward
from wdbc_ml.numerics import make_rng

pytestmark = pytest.mark.slow

SEEDS = range(1, 11)
REFERENCE = {
    "GRU-SVM": 0.9375,
    "Linear Regression": 0.9609,
    "MLP": 0.99038449585420729,
    "L1-NN": 0.93567,
    "L2-NN": 0.94737,
    "Softmax Regression": 0.9766,
    "SVM": 0.9609,
}


@pytest.fixture(scope="module")
def ten_seeds(wdbc, tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    start = time.perf_counter()
    results = run_seeds(SEEDS, wdbc)
    elapsed = time.perf_counter() - start
    for seed, reports in results.items():
        write_suite_outputs(reports, out / f"seed-{seed}")
    return results, out, elapsed


def pct(v):
    return f"{100 * v:.3f}%"


def band_check(ten_seeds, names, tol):
    med = median_accuracies(ten_seeds[0])
    parts, ok = [], True
    for name in names:
        hit = abs(med[name] - REFERENCE[name]) <= tol
        ok &= hit
        parts.append(f"{name} {pct(med[name])} vs {pct(REFERENCE[name])}")
    return ok, "; ".join(parts)


def test_c01_all_models_above_90(ten_seeds):
    results, _, elapsed = ten_seeds
    med = median_accuracies(results)
    failed = [r.name for reps in results.values() for r in reps if not r.ok]
    ok = not failed and len(med) == 7 and min(med.values()) >= 0.90
    detail = f"lowest median {min(med, key=med.get)} {pct(min(med.values()))}, suite time {elapsed / 60:.1f} min"
    assert record(1, "every median accuracy >= 90%", ok, detail), (med, failed)


def test_c02_mlp_superiority(ten_seeds):
    results = ten_seeds[0]
    med = median_accuracies(results)["MLP"]
    firsts = 0
    for reports in results.values():
        acc = {r.name: r.metrics.accuracy for r in reports if r.ok}
        # a tie for the top accuracy counts as ranking first
        firsts += acc["MLP"] >= max(acc.values())
    ok = med >= 0.97 and firsts >= 7
    detail = f"median {pct(med)} (need >= 97%), first in {firsts}/10 seeds (need >= 7)"
    assert record(2, "MLP superiority", ok, detail)


def test_c03_nearest_neighbour_band(ten_seeds):
    ok, detail = band_check(ten_seeds, ["L1-NN", "L2-NN"], 0.03)
    assert record(3, "nearest-neighbour band +/-3", ok, detail)


def test_c04_linear_models_band(ten_seeds):
    ok, detail = band_check(ten_seeds, ["Linear Regression", "Softmax Regression", "SVM"], 0.03)
    assert record(4, "linear models band +/-3", ok, detail)


def test_c05_gru_svm_band(ten_seeds):
    ok, detail = band_check(ten_seeds, ["GRU-SVM"], 0.04)
    assert record(5, "GRU-SVM band +/-4", ok, detail)


def test_c06_data_points(ten_seeds):
    seen = set()
    for reports in ten_seeds[0].values():
        for r in reports:
            want = 171 if not r.config.model.trained else 384000
            seen.add((r.name, r.data_points_consumed, r.data_points_consumed == want))
    ok = all(hit for _, _, hit in seen)
    detail = ", ".join(sorted({f"{n} {d}" for n, d, _ in seen}))
    assert record(6, "data-points arithmetic", ok, detail)


# ---- criterion 7: every analytic gradient against central differences

def _mse_case(r):
    y = r.integers(0, 2, (5, 1)).astype(float)
    box = {"s": r.standard_normal((5, 1))}
    return mse_loss(y, box["s"])[1], numerical_grad(lambda: mse_loss(y, box["s"])[0], box)["s"]


def _softmax_case(r):
    x = r.standard_normal((6, 4))
    y = one_hot(r.integers(0, 2, 6), 2)
    box = {"w": r.standard_normal((4, 2)), "b": r.standard_normal((1, 2))}

    def loss():
        return cross_entropy(y, softmax(x @ box["w"] + box["b"]))

    _, d = loss()
    analytic = {"w": x.T @ d, "b": d.sum(axis=0, keepdims=True)}
    return analytic, numerical_grad(lambda: loss()[0], box)


def _svm_case(r):
    x = r.standard_normal((6, 4))
    y = 2 * one_hot(r.integers(0, 2, 6), 2) - 1
    box = {"w": r.standard_normal((4, 2)), "b": r.standard_normal((1, 2))}

    def loss():
        return svm_loss(y, x @ box["w"] + box["b"], box["w"], 5.0, "l2")

    _, d, d_reg = loss()
    analytic = {"w": x.T @ d + d_reg, "b": d.sum(axis=0, keepdims=True)}
    return analytic, numerical_grad(lambda: loss()[0], box)


def _mlp_case(r):
    params = init_mlp(4, (3, 3), 2, make_rng(int(r.integers(1 << 32))))
    # zero biases put a fully dead layer's successor exactly on the ReLU kink
    for k in ("b1", "b2", "b3"):
        params[k] = 0.1 * r.standard_normal(params[k].shape)
    x = r.standard_normal((4, 4))
    y = one_hot(r.integers(0, 2, 4), 2)
    logits, cache = mlp_forward(x, params)
    analytic = mlp_backward(cross_entropy(y, softmax(logits))[1], params, cache)

    def loss():
        return cross_entropy(y, softmax(mlp_forward(x, params)[0]))[0]

    return analytic, numerical_grad(loss, params)


def _gru_case(r):
    params = init_gru_svm(1, 4, 2, make_rng(int(r.integers(1 << 32))))
    for k in ("b_z", "b_r", "b_h"):
        params[k] = 0.1 * r.standard_normal(params[k].shape)
    x = r.standard_normal((3, 3))
    y = r.integers(0, 2, 3)
    _, analytic, _ = gru_svm_loss(x, y, params, c=5.0, seq_len=3)
    return analytic, numerical_grad(lambda: gru_svm_loss(x, y, params, c=5.0, seq_len=3)[0], params)


def test_c07_gradient_oracle():
    cases = {"MSE": _mse_case, "softmax+CE": _softmax_case, "L2-SVM": _svm_case,
             "MLP": _mlp_case, "GRU-SVM": _gru_case}
    worst = {}
    for i, (name, case) in enumerate(cases.items()):
        r = np.random.default_rng(70 + i)
        errs = []
        for _ in range(100):
            analytic, numeric = case(r)
            if isinstance(numeric, dict):
                errs.append(max_rel_error(analytic, numeric))
            else:
                errs.append(rel_error(analytic, numeric))
        worst[name] = max(errs)
    ok = max(worst.values()) < 1e-4
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (worst of 100, need < 1e-4)"
    assert record(7, "gradient oracle", ok, detail)


def test_c08_metric_identities():
    r = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        tp, tn, fp, fn = (int(v) for v in r.integers(0, 500, 4))
        tp += 1
        tn += 1  # both classes present so every rate is defined
        m = rates(ConfusionCounts(tp, tn, fp, fn))
        worst = max(worst,
                    abs(m.tpr + m.fnr - 1), abs(m.tnr + m.fpr - 1),
                    abs(m.accuracy * (tp + tn + fp + fn) - (tp + tn)) / (tp + tn + fp + fn),
                    # accuracy is the class-weighted mean of tpr and tnr
                    abs(m.accuracy - (m.tpr * (tp + fn) + m.tnr * (tn + fp)) / (tp + tn + fp + fn)))
    ok = worst <= 1e-12
    assert record(8, "metric identities", ok, f"max deviation {worst:.1e} over 1000 draws")


def test_c09_nearest_neighbour_oracle():
    r = np.random.default_rng(9)
    mismatches = 0
    for i in range(200):
        n, d = int(r.integers(1, 30)), int(r.integers(1, 8))
        # small integer grids make exact ties common
        refs = r.integers(-3, 4, (n, d)).astype(float)
        labels = r.integers(0, 2, n)
        queries = r.integers(-3, 4, (10, d)).astype(float)
        norm, dist = (("l1", l1_distance), ("l2", l2_distance))[i % 2]
        expected = []
        for q in queries:
            best, best_d = 0, np.inf
            for j in range(n):
                dj = dist(q, refs[j])
                if dj < best_d:
                    best, best_d = j, dj
            expected.append(labels[best])
        mismatches += int(np.sum(nn_classify(NeighborIndex(refs, labels, norm), queries) != expected))
    ok = mismatches == 0
    assert record(9, "nearest-neighbour oracle", ok, f"{mismatches} mismatches over 200 instances")


def test_c10_standardization(wdbc):
    z = standardize(wdbc).x
    mu, sd = np.abs(z.mean(axis=0)).max(), np.abs(z.std(axis=0) - 1).max()
    ok = mu < 1e-9 and sd < 1e-9
    assert record(10, "standardization contract", ok, f"max |mean| {mu:.1e}, max |std-1| {sd:.1e}")


def _digest(root):
    return {p.relative_to(root).as_posix(): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.rglob("*")) if p.is_file() and p.name != "timings.csv"}


def test_c11_determinism(ten_seeds, wdbc, tmp_path):
    _, out, _ = ten_seeds
    write_suite_outputs(run_suite(default_suite(1), wdbc), tmp_path / "again")
    first, second = _digest(out / "seed-1"), _digest(tmp_path / "again")
    ok = first == second and len(first) > 0
    differing = sorted(k for k in first.keys() | second.keys() if first.get(k) != second.get(k))
    detail = f"{len(first)} files compared" + (f", differing: {differing}" if differing else ", all identical")
    assert record(11, "determinism", ok, detail)
