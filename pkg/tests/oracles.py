"""Independent reference implementations used to cross-check the package.

Everything here is written with explicit Python loops and the math
module only, deliberately not reusing any mfnet code path or numpy
linear algebra.
"""

import math


def enumerate_quadratic(values):
    """All degree-2 monomials x_i * x_j with i <= j, lexicographic order."""
    n = len(values)
    products = []
    for i in range(n):
        for j in range(i, n):
            products.append(values[i] * values[j])
    return products


def loop_sigmoid(z):
    return 1.0 / (1.0 + math.exp(-z))


def loop_forward(theta1, theta2, x):
    """Feed-forward pass with explicit loops; returns the output activations.

    theta1 and theta2 are nested lists (rows of weights, bias first);
    x is the plain input list without the bias entry.
    """
    a1 = [1.0] + list(x)
    a2 = [1.0]
    for row in theta1:
        z = 0.0
        for w, a in zip(row, a1):
            z += w * a
        a2.append(loop_sigmoid(z))
    a3 = []
    for row in theta2:
        z = 0.0
        for w, a in zip(row, a2):
            z += w * a
        a3.append(loop_sigmoid(z))
    return a3


def tally_confusion(predictions, truths, target):
    """Brute-force one-vs-rest tally; returns (tp, fp, fn, tn)."""
    tp = fp = fn = tn = 0
    for p, t in zip(predictions, truths):
        if p == target and t == target:
            tp += 1
        elif p == target and t != target:
            fp += 1
        elif p != target and t == target:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def rate_metrics(tp, fp, fn, tn):
    """Direct arithmetic for the six metrics, 0.0 where the denominator is 0."""

    def div(num, den):
        return num / den if den != 0 else 0.0

    accuracy = div(tp + tn, tp + tn + fp + fn)
    sensitivity = div(tp, tp + fn)
    specificity = div(tn, tn + fp)
    gmean = math.sqrt(sensitivity * specificity)
    precision = div(tp, tp + fp)
    f_measure = div(2 * tp, 2 * tp + fp + fn)
    return {
        "accuracy": accuracy,
        "sensitivity": sensitivity,
        "specificity": specificity,
        "gmean": gmean,
        "precision": precision,
        "f_measure": f_measure,
    }


def nearest_centroid_accuracy(rows, labels):
    """Accuracy of a nearest-centroid classifier, loops only.

    Establishes that a dataset is (nearly) separable before any claim
    is made about what a trained network should achieve on it.
    """
    by_class = {}
    for row, label in zip(rows, labels):
        by_class.setdefault(label, []).append(row)
    centroids = {}
    for label, members in by_class.items():
        dim = len(members[0])
        centroids[label] = [
            sum(m[d] for m in members) / len(members) for d in range(dim)
        ]
    hits = 0
    for row, label in zip(rows, labels):
        best, best_dist = None, None
        for cand in sorted(centroids):
            dist = sum((a - b) ** 2 for a, b in zip(row, centroids[cand]))
            if best_dist is None or dist < best_dist:
                best, best_dist = cand, dist
        hits += best == label
    return hits / len(labels)
