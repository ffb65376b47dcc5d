"""Fit a boosted quantum-kernel ensemble and inspect its rounds.

Each round grid-searches feature maps x alpha x C under the current sample
weights, then excludes the chosen feature map so later rounds explore
different kernels. The fitted sequence is pruned to the prefix with minimum
validation error. Run: python3 demos/04_boosted_ensemble.py
"""
import json

import numpy as np

from qsvm_boost import (
    GramCache,
    GridSpec,
    ensemble_from_json,
    ensemble_to_json,
    fit_boosted,
    make_moons,
    predict_ensemble_batch,
    split_and_scale,
)

split = split_and_scale(make_moons(150, noise_std=0.3, seed=31), (50, 50, 50), seed=32)
cache = GramCache()

ensemble = fit_boosted(
    split.train.X, split.train.y, split.val.X, split.val.y,
    GridSpec(), max_rounds=10, cache=cache,
)

print(f"rounds fitted: {len(ensemble.rounds)}, pruned to {ensemble.pruned_length}, "
      f"stop reason: {ensemble.stop_reason}")
print(f"{'round':>5} {'feature map':<12} {'alpha':>5} {'C':>6} {'err_m':>7} "
      f"{'alpha_m':>8} {'val acc':>8}")
for i, rnd in enumerate(ensemble.rounds, start=1):
    fm, alpha, C = rnd.grid_point
    marker = " <- pruned here" if i == ensemble.pruned_length else ""
    print(f"{i:>5} {fm:<12} {alpha:>5.2f} {C:>6.1f} {rnd.err_m:>7.3f} "
          f"{rnd.alpha_m:>8.3f} {rnd.val_accuracy:>8.3f}{marker}")

scores, labels = predict_ensemble_batch(ensemble, split.test.X, split.train.X, cache)
accuracy = float(np.mean(labels == split.test.y))
print()
print(f"test accuracy of the pruned weighted vote: {accuracy:.3f}")
print(f"vote scores of the first five test points: {np.round(scores[:5], 3)}")

# ensembles serialize to JSON and reload with identical predictions
blob = json.dumps(ensemble_to_json(ensemble))
reloaded = ensemble_from_json(json.loads(blob))
_, labels_again = predict_ensemble_batch(reloaded, split.test.X, split.train.X, cache)
print("reloaded ensemble predicts identically:", np.array_equal(labels, labels_again))
