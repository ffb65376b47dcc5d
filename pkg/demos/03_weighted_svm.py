"""Train the weighted SMO solver on a precomputed kernel.

Sample weights scale the per-sample box bound (0 <= a_i <= C * w_i), so a
heavily weighted point pulls the decision boundary toward itself and a
zero-weight point cannot become a support vector. Run:
python3 demos/03_weighted_svm.py
"""
import numpy as np

from qsvm_boost import decision_function, dual_objective, predict, rbf_gram, train_weighted_svm

np.set_printoptions(precision=3, suppress=True)

# the 4-point XOR pattern with an RBF kernel
X = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
y = np.array([1, 0, 0, 1])
K = rbf_gram(X, gamma=1.0).values

model = train_weighted_svm(K, y, C=10.0)
print("dual coefficients:", model.dual_coefs)
print("bias:", model.bias)
print("support vectors:", model.support_indices)
print("decision values:", decision_function(model, K))
print("predictions:", predict(model, K), "(truth:", y, ")")
print("dual objective:", dual_objective(K, y, np.abs(model.dual_coefs)))
print()

# upweight a sample sitting inside the other class and watch it flip:
# overlapping clusters on a line, point x=1.5 (label 1) in class-0 territory
from qsvm_boost import linear_gram

X_line = np.array([[0.0, 0], [1.0, 0], [1.5, 0], [3.0, 0], [4.0, 0], [2.0, 0]])
y_line = np.array([0, 0, 1, 1, 1, 0])
K_line = linear_gram(X_line).values
for w_hard in (1.0, 10.0):
    w = np.ones(6)
    w[2] = w_hard
    m = train_weighted_svm(K_line, y_line, C=1.0, weights=w)
    print(f"weight {w_hard:>4} on the hard point -> decision "
          f"{decision_function(m, K_line[2]):+.3f}, prediction {predict(m, K_line[2])}")
print()

# zero-weight samples are excluded from the fit entirely
w = np.array([1.0, 1.0, 0.0, 1.0])
masked = train_weighted_svm(K, y, C=10.0, weights=w)
print("weights", w, "-> support vectors:", masked.support_indices)

# a single effective class degenerates to a constant classifier
constant = train_weighted_svm(K, np.array([1, 1, 1, 1]), C=10.0)
print("single-class fit: degenerate =", constant.degenerate,
      "| always predicts", predict(constant, K[0]))
