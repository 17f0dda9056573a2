"""The SVM machinery on toy data: scaling, both dual solvers, the tube.

Shows the classifier separating a noisy two-blob problem and the regressor
fitting a curve with the epsilon-insensitive loss, along with the solver
diagnostics (iterations, KKT gap, support-vector counts).
"""

import numpy as np

from radioplan.svm import (
    KernelParams,
    apply_scaler,
    decide,
    fit_scaler,
    predict,
    train_csvc,
    train_esvr,
)

rng = np.random.default_rng(3)

# --- classification: two noisy blobs in 7 dimensions ---------------------------

n = 120
labels = rng.choice([-1.0, 1.0], size=n)
x = rng.normal(size=(n, 7))
x[:, 0] += labels * 1.5
x[:, 1] -= labels * 0.8

scaler = fit_scaler(x)
xs = apply_scaler(scaler, x)
svc = train_csvc(xs, labels, c_param=8.0, kernel=KernelParams(0.25))
d = svc.diagnostics
accuracy = 100.0 * np.mean(decide(svc, xs) == labels)
print("classifier:")
print(f"  training accuracy {accuracy:.1f}%")
print(f"  {d.n_support} support vectors ({d.n_free} free), "
      f"{d.iterations} working-set selections, KKT gap {d.kkt_gap:.2e}")
print(f"  dual equality residual {abs(svc.coefficients.sum()):.2e}")

# --- regression: the epsilon tube ----------------------------------------------

m = 80
xr = rng.uniform(-2.0, 2.0, size=(m, 7))
targets = -95.0 + 8.0 * np.sin(xr[:, 0] * 2.0) + 3.0 * xr[:, 1]

scaler_r = fit_scaler(xr)
xrs = apply_scaler(scaler_r, xr)
print("\nregressor, shrinking the tube:")
for epsilon in (10.0, 3.0, 1.0, 0.0):
    svr = train_esvr(xrs, targets, c_param=64.0, kernel=KernelParams(0.5),
                     epsilon=epsilon, tol=1e-4)
    residuals = np.abs(predict(svr, xrs) - targets)
    print(f"  eps={epsilon:>4}: {len(svr.coefficients):>3} support vectors, "
          f"max residual {residuals.max():6.3f} dBm")

svr = train_esvr(xrs, np.full(m, -101.0), 10.0, KernelParams(0.5))
print(f"\nconstant targets collapse to the bias: "
      f"{len(svr.coefficients)} SVs, bias {svr.bias:.1f} dBm")
