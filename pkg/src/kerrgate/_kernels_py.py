"""Pure-numpy versions of the harmonic sine kernels (reference and fallback)."""
import numpy as np

# caps the size of each temporary sin() block at ~16 MB
_BLOCK_ELEMS = 1 << 21


def harmonic_sine_sum(coef, theta):
    """``out[j] = sum_s coef[s-1] * sin(s * theta[j])`` for s = 1..len(coef)."""
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    S = coef.shape[0]
    out = np.zeros(theta.shape[0])
    if S == 0 or theta.shape[0] == 0:
        return out
    step = max(1, _BLOCK_ELEMS // theta.shape[0])
    for start in range(0, S, step):
        s = np.arange(start + 1, min(start + step, S) + 1, dtype=np.float64)
        out += np.sin(np.outer(theta, s)) @ coef[start:start + s.size]
    return out


def harmonic_sine_project(weights, theta, S):
    """``out[s-1] = sum_j weights[j] * sin(s * theta[j])`` for s = 1..S."""
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    keep = weights != 0.0
    weights, theta = weights[keep], theta[keep]
    out = np.zeros(int(S))
    if S == 0 or theta.shape[0] == 0:
        return out
    step = max(1, _BLOCK_ELEMS // theta.shape[0])
    for start in range(0, int(S), step):
        s = np.arange(start + 1, min(start + step, int(S)) + 1, dtype=np.float64)
        out[start:start + s.size] = weights @ np.sin(np.outer(theta, s))
    return out
