"""Shared test helpers: an OLS oracle independent of the library under test."""

import math


def _gauss_jordan_inverse(matrix):
    """Invert a small dense matrix by Gauss-Jordan with partial pivoting."""
    p = len(matrix)
    aug = [list(row) + [1.0 if a == b else 0.0 for b in range(p)]
           for a, row in enumerate(matrix)]
    for col in range(p):
        pivot = max(range(col, p), key=lambda rr: abs(aug[rr][col]))
        if abs(aug[pivot][col]) == 0.0:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for rr in range(p):
            if rr == col:
                continue
            factor = aug[rr][col]
            if factor != 0.0:
                aug[rr] = [v - factor * w for v, w in zip(aug[rr], aug[col])]
    return [row[p:] for row in aug]


def ols_oracle(y, rows):
    """Brute-force normal-equation OLS with fsum accumulation.

    rows already include the intercept column. Returns (coefficients,
    standard errors, adjusted R^2) as plain lists/floats.
    """
    n = len(y)
    p = len(rows[0])
    xtx = [[math.fsum(rows[k][a] * rows[k][b] for k in range(n)) for b in range(p)]
           for a in range(p)]
    xty = [math.fsum(rows[k][a] * y[k] for k in range(n)) for a in range(p)]
    inv = _gauss_jordan_inverse(xtx)
    beta = [math.fsum(inv[a][b] * xty[b] for b in range(p)) for a in range(p)]
    resid = [y[k] - math.fsum(rows[k][a] * beta[a] for a in range(p)) for k in range(n)]
    rss = math.fsum(rk * rk for rk in resid)
    s2 = rss / (n - p)
    se = [math.sqrt(s2 * inv[a][a]) for a in range(p)]
    ybar = math.fsum(y) / n
    tss = math.fsum((yk - ybar) ** 2 for yk in y)
    r2 = 1.0 if tss == 0.0 else 1.0 - rss / tss
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p)
    return beta, se, adj
