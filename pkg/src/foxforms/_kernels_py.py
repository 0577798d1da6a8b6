"""Pure-Python kernels; the reference the compiled module is checked against."""
import numpy as np


def reduce_letters(letters):
    out = []
    for a in letters:
        a = int(a)
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return out


def word_eval_diff(letters, X, Xinv, V):
    """Evaluate a word at matrices ``X`` and push tangents ``V`` through it.

    ``X``, ``Xinv``: (m, n, n); ``V``: (B, m, n, n) left-trivialized tangents.
    Returns ``(E, Xi)`` with ``E`` the product and ``Xi`` of shape (B, n, n)
    such that the differential equals ``E @ Xi``.
    """
    n = X.shape[-1]
    E = np.eye(n, dtype=complex)
    acc = np.zeros((V.shape[0], n, n), dtype=complex)
    for a in letters:
        i = abs(int(a)) - 1
        if a > 0:
            Y, Yinv = X[i], Xinv[i]
            local = V[:, i]
        else:
            Y, Yinv = Xinv[i], X[i]
            local = -(X[i] @ V[:, i] @ Xinv[i])
        acc = Yinv @ acc @ Y + local
        E = E @ Y
    return E, acc
