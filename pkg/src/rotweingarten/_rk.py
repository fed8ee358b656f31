"""Dormand-Prince 5(4) embedded pair with its quartic continuous extension."""
import numpy as np

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])

A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]

# 5th-order weights (the 7th stage is FSAL and carries weight 0)
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])

# difference between the 5th- and 4th-order solutions
E = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])

# y(s + th h) = y + h * K^T @ (P @ [th, th^2, th^3, th^4])
P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

ORDER = 5
N_STAGES = 7


def step(fun, y, f0, h):
    """One trial step.  Returns ``(y_new, f_new, err, K)``.

    ``err`` is the embedded error estimate (5th minus 4th order).
    """
    K = np.empty((N_STAGES, y.size))
    K[0] = f0
    for i in range(1, 6):
        K[i] = fun(y + h * (np.dot(A[i], K[:i])))
    y_new = y + h * np.dot(B[:6], K[:6])
    K[6] = fun(y_new)
    err = h * np.dot(E, K)
    return y_new, K[6], err, K


def dense(y, h, K, theta):
    """Evaluate the continuous extension at fractions ``theta`` of the step.

    ``theta`` may be a scalar or a 1-d array; the result has shape
    ``(len(theta), dim)`` for array input.
    """
    th = np.asarray(theta, dtype=float)
    powers = np.stack([th, th**2, th**3, th**4], axis=-1)
    Q = K.T @ P  # (dim, 4)
    return y + h * powers @ Q.T
