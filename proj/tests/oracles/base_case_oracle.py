"""Independent vectorized Monte Carlo of the base-case selection model.

Used to derive the frozen reference values in the C++ test suites. It shares
no code with the library: perceptions, rules and tie handling are written
directly in numpy.
"""
import argparse

import numpy as np


def simulate(reps, beta, m=10, n=100, N=3, e_mean=5.0, seed=1, type_lo=0.0, type_hi=10.0, errors=(0.0,)):
    rng = np.random.default_rng(seed)
    q = rng.uniform(-5, 5, size=(reps, n))
    t = rng.uniform(type_lo, type_hi, size=(reps, n))
    if N == 1:
        e = np.array([e_mean])
    else:
        e = e_mean - beta + 2 * beta / (N - 1) * np.arange(N)
    sd = np.abs(t[:, None, :] - e[None, :, None])          # reps x N x n
    perceived = q[:, None, :] + sd * rng.standard_normal((reps, N, n))
    true_best = np.argmax(q, axis=1)
    out = {}

    def take(scores, name):
        # continuous scores for averaging/individual; jitter breaks integer ties uniformly
        jitter = rng.random(scores.shape) * 1e-6
        sel = np.argsort(-(scores + jitter), axis=1)[:, :m]
        perf = np.take_along_axis(q, sel, axis=1).sum(axis=1)
        hit = (sel == true_best[:, None]).any(axis=1)
        out[name] = (perf.mean(), perf.std(ddof=1) / np.sqrt(reps), hit.mean())

    ind = q + np.abs(t - e_mean) * rng.standard_normal((reps, n))
    take(ind, "individual")
    take(perceived.mean(axis=1), "averaging")
    votes = (perceived > 0).sum(axis=1).astype(float)
    take(votes, "voting")
    out["full_votes"] = (votes == N).sum(axis=1).mean()
    order = np.argsort(-perceived, axis=2)
    pos = np.empty_like(order)
    np.put_along_axis(pos, order, np.arange(1, n + 1)[None, None, :].repeat(N, 1).repeat(reps, 0), axis=2)
    take((n - pos).sum(axis=1).astype(float), "ranking")
    nearest = np.argmin(sd, axis=1)                         # reps x n
    for r in errors:
        # misassigned with probability r(N-1)/N, then uniform over the other agents
        miss = rng.random((reps, n)) < r * (N - 1) / N
        other = rng.integers(0, N - 1, size=(reps, n))
        other = np.where(other >= nearest, other + 1, other)
        agent = np.where(miss, other, nearest)
        deleg = np.take_along_axis(perceived, agent[:, None, :], axis=1)[:, 0, :]
        take(deleg, f"delegation r={r:g}")
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=20000)
    ap.add_argument("--beta", type=float, nargs="+", default=[0.0, 2.5, 10 / 3, 5.0])
    ap.add_argument("--r", type=float, nargs="+", default=[0.0, 0.2, 0.5, 1.0])
    args = ap.parse_args()
    for b in args.beta:
        res = simulate(args.reps, b, errors=args.r)
        print(f"beta={b:.4f}")
        for k, v in res.items():
            print(f"  {k}: {v}")
