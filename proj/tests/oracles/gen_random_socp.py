#!/usr/bin/env python3
"""Generates random bounded LP/SOCP instances, solves them with cvxpy, and
freezes both the model dumps and the reference objective values under
tests/data/.  Rerun only to regenerate the corpus."""

import os

import cvxpy as cp
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def fmt(x):
    return "%.17g" % x


def expr_line(coefs, const=0.0):
    out = fmt(const)
    for var, c in coefs:
        if c != 0.0:
            out += " %d:%s" % (var, fmt(c))
    return out


def gen_case(rng, idx):
    n = rng.integers(4, 11)
    ncone = rng.integers(1, 4)
    x0 = rng.uniform(-5, 5, n)

    lines = []
    nvars = n + ncone
    lines.append("vars %d" % nvars)
    for j in range(n):
        lines.append("v c -10 10 x%d" % j)
    for j in range(ncone):
        lines.append("v c 0 1000 t%d" % j)

    cx = rng.standard_normal(n) * 0.5
    wt = rng.uniform(0.5, 2.0, ncone)
    obj = [(j, cx[j]) for j in range(n)] + [(n + j, wt[j]) for j in range(ncone)]
    lines.append("obj " + expr_line(obj))

    x = cp.Variable(n)
    t = cp.Variable(ncone)
    cons = [x >= -10, x <= 10, t >= 0, t <= 1000]
    objective = cx @ x + wt @ t

    for _ in range(rng.integers(0, 4)):
        a = rng.standard_normal(n)
        rhs = a @ x0
        lines.append("eq " + expr_line([(j, a[j]) for j in range(n)], -rhs) + " | ")
        cons.append(a @ x == rhs)
    for _ in range(rng.integers(1, 5)):
        a = rng.standard_normal(n)
        rhs = a @ x0 + rng.uniform(0.1, 3.0)
        lines.append("le " + expr_line([(j, a[j]) for j in range(n)], -rhs) + " | ")
        cons.append(a @ x <= rhs)

    for j in range(ncone):
        k = rng.integers(2, min(n, 5) + 1)
        sub = rng.choice(n, size=k, replace=False)
        A = rng.standard_normal((k, k))
        b = rng.standard_normal(k)
        parts = ["1 %d:1" % (n + j)]
        for r in range(k):
            parts.append(expr_line([(int(sub[c]), A[r, c]) for c in range(k)], b[r]))
        lines.append("soc %d ; " % (k + 1) + " ; ".join(parts) + " | cone%d" % j)
        # t_j + 1 >= ||A x_sub + b|| keeps the cone strictly feasible at t=big
        cons.append(cp.norm(A @ x[sub] + b) <= t[j] + 1)

    prob = cp.Problem(cp.Minimize(objective), cons)
    prob.solve(solver=cp.CLARABEL)
    assert prob.status == cp.OPTIMAL, prob.status

    name = "socp_case_%02d.txt" % idx
    with open(os.path.join(DATA, name), "w") as f:
        f.write("\n".join(lines) + "\n")
    return name, prob.value


def main():
    os.makedirs(DATA, exist_ok=True)
    rng = np.random.default_rng(20240817)
    rows = []
    for idx in range(14):
        rows.append(gen_case(rng, idx))
    with open(os.path.join(DATA, "socp_expected.txt"), "w") as f:
        for name, val in rows:
            f.write("%s %s\n" % (name, fmt(val)))
    print("\n".join("%s %.9f" % r for r in rows))


if __name__ == "__main__":
    main()
