"""Reference values for the small fixtures used in the unit tests.

Computed independently of the C++ code with scipy; the printed numbers are
frozen into tests/unit.
"""
import numpy as np
from scipy.special import gammaln
from scipy.stats import chi2, chi2_contingency

x = list("aaaaaabbbbbb")
y = list("uuvwuvvwwwuw")
z = list("010101010101")


def table(a, b):
    la, lb = sorted(set(a)), sorted(set(b))
    t = np.zeros((len(la), len(lb)))
    for u, v in zip(a, b):
        t[la.index(u), lb.index(v)] += 1
    return t


def pearson(a, b):
    stat, _, dof, _ = chi2_contingency(table(a, b), correction=False)
    return stat, dof


stat, dof = pearson(x, y)
print(f"chi2(x,y)      stat={stat!r} dof={dof} p={chi2.sf(stat, dof)!r}")

stat_z, dof_z = 0.0, 0
for level in sorted(set(z)):
    rows = [i for i, v in enumerate(z) if v == level]
    s, d = pearson([x[i] for i in rows], [y[i] for i in rows])
    stat_z += s
    dof_z += d
print(f"chi2(x,y|z)    stat={stat_z!r} dof={dof_z} p={chi2.sf(stat_z, dof_z)!r}")


def bdeu(child, parents, ess, r, q):
    configs = {}
    for i, c in enumerate(child):
        configs.setdefault(tuple(p[i] for p in parents), []).append(c)
    a_j, a_jk = ess / q, ess / (q * r)
    total = 0.0
    for rows in configs.values():
        total += gammaln(a_j) - gammaln(a_j + len(rows))
        for k in set(rows):
            total += gammaln(a_jk + rows.count(k)) - gammaln(a_jk)
    return total


def bic(child, parents, r, q, discount=1.0):
    configs = {}
    for i, c in enumerate(child):
        configs.setdefault(tuple(p[i] for p in parents), []).append(c)
    ll = 0.0
    for rows in configs.values():
        for k in set(rows):
            n = rows.count(k)
            ll += n * np.log(n / len(rows))
    return ll - discount * (r - 1) * q / 2 * np.log(len(child))


print(f"bdeu(y|x,ess=1)  {bdeu(y, [x], 1.0, 3, 2)!r}")
print(f"bdeu(y,ess=2)    {bdeu(y, [], 2.0, 3, 1)!r}")
print(f"bic(y|x)         {bic(y, [x], 3, 2)!r}")
print(f"bic(y|x,z,pd=2)  {bic(y, [x, z], 3, 4, 2.0)!r}")


def plugin_mi(a, b):
    t = table(a, b) / len(a)
    px, py = t.sum(1, keepdims=True), t.sum(0, keepdims=True)
    nz = t > 0
    return float((t[nz] * np.log(t[nz] / (px @ py)[nz])).sum())


print(f"mi(x,y)          {plugin_mi(x, y)!r}")
print(f"mi(x,z)          {plugin_mi(x, z)!r}")
