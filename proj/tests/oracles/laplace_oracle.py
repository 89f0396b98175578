# Copyright 2026 The ldpbench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent oracles for the Laplace distribution unit tests.

Values printed here are frozen into tests/laplace_core_test.cpp. Nothing in
this script calls the C++ implementation: the density is integrated with
mpmath quadrature, quantiles come from bisection on that integral, and the
density is recovered from the closed-form CDF by central differences.
"""
import mpmath as mp

mp.mp.dps = 40


def pdf(x, mu, beta):
    return mp.exp(-abs(x - mu) / beta) / (2 * beta)


def cdf_by_quadrature(x, mu, beta):
    return mp.quad(lambda t: pdf(t, mu, beta), [-mp.inf, mu, x] if x > mu else [-mp.inf, x])


def quantile_by_bisection(p, mu, beta):
    lo, hi = mu - 100 * beta, mu + 100 * beta
    for _ in range(200):
        mid = (lo + hi) / 2
        if cdf_by_quadrature(mid, mu, beta) < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def cdf_closed(x, mu, beta):
    return mp.mpf(0.5) * mp.exp((x - mu) / beta) if x < mu else 1 - mp.mpf(0.5) * mp.exp(-(x - mu) / beta)


h = mp.mpf("1e-10")
print("pdf(2;0,2) direct      =", mp.nstr(pdf(2, 0, 2), 17))
print("pdf(2;0,2) d/dx cdf    =", mp.nstr((cdf_closed(2 + h, 0, 2) - cdf_closed(2 - h, 0, 2)) / (2 * h), 17))
print("cdf(ln2;0,1) quadrature=", mp.nstr(cdf_by_quadrature(mp.log(2), 0, 1), 17))
print("quantile(0.75;0,1)     =", mp.nstr(quantile_by_bisection(mp.mpf("0.75"), 0, 1), 17))
print("quantile(0.25;0,2)     =", mp.nstr(quantile_by_bisection(mp.mpf("0.25"), 0, 2), 17))
print("E|X| beta=2 quadrature =", mp.nstr(2 * mp.quad(lambda t: t * pdf(t, 0, 2), [0, mp.inf]), 17))
print("Var beta=2 quadrature  =", mp.nstr(2 * mp.quad(lambda t: t * t * pdf(t, 0, 2), [0, mp.inf]), 17))


def sup_distance(other_cdf, beta):
    # The CDFs are symmetric about 0, so scanning x >= 0 on a fine grid and
    # polishing the best point with a local maximizer is enough.
    f = lambda x: abs(other_cdf(x) - cdf_closed(x, 0, beta))
    grid = [mp.mpf(k) * beta / 1000 for k in range(0, 20001)]
    x0 = max(grid, key=f)
    lo, hi = max(x0 - beta / 1000, 0), x0 + beta / 1000
    for _ in range(200):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    return f((lo + hi) / 2)


gauss8 = lambda x: mp.ncdf(x, 0, mp.sqrt(8))
print("KS N(0,8) vs Lap(0,2)  =", mp.nstr(sup_distance(gauss8, 2), 6))
for beta in (mp.mpf("0.5"), 1, 2, 8):
    unif = lambda x, b=beta: min(max((x + b) / (2 * b), 0), 1)
    print("KS U(-b,b) vs Lap b=%-4s=" % mp.nstr(beta, 3),
          mp.nstr(sup_distance(unif, beta), 6))
for n in (10**5, 10**6):
    print("KS critical a=0.001 N=%d =" % n,
          mp.nstr(mp.sqrt(mp.log(2 / mp.mpf("0.001")) / (2 * n)), 11))
