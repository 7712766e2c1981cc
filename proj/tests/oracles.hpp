/*
 * oracles.hpp
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: plain BFS for hop counts, a classical
// Jacobi rotation eigensolver for Laplacian spectra, and a brute-force
// discounted sum for option returns.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace oracles {

/// BFS hop counts from src over an undirected edge list; `unreachable`
/// marks everything BFS cannot reach.
inline std::vector<int> bfs_hops(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                                 int src, int unreachable) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<int> d(n, unreachable);
    d[static_cast<std::size_t>(src)] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (d[static_cast<std::size_t>(u)] == unreachable) {
                d[static_cast<std::size_t>(u)] = d[static_cast<std::size_t>(v)] + 1;
                q.push(u);
            }
        }
    }
    return d;
}

/// Eigenvalues of a symmetric matrix (row-major, n x n) by cyclic Jacobi
/// rotations. Ascending order. Plenty accurate for n <= 32 test matrices.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-18) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Normalized Laplacian of an undirected graph, with rows/columns of
/// isolated vertices zeroed. Row-major n x n.
inline std::vector<double> normalized_laplacian(std::size_t n,
                                                const std::vector<std::pair<int, int>>& edges) {
    std::vector<double> deg(n, 0.0);
    for (auto [u, v] : edges) {
        deg[static_cast<std::size_t>(u)] += 1.0;
        deg[static_cast<std::size_t>(v)] += 1.0;
    }
    std::vector<double> lap(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (deg[i] > 0.0) lap[i * n + i] = 1.0;
    for (auto [u, v] : edges) {
        const auto i = static_cast<std::size_t>(u);
        const auto j = static_cast<std::size_t>(v);
        const double w = -1.0 / std::sqrt(deg[i] * deg[j]);
        lap[i * n + j] = w;
        lap[j * n + i] = w;
    }
    return lap;
}

/// Discounted sum of a constant reward over delta steps plus the
/// discounted bootstrap, accumulated term by term.
inline double discounted_sum(long long delta, double reward, double gamma, double bootstrap) {
    double total = 0.0;
    double g = 1.0;
    for (long long k = 0; k < delta; ++k) {
        total += g * reward;
        g *= gamma;
    }
    return total + g * bootstrap;
}

}  // namespace oracles
