/*
 * test_rng.cpp
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

#include <doctest.h>

#include <cmath>

#include "qroute/rng.hpp"

using namespace qroute;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed, same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform_int stays in range and covers it") {
    Rng rng(7);
    std::vector<int> hits(10, 0);
    for (int i = 0; i < 20000; ++i) {
        const auto v = rng.uniform_int(10);
        REQUIRE(v < 10);
        ++hits[static_cast<std::size_t>(v)];
    }
    for (int h : hits) CHECK(h > 1600);  // ~2000 expected per bucket
    CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("poisson matches its mean") {
    Rng rng(11);
    const double lambda = 0.2;
    const int n = 200000;
    long long total = 0;
    for (int i = 0; i < n; ++i) total += rng.poisson(lambda);
    const double mean = static_cast<double>(total) / n;
    // 3 sigma band around lambda
    CHECK(std::abs(mean - lambda) < 3.0 * std::sqrt(lambda / n));
    CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("exponential matches its mean") {
    Rng rng(13);
    const double mean = 5000.0;
    const int n = 10000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += rng.exponential(mean);
    CHECK(std::abs(total / n - mean) / mean < 0.05);
    CHECK(rng.exponential(0.0) == 0.0);
}

TEST_CASE("derived seeds differ per stream") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_SUITE_END();
