// Copyright 2026 The stvqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stvqc {

inline constexpr double kPi = std::numbers::pi;

/// Raised for every contract violation in the library (bad indices, budgets,
/// malformed files). Messages are meant to be shown to a CLI user verbatim.
class Error : public std::runtime_error {
   public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// splitmix64 step; used to derive independent stream seeds from (seed, index).
constexpr uint64_t mix_seed(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t stream_seed(uint64_t seed, uint64_t index) {
    return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632BE59BD9B4E019ULL));
}

/// xoshiro256** generator. Hand-rolled so that generated datasets are
/// byte-identical across standard libraries (std distributions are not).
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed = 0) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t x = seed;
        for (auto &w : s_) {
            x = mix_seed(x);
            w = x;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~uint64_t{0}; }

    result_type operator()() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) {
            throw Error("Rng::below called with n = 0");
        }
        // Lemire's nearly-divisionless method, rejection keeps it unbiased.
        uint64_t x = (*this)();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<uint64_t>(m);
        if (low < n) {
            const uint64_t threshold = -n % n;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        // Box-Muller; discards the second variate to stay stateless.
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    const auto &state() const { return s_; }
    void set_state(const uint64_t (&s)[4]) {
        for (int i = 0; i < 4; ++i) {
            s_[i] = s[i];
        }
    }

   private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4]{};
};

/// Fisher-Yates with Rng, independent of the std::shuffle implementation.
template <typename Vec>
void shuffle_in_place(Vec &v, Rng &rng) {
    for (size_t i = v.size(); i > 1; --i) {
        const size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

constexpr unsigned ceil_log2(uint64_t n) {
    unsigned k = 0;
    while ((uint64_t{1} << k) < n) {
        ++k;
    }
    return k;
}

}  // namespace stvqc
