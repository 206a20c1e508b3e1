// Copyright 2026 The Titan Authors
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
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace titan {

/// Error category. `Config` style errors map to CLI exit code 2, the rest
/// to exit code 3.
enum class ErrorKind {
    Config,      // bad sizes, bad arguments, malformed configs, parse errors
    Shape,       // dimension / arity mismatches
    Validation,  // invariant violated (non-unitary gate, bad descriptor, ...)
    Convergence, // iterative solver failed to converge
    Divergence,  // optimization produced non-finite values
    Io,          // file system failures
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

    /// true for errors a user can fix by editing inputs (CLI exit code 2).
    [[nodiscard]] bool is_config() const noexcept {
        return kind_ == ErrorKind::Config || kind_ == ErrorKind::Shape ||
               kind_ == ErrorKind::Validation;
    }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
    throw Error(ErrorKind::Config, msg);
}
[[noreturn]] inline void throw_shape(const std::string& msg) {
    throw Error(ErrorKind::Shape, msg);
}
[[noreturn]] inline void throw_validation(const std::string& msg) {
    throw Error(ErrorKind::Validation, msg);
}

/// splitmix64 step; used both as a mixer and a seed-derivation primitive.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and stream labels
/// (e.g. sample index, cell id, retry count).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t p : parts) {
        s = splitmix64(s ^ (p + 0x9e3779b97f4a7c15ULL));
    }
    return s;
}

/// Deterministic random stream. Wraps xoshiro-free mt19937_64 output with
/// hand-rolled distributions so the same seed produces the same values on
/// every platform (std:: distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ kInitMix)) {}

    std::uint64_t next_u64() {
        // xorshift* keeps the generator header-only and standardized.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). Modulo bias is < n / 2^64.
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    template <typename T> void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    static constexpr double kPi = 3.14159265358979323846;

  private:
    static constexpr std::uint64_t kInitMix = 0x6a09e667f3bcc908ULL;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Falls back to a
/// plain loop for threads <= 1. Exceptions from workers are rethrown on the
/// calling thread (first one wins).
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace titan
