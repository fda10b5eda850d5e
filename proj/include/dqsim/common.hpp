#pragma once

// Shared small pieces: 3-vectors, deterministic random streams, error types.

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

namespace dqsim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator/(const Vec3& v, double s) { return {v.x / s, v.y / s, v.z / s}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Random stream with fixed algorithms on top of mt19937_64. The standard
// distributions are implementation-defined, so sampling through them would
// not be reproducible across standard libraries; these are.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal, Box-Muller with a cached spare.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t integer(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    // Exact Poisson sample. Knuth's product method for small means; larger
    // means are split using the additivity of the Poisson distribution.
    std::uint64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda < 30.0) {
            const double threshold = std::exp(-lambda);
            std::uint64_t k = 0;
            double p = uniform01();
            while (p > threshold) {
                ++k;
                p *= uniform01();
            }
            return k;
        }
        const std::uint64_t a = poisson(0.5 * lambda);
        return a + poisson(lambda - 0.5 * lambda);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct coincident_emitter_error : std::runtime_error {
    coincident_emitter_error(std::size_t i_, std::size_t j_)
        : std::runtime_error("coincident emitters at indices " + std::to_string(i_) + " and " +
                             std::to_string(j_)),
          i(i_),
          j(j_) {}
    std::size_t i;
    std::size_t j;
};

struct pole_error : std::runtime_error {
    explicit pole_error(const std::string& which)
        : std::runtime_error("response evaluated exactly on a pole of denominator " + which),
          denominator(which) {}
    std::string denominator;
};

// Run f(i) for i in [0, n). Workers pull indices from a shared counter and
// write into preallocated slots, so results are independent of the thread
// count. The first worker exception is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& f) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace dqsim
