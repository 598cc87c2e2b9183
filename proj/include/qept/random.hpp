// random.hpp — seeded, platform-stable random stream.
//
// std::mt19937_64 output is pinned by the standard, but the standard
// distributions are not; uniform and normal variates are derived here by
// hand so a fixed seed reproduces byte-identical results everywhere.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qept::rng {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform on [0, 1): top 53 bits of the generator word.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are cached so consecutive calls
    // consume generator words in a fixed pattern.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Standard complex normal: variance 1/2 per component.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qept::rng
