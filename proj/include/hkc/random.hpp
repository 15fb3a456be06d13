#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hkc/fft.hpp"
#include "hkc/form.hpp"

namespace hkc {

// Counter-based deterministic generator: every draw is splitmix64 of
// (stream ^ counter++).  Streams split by hashing a label into the state, so
// independent modules can derive non-overlapping streams from one logged
// seed.  No libc++ distributions anywhere, so byte-identical output across
// platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97f4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // deterministic Box-Muller
    double normal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    cplx cnormal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return cplx(r * std::cos(2.0 * std::numbers::pi * u2),
                    r * std::sin(2.0 * std::numbers::pi * u2));
    }

private:
    std::uint64_t state_;
};

class SeedRng {
public:
    explicit SeedRng(std::uint64_t seed) : seed_(seed) {}

    RngStream stream(const std::string& label) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
        for (unsigned char ch : label) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return RngStream(seed_ ^ h);
    }
    RngStream stream(const std::string& label, int index) const {
        return stream(label + "#" + std::to_string(index));
    }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

// Random band-limited form: independent complex normal Fourier coefficients
// on all modes with |k_j| <= band.  With real_valued, conjugate symmetry
// f_hat(-k) = conj(f_hat(k)) is imposed.
inline Form random_form(const TorusGrid& g, int degree, int rank, int band, RngStream& rng,
                        bool real_valued = false) {
    Spectrum s(g, degree, rank);
    const int n = g.n;
    std::vector<int> modes;
    for (int i = 0; i < n; ++i)
        if (std::abs(g.wavenumber(i)) <= band) modes.push_back(i);

    auto neg_index = [&](int i) { return i == 0 ? 0 : n - i; };

    for (std::size_t p = 0; p < s.plane_count(); ++p) {
        cplx* pl = s.data.data() + p * s.plane_size();
        for (int i0 : modes)
            for (int i1 : modes)
                for (int i2 : modes)
                    for (int i3 : modes) pl[g.site(i0, i1, i2, i3)] = rng.cnormal();
        if (real_valued) {
            for (int i0 : modes)
                for (int i1 : modes)
                    for (int i2 : modes)
                        for (int i3 : modes) {
                            const std::int64_t sp = g.site(i0, i1, i2, i3);
                            const std::int64_t sm =
                                g.site(neg_index(i0), neg_index(i1), neg_index(i2), neg_index(i3));
                            if (sp < sm) {
                                pl[sm] = std::conj(pl[sp]);
                            } else if (sp == sm) {
                                pl[sp] = cplx(pl[sp].real(), 0.0);
                            }
                        }
        }
    }
    return from_spectrum(s, band);
}

inline std::vector<cplx> random_matrix(int rank, RngStream& rng) {
    std::vector<cplx> m(static_cast<std::size_t>(rank) * rank);
    for (auto& z : m) z = rng.cnormal();
    return m;
}

inline std::vector<cplx> random_hermitian(int rank, RngStream& rng) {
    std::vector<cplx> m(static_cast<std::size_t>(rank) * rank);
    for (int a = 0; a < rank; ++a) {
        m[a * rank + a] = cplx(rng.normal(), 0.0);
        for (int b = a + 1; b < rank; ++b) {
            cplx z = rng.cnormal();
            m[a * rank + b] = z;
            m[b * rank + a] = std::conj(z);
        }
    }
    return m;
}

}  // namespace hkc
