#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "hkc/grid.hpp"

namespace hkc {

// Per-grid cached tables for spectral loops: 2*pi*k_axis per site and
// (2*pi*|k|)^2 per site.
struct SpectralTables {
    std::array<std::vector<double>, 4> two_pi_k;  // per axis, per site
    std::vector<double> lap_full;                 // (2*pi*|k|)^2 per site

    explicit SpectralTables(const TorusGrid& g) {
        const int n = g.n;
        const double two_pi = 2.0 * std::numbers::pi;
        for (auto& v : two_pi_k) v.resize(g.sites());
        lap_full.resize(g.sites());
        for (std::int64_t s = 0; s < g.sites(); ++s) {
            auto c = g.coords(s);
            double k2 = 0.0;
            for (int ax = 0; ax < 4; ++ax) {
                const double k = two_pi * g.wavenumber(c[ax]);
                two_pi_k[ax][s] = k;
                k2 += k * k;
            }
            lap_full[s] = k2;
        }
    }
};

inline const SpectralTables& spectral_tables(const TorusGrid& g) {
    static thread_local std::vector<std::pair<int, SpectralTables*>> cache;
    for (auto& [n, t] : cache)
        if (n == g.n) return *t;
    cache.emplace_back(g.n, new SpectralTables(g));
    return *cache.back().second;
}

}  // namespace hkc
