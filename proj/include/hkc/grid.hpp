#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hkc {

// Uniform N^4 grid on the unit torus R^4/Z^4.  Total volume is 1, so the
// cell volume is 1/N^4.  N must be even and >= 8 so that band-limited test
// fields up to wavenumber 3 are exactly representable and dealiased
// products fit.
struct TorusGrid {
    int n = 0;

    TorusGrid() = default;
    explicit TorusGrid(int points_per_axis) : n(points_per_axis) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("TorusGrid: N must be even and >= 8, got " +
                                        std::to_string(n));
    }

    std::int64_t sites() const {
        const std::int64_t m = n;
        return m * m * m * m;
    }
    double cell_volume() const { return 1.0 / static_cast<double>(sites()); }

    // Row-major indexing, axis 3 fastest.
    std::int64_t site(int i0, int i1, int i2, int i3) const {
        return ((static_cast<std::int64_t>(i0) * n + i1) * n + i2) * n + i3;
    }
    std::array<int, 4> coords(std::int64_t s) const {
        std::array<int, 4> c{};
        c[3] = static_cast<int>(s % n);
        s /= n;
        c[2] = static_cast<int>(s % n);
        s /= n;
        c[1] = static_cast<int>(s % n);
        s /= n;
        c[0] = static_cast<int>(s);
        return c;
    }
    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }
    // Coordinate of grid index i along one axis, in [0,1).
    double x(int i) const { return static_cast<double>(i) / n; }

    // Integer wavenumber of spectral index i, in the symmetric range
    // [-N/2, N/2).
    int wavenumber(int i) const { return i < n / 2 ? i : i - n; }

    // Largest |k| such that a product of two fields with bands b1+b2 <= this
    // is alias-free.
    int max_exact_band() const { return n / 2 - 1; }
    // 2/3-rule cutoff.
    int dealias_band() const { return n / 3; }

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

}  // namespace hkc
