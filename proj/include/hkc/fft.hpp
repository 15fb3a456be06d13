#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hkc/form.hpp"

namespace hkc {

namespace fft_detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Radix-2 plan with cached bit-reversal and per-stage twiddles.
class Pow2Fft {
public:
    Pow2Fft() = default;
    explicit Pow2Fft(int n) : n_(n) {
        rev_.resize(n_);
        int lg = 0;
        while ((1 << lg) < n_) ++lg;
        for (int i = 0; i < n_; ++i) {
            int r = 0;
            for (int b = 0; b < lg; ++b)
                if (i & (1 << b)) r |= 1 << (lg - 1 - b);
            rev_[i] = r;
        }
        for (int len = 2; len <= n_; len <<= 1) {
            std::vector<cplx> tw(len / 2);
            const double ang = -2.0 * std::numbers::pi / len;
            for (int j = 0; j < len / 2; ++j) tw[j] = cplx(std::cos(ang * j), std::sin(ang * j));
            stages_.push_back(std::move(tw));
        }
    }

    int size() const { return n_; }

    void run(cplx* x, bool inverse) const {
        for (int i = 0; i < n_; ++i)
            if (i < rev_[i]) std::swap(x[i], x[rev_[i]]);
        int stage = 0;
        for (int len = 2; len <= n_; len <<= 1, ++stage) {
            const auto& tw = stages_[stage];
            const int half = len / 2;
            for (int i = 0; i < n_; i += len) {
                for (int j = 0; j < half; ++j) {
                    const cplx w = inverse ? std::conj(tw[j]) : tw[j];
                    const cplx u = x[i + j];
                    const cplx v = x[i + j + half] * w;
                    x[i + j] = u + v;
                    x[i + j + half] = u - v;
                }
            }
        }
    }

    // Transform n logical rows of `stride` contiguous elements each (an
    // [n x stride] block); butterflies stream over whole rows, so strided
    // axes never gather element by element.
    void run_rows(cplx* x, std::int64_t stride, bool inverse,
                  std::vector<cplx>& row_buffer) const {
        if (static_cast<std::int64_t>(row_buffer.size()) < stride) row_buffer.resize(stride);
        for (int i = 0; i < n_; ++i)
            if (i < rev_[i]) {
                cplx* a = x + static_cast<std::int64_t>(i) * stride;
                cplx* b = x + static_cast<std::int64_t>(rev_[i]) * stride;
                std::copy(a, a + stride, row_buffer.data());
                std::copy(b, b + stride, a);
                std::copy(row_buffer.data(), row_buffer.data() + stride, b);
            }
        int stage = 0;
        for (int len = 2; len <= n_; len <<= 1, ++stage) {
            const auto& tw = stages_[stage];
            const int half = len / 2;
            for (int i = 0; i < n_; i += len) {
                for (int j = 0; j < half; ++j) {
                    const cplx w = inverse ? std::conj(tw[j]) : tw[j];
                    cplx* u = x + static_cast<std::int64_t>(i + j) * stride;
                    cplx* v = x + static_cast<std::int64_t>(i + j + half) * stride;
                    if (w == cplx(1.0)) {
                        for (std::int64_t t = 0; t < stride; ++t) {
                            const cplx a = u[t], b = v[t];
                            u[t] = a + b;
                            v[t] = a - b;
                        }
                    } else {
                        for (std::int64_t t = 0; t < stride; ++t) {
                            const cplx a = u[t];
                            const cplx b = v[t] * w;
                            u[t] = a + b;
                            v[t] = a - b;
                        }
                    }
                }
            }
        }
    }

private:
    int n_ = 0;
    std::vector<int> rev_;
    std::vector<std::vector<cplx>> stages_;
};

}  // namespace fft_detail

// One-dimensional DFT plan for length n; radix-2 when n is a power of two,
// Bluestein otherwise (the grid contract only requires n even).
class FftPlan {
public:
    FftPlan() = default;
    explicit FftPlan(int n) : n_(n) {
        if (fft_detail::is_pow2(n_)) {
            pow2_ = fft_detail::Pow2Fft(n_);
            is_pow2_ = true;
            return;
        }
        int m = 1;
        while (m < 2 * n_ - 1) m <<= 1;
        m_ = m;
        inner_ = fft_detail::Pow2Fft(m_);
        chirp_.resize(n_);
        for (int k = 0; k < n_; ++k) {
            // e^{-i pi k^2 / n}, exponent reduced mod 2n for accuracy
            const long long kk = (static_cast<long long>(k) * k) % (2LL * n_);
            const double ang = -std::numbers::pi * static_cast<double>(kk) / n_;
            chirp_[k] = cplx(std::cos(ang), std::sin(ang));
        }
        bhat_.assign(m_, cplx(0.0));
        bhat_[0] = std::conj(chirp_[0]);
        for (int k = 1; k < n_; ++k) {
            bhat_[k] = std::conj(chirp_[k]);
            bhat_[m_ - k] = std::conj(chirp_[k]);
        }
        inner_.run(bhat_.data(), false);
        work_.resize(m_);
    }

    int size() const { return n_; }

    // Unnormalized transform: forward uses e^{-2pi i jk/n}, inverse e^{+...}.
    void transform(cplx* x, bool inverse) const {
        if (is_pow2_) {
            pow2_.run(x, inverse);
            return;
        }
        auto& w = work_;
        std::fill(w.begin(), w.end(), cplx(0.0));
        for (int k = 0; k < n_; ++k)
            w[k] = x[k] * (inverse ? std::conj(chirp_[k]) : chirp_[k]);
        inner_.run(w.data(), false);
        if (!inverse) {
            for (int k = 0; k < m_; ++k) w[k] *= bhat_[k];
        } else {
            // spectrum of conj(b) is the reversed conjugate of bhat
            for (int k = 0; k < m_; ++k) w[k] *= std::conj(bhat_[k == 0 ? 0 : m_ - k]);
        }
        inner_.run(w.data(), true);
        const double inv_m = 1.0 / m_;
        for (int k = 0; k < n_; ++k)
            x[k] = w[k] * inv_m * (inverse ? std::conj(chirp_[k]) : chirp_[k]);
    }

private:
    int n_ = 0;
    bool is_pow2_ = false;
    fft_detail::Pow2Fft pow2_;
    int m_ = 0;
    fft_detail::Pow2Fft inner_;
    std::vector<cplx> chirp_, bhat_;
    mutable std::vector<cplx> work_;
};

// 4D transform engine over the plane layout used by Form/Spectrum.
class FourierEngine {
public:
    explicit FourierEngine(const TorusGrid& grid)
        : grid_(grid), plan_(grid.n), pow2_(fft_detail::is_pow2(grid.n)),
          rows_(pow2_ ? fft_detail::Pow2Fft(grid.n) : fft_detail::Pow2Fft()), line_(grid.n) {}

    // Transform one contiguous scalar field of grid.sites() points along all
    // four axes.
    void transform_field(cplx* field, bool inverse) const {
        const int n = grid_.n;
        const std::int64_t ns = grid_.sites();
        // axis 3: contiguous lines
        for (std::int64_t base = 0; base < ns; base += n) plan_.transform(field + base, inverse);
        // axes 2, 1, 0: [n x stride] blocks, row-batched when n is a power
        // of two, gathered lines otherwise
        const std::int64_t strides[3] = {n, static_cast<std::int64_t>(n) * n,
                                         static_cast<std::int64_t>(n) * n * n};
        for (int a = 0; a < 3; ++a) {
            const std::int64_t stride = strides[a];
            const std::int64_t block = stride * n;
            if (pow2_) {
                for (std::int64_t outer = 0; outer < ns; outer += block)
                    rows_.run_rows(field + outer, stride, inverse, row_buffer_);
                continue;
            }
            cplx* lp = line_.data();
            for (std::int64_t outer = 0; outer < ns; outer += block) {
                for (std::int64_t inner = 0; inner < stride; ++inner) {
                    cplx* base = field + outer + inner;
                    for (int i = 0; i < n; ++i) lp[i] = base[static_cast<std::int64_t>(i) * stride];
                    plan_.transform(lp, inverse);
                    for (int i = 0; i < n; ++i) base[static_cast<std::int64_t>(i) * stride] = lp[i];
                }
            }
        }
    }

private:
    TorusGrid grid_;
    FftPlan plan_;
    bool pow2_ = false;
    fft_detail::Pow2Fft rows_;
    mutable std::vector<cplx> line_;
    mutable std::vector<cplx> row_buffer_;
};

inline const FourierEngine& engine_for(const TorusGrid& grid) {
    // One cached engine per grid size; grids in a process are few.
    static thread_local std::vector<std::pair<int, FourierEngine*>> cache;
    for (auto& [n, e] : cache)
        if (n == grid.n) return *e;
    cache.emplace_back(grid.n, new FourierEngine(grid));
    return *cache.back().second;
}

// Forward transform: coefficients f_hat(k) = (1/N^4) sum_x f(x) e^{-2pi i k.x},
// so a constant field maps to a single k=0 coefficient of the same value.
inline Spectrum to_spectrum(const Form& f) {
    Spectrum s(f.grid(), f.degree(), f.rank());
    const auto& eng = engine_for(f.grid());
    const double scale = 1.0 / static_cast<double>(f.sites());
    for (std::size_t p = 0; p < f.plane_count(); ++p) {
        cplx* dst = s.data.data() + p * s.plane_size();
        const cplx* src = f.plane_linear(p);
        std::copy(src, src + f.plane_size(), dst);
        eng.transform_field(dst, false);
        for (std::size_t i = 0; i < s.plane_size(); ++i) dst[i] *= scale;
    }
    return s;
}

inline Form from_spectrum(const Spectrum& s, int band = Form::kUnknownBand) {
    Form f(s.grid, s.degree, s.rank, band);
    const auto& eng = engine_for(s.grid);
    for (std::size_t p = 0; p < s.plane_count(); ++p) {
        cplx* dst = f.plane_linear(p);
        const cplx* src = s.data.data() + p * s.plane_size();
        std::copy(src, src + s.plane_size(), dst);
        eng.transform_field(dst, true);
    }
    return f;
}

// Largest |k_j| carrying a coefficient above rel_cut * max|coeff|.
inline int measured_band(const Spectrum& s, double rel_cut = 1e-14) {
    double top = 0.0;
    for (const auto& z : s.data) top = std::max(top, std::abs(z));
    if (top == 0.0) return 0;
    const double cut = rel_cut * top;
    int band = 0;
    const int n = s.grid.n;
    for (std::size_t p = 0; p < s.plane_count(); ++p) {
        const cplx* pl = s.data.data() + p * s.plane_size();
        for (std::int64_t site = 0; site < s.grid.sites(); ++site) {
            if (std::abs(pl[site]) <= cut) continue;
            auto c = s.grid.coords(site);
            for (int ax = 0; ax < 4; ++ax) {
                int k = std::abs(s.grid.wavenumber(c[ax]));
                if (k > band) band = k;
            }
            if (band >= n / 2) return band;
        }
    }
    return band;
}

inline int measured_band(const Form& f, double rel_cut = 1e-14) {
    return measured_band(to_spectrum(f), rel_cut);
}

// Zero all modes with any |k_j| > band.
inline void truncate_band(Spectrum& s, int band) {
    const int n = s.grid.n;
    std::vector<bool> keep(n);
    for (int i = 0; i < n; ++i) keep[i] = std::abs(s.grid.wavenumber(i)) <= band;
    for (std::size_t p = 0; p < s.plane_count(); ++p) {
        cplx* pl = s.data.data() + p * s.plane_size();
        for (std::int64_t site = 0; site < s.grid.sites(); ++site) {
            auto c = s.grid.coords(site);
            if (!(keep[c[0]] && keep[c[1]] && keep[c[2]] && keep[c[3]])) pl[site] = cplx(0.0);
        }
    }
}

inline Form truncate_band(const Form& f, int band) {
    Spectrum s = to_spectrum(f);
    truncate_band(s, band);
    return from_spectrum(s, band);
}

}  // namespace hkc
