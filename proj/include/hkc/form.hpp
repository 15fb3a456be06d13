#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hkc/grid.hpp"

namespace hkc {

using cplx = std::complex<double>;

// Antisymmetric multi-index bookkeeping for p-forms on a 4-dimensional base.
// Components are stored in lexicographic order of the increasing index set,
// encoded as a bitmask over the four axes.
namespace multi_index {

inline constexpr int kComps[5] = {1, 4, 6, 4, 1};

inline constexpr int kMasks0[1] = {0x0};
inline constexpr int kMasks1[4] = {0x1, 0x2, 0x4, 0x8};
inline constexpr int kMasks2[6] = {0x3, 0x5, 0x9, 0x6, 0xA, 0xC};
inline constexpr int kMasks3[4] = {0x7, 0xB, 0xD, 0xE};
inline constexpr int kMasks4[1] = {0xF};

inline const int* masks(int degree) {
    switch (degree) {
        case 0: return kMasks0;
        case 1: return kMasks1;
        case 2: return kMasks2;
        case 3: return kMasks3;
        case 4: return kMasks4;
        default: throw std::invalid_argument("multi_index: degree out of range");
    }
}

inline int comp_count(int degree) {
    if (degree < 0 || degree > 4) throw std::invalid_argument("multi_index: degree out of range");
    return kComps[degree];
}

// Position of a mask within the component list of its degree.
inline int comp_of_mask(int degree, int mask) {
    const int* m = masks(degree);
    for (int c = 0; c < comp_count(degree); ++c)
        if (m[c] == mask) return c;
    throw std::logic_error("multi_index: mask not found");
}

inline int popcount4(int mask) { return __builtin_popcount(mask & 0xF); }

// Sign of dx_{maskA} ^ dx_{maskB} relative to dx_{maskA|maskB}; 0 on overlap.
inline int wedge_sign(int maskA, int maskB) {
    if (maskA & maskB) return 0;
    int inversions = 0;
    for (int j = 0; j < 4; ++j) {
        if (!(maskB & (1 << j))) continue;
        for (int i = j + 1; i < 4; ++i)
            if (maskA & (1 << i)) ++inversions;
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace multi_index

// Degree-p differential form on the discretized torus with an r x r
// matrix-valued fiber.  Data layout: plane-major, sites fastest:
//   idx = ((c*r + a)*r + b) * sites + site
// so each (component, fiber-entry) plane is a contiguous scalar field,
// which is what the FFT wants.
//
// `band` tracks the largest |k| per axis known to bound the spectrum
// (kUnknownBand if nothing is known); wedge uses it to decide when the
// 2/3-rule dealiasing has to kick in.
class Form {
public:
    static constexpr int kUnknownBand = -1;

    Form() = default;
    Form(const TorusGrid& grid, int degree, int rank, int band = 0)
        : grid_(grid), degree_(degree), rank_(rank), band_(band) {
        if (degree_ < 0 || degree_ > 4) throw std::invalid_argument("Form: degree out of range");
        if (rank_ < 1) throw std::invalid_argument("Form: rank must be positive");
        data_.assign(static_cast<std::size_t>(comps()) * rank_ * rank_ * grid_.sites(), cplx(0.0));
    }

    const TorusGrid& grid() const { return grid_; }
    int degree() const { return degree_; }
    int rank() const { return rank_; }
    int comps() const { return multi_index::comp_count(degree_); }
    std::int64_t sites() const { return grid_.sites(); }

    int band() const { return band_; }
    void set_band(int b) { band_ = b; }
    bool band_known() const { return band_ >= 0; }

    std::size_t plane_size() const { return static_cast<std::size_t>(grid_.sites()); }
    std::size_t plane_count() const { return static_cast<std::size_t>(comps()) * rank_ * rank_; }

    cplx* plane(int c, int a, int b) {
        return data_.data() + (static_cast<std::size_t>(c) * rank_ * rank_ +
                               static_cast<std::size_t>(a) * rank_ + b) *
                                  plane_size();
    }
    const cplx* plane(int c, int a, int b) const {
        return data_.data() + (static_cast<std::size_t>(c) * rank_ * rank_ +
                               static_cast<std::size_t>(a) * rank_ + b) *
                                  plane_size();
    }
    cplx* plane_linear(std::size_t p) { return data_.data() + p * plane_size(); }
    const cplx* plane_linear(std::size_t p) const { return data_.data() + p * plane_size(); }

    cplx& at(int c, std::int64_t site, int a, int b) { return plane(c, a, b)[site]; }
    const cplx& at(int c, std::int64_t site, int a, int b) const { return plane(c, a, b)[site]; }

    std::vector<cplx>& raw() { return data_; }
    const std::vector<cplx>& raw() const { return data_; }

    Form& operator+=(const Form& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        band_ = merge_band(band_, o.band_);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        band_ = merge_band(band_, o.band_);
        return *this;
    }
    Form& operator*=(cplx s) {
        for (auto& z : data_) z *= s;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(cplx s, Form a) { return a *= s; }
    friend Form operator-(Form a) { return a *= cplx(-1.0); }

    void axpy(cplx alpha, const Form& x) {
        check_same_shape(x);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * x.data_[i];
        band_ = merge_band(band_, x.band_);
    }

    static int merge_band(int a, int b) {
        if (a < 0 || b < 0) return kUnknownBand;
        return std::max(a, b);
    }

    void check_same_shape(const Form& o) const {
        if (!(grid_ == o.grid_) || degree_ != o.degree_ || rank_ != o.rank_)
            throw std::invalid_argument("Form: shape mismatch");
    }

private:
    TorusGrid grid_;
    int degree_ = 0;
    int rank_ = 1;
    int band_ = 0;
    std::vector<cplx> data_;
};

// Fourier coefficients of a Form, indexed by integer wavevectors in the
// symmetric range.  Same storage layout as Form.
struct Spectrum {
    TorusGrid grid;
    int degree = 0;
    int rank = 1;
    std::vector<cplx> data;

    Spectrum() = default;
    Spectrum(const TorusGrid& g, int deg, int r) : grid(g), degree(deg), rank(r) {
        data.assign(static_cast<std::size_t>(multi_index::comp_count(deg)) * r * r * g.sites(),
                    cplx(0.0));
    }

    int comps() const { return multi_index::comp_count(degree); }
    std::size_t plane_size() const { return static_cast<std::size_t>(grid.sites()); }
    std::size_t plane_count() const { return static_cast<std::size_t>(comps()) * rank * rank; }

    cplx* plane(int c, int a, int b) {
        return data.data() + (static_cast<std::size_t>(c) * rank * rank +
                              static_cast<std::size_t>(a) * rank + b) *
                                 plane_size();
    }
    const cplx* plane(int c, int a, int b) const {
        return data.data() + (static_cast<std::size_t>(c) * rank * rank +
                              static_cast<std::size_t>(a) * rank + b) *
                                 plane_size();
    }
    cplx& at(int c, std::int64_t site, int a, int b) { return plane(c, a, b)[site]; }
    const cplx& at(int c, std::int64_t site, int a, int b) const { return plane(c, a, b)[site]; }
};

}  // namespace hkc
