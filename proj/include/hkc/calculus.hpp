#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hkc/fft.hpp"
#include "hkc/form.hpp"
#include "hkc/spectral_tables.hpp"

namespace hkc {

namespace calc_detail {

// Contraction table shared by d, d* and the A-terms of covariant derivatives:
// for an output component of degree p+1 with mask T, lists (j, comp of T\{j},
// sign of dx_j ^ dx_{T\j}).
struct DerivTerm {
    int axis;
    int comp_lo;  // component index in degree p
    int sign;
};

inline const std::vector<std::vector<DerivTerm>>& deriv_table(int degree_lo) {
    static std::vector<std::vector<std::vector<DerivTerm>>> cache(4);
    auto& tab = cache[degree_lo];
    if (tab.empty()) {
        const int* hi_masks = multi_index::masks(degree_lo + 1);
        const int nhi = multi_index::comp_count(degree_lo + 1);
        tab.resize(nhi);
        for (int ch = 0; ch < nhi; ++ch) {
            const int T = hi_masks[ch];
            for (int j = 0; j < 4; ++j) {
                if (!(T & (1 << j))) continue;
                const int S = T & ~(1 << j);
                tab[ch].push_back({j, multi_index::comp_of_mask(degree_lo, S),
                                   multi_index::wedge_sign(1 << j, S)});
            }
        }
    }
    return tab;
}

}  // namespace calc_detail

// Spectral exterior derivative: multiplication by 2*pi*i*k_j per axis with
// antisymmetrization.  Degree-4 input is an error.
inline Form exterior_derivative(const Form& f) {
    if (f.degree() >= 4)
        throw std::invalid_argument("exterior_derivative: degree 4 input");
    const TorusGrid& g = f.grid();
    Spectrum in = to_spectrum(f);
    Spectrum out(g, f.degree() + 1, f.rank());
    const auto& tab = calc_detail::deriv_table(f.degree());
    const auto& tables = spectral_tables(g);

    const int r = f.rank();
    for (int ch = 0; ch < out.comps(); ++ch) {
        for (const auto& t : tab[ch]) {
            const double* kk = tables.two_pi_k[t.axis].data();
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    cplx* dst = out.plane(ch, a, b);
                    const cplx* src = in.plane(t.comp_lo, a, b);
                    const double sgn = t.sign;
                    for (std::int64_t site = 0; site < g.sites(); ++site)
                        dst[site] += cplx(0.0, sgn * kk[site]) * src[site];
                }
        }
    }
    return from_spectrum(out, f.band());
}

// l2 adjoint of exterior_derivative, defined spectrally (per-mode Hermitian
// transpose of d).
inline Form codifferential(const Form& f) {
    if (f.degree() == 0) throw std::invalid_argument("codifferential: degree 0 input");
    const TorusGrid& g = f.grid();
    Spectrum in = to_spectrum(f);
    Spectrum out(g, f.degree() - 1, f.rank());
    const auto& tab = calc_detail::deriv_table(f.degree() - 1);
    const auto& tables = spectral_tables(g);

    const int r = f.rank();
    for (int ch = 0; ch < in.comps(); ++ch) {
        for (const auto& t : tab[ch]) {
            const double* kk = tables.two_pi_k[t.axis].data();
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    cplx* dst = out.plane(t.comp_lo, a, b);
                    const cplx* src = in.plane(ch, a, b);
                    const double sgn = t.sign;
                    // conj(i*k*sign) = -i*k*sign
                    for (std::int64_t site = 0; site < g.sites(); ++site)
                        dst[site] += cplx(0.0, -sgn * kk[site]) * src[site];
                }
        }
    }
    return from_spectrum(out, f.band());
}

namespace calc_detail {

struct WedgeTerm {
    int comp_out;
    int comp_a;
    int comp_b;
    int sign;
};

inline const std::vector<WedgeTerm>& wedge_table(int pa, int pb) {
    static std::vector<WedgeTerm> cache[5][5];
    auto& tab = cache[pa][pb];
    if (tab.empty() && pa + pb <= 4) {
        const int* ma = multi_index::masks(pa);
        const int* mb = multi_index::masks(pb);
        for (int ca = 0; ca < multi_index::comp_count(pa); ++ca)
            for (int cb = 0; cb < multi_index::comp_count(pb); ++cb) {
                const int s = multi_index::wedge_sign(ma[ca], mb[cb]);
                if (s == 0) continue;
                tab.push_back({multi_index::comp_of_mask(pa + pb, ma[ca] | mb[cb]), ca, cb, s});
            }
    }
    return tab;
}

inline void wedge_accumulate(Form& out, const Form& a, const Form& b) {
    const auto& tab = wedge_table(a.degree(), b.degree());
    const std::int64_t ns = a.sites();
    const int ra = a.rank(), rb = b.rank();
    const int r = out.rank();
    for (const auto& t : tab) {
        const double sgn = t.sign;
        if (ra == rb) {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    cplx* dst = out.plane(t.comp_out, i, j);
                    for (int m = 0; m < r; ++m) {
                        const cplx* pa = a.plane(t.comp_a, i, m);
                        const cplx* pb = b.plane(t.comp_b, m, j);
                        for (std::int64_t s = 0; s < ns; ++s) dst[s] += sgn * pa[s] * pb[s];
                    }
                }
        } else if (ra == 1) {
            const cplx* pa = a.plane(t.comp_a, 0, 0);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    cplx* dst = out.plane(t.comp_out, i, j);
                    const cplx* pb = b.plane(t.comp_b, i, j);
                    for (std::int64_t s = 0; s < ns; ++s) dst[s] += sgn * pa[s] * pb[s];
                }
        } else {  // rb == 1
            const cplx* pb = b.plane(t.comp_b, 0, 0);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    cplx* dst = out.plane(t.comp_out, i, j);
                    const cplx* pa = a.plane(t.comp_a, i, j);
                    for (std::int64_t s = 0; s < ns; ++s) dst[s] += sgn * pa[s] * pb[s];
                }
        }
    }
}

}  // namespace calc_detail

namespace calc_detail {

inline void wedge_check(const Form& a, const Form& b) {
    if (a.degree() + b.degree() > 4)
        throw std::invalid_argument("wedge: total degree exceeds 4");
    if (!(a.grid() == b.grid())) throw std::invalid_argument("wedge: grid mismatch");
    if (a.rank() != b.rank() && a.rank() != 1 && b.rank() != 1)
        throw std::invalid_argument("wedge: incompatible fiber ranks");
}

}  // namespace calc_detail

// Plain pointwise wedge with no dealiasing.  This is the exact grid
// operation - its l2 adjoint is again pointwise - so operator internals
// (covariant derivatives and their adjoints) are built on it.
inline Form wedge_raw(const Form& a, const Form& b) {
    calc_detail::wedge_check(a, b);
    const TorusGrid& g = a.grid();
    const bool fits =
        a.band_known() && b.band_known() && a.band() + b.band() <= g.max_exact_band();
    Form out(g, a.degree() + b.degree(), std::max(a.rank(), b.rank()),
             fits ? a.band() + b.band() : Form::kUnknownBand);
    calc_detail::wedge_accumulate(out, a, b);
    return out;
}

// Pointwise wedge product with matrix product in the fiber.  Fiber ranks must
// match, or one side must be scalar.  When the tracked bands do not fit the
// grid (or are unknown), both factors and the result are truncated by the
// 2/3 rule.
inline Form wedge(const Form& a, const Form& b) {
    calc_detail::wedge_check(a, b);
    const TorusGrid& g = a.grid();
    const bool fits = a.band_known() && b.band_known() &&
                      a.band() + b.band() <= g.max_exact_band();
    if (fits) return wedge_raw(a, b);
    const int K = g.dealias_band();
    const Form af = (a.band_known() && a.band() <= K) ? a : truncate_band(a, K);
    const Form bf = (b.band_known() && b.band() <= K) ? b : truncate_band(b, K);
    Form out(g, a.degree() + b.degree(), std::max(a.rank(), b.rank()), 0);
    calc_detail::wedge_accumulate(out, af, bf);
    return truncate_band(out, K);
}

// Integral of a 4-form over the unit torus: fiber trace of the top
// coefficient summed with cell volume weight.
inline cplx integrate(const Form& f) {
    if (f.degree() != 4) throw std::invalid_argument("integrate: degree 4 required");
    cplx acc(0.0);
    for (int a = 0; a < f.rank(); ++a) {
        const cplx* p = f.plane(0, a, a);
        for (std::int64_t s = 0; s < f.sites(); ++s) acc += p[s];
    }
    return acc * f.grid().cell_volume();
}

// Trace-form L2 inner product, conjugate-linear in the second slot:
// <a,b> = integral of sum_S tr(a_S b_S^*).
inline cplx l2_inner(const Form& a, const Form& b) {
    if (!(a.grid() == b.grid()) || a.degree() != b.degree() || a.rank() != b.rank())
        throw std::invalid_argument("l2_inner: degree/rank/grid mismatch");
    cplx acc(0.0);
    for (std::size_t p = 0; p < a.plane_count(); ++p) {
        const cplx* pa = a.plane_linear(p);
        const cplx* pb = b.plane_linear(p);
        for (std::int64_t s = 0; s < a.sites(); ++s) acc += pa[s] * std::conj(pb[s]);
    }
    return acc * a.grid().cell_volume();
}

inline double l2_norm(const Form& f) {
    double acc = 0.0;
    for (const auto& z : f.raw()) acc += std::norm(z);
    return std::sqrt(acc * f.grid().cell_volume());
}

// Fiberwise adjoint form: conjugate coefficients and conjugate-transpose the
// matrix fiber.  Swaps Hodge types (p,q) <-> (q,p).
inline Form form_adjoint(const Form& f) {
    Form out(f.grid(), f.degree(), f.rank(), f.band());
    for (int c = 0; c < f.comps(); ++c)
        for (int a = 0; a < f.rank(); ++a)
            for (int b = 0; b < f.rank(); ++b) {
                const cplx* src = f.plane(c, a, b);
                cplx* dst = out.plane(c, b, a);
                for (std::int64_t s = 0; s < f.sites(); ++s) dst[s] = std::conj(src[s]);
            }
    return out;
}

// Constant p-form with the given components (in multi-index order) times a
// fiber matrix (row-major r x r).
inline Form constant_form(const TorusGrid& g, int degree, const std::vector<cplx>& comps,
                          const std::vector<cplx>& fiber, int rank) {
    if (static_cast<int>(comps.size()) != multi_index::comp_count(degree))
        throw std::invalid_argument("constant_form: wrong component count");
    if (static_cast<int>(fiber.size()) != rank * rank)
        throw std::invalid_argument("constant_form: wrong fiber size");
    Form f(g, degree, rank, 0);
    for (int c = 0; c < f.comps(); ++c)
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < rank; ++b) {
                const cplx v = comps[c] * fiber[a * rank + b];
                if (v == cplx(0.0)) continue;
                cplx* p = f.plane(c, a, b);
                for (std::int64_t s = 0; s < f.sites(); ++s) p[s] = v;
            }
    return f;
}

inline Form constant_scalar_form(const TorusGrid& g, int degree, const std::vector<cplx>& comps) {
    return constant_form(g, degree, comps, {cplx(1.0)}, 1);
}

// The volume form dx0^dx1^dx2^dx3.
inline Form volume_form(const TorusGrid& g) {
    return constant_scalar_form(g, 4, {cplx(1.0)});
}

inline Form zero_form(const TorusGrid& g, int degree, int rank) { return Form(g, degree, rank, 0); }

}  // namespace hkc
