#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hkc/calculus.hpp"
#include "hkc/complex_structure.hpp"

namespace hkc {

// Components of the Kahler form omega_a(u,v) = <a u, v> in the 2-form
// multi-index order {01,02,03,12,13,23}.  With the base conventions this
// gives omega_I = dx0^dx1 + dx2^dx3.
inline std::array<double, 6> kahler_components(const ComplexStructureMatrix& A) {
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::array<double, 6> w{};
    for (int c = 0; c < 6; ++c) w[c] = A(pairs[c][1], pairs[c][0]);
    return w;
}

inline std::array<double, 6> kahler_components(const ImaginaryUnit& a) {
    return kahler_components(induced_structure(a));
}

// Constant scalar 2-form omega_a on the grid.
inline Form kahler_form(const TorusGrid& g, const ImaginaryUnit& a) {
    auto w = kahler_components(a);
    std::vector<cplx> comps(6);
    for (int c = 0; c < 6; ++c) comps[c] = cplx(w[c]);
    return constant_scalar_form(g, 2, comps);
}

// The fixed hyperkahler package: base structures I, J, K, their Kahler forms
// and the holomorphic symplectic form Omega = omega_J + i*omega_K (equal to
// dz1^dz2 in the I-coordinates z1 = x0+i*x1, z2 = x2+i*x3).
struct HKStructure {
    ComplexStructureMatrix I, J, K;
    std::array<double, 6> omega_I, omega_J, omega_K;

    HKStructure()
        : I(base_structure_I()), J(base_structure_J()), K(base_structure_K()),
          omega_I(kahler_components(I)), omega_J(kahler_components(J)),
          omega_K(kahler_components(K)) {}

    std::array<cplx, 6> omega_holomorphic() const {
        std::array<cplx, 6> w;
        for (int c = 0; c < 6; ++c) w[c] = cplx(omega_J[c], omega_K[c]);
        return w;
    }
    Form holomorphic_symplectic_form(const TorusGrid& g) const {
        auto w = omega_holomorphic();
        return constant_scalar_form(g, 2, {w[0], w[1], w[2], w[3], w[4], w[5]});
    }
};

namespace lefschetz_detail {

struct LambdaTerm {
    int comp_hi;   // component of the degree-p input
    int comp_lo;   // component of the degree-(p-2) output
    int comp_w;    // 2-form component contracted
    int sign;
};

inline const std::vector<LambdaTerm>& lambda_table(int degree_hi) {
    static std::vector<LambdaTerm> cache[5];
    auto& tab = cache[degree_hi];
    if (tab.empty() && degree_hi >= 2) {
        const int* mw = multi_index::masks(2);
        const int* ml = multi_index::masks(degree_hi - 2);
        for (int cl = 0; cl < multi_index::comp_count(degree_hi - 2); ++cl)
            for (int cw = 0; cw < 6; ++cw) {
                const int s = multi_index::wedge_sign(mw[cw], ml[cl]);
                if (s == 0) continue;
                tab.push_back({multi_index::comp_of_mask(degree_hi, mw[cw] | ml[cl]), cl, cw, s});
            }
    }
    return tab;
}

}  // namespace lefschetz_detail

// Lefschetz operator: wedge with a constant scalar 2-form.
inline Form lefschetz_L(const std::array<cplx, 6>& w, const Form& f) {
    if (f.degree() > 2) throw std::invalid_argument("lefschetz_L: degree must be <= 2");
    std::vector<cplx> comps(w.begin(), w.end());
    return wedge(constant_scalar_form(f.grid(), 2, comps), f);
}

inline Form lefschetz_L(const ImaginaryUnit& a, const Form& f) {
    auto w = kahler_components(a);
    std::array<cplx, 6> wc;
    for (int c = 0; c < 6; ++c) wc[c] = cplx(w[c]);
    return lefschetz_L(wc, f);
}

// Pointwise metric adjoint of lefschetz_L: (Lambda g)_S = sum over disjoint
// 2-form components of sign * conj(w) * g_{W u S}.
inline Form lambda_op(const std::array<cplx, 6>& w, const Form& f) {
    if (f.degree() < 2) throw std::invalid_argument("lambda: degree must be >= 2");
    Form out(f.grid(), f.degree() - 2, f.rank(), f.band());
    const auto& tab = lefschetz_detail::lambda_table(f.degree());
    const int rr = f.rank() * f.rank();
    const std::int64_t ns = f.sites();
    for (const auto& t : tab) {
        const cplx coef = static_cast<double>(t.sign) * std::conj(w[t.comp_w]);
        if (coef == cplx(0.0)) continue;
        for (int e = 0; e < rr; ++e) {
            cplx* dst = out.plane_linear(static_cast<std::size_t>(t.comp_lo) * rr + e);
            const cplx* src = f.plane_linear(static_cast<std::size_t>(t.comp_hi) * rr + e);
            for (std::int64_t i = 0; i < ns; ++i) dst[i] += coef * src[i];
        }
    }
    return out;
}

inline Form lambda_op(const ImaginaryUnit& a, const Form& f) {
    auto w = kahler_components(a);
    std::array<cplx, 6> wc;
    for (int c = 0; c < 6; ++c) wc[c] = cplx(w[c]);
    return lambda_op(wc, f);
}

// Pointwise orthogonal projection of a 2-form onto span{omega_I, omega_J,
// omega_K} (fiberwise per matrix entry) and its complement.  On the
// 4-torus the complement is exactly the SU(2)-invariant part.
struct SdAsdParts {
    Form self_dual;
    Form anti_self_dual;
};

inline SdAsdParts sd_asd_project(const Form& f) {
    if (f.degree() != 2) throw std::invalid_argument("sd_asd_project: degree 2 required");
    static const HKStructure hk;
    const std::array<const std::array<double, 6>*, 3> omegas = {&hk.omega_I, &hk.omega_J,
                                                                &hk.omega_K};
    SdAsdParts parts{Form(f.grid(), 2, f.rank(), f.band()), f};
    const int rr = f.rank() * f.rank();
    const std::int64_t ns = f.sites();
    std::vector<cplx> coeff(ns);
    for (const auto* wp : omegas) {
        const auto& w = *wp;
        for (int e = 0; e < rr; ++e) {
            std::fill(coeff.begin(), coeff.end(), cplx(0.0));
            for (int c = 0; c < 6; ++c) {
                if (w[c] == 0.0) continue;
                const cplx* src = f.plane_linear(static_cast<std::size_t>(c) * rr + e);
                const double wc = w[c] * 0.5;  // |omega|^2 = 2 pointwise
                for (std::int64_t i = 0; i < ns; ++i) coeff[i] += wc * src[i];
            }
            for (int c = 0; c < 6; ++c) {
                if (w[c] == 0.0) continue;
                cplx* dst = parts.self_dual.plane_linear(static_cast<std::size_t>(c) * rr + e);
                const double wc = w[c];
                for (std::int64_t i = 0; i < ns; ++i) dst[i] += wc * coeff[i];
            }
        }
    }
    parts.anti_self_dual -= parts.self_dual;
    return parts;
}

// L2 norm of the projection onto span{omega_I, omega_J, omega_K}; zero iff
// the 2-form is SU(2)-invariant.
inline double su2_invariance_residual(const Form& f) {
    return l2_norm(sd_asd_project(f).self_dual);
}

}  // namespace hkc
