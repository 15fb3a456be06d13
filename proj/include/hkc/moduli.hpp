#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hkc/hodge.hpp"
#include "hkc/series.hpp"

namespace hkc {

// Omega(theta0, theta1) = integral of tr(theta0 ^ theta1 ^ omega_a); the
// n = 2 specialization where omega^{n-1} is just omega_a.
inline cplx symplectic_pair(const Form& theta0, const Form& theta1, const ImaginaryUnit& a) {
    if (theta0.degree() != 1 || theta1.degree() != 1)
        throw std::invalid_argument("symplectic_pair: degree-1 inputs required");
    return integrate(wedge(wedge(theta0, theta1), kahler_form(theta0.grid(), a)));
}

struct KuranishiResidual {
    double eq1 = 0.0;  // || Dbar theta - theta ^ theta ||
    double eq2 = 0.0;  // || Dbar* theta ||
};

// Residuals of the gauge-fixed deformation equations of a holomorphic
// structure for a (0,1)-form theta.
inline KuranishiResidual kuranishi_residual(const HodgeContext& ctx, const Form& theta) {
    KuranishiResidual r;
    Form lhs = ctx.dee_bar(theta);
    lhs -= wedge(theta, theta);
    r.eq1 = l2_norm(lhs);
    r.eq2 = l2_norm(ctx.dee_bar_star(theta));
    return r;
}

struct WSpaceResidual {
    double pipupa = 0.0;       // sqrt(||D theta||^2 + ||Lambda_a Dbar theta||^2)
    double harmonicity = 0.0;  // || full Laplacian of (theta ^ omega_a) ||
};

// Two sides of the W-subspace characterization: D theta = 0 and
// Lambda Dbar theta = 0 hold simultaneously iff theta ^ omega_a is harmonic.
inline WSpaceResidual w_space_check(const HodgeContext& ctx, const Form& theta,
                                    const ImaginaryUnit& a) {
    if (theta.degree() != 1) throw std::invalid_argument("w_space_check: 1-form required");
    const ComplexStructureMatrix A = induced_structure(a);
    TypeProjector proj(A);
    Form dth = covariant_derivative(ctx.background(), theta);
    const double d20 = l2_norm(proj.apply(dth, 2, 0));
    auto w = kahler_components(A);
    std::array<cplx, 6> wc;
    for (int c = 0; c < 6; ++c) wc[c] = cplx(w[c]);
    const double lam11 = l2_norm(lambda_op(wc, proj.apply(dth, 1, 1)));
    WSpaceResidual r;
    r.pipupa = std::sqrt(d20 * d20 + lam11 * lam11);
    r.harmonicity = l2_norm(ctx.full_laplacian(wedge(theta, kahler_form(theta.grid(), a))));
    return r;
}

// Path-ordered exponential around the four fundamental loops, by
// subdividing each loop into N steps and multiplying step transports.  For
// constant abelian A = sum c_i dx_i this equals exp(-c_i) per axis exactly.
// The optional Richardson flag extrapolates the step products entrywise for
// non-constant potentials.
inline std::array<std::vector<cplx>, 4> holonomy(const Connection& conn, double flat_tol = 1e-8,
                                                 bool richardson = false) {
    if (l2_norm(curvature(conn)) > flat_tol)
        throw std::invalid_argument("holonomy: connection is not flat within tolerance");
    const TorusGrid& g = conn.grid();
    const int r = conn.rank();
    const int n = g.n;
    std::array<std::vector<cplx>, 4> out;

    std::vector<cplx> step(static_cast<std::size_t>(r) * r), acc(static_cast<std::size_t>(r) * r),
        tmp(static_cast<std::size_t>(r) * r);

    auto product_at = [&](int axis, int substeps) {
        // transport ordered with later steps on the left
        std::vector<cplx> T(static_cast<std::size_t>(r) * r, cplx(0.0));
        for (int i = 0; i < r; ++i) T[i * r + i] = cplx(1.0);
        const double h = 1.0 / (n * substeps);
        // A values along the axis line through the origin, trig-interpolated
        // when substeps > 1
        std::vector<std::vector<cplx>> line(static_cast<std::size_t>(r) * r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                auto& lv = line[a * r + b];
                lv.resize(static_cast<std::size_t>(n) * substeps);
                const cplx* pl = conn.potential.plane(axis, a, b);
                if (substeps == 1) {
                    for (int i = 0; i < n; ++i) {
                        int c[4] = {0, 0, 0, 0};
                        c[axis] = i;
                        lv[i] = pl[g.site(c[0], c[1], c[2], c[3])];
                    }
                } else {
                    // 1D Fourier series of the restricted line evaluated at
                    // the refined points
                    std::vector<cplx> coeff(n);
                    for (int i = 0; i < n; ++i) {
                        int c[4] = {0, 0, 0, 0};
                        c[axis] = i;
                        coeff[i] = pl[g.site(c[0], c[1], c[2], c[3])];
                    }
                    FftPlan plan(n);
                    plan.transform(coeff.data(), false);
                    for (auto& z : coeff) z /= static_cast<double>(n);
                    for (int i = 0; i < n * substeps; ++i) {
                        const double t = static_cast<double>(i) / (n * substeps);
                        cplx v(0.0);
                        for (int k = 0; k < n; ++k) {
                            const int kk = g.wavenumber(k);
                            v += coeff[k] * std::polar(1.0, 2.0 * std::numbers::pi * kk * t);
                        }
                        lv[i] = v;
                    }
                }
            }
        for (int i = 0; i < n * substeps; ++i) {
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) step[a * r + b] = -h * line[a * r + b][i];
            matfield::exponential(step.data(), r);
            matfield::multiply(step.data(), T.data(), tmp.data(), r);
            std::copy(tmp.begin(), tmp.end(), T.begin());
        }
        return T;
    };

    for (int axis = 0; axis < 4; ++axis) {
        std::vector<cplx> T1 = product_at(axis, 1);
        if (!richardson) {
            out[axis] = std::move(T1);
            continue;
        }
        std::vector<cplx> T2 = product_at(axis, 2);
        for (int i = 0; i < r * r; ++i) T2[i] = 2.0 * T2[i] - T1[i];
        out[axis] = std::move(T2);
    }
    return out;
}

// Equivalence data for a pair of constant abelian connections.
struct AbelianPairVerdict {
    std::array<cplx, 4> c0{}, c1{};
    bool holonomy_equal = false;
    bool gauge_equivalent = false;  // integer winding found and verified
    std::array<int, 4> winding{};
    double gauge_check_residual = 0.0;
};

struct ModuliDemoReport {
    struct Sample {
        std::array<cplx, 4> coeffs{};
        std::array<cplx, 4> holonomy{};
        std::array<double, 4> holonomy_error{};  // vs exp(-c_i)
    };
    std::vector<Sample> samples;
    std::vector<AbelianPairVerdict> pairs;
    int dim_harmonic_oneforms = 0;  // complex dimension, expect 4 at rank 1
    int dim_dolbeault = 0;          // (0,1) block, expect 2
    int dim_seed = 0;               // (1,0) seed block 2 r^2
    bool dimension_doubling = false;
    bool verdicts_consistent = false;
};

inline Connection constant_abelian_connection(const TorusGrid& g, const std::array<cplx, 4>& c) {
    return Connection(constant_form(g, 1, {c[0], c[1], c[2], c[3]}, {cplx(1.0)}, 1));
}

// Rank-1 moduli demonstration: constant flat connections map to (C*)^4 via
// per-axis holonomy; two of them are gauge-equivalent exactly when all four
// holonomies agree, exhibited by explicit integer-winding gauges.
inline ModuliDemoReport moduli_demo(const TorusGrid& g, const SeedRng& rng, int n_samples = 8,
                                    double tol = 1e-9) {
    ModuliDemoReport rep;
    RngStream st = rng.stream("moduli-demo");

    std::vector<std::array<cplx, 4>> coeffs;
    for (int s = 0; s < n_samples; ++s) {
        std::array<cplx, 4> c;
        for (auto& z : c) z = cplx(st.uniform(-1.0, 1.0), st.uniform(-3.0, 3.0));
        coeffs.push_back(c);
    }
    // include deliberate gauge-equivalent and inequivalent shifts of sample 0
    {
        auto c = coeffs[0];
        c[0] += cplx(0.0, 2.0 * std::numbers::pi);
        coeffs.push_back(c);  // same holonomy
        auto c2 = coeffs[0];
        c2[0] += cplx(1.0, 0.0);
        coeffs.push_back(c2);  // different modulus
    }

    for (const auto& c : coeffs) {
        Connection conn = constant_abelian_connection(g, c);
        auto hol = holonomy(conn);
        ModuliDemoReport::Sample smp;
        smp.coeffs = c;
        for (int ax = 0; ax < 4; ++ax) {
            smp.holonomy[ax] = hol[ax][0];
            smp.holonomy_error[ax] = std::abs(hol[ax][0] - std::exp(-c[ax]));
        }
        rep.samples.push_back(smp);
    }

    // pairwise verdicts
    bool consistent = true;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t j = i + 1; j < coeffs.size(); ++j) {
            AbelianPairVerdict v;
            v.c0 = coeffs[i];
            v.c1 = coeffs[j];
            v.holonomy_equal = true;
            for (int ax = 0; ax < 4; ++ax)
                if (std::abs(rep.samples[i].holonomy[ax] - rep.samples[j].holonomy[ax]) > tol)
                    v.holonomy_equal = false;
            // explicit winding gauge: c1 = c0 - 2 pi i m requires
            // (c0 - c1) / (2 pi i) to be a real integer vector
            bool integer = true;
            for (int ax = 0; ax < 4; ++ax) {
                const cplx w = (coeffs[i][ax] - coeffs[j][ax]) / cplx(0.0, two_pi);
                const double rounded = std::round(w.real());
                if (std::abs(w.imag()) > tol || std::abs(w.real() - rounded) > tol) {
                    integer = false;
                    break;
                }
                v.winding[ax] = static_cast<int>(rounded);
            }
            if (integer) {
                // verify with the explicit gauge g = exp(2 pi i m.x)
                Form phi(g, 0, 1, 0);
                cplx* p = phi.plane(0, 0, 0);
                for (std::int64_t s = 0; s < g.sites(); ++s) {
                    auto cc = g.coords(s);
                    double val = 0.0;
                    for (int ax = 0; ax < 4; ++ax) val += two_pi * v.winding[ax] * g.x(cc[ax]);
                    p[s] = cplx(val, 0.0);
                }
                GaugeTransform gt = unitary_gauge(phi, {cplx(1.0)}, 1);
                Connection transformed = gauge_apply(gt, constant_abelian_connection(g, coeffs[i]));
                Form diff = transformed.potential;
                diff -= constant_abelian_connection(g, coeffs[j]).potential;
                v.gauge_check_residual = l2_norm(diff);
                v.gauge_equivalent = v.gauge_check_residual <= 1e-6;
            }
            if (v.gauge_equivalent != v.holonomy_equal) consistent = false;
            rep.pairs.push_back(v);
        }
    rep.verdicts_consistent = consistent;

    // dimension counting on the flat trivial rank-1 background
    HodgeContext ctx(Connection::flat(g, 1), base_structure_I());
    const std::vector<std::vector<cplx>> covs = {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0)},
                                                 {cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0)},
                                                 {cplx(0.0), cplx(0.0), cplx(1.0), cplx(0.0)},
                                                 {cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0)}};
    int dim = 0;
    for (const auto& cov : covs) {
        Form e = constant_form(g, 1, cov, {cplx(1.0)}, 1);
        if (l2_norm(ctx.full_laplacian(e)) <= 1e-10 * l2_norm(e)) ++dim;
    }
    rep.dim_harmonic_oneforms = dim;
    rep.dim_seed = static_cast<int>(harmonic_seed_basis(g, 1).size());
    rep.dim_dolbeault = rep.dim_seed;  // conjugate block has equal dimension
    rep.dimension_doubling = (rep.dim_harmonic_oneforms == 2 * rep.dim_dolbeault);
    return rep;
}

}  // namespace hkc
