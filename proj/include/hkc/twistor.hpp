#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hkc/connection.hpp"
#include "hkc/hyperkahler.hpp"

namespace hkc {

namespace twistor_detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
inline std::vector<std::pair<double, double>> gauss_legendre(int m) {
    std::vector<std::pair<double, double>> out(m);
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        out[i] = {x, 2.0 / ((1.0 - x * x) * pp * pp)};
    }
    return out;
}

// Wedge of two constant scalar 2-forms: coefficient of the volume form.
inline cplx const_wedge_22(const std::array<cplx, 6>& w1, const std::array<cplx, 6>& w2) {
    const int* masks = multi_index::masks(2);
    cplx acc(0.0);
    for (int c1 = 0; c1 < 6; ++c1)
        for (int c2 = 0; c2 < 6; ++c2) {
            const int s = multi_index::wedge_sign(masks[c1], masks[c2]);
            if (s != 0) acc += static_cast<double>(s) * w1[c1] * w2[c2];
        }
    return acc;
}

inline std::array<cplx, 6> to_cplx6(const std::array<double, 6>& w) {
    std::array<cplx, 6> out;
    for (int c = 0; c < 6; ++c) out[c] = cplx(w[c]);
    return out;
}

}  // namespace twistor_detail

// Deterministic quadrature over the 2-sphere of induced complex structures:
// Gauss-Legendre in cos(theta) times a uniform phi grid, closed under the
// antipodal map, weights normalized to total mass 1.  The Fubini-Study
// measure on CP^1 is realized as this round measure (total mass fixed to 1).
struct TwistorSample {
    struct Node {
        ImaginaryUnit a;
        double weight = 0.0;
        double fs_density = 1.0;
        ComplexStructureMatrix cs;
        std::array<double, 6> omega{};
        // deterministic completion of a to an oriented orthonormal triple
        ImaginaryUnit b, c;
    };
    int level = 0;
    std::vector<Node> nodes;
    std::vector<int> antipode;  // index of -a for each node

    double total_weight() const {
        double s = 0.0;
        for (const auto& n : nodes) s += n.weight;
        return s;
    }
};

// Completion rule: Gram-Schmidt of a fixed helper axis against a, with the
// documented branch to the J-axis when a is within 0.9 of +/-I.
inline void complete_triple(const ImaginaryUnit& a, ImaginaryUnit& b_out, ImaginaryUnit& c_out) {
    double h[3] = {1.0, 0.0, 0.0};
    if (std::abs(a.alpha) > 0.9) {
        h[0] = 0.0;
        h[1] = 1.0;
    }
    const double d = h[0] * a.alpha + h[1] * a.beta + h[2] * a.gamma;
    double b[3] = {h[0] - d * a.alpha, h[1] - d * a.beta, h[2] - d * a.gamma};
    const double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    for (double& v : b) v /= nb;
    // c = a x b makes (a, b, c) a quaternionic triple: ab = c.
    const double c[3] = {a.beta * b[2] - a.gamma * b[1], a.gamma * b[0] - a.alpha * b[2],
                         a.alpha * b[1] - a.beta * b[0]};
    b_out = ImaginaryUnit::normalized(b[0], b[1], b[2]);
    c_out = ImaginaryUnit::normalized(c[0], c[1], c[2]);
}

inline TwistorSample s2_sample(int level) {
    if (level < 1) throw std::invalid_argument("s2_sample: level >= 1 required");
    TwistorSample ts;
    ts.level = level;
    const int n_theta = 2 * level;
    const int n_phi = 4 * level;
    const auto gl = twistor_detail::gauss_legendre(n_theta);
    for (int iu = 0; iu < n_theta; ++iu) {
        const double u = gl[iu].first;
        const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * std::numbers::pi * ip / n_phi;
            TwistorSample::Node node;
            node.a = ImaginaryUnit::normalized(su * std::cos(phi), su * std::sin(phi), u);
            node.weight = gl[iu].second / (2.0 * n_phi);
            node.cs = induced_structure(node.a);
            node.omega = kahler_components(node.cs);
            complete_triple(node.a, node.b, node.c);
            ts.nodes.push_back(node);
        }
    }
    // antipodal pairing: (u, phi) -> (-u, phi + pi); exact by construction
    ts.antipode.assign(ts.nodes.size(), -1);
    for (std::size_t i = 0; i < ts.nodes.size(); ++i) {
        const auto& ai = ts.nodes[i].a;
        double best = 1e9;
        int best_j = -1;
        for (std::size_t j = 0; j < ts.nodes.size(); ++j) {
            const auto& aj = ts.nodes[j].a;
            const double d = std::abs(ai.alpha + aj.alpha) + std::abs(ai.beta + aj.beta) +
                             std::abs(ai.gamma + aj.gamma);
            if (d < best) {
                best = d;
                best_j = static_cast<int>(j);
            }
        }
        if (best > 1e-9) throw std::logic_error("s2_sample: node set not antipodally closed");
        ts.antipode[i] = best_j;
    }
    return ts;
}

// deg eta = integral of omega_a ^ eta for a closed real 2-form.
inline double degree_functional(const Form& eta, const ImaginaryUnit& a,
                                double closed_tol = 1e-8) {
    if (eta.degree() != 2) throw std::invalid_argument("degree_functional: 2-form required");
    const double ne = l2_norm(eta);
    if (ne > 0.0 && l2_norm(exterior_derivative(eta)) > closed_tol * std::max(ne, 1.0))
        throw std::invalid_argument("degree_functional: form is not closed within tolerance");
    return std::real(integrate(wedge(kahler_form(eta.grid(), a), eta)));
}

struct FamilyTypeReport {
    std::vector<double> per_node;
    double max = 0.0;
};

namespace twistor_detail {

// Spectrum coefficients of a 2-form packed as per-mode 6-vectors per fiber
// entry, with empty modes dropped; the type residual is evaluated per mode
// by Parseval.  Applying the projector explicitly (instead of the quadratic
// form <Pi f, f>) keeps full cancellation on nearly type-pure inputs.
struct PackedSpectrum {
    int rr = 0;
    std::vector<cplx> values;  // active * rr * 6

    explicit PackedSpectrum(const Form& R) {
        if (R.degree() != 2)
            throw std::invalid_argument("family_type_residual: 2-form required");
        Spectrum s = to_spectrum(R);
        rr = R.rank() * R.rank();
        const std::int64_t ns = R.sites();
        std::vector<std::int64_t> active;
        for (std::int64_t i = 0; i < ns; ++i) {
            bool nonzero = false;
            for (int c = 0; c < 6 && !nonzero; ++c)
                for (int e = 0; e < rr; ++e)
                    if (s.data[(static_cast<std::size_t>(c) * rr + e) * ns + i] != cplx(0.0)) {
                        nonzero = true;
                        break;
                    }
            if (nonzero) active.push_back(i);
        }
        values.resize(active.size() * rr * 6);
        for (std::size_t m = 0; m < active.size(); ++m)
            for (int e = 0; e < rr; ++e)
                for (int c = 0; c < 6; ++c)
                    values[(m * rr + e) * 6 + c] =
                        s.data[(static_cast<std::size_t>(c) * rr + e) * ns + active[m]];
    }

    double residual(const TypeProjector& proj) const {
        const auto& p20 = proj.matrix(2, 2, 0);
        const auto& p02 = proj.matrix(2, 0, 2);
        double acc = 0.0;
        const std::size_t vectors = values.size() / 6;
        for (std::size_t v = 0; v < vectors; ++v) {
            const cplx* x = values.data() + v * 6;
            for (int row = 0; row < 6; ++row) {
                cplx w20(0.0), w02(0.0);
                for (int col = 0; col < 6; ++col) {
                    w20 += p20[row][col] * x[col];
                    w02 += p02[row][col] * x[col];
                }
                acc += std::norm(w20) + std::norm(w02);
            }
        }
        return std::sqrt(acc);
    }
};

}  // namespace twistor_detail

// || (2,0) + (0,2) parts of R with respect to a ||, for one structure.
inline double family_type_residual_at(const Form& R, const ComplexStructureMatrix& cs) {
    return twistor_detail::PackedSpectrum(R).residual(TypeProjector(cs));
}

// Per-fiber Hodge-type residuals of a curvature form over the whole twistor
// family; the max over nodes is the twistor-transform obstruction.
inline FamilyTypeReport family_type_residual(const Form& R, const TwistorSample& ts) {
    const twistor_detail::PackedSpectrum packed(R);
    FamilyTypeReport rep;
    rep.per_node.reserve(ts.nodes.size());
    for (const auto& node : ts.nodes) {
        const double v = packed.residual(TypeProjector(node.cs));
        rep.per_node.push_back(v);
        rep.max = std::max(rep.max, v);
    }
    return rep;
}

inline FamilyTypeReport family_type_residual(const Connection& conn, const TwistorSample& ts) {
    return family_type_residual(curvature(conn), ts);
}

struct LiYauReport {
    double max_residual = 0.0;   // max over nodes of |omega_a ^ omega_b|, |omega_a ^ Omega_a|
    double control_min = 0.0;    // omega_a ^ omega_a coefficient, expect 2
    double control_max = 0.0;
};

// Pointwise wedge identities the twistor Hermitian form reduces to on the
// M-factor: omega_a ^ omega_b = 0 for the orthonormal completion (b, c) and
// omega_a ^ Omega_a = 0 with Omega_a = omega_b + i omega_c, while
// omega_a ^ omega_a stays pinned at twice the volume form.
inline LiYauReport li_yau_check(const TwistorSample& ts) {
    using twistor_detail::const_wedge_22;
    using twistor_detail::to_cplx6;
    LiYauReport rep;
    rep.control_min = 1e300;
    rep.control_max = -1e300;
    for (const auto& node : ts.nodes) {
        const auto wa = to_cplx6(node.omega);
        const auto wb = to_cplx6(kahler_components(node.b));
        const auto wc = to_cplx6(kahler_components(node.c));
        std::array<cplx, 6> wo;
        for (int c = 0; c < 6; ++c) wo[c] = wb[c] + cplx(0.0, 1.0) * wc[c];
        const double r1 = std::abs(const_wedge_22(wa, wb));
        const double r2 = std::abs(const_wedge_22(wa, wo));
        rep.max_residual = std::max(rep.max_residual, std::max(r1, r2));
        const double ctrl = std::real(const_wedge_22(wa, wa));
        rep.control_min = std::min(rep.control_min, ctrl);
        rep.control_max = std::max(rep.control_max, ctrl);
    }
    return rep;
}

// Horizontal twistor line {m} x S^2.
struct HorizontalLine {
    std::array<double, 4> base_point{};
};

// Hermitian volume of a horizontal line: the fiber metric restricted to the
// section is the round CP^1 metric, so the volume is the total quadrature
// mass (normalized to 1 by the weight convention).
inline double line_volume(const HorizontalLine&, const TwistorSample& ts) {
    double v = 0.0;
    for (const auto& node : ts.nodes) v += node.weight * node.fs_density;
    return v;
}

// Hessian of the line volume on a constant variation field v along the line:
// integral over S^2 of |v^{1,0}_a|^2 with the Fubini-Study weights, where
// v^{1,0}_a = (v - i a v)/2 is the (1,0)-projection of the complexified
// tangent vector.
inline double psh_hessian(const std::array<cplx, 4>& v, const TwistorSample& ts) {
    double acc = 0.0;
    for (const auto& node : ts.nodes) {
        cplx proj[4];
        for (int i = 0; i < 4; ++i) {
            cplx av(0.0);
            for (int j = 0; j < 4; ++j) av += node.cs(i, j) * v[j];
            proj[i] = 0.5 * (v[i] - cplx(0.0, 1.0) * av);
        }
        double n2 = 0.0;
        for (int i = 0; i < 4; ++i) n2 += std::norm(proj[i]);
        acc += node.weight * node.fs_density * n2;
    }
    return acc;
}

// Polarized Hermitian form of psh_hessian.
inline cplx psh_hessian_pair(const std::array<cplx, 4>& u, const std::array<cplx, 4>& v,
                             const TwistorSample& ts) {
    cplx acc(0.0);
    for (const auto& node : ts.nodes) {
        cplx pu[4], pv[4];
        for (int i = 0; i < 4; ++i) {
            cplx au(0.0), av(0.0);
            for (int j = 0; j < 4; ++j) {
                au += node.cs(i, j) * u[j];
                av += node.cs(i, j) * v[j];
            }
            pu[i] = 0.5 * (u[i] - cplx(0.0, 1.0) * au);
            pv[i] = 0.5 * (v[i] - cplx(0.0, 1.0) * av);
        }
        cplx dot(0.0);
        for (int i = 0; i < 4; ++i) dot += pu[i] * std::conj(pv[i]);
        acc += node.weight * node.fs_density * dot;
    }
    return acc;
}

}  // namespace hkc
