#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hkc/calculus.hpp"
#include "hkc/complex_structure.hpp"
#include "hkc/hyperkahler.hpp"

namespace hkc {

namespace matfield {

inline void gather(const Form& f, int comp, std::int64_t site, cplx* M) {
    const int r = f.rank();
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) M[a * r + b] = f.plane(comp, a, b)[site];
}

inline void scatter(Form& f, int comp, std::int64_t site, const cplx* M) {
    const int r = f.rank();
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) f.plane(comp, a, b)[site] = M[a * r + b];
}

// Gauss-Jordan inverse with partial pivoting; returns |det|.
inline double invert(cplx* M, int r) {
    std::vector<cplx> inv(static_cast<std::size_t>(r) * r, cplx(0.0));
    for (int i = 0; i < r; ++i) inv[i * r + i] = cplx(1.0);
    cplx det(1.0);
    for (int col = 0; col < r; ++col) {
        int piv = col;
        for (int i = col + 1; i < r; ++i)
            if (std::abs(M[i * r + col]) > std::abs(M[piv * r + col])) piv = i;
        if (piv != col) {
            for (int j = 0; j < r; ++j) {
                std::swap(M[piv * r + j], M[col * r + j]);
                std::swap(inv[piv * r + j], inv[col * r + j]);
            }
            det = -det;
        }
        const cplx d = M[col * r + col];
        det *= d;
        if (std::abs(d) < 1e-300) return 0.0;
        const cplx dinv = cplx(1.0) / d;
        for (int j = 0; j < r; ++j) {
            M[col * r + j] *= dinv;
            inv[col * r + j] *= dinv;
        }
        for (int i = 0; i < r; ++i) {
            if (i == col) continue;
            const cplx fct = M[i * r + col];
            if (fct == cplx(0.0)) continue;
            for (int j = 0; j < r; ++j) {
                M[i * r + j] -= fct * M[col * r + j];
                inv[i * r + j] -= fct * inv[col * r + j];
            }
        }
    }
    std::copy(inv.begin(), inv.end(), M);
    return std::abs(det);
}

inline void multiply(const cplx* A, const cplx* B, cplx* C, int r) {
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            cplx s(0.0);
            for (int k = 0; k < r; ++k) s += A[i * r + k] * B[k * r + j];
            C[i * r + j] = s;
        }
}

// exp(M) by scaling and squaring with a Taylor series.
inline void exponential(cplx* M, int r) {
    double nrm = 0.0;
    for (int i = 0; i < r * r; ++i) nrm = std::max(nrm, std::abs(M[i]));
    nrm *= r;
    int squarings = 0;
    while (nrm > 0.5) {
        nrm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    std::vector<cplx> A(M, M + r * r), term(static_cast<std::size_t>(r) * r),
        acc(static_cast<std::size_t>(r) * r, cplx(0.0)), tmp(static_cast<std::size_t>(r) * r);
    for (auto& z : A) z *= scale;
    for (int i = 0; i < r; ++i) acc[i * r + i] = cplx(1.0);
    std::copy(acc.begin(), acc.end(), term.begin());
    for (int k = 1; k <= 24; ++k) {
        multiply(term.data(), A.data(), tmp.data(), r);
        for (int i = 0; i < r * r; ++i) term[i] = tmp[i] / static_cast<double>(k);
        double tn = 0.0;
        for (int i = 0; i < r * r; ++i) {
            acc[i] += term[i];
            tn = std::max(tn, std::abs(term[i]));
        }
        if (tn < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) {
        multiply(acc.data(), acc.data(), tmp.data(), r);
        std::swap(acc, tmp);
    }
    std::copy(acc.begin(), acc.end(), M);
}

}  // namespace matfield

// Pointwise inverse of a 0-form; throws if |det| dips below the floor.
inline Form pointwise_inverse(const Form& g, double det_floor = 1e-8) {
    if (g.degree() != 0) throw std::invalid_argument("pointwise_inverse: degree 0 required");
    Form out(g.grid(), 0, g.rank(), Form::kUnknownBand);
    const int r = g.rank();
    std::vector<cplx> M(static_cast<std::size_t>(r) * r);
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        matfield::gather(g, 0, s, M.data());
        const double det = matfield::invert(M.data(), r);
        if (det < det_floor)
            throw std::invalid_argument("pointwise_inverse: determinant below floor");
        matfield::scatter(out, 0, s, M.data());
    }
    return out;
}

// Pointwise matrix exponential of a 0-form.
inline Form pointwise_exp(const Form& x) {
    if (x.degree() != 0) throw std::invalid_argument("pointwise_exp: degree 0 required");
    Form out(x.grid(), 0, x.rank(), Form::kUnknownBand);
    const int r = x.rank();
    std::vector<cplx> M(static_cast<std::size_t>(r) * r);
    for (std::int64_t s = 0; s < x.sites(); ++s) {
        matfield::gather(x, 0, s, M.data());
        matfield::exponential(M.data(), r);
        matfield::scatter(out, 0, s, M.data());
    }
    out.set_band(measured_band(out));
    return out;
}

// Connection on the trivialized rank-r bundle, nabla = d + A.
struct Connection {
    Form potential;       // degree-1, gl(r)-valued
    bool zero_potential = false;

    Connection() = default;
    explicit Connection(Form a) : potential(std::move(a)) {
        if (potential.degree() != 1)
            throw std::invalid_argument("Connection: potential must be a 1-form");
        zero_potential = true;
        for (const auto& z : potential.raw())
            if (z != cplx(0.0)) {
                zero_potential = false;
                break;
            }
    }
    int rank() const { return potential.rank(); }
    const TorusGrid& grid() const { return potential.grid(); }

    static Connection flat(const TorusGrid& g, int rank) {
        return Connection(Form(g, 1, rank, 0));
    }
};

// Adjoint-action wedge term of the covariant derivative on End(B)-valued
// forms: sum over axes of sign * [A_j, f_S].
inline Form ad_wedge(const Form& A, const Form& f) {
    Form left = wedge_raw(A, f);
    Form right = wedge_raw(f, A);
    const double sgn = (f.degree() % 2 == 0) ? -1.0 : 1.0;
    left.axpy(cplx(sgn), right);  // A^f - (-1)^p f^A
    return left;
}

// Covariant exterior derivative d + [A, .] on End(B)-valued forms.  Scalar
// (rank-1) forms commute with the fiber, so they see the plain d when the
// connection has higher rank.
inline Form covariant_derivative(const Connection& conn, const Form& f) {
    Form df = exterior_derivative(f);
    if (conn.zero_potential) return df;
    if (f.rank() == 1 && conn.rank() != 1) return df;
    df += ad_wedge(conn.potential, f);
    return df;
}

// l2 adjoint of covariant_derivative: codifferential plus the pointwise
// adjoint of the A-term, which is the same contraction with [A_j^*, .].
inline Form covariant_codifferential(const Connection& conn, const Form& g) {
    Form out = codifferential(g);
    if (conn.zero_potential) return out;
    if (g.rank() == 1 && conn.rank() != 1) return out;
    const auto& tab = calc_detail::deriv_table(g.degree() - 1);
    const Form Astar = form_adjoint(conn.potential);
    const int r = g.rank();
    const std::int64_t ns = g.sites();
    for (int ch = 0; ch < g.comps(); ++ch) {
        for (const auto& t : tab[ch]) {
            const double sgn = t.sign;
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    cplx* dst = out.plane(t.comp_lo, a, b);
                    for (int m = 0; m < r; ++m) {
                        const cplx* am = Astar.plane(t.axis, a, m);
                        const cplx* gm = g.plane(ch, m, b);
                        const cplx* ga = g.plane(ch, a, m);
                        const cplx* amb = Astar.plane(t.axis, m, b);
                        for (std::int64_t s = 0; s < ns; ++s)
                            dst[s] += sgn * (am[s] * gm[s] - ga[s] * amb[s]);
                    }
                }
        }
    }
    return out;
}

// Covariant derivative with left action only, for (matrices of) sections:
// columns of s transform as sections of B.
inline Form covariant_derivative_sections(const Connection& conn, const Form& s) {
    Form ds = exterior_derivative(s);
    ds += wedge_raw(conn.potential, s);
    return ds;
}

// Curvature R = dA + A^A.  The quadratic term is the exact pointwise
// product: curvature is a pointwise-defined quantity of the stored
// potential, so no dealiasing is applied here.
inline Form curvature(const Connection& conn) {
    Form R = exterior_derivative(conn.potential);
    R += wedge_raw(conn.potential, conn.potential);
    return R;
}

// Pointwise invertible gauge transformation.
struct GaugeTransform {
    Form g;
    Form g_inv;

    explicit GaugeTransform(Form g_, double det_floor = 1e-8)
        : g(std::move(g_)), g_inv(pointwise_inverse(g, det_floor)) {
        if (g.degree() != 0) throw std::invalid_argument("GaugeTransform: degree 0 required");
    }
};

// Unitary gauge exp(i*phi(x)*H) for a real scalar field phi and a constant
// Hermitian H.
inline GaugeTransform unitary_gauge(const Form& phi, const std::vector<cplx>& hermitian,
                                    int rank) {
    if (phi.degree() != 0 || phi.rank() != 1)
        throw std::invalid_argument("unitary_gauge: phi must be a scalar 0-form");
    Form x(phi.grid(), 0, rank, Form::kUnknownBand);
    const cplx* p = phi.plane(0, 0, 0);
    for (int a = 0; a < rank; ++a)
        for (int b = 0; b < rank; ++b) {
            const cplx h = cplx(0.0, 1.0) * hermitian[a * rank + b];
            cplx* dst = x.plane(0, a, b);
            for (std::int64_t s = 0; s < phi.sites(); ++s) dst[s] = h * p[s];
        }
    return GaugeTransform(pointwise_exp(x));
}

// A -> g A g^{-1} - (dg) g^{-1}; curvature transforms by conjugation.
// Exact pointwise products keep the transform faithful to the sampled
// gauge field.
inline Connection gauge_apply(const GaugeTransform& gt, const Connection& conn) {
    Form a = wedge_raw(wedge_raw(gt.g, conn.potential), gt.g_inv);
    Form dg = exterior_derivative(gt.g);
    a -= wedge_raw(dg, gt.g_inv);
    return Connection(std::move(a));
}

// Pointwise conjugation g f g^{-1} of any End(B)-valued form.  Uses the
// exact pointwise product: conjugation by a pointwise unitary gauge is an
// exact isometry of the grid l2 norm.
inline Form gauge_conjugate(const GaugeTransform& gt, const Form& f) {
    return wedge_raw(wedge_raw(gt.g, f), gt.g_inv);
}

struct NhymResidual {
    double r20 = 0.0;
    double r02 = 0.0;
    double r_lambda = 0.0;
};

// Residuals of the two Yang-Mills conditions for a supplied curvature form:
// L2 norms of the (2,0) and (0,2) parts and of Lambda R (target constant
// fixed to 0).
inline NhymResidual nhym_residual_of_curvature(const Form& R, const ComplexStructureMatrix& cs) {
    TypeProjector proj(cs);
    NhymResidual res;
    res.r20 = l2_norm(proj.apply(R, 2, 0));
    res.r02 = l2_norm(proj.apply(R, 0, 2));
    auto w = kahler_components(cs);
    std::array<cplx, 6> wc;
    for (int c = 0; c < 6; ++c) wc[c] = cplx(w[c]);
    res.r_lambda = l2_norm(lambda_op(wc, R));
    return res;
}

inline NhymResidual nhym_residual(const Connection& conn, const ComplexStructureMatrix& cs) {
    return nhym_residual_of_curvature(curvature(conn), cs);
}

inline double autodual_residual_of_curvature(const Form& R) {
    return su2_invariance_residual(R);
}

inline double autodual_residual(const Connection& conn) {
    return su2_invariance_residual(curvature(conn));
}

// Hermitian positive-definite fiber metric as a 0-form.
struct HermitianMetric {
    Form h;

    explicit HermitianMetric(Form h_, double eig_floor = 1e-8) : h(std::move(h_)) {
        if (h.degree() != 0) throw std::invalid_argument("HermitianMetric: degree 0 required");
        validate(eig_floor);
    }

    static HermitianMetric identity(const TorusGrid& g, int rank) {
        Form h(g, 0, rank, 0);
        for (int a = 0; a < rank; ++a) {
            cplx* p = h.plane(0, a, a);
            for (std::int64_t s = 0; s < g.sites(); ++s) p[s] = cplx(1.0);
        }
        return HermitianMetric(std::move(h));
    }

private:
    void validate(double eig_floor) const {
        const int r = h.rank();
        double scale = 1.0;
        for (const auto& z : h.raw()) scale = std::max(scale, std::abs(z));
        const double herm_tol = 1e-9 * scale;
        std::vector<cplx> M(static_cast<std::size_t>(r) * r);
        for (std::int64_t s = 0; s < h.sites(); ++s) {
            matfield::gather(h, 0, s, M.data());
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b)
                    if (std::abs(M[a * r + b] - std::conj(M[b * r + a])) > herm_tol)
                        throw std::invalid_argument("HermitianMetric: h != h* pointwise");
            // Cholesky pivots as positivity certificates
            for (int col = 0; col < r; ++col) {
                double piv = M[col * r + col].real();
                if (piv < eig_floor)
                    throw std::invalid_argument("HermitianMetric: eigenvalue floor violated");
                const double inv = 1.0 / piv;
                for (int i = col + 1; i < r; ++i)
                    for (int j = col + 1; j <= i; ++j)
                        M[i * r + j] -= M[i * r + col] * std::conj(M[j * r + col]) * inv;
                for (int i = col + 1; i < r; ++i)
                    for (int j = i + 1; j < r; ++j) M[i * r + j] = std::conj(M[j * r + i]);
            }
        }
    }
};

// The unique connection nabla_h with d h(s,t) = h(nabla s, t) + h(s, nabla_h t):
// A_h = h^{-1} dh - h^{-1} A^* h.
inline Connection adjoint_connection(const Connection& conn, const HermitianMetric& hm) {
    Form hinv = pointwise_inverse(hm.h);
    Form dh = exterior_derivative(hm.h);
    Form a = wedge_raw(hinv, dh);
    a -= wedge_raw(wedge_raw(hinv, form_adjoint(conn.potential)), hm.h);
    return Connection(std::move(a));
}

// Pseudocurvature: theta = (nabla - nabla_h)/2 is a 1-form tensor; Xi is its
// covariant derivative by the averaged connection nabla_avg = (nabla +
// nabla_h)/2.
struct Pseudocurvature {
    Form theta;  // degree 1
    Form xi;     // degree 2
};

inline Pseudocurvature pseudocurvature(const Connection& conn, const HermitianMetric& hm) {
    const Connection adj = adjoint_connection(conn, hm);
    Form theta = conn.potential;
    theta -= adj.potential;
    theta *= cplx(0.5);
    Form avg = conn.potential;
    avg += adj.potential;
    avg *= cplx(0.5);
    const Connection navg{std::move(avg)};
    Form xi = covariant_derivative(navg, theta);
    return {std::move(theta), std::move(xi)};
}

// ||Lambda_cs Xi||; zero characterizes harmonic metrics.
inline double harmonic_metric_residual(const Connection& conn, const HermitianMetric& hm,
                                       const ComplexStructureMatrix& cs) {
    auto pc = pseudocurvature(conn, hm);
    auto w = kahler_components(cs);
    std::array<cplx, 6> wc;
    for (int c = 0; c < 6; ++c) wc[c] = cplx(w[c]);
    return l2_norm(lambda_op(wc, pc.xi));
}

// Residual of the defining identity of adjoint_connection on random
// band-limited section matrices: d h(s,t) - h(nabla s, t) - h(s, nabla_h t).
inline double adjoint_compatibility_residual(const Connection& conn, const HermitianMetric& hm,
                                             const Form& s, const Form& t) {
    const Connection adj = adjoint_connection(conn, hm);
    // h(s,t) = t^dagger h s as a matrix-valued 0-form
    auto pair_forms = [&](const Form& sv, const Form& tv) {
        return wedge_raw(wedge_raw(form_adjoint(tv), hm.h), sv);
    };
    Form lhs = exterior_derivative(pair_forms(s, t));
    Form ns = covariant_derivative_sections(conn, s);
    Form nt = covariant_derivative_sections(adj, t);
    // h(nabla s, t): t^dagger h (nabla s); h(s, nabla_h t): (nabla_h t)^dagger h s
    Form rhs = wedge_raw(wedge_raw(form_adjoint(t), hm.h), ns);
    rhs += wedge_raw(wedge_raw(form_adjoint(nt), hm.h), s);
    lhs -= rhs;
    return l2_norm(lhs);
}

}  // namespace hkc
