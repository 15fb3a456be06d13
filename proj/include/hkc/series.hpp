#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkc/hodge.hpp"
#include "hkc/hyperkahler.hpp"

namespace hkc {

// Catalan numbers by the convolution recursion a_0 = 1,
// a_n = sum_{0<=k<n} a_k a_{n-1-k}; this is the recursion the series bound
// actually uses.  1, 1, 2, 5, 14, 42, ...
inline std::uint64_t catalan_bound(int n) {
    if (n < 0) throw std::invalid_argument("catalan_bound: n >= 0 required");
    if (n > 32) throw std::invalid_argument("catalan_bound: n too large for 64-bit");
    std::vector<std::uint64_t> a(n + 1, 0);
    a[0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int k = 0; k < m; ++k) a[m] += a[k] * a[m - 1 - k];
    return a[n];
}

// Central binomial coefficients (2n)!/(n!)^2: 1, 2, 6, 20, 70, ...  Reported
// alongside the recursion values as a documented discrepancy; the recursion
// is authoritative for the bounds.
inline std::uint64_t central_binomial(int n) {
    if (n < 0) throw std::invalid_argument("central_binomial: n >= 0 required");
    if (n > 30) throw std::invalid_argument("central_binomial: n too large for 64-bit");
    std::uint64_t v = 1;
    for (int k = 1; k <= n; ++k) v = v * (n + k) / k;
    return v;
}

// Smallest nonzero singular value of D on the image of D*: per Fourier mode
// the D-Laplacian eigenvalue is (2*pi*|k|)^2/2, so C = min over k != 0 of
// its square root -- a finite minimum at fixed N.
inline double ellipticity_constant(const TorusGrid& g) {
    const auto& lap = spectral_tables(g).lap_full;
    double best = -1.0;
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        const double lam = 0.5 * lap[s];
        if (lam > 0.0 && (best < 0.0 || lam < best)) best = lam;
    }
    return std::sqrt(best);
}

// Accumulated terms of the NHYM power series: theta_0 harmonic, and
// theta_n = D* G ( sum_{0<=k<n} theta_k ^ theta_{n-1-k} ).
struct SeriesState {
    const HodgeContext* ctx = nullptr;
    std::vector<Form> terms;          // theta_0 ... theta_n
    std::vector<double> norms;        // ||theta_k||
    std::vector<double> massey;       // obstruction per order (index n = order)
    double epsilon = 0.0;             // ||theta_0||
    double ellipticity = 0.0;         // constant C

    SeriesState(const HodgeContext& context, Form theta0) : ctx(&context) {
        epsilon = l2_norm(theta0);
        ellipticity = ellipticity_constant(theta0.grid());
        norms.push_back(epsilon);
        massey.push_back(0.0);  // no obstruction at order 0
        terms.push_back(std::move(theta0));
    }

    int order() const { return static_cast<int>(terms.size()) - 1; }

    // Per-order envelope a_n * eps^{n+1} / C^n from the series bound, with
    // the dimensionally consistent exponent.
    double envelope(int n) const {
        double a = 1.0;
        {
            std::vector<double> v(n + 1, 0.0);
            v[0] = 1.0;
            for (int m = 1; m <= n; ++m)
                for (int k = 0; k < m; ++k) v[m] += v[k] * v[m - 1 - k];
            a = v[n];
        }
        return a * std::pow(epsilon, n + 1) / std::pow(ellipticity, n);
    }
};

// Per-order Catalan-bound envelopes for every accumulated order.
inline std::vector<double> bound_envelope(const SeriesState& state) {
    std::vector<double> out;
    for (int n = 0; n <= state.order(); ++n) out.push_back(state.envelope(n));
    return out;
}

// Quadratic source at order n: sum_{0<=k<n} theta_k ^ theta_{n-1-k}.
inline Form series_source(const SeriesState& state, int n) {
    if (n < 1 || n > state.order() + 1)
        throw std::invalid_argument("series_source: need terms through order n-1");
    const Form& t0 = state.terms[0];
    Form src(t0.grid(), 2, t0.rank(), 0);
    for (int k = 0; k < n; ++k) src += wedge(state.terms[k], state.terms[n - 1 - k]);
    return src;
}

// Norm of the harmonic (non-exact) part of the order-n quadratic source; its
// vanishing is the order-n Massey obstruction.
inline double massey_obstruction(const SeriesState& state, int n) {
    return l2_norm(state.ctx->harmonic_project(series_source(state, n)));
}

// Compute theta_n = D* G (source_n), append it to the state and return it.
inline const Form& theta_next(SeriesState& state) {
    const int n = state.order() + 1;
    Form src = series_source(state, n);
    const double obstruction = l2_norm(state.ctx->harmonic_project(src));
    Form theta = state.ctx->dee_star(state.ctx->green_apply(src));
    state.terms.push_back(std::move(theta));
    state.norms.push_back(l2_norm(state.terms.back()));
    state.massey.push_back(obstruction);
    return state.terms.back();
}

struct NhymEquationResidual {
    double eq_d = 0.0;       // || D theta + theta ^ theta ||
    double eq_d_star = 0.0;  // || D* theta ||
};

// Residuals of D theta + theta^theta = 0 and D* theta = 0 for a (1,0)-form.
inline NhymEquationResidual verify_nhym(const HodgeContext& ctx, const Form& theta) {
    NhymEquationResidual r;
    Form lhs = ctx.dee(theta);
    lhs += wedge(theta, theta);
    r.eq_d = l2_norm(lhs);
    r.eq_d_star = l2_norm(ctx.dee_star(theta));
    return r;
}

// del^J = [Dbar, [L_Omega, Lambda]] with Omega the holomorphic symplectic
// form and Lambda the Lefschetz adjoint of the preferred structure.  Acts on
// forms of pure Hodge type (p,q).
inline Form del_j_apply(const HodgeContext& ctx, const Form& f, int p, int q) {
    if (p + q != f.degree()) throw std::invalid_argument("del_j_apply: bad Hodge type");
    static const HKStructure hk;
    const auto omega_h = hk.omega_holomorphic();
    const auto& omega_pref = ctx.omega();

    // [L_Omega, Lambda]: degree-preserving, shifts Hodge type (p,q) to
    // (p+1, q-1).  Wedges landing above degree 4 vanish on the 4-torus.
    auto nest = [&](const Form& x) {
        Form out(x.grid(), x.degree(), x.rank(), x.band());
        if (x.degree() >= 2) {
            Form lx = lambda_op(omega_pref, x);
            out += lefschetz_L(omega_h, lx);
        }
        if (x.degree() <= 2) {
            Form wx = lefschetz_L(omega_h, x);
            out -= lambda_op(omega_pref, wx);
        }
        return out;
    };

    // [Dbar, N] f = Dbar(N f) - N(Dbar f); N has even total degree so the
    // commutator is ungraded in this pairing.
    Form nf = nest(f);
    Form out(f.grid(), f.degree() + 1, f.rank(), f.band());
    if (nf.degree() <= 3) {
        // N maps (p,q) to (p+1, q-1); Dbar raises q.
        out += ctx.dee_bar(nf);
    }
    if (f.degree() <= 3) out -= nest(ctx.dee_bar(f));
    return out;
}

// ||del^J theta_k|| for every accumulated order.
inline std::vector<double> del_j_residuals(const SeriesState& state) {
    std::vector<double> out;
    out.reserve(state.terms.size());
    for (const auto& t : state.terms)
        out.push_back(l2_norm(del_j_apply(*state.ctx, t, 1, 0)));
    return out;
}

// Orthonormal basis of the constant (1,0) End(B)-valued harmonic seeds:
// E_ab dz_i / sqrt(2), 2 r^2 of them.
inline std::vector<Form> harmonic_seed_basis(const TorusGrid& g, int rank) {
    std::vector<Form> basis;
    const double inv = 1.0 / std::sqrt(2.0);
    const std::vector<std::vector<cplx>> covs = {
        {cplx(inv), cplx(0, inv), cplx(0), cplx(0)},   // dz1/sqrt(2)
        {cplx(0), cplx(0), cplx(inv), cplx(0, inv)}};  // dz2/sqrt(2)
    for (const auto& cov : covs)
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < rank; ++b) {
                std::vector<cplx> fiber(static_cast<std::size_t>(rank) * rank, cplx(0.0));
                fiber[a * rank + b] = cplx(1.0);
                basis.push_back(constant_form(g, 1, cov, fiber, rank));
            }
    return basis;
}

// Coordinates of harmonic_project(theta) in the fixed harmonic (1,0) basis;
// the cohomology class map.
inline std::vector<cplx> rho(const HodgeContext& ctx, const Form& theta) {
    Form h = ctx.harmonic_project(theta);
    std::vector<cplx> coords;
    for (const auto& e : harmonic_seed_basis(theta.grid(), theta.rank()))
        coords.push_back(l2_inner(h, e));
    return coords;
}

struct SolveReport {
    bool converged = false;
    bool obstructed = false;
    bool diverged = false;
    int order = 0;
    std::vector<double> tail_norms;
    std::vector<double> massey;
    std::vector<double> del_j;
    std::vector<double> envelope;
    NhymEquationResidual nhym_residuals;
    std::vector<cplx> class_coords;
    std::string verdict;  // "nhym", "obstructed", "diverged", "no-convergence"
    Form theta_sum;
};

// Iterate theta_next until the tail norm drops below tol or max_order is
// reached.  The result is declared NHYM only when every Massey obstruction
// through the reached order is also below tol.
inline SolveReport solve_series(const HodgeContext& ctx, const Form& theta0, double tol,
                                int max_order) {
    if (theta0.degree() != 1) throw std::invalid_argument("solve_series: seed must be a 1-form");
    {
        const double n0 = l2_norm(theta0);
        if (n0 > 0.0 && l2_norm(ctx.laplacian(theta0)) > 100.0 * tol * n0)
            throw std::invalid_argument("solve_series: seed is not harmonic within tolerance");
    }
    SeriesState state(ctx, theta0);
    SolveReport rep;
    rep.theta_sum = theta0;

    bool tail_small = state.epsilon == 0.0;
    int n = 0;
    while (n < max_order) {
        ++n;
        const Form& t = theta_next(state);
        rep.theta_sum += t;
        const double tn = state.norms.back();
        if (tn <= tol) {
            tail_small = true;
            break;
        }
        // divergence diagnosis against the Catalan-bound envelope
        if (n >= 2 && tn > state.envelope(n) && tn > state.norms[n - 1]) {
            rep.diverged = true;
            break;
        }
    }
    // Order reached: the largest order whose term is above tolerance.
    rep.order = 0;
    for (int k = 0; k <= state.order(); ++k)
        if (state.norms[k] > tol) rep.order = k;
    if (!tail_small) rep.order = state.order();
    rep.tail_norms = state.norms;
    rep.massey = state.massey;
    for (int k = 0; k <= state.order(); ++k) rep.envelope.push_back(state.envelope(k));
    rep.del_j = del_j_residuals(state);
    rep.nhym_residuals = verify_nhym(ctx, rep.theta_sum);
    rep.class_coords = rho(ctx, rep.theta_sum);

    double max_massey = 0.0;
    for (double m : state.massey) max_massey = std::max(max_massey, m);
    rep.obstructed = max_massey > tol;
    rep.converged = tail_small && !rep.diverged;
    if (rep.diverged)
        rep.verdict = "diverged";
    else if (!rep.converged)
        rep.verdict = "no-convergence";
    else if (rep.obstructed)
        rep.verdict = "obstructed";
    else
        rep.verdict = "nhym";
    return rep;
}

}  // namespace hkc
