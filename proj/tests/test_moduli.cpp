#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hkc/moduli.hpp"
#include "support/oracles.hpp"

using namespace hkc;

namespace {
const SeedRng rng(2468);

Form const_oneform(const TorusGrid& g, const std::vector<std::vector<cplx>>& axis_matrices,
                   int rank) {
    Form f(g, 1, rank, 0);
    for (int ax = 0; ax < 4; ++ax) {
        std::vector<cplx> comps(4, cplx(0.0));
        comps[ax] = cplx(1.0);
        f += constant_form(g, 1, comps, axis_matrices[ax], rank);
    }
    return f;
}
}  // namespace

TEST_CASE("symplectic pairing is antisymmetric") {
    TorusGrid g(8);
    auto st = rng.stream("anti");
    const ImaginaryUnit a = ImaginaryUnit::normalized(st.normal(), st.normal(), st.normal());
    Form t0 = random_form(g, 1, 2, 2, st);
    Form t1 = random_form(g, 1, 2, 2, st);
    const cplx lhs = symplectic_pair(t0, t1, a);
    const cplx rhs = symplectic_pair(t1, t0, a);
    CHECK(std::abs(lhs + rhs) < 1e-10 * l2_norm(t0) * l2_norm(t1));
    CHECK_THROWS_AS(symplectic_pair(Form(g, 2, 1, 0), t1, a), std::invalid_argument);
}

TEST_CASE("pairing of constant forms matches the Levi-Civita oracle") {
    TorusGrid g(8);
    auto st = rng.stream("oracle");
    for (int t = 0; t < 4; ++t) {
        const ImaginaryUnit a = ImaginaryUnit::normalized(st.normal(), st.normal(), st.normal());
        std::vector<std::vector<cplx>> m0, m1;
        for (int ax = 0; ax < 4; ++ax) {
            m0.push_back(random_matrix(2, st));
            m1.push_back(random_matrix(2, st));
        }
        Form t0 = const_oneform(g, m0, 2);
        Form t1 = const_oneform(g, m1, 2);
        const cplx got = symplectic_pair(t0, t1, a);
        const cplx expect = oracles::pair_integral_oracle(
            m0, m1, oracles::kahler_table_oracle(a.alpha, a.beta, a.gamma), 2);
        CHECK(std::abs(got - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("omega vanishes on gauge directions against Lambda-divergence-free forms") {
    TorusGrid g(16);
    HodgeContext ctx(Connection::flat(g, 2), base_structure_I());
    auto st = rng.stream("lemma");
    const ImaginaryUnit aI(1, 0, 0);

    // theta0 = covariant derivative of a random section
    Form gsec = random_form(g, 0, 2, 2, st);
    Form theta0 = ctx.cov_d(gsec);

    // theta1: random 1-form projected per mode so that Lambda d theta1 = 0
    Form eta = random_form(g, 1, 2, 3, st);
    Form correction_target = lambda_op(aI, exterior_derivative(eta));  // 0-form
    // subtract d*-lifted correction per mode: solve Lambda d (eta - c) = 0
    // with c = kappa-direction 1-form per mode
    Spectrum es = to_spectrum(eta);
    const auto& tables = spectral_tables(g);
    Spectrum corr(g, 1, 2);
    {
        // Lambda d maps, per mode, the 1-form coefficients to a scalar:
        // ell(v) = sum_S w_S (kappa ^ v)_S.  Project v -> v - ell(v)/ell(u) u
        // with u the adjoint direction.
        const auto w = kahler_components(aI);
        static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        for (std::int64_t site = 0; site < g.sites(); ++site) {
            cplx kap[4];
            for (int ax = 0; ax < 4; ++ax) kap[ax] = cplx(0.0, tables.two_pi_k[ax][site]);
            // ell coefficients: ell_j = sum over pairs containing j
            cplx ell[4] = {};
            for (int c6 = 0; c6 < 6; ++c6) {
                const int m = pairs[c6][0], n = pairs[c6][1];
                ell[n] += w[c6] * kap[m];
                ell[m] -= w[c6] * kap[n];
            }
            double n2 = 0.0;
            for (int j = 0; j < 4; ++j) n2 += std::norm(ell[j]);
            if (n2 < 1e-20) continue;
            for (int ra = 0; ra < 2; ++ra)
                for (int rb = 0; rb < 2; ++rb) {
                    cplx val(0.0);
                    for (int j = 0; j < 4; ++j) val += ell[j] * es.plane(j, ra, rb)[site];
                    for (int j = 0; j < 4; ++j)
                        corr.plane(j, ra, rb)[site] = val * std::conj(ell[j]) / n2;
                }
        }
    }
    Form theta1 = eta;
    theta1 -= from_spectrum(corr, eta.band());
    // verify the constraint actually holds
    CHECK(l2_norm(lambda_op(aI, exterior_derivative(theta1))) < 1e-9 * l2_norm(theta1));
    const cplx val = symplectic_pair(theta0, theta1, aI);
    CHECK(std::abs(val) < 1e-9 * std::max(1.0, l2_norm(theta0) * l2_norm(theta1)));
}

TEST_CASE("rank-1 pairing matrix between dz and dzbar blocks is -2i times identity") {
    TorusGrid g(8);
    const ImaginaryUnit aI(1, 0, 0);
    const std::vector<std::vector<cplx>> dz = {
        {cplx(1), cplx(0, 1), cplx(0), cplx(0)},   // dz1
        {cplx(0), cplx(0), cplx(1), cplx(0, 1)}};  // dz2
    const std::vector<std::vector<cplx>> dzbar = {
        {cplx(1), cplx(0, -1), cplx(0), cplx(0)},
        {cplx(0), cplx(0), cplx(1), cplx(0, -1)}};
    cplx mat[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Form ti = constant_form(g, 1, dz[i], {cplx(1.0)}, 1);
            Form tj = constant_form(g, 1, dzbar[j], {cplx(1.0)}, 1);
            mat[i][j] = symplectic_pair(ti, tj, aI);
            // direct integration oracle
            std::vector<std::vector<cplx>> m0(4, std::vector<cplx>{cplx(0.0)}),
                m1(4, std::vector<cplx>{cplx(0.0)});
            for (int ax = 0; ax < 4; ++ax) {
                m0[ax][0] = dz[i][ax];
                m1[ax][0] = dzbar[j][ax];
            }
            const cplx oracle =
                oracles::pair_integral_oracle(m0, m1, oracles::kahler_table_oracle(1, 0, 0), 1);
            CHECK(std::abs(mat[i][j] - oracle) < 1e-10);
        }
    CHECK(std::abs(mat[0][0] - cplx(0.0, -2.0)) < 1e-10);
    CHECK(std::abs(mat[1][1] - cplx(0.0, -2.0)) < 1e-10);
    CHECK(std::abs(mat[0][1]) < 1e-10);
    CHECK(std::abs(mat[1][0]) < 1e-10);
    // nondegeneracy
    const cplx det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0];
    CHECK(std::abs(det) > 1.0);
}

TEST_CASE("fiber-direction blocks are isotropic") {
    TorusGrid g(8);
    HodgeContext ctx(Connection::flat(g, 2), base_structure_I());
    auto st = rng.stream("iso");
    const ImaginaryUnit aI(1, 0, 0);
    for (int t = 0; t < 4; ++t) {
        Form u = ctx.projector().apply(random_form(g, 1, 2, 2, st), 1, 0);
        Form v = ctx.projector().apply(random_form(g, 1, 2, 2, st), 1, 0);
        CHECK(std::abs(symplectic_pair(u, v, aI)) < 1e-10 * l2_norm(u) * l2_norm(v));
        // both-(0,1) blocks pair to zero as well
        Form ub = ctx.projector().apply(random_form(g, 1, 2, 2, st), 0, 1);
        Form vb = ctx.projector().apply(random_form(g, 1, 2, 2, st), 0, 1);
        CHECK(std::abs(symplectic_pair(ub, vb, aI)) < 1e-10 * l2_norm(ub) * l2_norm(vb));
    }
}

TEST_CASE("kuranishi residuals: zero, constant abelian, conjugation duality") {
    TorusGrid g(8);
    HodgeContext ctx(Connection::flat(g, 2), base_structure_I());
    auto z = kuranishi_residual(ctx, Form(g, 1, 2, 0));
    CHECK(z.eq1 == 0.0);
    CHECK(z.eq2 == 0.0);

    HodgeContext ctx1(Connection::flat(g, 1), base_structure_I());
    Form c01 = constant_form(g, 1, {cplx(1), cplx(0, -1), cplx(0), cplx(0)}, {cplx(0.4, 0.7)}, 1);
    auto r = kuranishi_residual(ctx1, c01);
    CHECK(r.eq1 < 1e-13);
    CHECK(r.eq2 < 1e-13);

    // complex conjugation (with the fiber adjoint) exchanges the systems
    auto st = rng.stream("dual");
    Form theta10 = ctx.projector().apply(random_form(g, 1, 2, 2, st), 1, 0);
    theta10 *= cplx(0.5 / l2_norm(theta10));
    // residuals of the (1,0) system D theta + theta^theta = 0, D* theta = 0
    Form lhs = ctx.dee(theta10);
    lhs += wedge(theta10, theta10);
    const double f1 = l2_norm(lhs);
    const double f2 = l2_norm(ctx.dee_star(theta10));
    auto dual = kuranishi_residual(ctx, form_adjoint(theta10));
    CHECK(dual.eq1 == doctest::Approx(f1).epsilon(1e-10));
    CHECK(dual.eq2 == doctest::Approx(f2).epsilon(1e-10));
}

TEST_CASE("w-space characterization: constants and zero sets agree") {
    TorusGrid g(8);
    HodgeContext ctx(Connection::flat(g, 2), base_structure_I());
    auto st = rng.stream("w");
    const ImaginaryUnit aI(1, 0, 0);

    Form c = constant_form(g, 1, {cplx(1), cplx(0, 1), cplx(0), cplx(0)}, random_matrix(2, st), 2);
    auto res = w_space_check(ctx, c, aI);
    CHECK(res.pipupa < 1e-12);
    CHECK(res.harmonicity < 1e-12);

    auto zero = w_space_check(ctx, Form(g, 1, 2, 0), aI);
    CHECK(zero.pipupa == 0.0);
    CHECK(zero.harmonicity == 0.0);

    // theta = D* G (generic (2,0)): both residuals positive, zero sets agree
    for (int t = 0; t < 4; ++t) {
        Form src = ctx.projector().apply(random_form(g, 2, 2, 2, st), 2, 0);
        Form theta = ctx.dee_star(ctx.green_apply(src));
        auto r = w_space_check(ctx, theta, aI);
        const double scale = std::max(1.0, l2_norm(theta));
        const bool pip_zero = r.pipupa < 1e-9 * scale;
        const bool harm_zero = r.harmonicity < 1e-9 * scale;
        CHECK(pip_zero == harm_zero);
        CHECK(r.pipupa > 1e-6 * scale);  // generically nonzero
        CHECK(r.harmonicity > 1e-6 * scale);
    }
}

TEST_CASE("holonomy: identity, abelian closed form, flatness gate") {
    TorusGrid g(8);
    auto hol = holonomy(Connection::flat(g, 2));
    for (int ax = 0; ax < 4; ++ax) {
        CHECK(std::abs(hol[ax][0] - cplx(1.0)) < 1e-14);
        CHECK(std::abs(hol[ax][3] - cplx(1.0)) < 1e-14);
        CHECK(std::abs(hol[ax][1]) < 1e-14);
    }
    const cplx cc(0.3, -1.7);
    Connection conn = constant_abelian_connection(g, {cc, cplx(0), cplx(0), cplx(0)});
    auto h2 = holonomy(conn);
    CHECK(std::abs(h2[0][0] - std::exp(-cc)) < 1e-12);
    for (int ax = 1; ax < 4; ++ax) CHECK(std::abs(h2[ax][0] - cplx(1.0)) < 1e-13);

    auto st = rng.stream("curved");
    Form a = random_form(g, 1, 2, 2, st);
    a *= cplx(1.0 / l2_norm(a));
    CHECK_THROWS_AS(holonomy(Connection(a)), std::invalid_argument);
}

TEST_CASE("holonomy is multiplicative under loop concatenation") {
    TorusGrid g(8);
    // doubling the loop squares the holonomy; constant abelian case is exact
    const cplx cc(0.2, 0.9);
    Connection conn = constant_abelian_connection(g, {cc, cplx(0), cplx(0), cplx(0)});
    auto h = holonomy(conn);
    const cplx once = h[0][0];
    CHECK(std::abs(once * once - std::exp(-2.0 * cc)) < 1e-8);
}

TEST_CASE("holonomy spectrum is gauge invariant") {
    TorusGrid g(8);
    auto st = rng.stream("spec");
    // nonabelian constant potential along x0, constant unitary gauge
    auto X = random_hermitian(2, st);
    std::vector<cplx> aX(4);
    for (int i = 0; i < 4; ++i) aX[i] = cplx(0.0, 1.0) * X[i] * 0.7;
    Form pot = constant_form(g, 1, {cplx(1), cplx(0), cplx(0), cplx(0)}, aX, 2);
    Connection conn(pot);
    auto h = holonomy(conn, 1e-6);

    auto U = random_hermitian(2, st);
    Form ug(g, 0, 2, 0);
    {
        std::vector<cplx> m(U);
        for (auto& z : m) z *= cplx(0.0, 0.8);
        matfield::exponential(m.data(), 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cplx* p = ug.plane(0, i, j);
                for (std::int64_t s = 0; s < g.sites(); ++s) p[s] = m[i * 2 + j];
            }
    }
    GaugeTransform gt(ug);
    auto h2 = holonomy(gauge_apply(gt, conn), 1e-6);

    auto eigs = [](const std::vector<cplx>& m) {
        const cplx tr = m[0] + m[3];
        const cplx det = m[0] * m[3] - m[1] * m[2];
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        cplx e1 = 0.5 * (tr + disc), e2 = 0.5 * (tr - disc);
        if (e1.real() < e2.real() ||
            (e1.real() == e2.real() && e1.imag() < e2.imag()))
            std::swap(e1, e2);
        return std::pair<cplx, cplx>(e1, e2);
    };
    for (int ax = 0; ax < 4; ++ax) {
        auto [a1, a2] = eigs(h[ax]);
        auto [b1, b2] = eigs(h2[ax]);
        CHECK(std::abs(a1 - b1) < 1e-8);
        CHECK(std::abs(a2 - b2) < 1e-8);
    }

    // integer-winding abelian gauge leaves the holonomy exactly invariant
    Connection ab = constant_abelian_connection(g, {cplx(0.4, 1.0), cplx(0), cplx(0), cplx(0)});
    Form phi(g, 0, 1, 0);
    for (std::int64_t s = 0; s < g.sites(); ++s)
        phi.plane(0, 0, 0)[s] = 2.0 * std::numbers::pi * g.x(g.coords(s)[0]);
    GaugeTransform wind = unitary_gauge(phi, {cplx(1.0)}, 1);
    auto h3 = holonomy(gauge_apply(wind, ab), 1e-6);
    auto h0 = holonomy(ab);
    for (int ax = 0; ax < 4; ++ax) CHECK(std::abs(h3[ax][0] - h0[ax][0]) < 1e-8);
}

TEST_CASE("richardson flag improves non-constant abelian transport") {
    TorusGrid g(8);
    // A = c cos(2 pi x0) dx0: holonomy = exp(-c * integral) = exp(0) = 1;
    // the plain left-endpoint product is exact for band-limited integrands,
    // so compare against a nonabelian non-constant potential instead.
    auto st = rng.stream("rich");
    auto X = random_hermitian(2, st), Y = random_hermitian(2, st);
    Form pot(g, 1, 2, 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cplx* p = pot.plane(0, i, j);
            for (std::int64_t s = 0; s < g.sites(); ++s) {
                const double x = g.x(g.coords(s)[0]);
                p[s] = cplx(0.0, 0.3) *
                       (X[i * 2 + j] + Y[i * 2 + j] * std::cos(2.0 * std::numbers::pi * x));
            }
        }
    // this potential depends only on x0 and has only a dx0 leg, so it is flat
    Connection conn(pot);
    CHECK(l2_norm(curvature(conn)) < 1e-10);
    auto plain = holonomy(conn, 1e-8, false);
    auto rich = holonomy(conn, 1e-8, true);
    // reference: product at very fine substeps via the Richardson machinery
    // on a doubled grid is not available here; instead check the two agree
    // to the expected first-order size and Richardson moves toward the
    // infinite-step limit consistently on the abelian diagonal part
    double diff = 0.0;
    for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(plain[0][i] - rich[0][i]));
    CHECK(diff > 0.0);        // they differ for noncommuting transport
    CHECK(diff < 1e-2);       // but only at the discretization-error scale
}

TEST_CASE("moduli demo: verdicts, holonomy accuracy, dimension doubling") {
    TorusGrid g(8);
    auto rep = moduli_demo(g, rng, 5, 1e-9);
    double worst = 0.0;
    for (const auto& s : rep.samples)
        for (int ax = 0; ax < 4; ++ax) worst = std::max(worst, s.holonomy_error[ax]);
    CHECK(worst < 1e-10);
    CHECK(rep.verdicts_consistent);
    CHECK(rep.dim_harmonic_oneforms == 4);
    CHECK(rep.dim_dolbeault == 2);
    CHECK(rep.dim_seed == 2);
    CHECK(rep.dimension_doubling);
    // the injected 2 pi i shift must be recognized as gauge equivalent,
    // the real shift must not
    bool found_equivalent = false, found_inequivalent = false;
    for (const auto& p : rep.pairs) {
        if (p.holonomy_equal && p.gauge_equivalent) found_equivalent = true;
        if (!p.holonomy_equal && !p.gauge_equivalent) found_inequivalent = true;
        CHECK(p.holonomy_equal == p.gauge_equivalent);
    }
    CHECK(found_equivalent);
    CHECK(found_inequivalent);
}

TEST_CASE("pairing between the constant type blocks is nondegenerate at rank 2") {
    TorusGrid g(8);
    const ImaginaryUnit aI(1, 0, 0);
    auto basis = harmonic_seed_basis(g, 2);  // 8 constant (1,0) seeds
    REQUIRE(basis.size() == 8);
    // pair against the conjugate block
    std::vector<std::vector<cplx>> M(8, std::vector<cplx>(8));
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            M[i][j] = symplectic_pair(basis[i], form_adjoint(basis[j]), aI);
    // |det| via Gaussian elimination with partial pivoting
    double logdet = 0.0;
    bool singular = false;
    for (int col = 0; col < 8 && !singular; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-12) {
            singular = true;
            break;
        }
        std::swap(M[piv], M[col]);
        logdet += std::log(std::abs(M[col][col]));
        for (int r = col + 1; r < 8; ++r) {
            const cplx f = M[r][col] / M[col][col];
            for (int c2 = col; c2 < 8; ++c2) M[r][c2] -= f * M[col][c2];
        }
    }
    CHECK_FALSE(singular);
    CHECK(std::exp(logdet / 8.0) > 0.5);  // determinant bounded away from zero
}
