#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hkc/calculus.hpp"
#include "hkc/form.hpp"

namespace hkc {

// Unit imaginary quaternion a = alpha*I + beta*J + gamma*K.
struct ImaginaryUnit {
    double alpha = 1.0, beta = 0.0, gamma = 0.0;

    ImaginaryUnit() = default;
    ImaginaryUnit(double a, double b, double c) : alpha(a), beta(b), gamma(c) {
        const double n2 = a * a + b * b + c * c;
        if (std::abs(n2 - 1.0) > 1e-12)
            throw std::invalid_argument("ImaginaryUnit: coefficients must have unit norm");
    }
    static ImaginaryUnit normalized(double a, double b, double c) {
        const double n = std::sqrt(a * a + b * b + c * c);
        if (n == 0.0) throw std::invalid_argument("ImaginaryUnit: zero vector");
        return ImaginaryUnit(a / n, b / n, c / n);
    }
    double dot(const ImaginaryUnit& o) const {
        return alpha * o.alpha + beta * o.beta + gamma * o.gamma;
    }
    ImaginaryUnit antipode() const {
        ImaginaryUnit r;
        r.alpha = -alpha;
        r.beta = -beta;
        r.gamma = -gamma;
        return r;
    }
};

// 4x4 real matrix acting on tangent vectors; squares to -Id and preserves the
// flat metric.
struct ComplexStructureMatrix {
    std::array<double, 16> m{};  // row-major

    double operator()(int i, int j) const { return m[i * 4 + j]; }
    double& operator()(int i, int j) { return m[i * 4 + j]; }

    // max |(M*M + Id)_{ij}|
    double square_plus_id_residual() const {
        double r = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = (i == j) ? 1.0 : 0.0;
                for (int k = 0; k < 4; ++k) s += (*this)(i, k) * (*this)(k, j);
                r = std::max(r, std::abs(s));
            }
        return r;
    }
};

inline ComplexStructureMatrix cs_multiply(const ComplexStructureMatrix& A,
                                          const ComplexStructureMatrix& B) {
    ComplexStructureMatrix C;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += A(i, k) * B(k, j);
            C(i, j) = s;
        }
    return C;
}

// Base quaternionic triple on R^4 = H with e0=1, e1=i, e2=j, e3=k and left
// multiplication:  I e0=e1, I e1=-e0, I e2=e3, I e3=-e2, and cyclically for
// J, K so that I*J = K as operator composition.
inline ComplexStructureMatrix base_structure_I() {
    ComplexStructureMatrix A;
    A(1, 0) = 1.0; A(0, 1) = -1.0; A(3, 2) = 1.0; A(2, 3) = -1.0;
    return A;
}
inline ComplexStructureMatrix base_structure_J() {
    ComplexStructureMatrix A;
    A(2, 0) = 1.0; A(3, 1) = -1.0; A(0, 2) = -1.0; A(1, 3) = 1.0;
    return A;
}
inline ComplexStructureMatrix base_structure_K() {
    ComplexStructureMatrix A;
    A(3, 0) = 1.0; A(2, 1) = 1.0; A(1, 2) = -1.0; A(0, 3) = -1.0;
    return A;
}

// alpha*I + beta*J + gamma*K for a unit imaginary quaternion.
inline ComplexStructureMatrix induced_structure(const ImaginaryUnit& a) {
    const ComplexStructureMatrix I = base_structure_I(), J = base_structure_J(),
                                 K = base_structure_K();
    ComplexStructureMatrix A;
    for (int i = 0; i < 16; ++i) A.m[i] = a.alpha * I.m[i] + a.beta * J.m[i] + a.gamma * K.m[i];
    return A;
}

// Unitary coframe adapted to a complex structure: rows 0,1 span the (1,0)
// covectors, rows 2,3 are their conjugates.  U is unitary, phi^a = sum_j
// U[a][j] dx_j.
struct UnitaryCoframe {
    std::array<std::array<cplx, 4>, 4> u{};
};

inline UnitaryCoframe unitary_coframe(const ComplexStructureMatrix& A) {
    // (1,0)-covectors are the +i eigenvectors of A^T: alpha o A = i alpha.
    // Project the standard covectors and Gram-Schmidt the first two
    // independent images.
    std::array<std::array<cplx, 4>, 4> proj{};
    for (int j = 0; j < 4; ++j) {
        // P dx_j, with (A^T u)_m = A(j, m) for u = dx_j
        for (int mcol = 0; mcol < 4; ++mcol) {
            cplx v = (mcol == j) ? cplx(1.0) : cplx(0.0);
            v -= cplx(0.0, 1.0) * A(j, mcol);
            proj[j][mcol] = 0.5 * v;
        }
    }
    auto herm = [](const std::array<cplx, 4>& x, const std::array<cplx, 4>& y) {
        cplx s(0.0);
        for (int i = 0; i < 4; ++i) s += x[i] * std::conj(y[i]);
        return s;
    };
    UnitaryCoframe F;
    int found = 0;
    for (int j = 0; j < 4 && found < 2; ++j) {
        std::array<cplx, 4> v = proj[j];
        for (int t = 0; t < found; ++t) {
            cplx c = herm(v, F.u[t]);
            for (int i = 0; i < 4; ++i) v[i] -= c * F.u[t][i];
        }
        double n = std::sqrt(std::abs(herm(v, v)));
        if (n < 0.3) continue;  // dependent on earlier frame vectors
        for (int i = 0; i < 4; ++i) F.u[found][i] = v[i] / n;
        ++found;
    }
    if (found != 2) throw std::logic_error("unitary_coframe: frame construction failed");
    for (int i = 0; i < 4; ++i) {
        F.u[2][i] = std::conj(F.u[0][i]);
        F.u[3][i] = std::conj(F.u[1][i]);
    }
    return F;
}

namespace type_detail {

// Minor determinant of a 4x4 complex matrix C over row mask S and column
// mask W (equal popcounts).
inline cplx minor_det(const std::array<std::array<cplx, 4>, 4>& C, int rows, int cols) {
    int r[4], c[4], nr = 0, nc = 0;
    for (int i = 0; i < 4; ++i) {
        if (rows & (1 << i)) r[nr++] = i;
        if (cols & (1 << i)) c[nc++] = i;
    }
    switch (nr) {
        case 0: return cplx(1.0);
        case 1: return C[r[0]][c[0]];
        case 2: return C[r[0]][c[0]] * C[r[1]][c[1]] - C[r[0]][c[1]] * C[r[1]][c[0]];
        default: {
            // Laplace expansion along the first listed row.
            cplx det(0.0);
            for (int j = 0; j < nc; ++j) {
                const int subrows = rows & ~(1 << r[0]);
                const int subcols = cols & ~(1 << c[j]);
                det += ((j % 2 == 0) ? 1.0 : -1.0) * C[r[0]][c[j]] * minor_det(C, subrows, subcols);
            }
            return det;
        }
    }
}

// Change-of-coframe matrix on degree-p components: out_W = sum_S M[W][S] in_S
// where old covectors expand as dx_j = sum_a C[j][a] phi^a.
inline std::vector<std::vector<cplx>> coframe_change_matrix(
    const std::array<std::array<cplx, 4>, 4>& C, int degree) {
    const int nc = multi_index::comp_count(degree);
    const int* masks = multi_index::masks(degree);
    std::vector<std::vector<cplx>> M(nc, std::vector<cplx>(nc));
    for (int w = 0; w < nc; ++w)
        for (int s = 0; s < nc; ++s) M[w][s] = minor_det(C, masks[s], masks[w]);
    return M;
}

// Number of (1,0) legs of a phi-basis multi-index mask (indices 0,1 are
// unbarred, 2,3 barred).
inline int holomorphic_legs(int mask) {
    return ((mask & 1) ? 1 : 0) + ((mask & 2) ? 1 : 0);
}

// comps x comps matrix of the (p,q) type projector in the dx-component basis.
inline std::vector<std::vector<cplx>> projector_matrix(const UnitaryCoframe& F, int degree, int p,
                                                       int q) {
    // dx_j = sum_a conj(U[a][j]) phi^a
    std::array<std::array<cplx, 4>, 4> C{}, D{};
    for (int j = 0; j < 4; ++j)
        for (int a = 0; a < 4; ++a) {
            C[j][a] = std::conj(F.u[a][j]);  // old row j, new col a
            D[a][j] = F.u[a][j];             // new row a, old col j
        }
    auto toPhi = coframe_change_matrix(C, degree);
    auto toDx = coframe_change_matrix(D, degree);
    const int nc = multi_index::comp_count(degree);
    const int* masks = multi_index::masks(degree);
    std::vector<std::vector<cplx>> P(nc, std::vector<cplx>(nc, cplx(0.0)));
    for (int s2 = 0; s2 < nc; ++s2)
        for (int w = 0; w < nc; ++w) {
            if (holomorphic_legs(masks[w]) != p) continue;
            for (int s = 0; s < nc; ++s) P[s][s2] += toDx[s][w] * toPhi[w][s2];
        }
    return P;
}

}  // namespace type_detail

// Cached (p,q)-projector matrices keyed by structure matrix and degree.
class TypeProjector {
public:
    explicit TypeProjector(const ComplexStructureMatrix& cs) : frame_(unitary_coframe(cs)) {}

    const std::vector<std::vector<cplx>>& matrix(int degree, int p, int q) const {
        auto& slot = cache_[degree][p];
        if (slot.empty()) slot = type_detail::projector_matrix(frame_, degree, p, q);
        return slot;
    }

    // Apply the (p,q) projector componentwise over all fiber entries.  One
    // pass over the data with all component streams walked together.
    Form apply(const Form& f, int p, int q) const {
        if (p < 0 || q < 0 || p + q != f.degree())
            throw std::invalid_argument("type_project: p+q must equal the degree");
        const auto& P = matrix(f.degree(), p, q);
        Form out(f.grid(), f.degree(), f.rank(), f.band());
        const int nc = f.comps();
        const int rr = f.rank() * f.rank();
        const std::int64_t ns = f.sites();
        const cplx* src[6];
        cplx* dst[6];
        cplx v[6];
        for (int e = 0; e < rr; ++e) {
            for (int c = 0; c < nc; ++c) {
                src[c] = f.plane_linear(static_cast<std::size_t>(c) * rr + e);
                dst[c] = out.plane_linear(static_cast<std::size_t>(c) * rr + e);
            }
            for (std::int64_t i = 0; i < ns; ++i) {
                for (int c = 0; c < nc; ++c) v[c] = src[c][i];
                for (int row = 0; row < nc; ++row) {
                    cplx acc(0.0);
                    for (int col = 0; col < nc; ++col) acc += P[row][col] * v[col];
                    dst[row][i] = acc;
                }
            }
        }
        return out;
    }

    const UnitaryCoframe& frame() const { return frame_; }

private:
    UnitaryCoframe frame_;
    // cache_[degree][p]
    mutable std::array<std::array<std::vector<std::vector<cplx>>, 5>, 5> cache_{};
};

// Hodge-type projection of a p-form onto its (p,q) part with respect to a
// complex structure.
inline Form type_project(const Form& f, const ComplexStructureMatrix& cs, int p, int q) {
    return TypeProjector(cs).apply(f, p, q);
}

}  // namespace hkc
