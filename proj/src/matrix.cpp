#include "pvring/matrix.hpp"

#include "pvring/qgcd.hpp"

namespace pvring {

namespace {

// Fraction-free Bareiss determinant of a polynomial matrix (entries are
// RationalFunctions with denominator 1); every division is exact.
RationalFunction bareiss_det_polys(Matrix<RationalFunction> M) {
    const std::size_t n = M.rows();
    const RingPtr<Rat>& base = M.at(0, 0).base_ring();
    RationalFunction one = RationalFunction::from_rat(base, Rat(1));
    RationalFunction prev = one;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M.at(k, k).is_zero()) {
            std::size_t pivot = k;
            for (std::size_t r = k + 1; r < n; ++r)
                if (!M.at(r, k).is_zero()) {
                    pivot = r;
                    break;
                }
            if (pivot == k) return RationalFunction::from_rat(base, Rat(0));
            for (std::size_t c = 0; c < n; ++c) std::swap(M.at(k, c), M.at(pivot, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                RationalFunction v = (M.at(k, k) * M.at(i, j) - M.at(i, k) * M.at(k, j)) / prev;
                if (!v.is_polynomial())
                    throw engine_error("internal: Bareiss division was not exact");
                M.at(i, j) = v;
            }
        prev = M.at(k, k);
    }
    RationalFunction d = M.at(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

// Clear denominators: returns (P, D) with A = P / D entrywise and P
// polynomial.
std::pair<KMatrix, RationalFunction> clear_denominators(const KMatrix& A) {
    const RingPtr<Rat>& base = A.at(0, 0).base_ring();
    QPoly d = QPoly::one(base);
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) d = poly_lcm(d, A.at(i, j).den());
    RationalFunction D(d);
    KMatrix P = A.map([&](const RationalFunction& v) {
        RationalFunction p = v * D;
        if (!p.is_polynomial()) throw engine_error("internal: denominator clearing failed");
        return p;
    });
    return {P, D};
}

} // namespace

RationalFunction kmatrix_det(const KMatrix& A) {
    if (A.rows() != A.cols()) throw usage_error("determinant of a non-square matrix");
    auto [P, D] = clear_denominators(A);
    RationalFunction det = bareiss_det_polys(P);
    for (std::size_t i = 0; i < A.rows(); ++i) det = det / D;
    return det;
}

KMatrix kmatrix_inverse(const KMatrix& A) {
    if (A.rows() != A.cols()) throw usage_error("inverse of a non-square matrix");
    const std::size_t n = A.rows();
    RationalFunction det = kmatrix_det(A);
    if (det.is_zero()) throw domain_error("matrix is singular over K");
    const RingPtr<Rat>& base = A.at(0, 0).base_ring();
    RationalFunction zero = RationalFunction::from_rat(base, Rat(0));
    if (n == 1) {
        KMatrix r(1, 1, A.at(0, 0).inv());
        return r;
    }
    KMatrix adj(n, n, zero);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            KMatrix minor(n - 1, n - 1, zero);
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = A.at(r, c);
                    ++cc;
                }
                ++rr;
            }
            RationalFunction cof = kmatrix_det(minor);
            if ((i + j) % 2) cof = -cof;
            adj.at(j, i) = cof; // adjugate transposes
        }
    return adj.map([&](const RationalFunction& v) { return v / det; });
}

KMatrix kmatrix_apply(const OperatorSpec& op, const KMatrix& A) {
    return A.map([&](const RationalFunction& v) { return apply_operator(op, v); });
}

} // namespace pvring
