#ifndef PVRING_JETRING_HPP
#define PVRING_JETRING_HPP

#include "pvring/groebner.hpp"
#include "pvring/linsys.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pvring {

using KPoly = Poly<RationalFunction>;
using KRingPtr = RingPtr<RationalFunction>;

class JetContext;
using JetCtxPtr = std::shared_ptr<const JetContext>;

/// The filtration S_0 c S_1 c ... of the partial-polynomial ring
/// K[X, X', ..., X^(d), 1/det(X)] for one n x n matrix of jet variables,
/// together with the operator actions induced by a linear system:
///   partial: X^(k) -> X^(k+1)          (level d -> d+1)
///   sigma_i: X^(k) -> sum C(k,m) partial^m(A_i) X^(k-m)   (level-preserving)
///   delta_i: X^(k) -> sum C(k,m) partial^m(B_i) X^(k-m)
/// Everything is precomputed eagerly at construction; the context is
/// immutable afterwards.
class JetContext : public std::enable_shared_from_this<JetContext> {
  public:
    struct JetVar {
        std::size_t row, col; // 1-based
        int order;
    };

    /// `sys` may be null when only the partial action is needed.
    static JetCtxPtr create(FieldPtr field, SystemPtr sys, std::size_t n, int max_level);

    const FieldPtr& field() const { return field_; }
    const SystemPtr& system() const { return sys_; }
    std::size_t n() const { return n_; }
    int max_level() const { return max_level_; }

    VarId var_id(std::size_t row, std::size_t col, int order) const {
        if (row < 1 || row > n_ || col < 1 || col > n_ || order < 0 || order > max_level_)
            throw usage_error("jet variable index out of range");
        return static_cast<VarId>(order) * static_cast<VarId>(n_ * n_) +
               static_cast<VarId>((row - 1) * n_ + (col - 1));
    }
    JetVar decode(VarId id) const {
        std::size_t nn = n_ * n_;
        JetVar v;
        v.order = static_cast<int>(id / nn);
        std::size_t rest = id % nn;
        v.row = rest / n_ + 1;
        v.col = rest % n_ + 1;
        return v;
    }

    /// Ring of the filtration level d (jet orders <= d); higher-order
    /// variables are greater.
    const KRingPtr& ring(int level) const;

    /// The order-0 determinant polynomial det((X_ij)), in the level ring.
    const KPoly& det(int level) const;

    /// Level d -> d' >= d embedding of a numerator polynomial.
    KPoly embed_poly(const KPoly& p, int level, int target) const;
    /// Reinterpret at a lower level; throws if higher-order jets occur.
    KPoly restrict_poly(const KPoly& p, int target) const;
    /// Smallest level whose ring contains every variable of p.
    int level_of(const KPoly& p) const;

    // Numerator-level actions (plain polynomials; no det powers arise).
    KPoly d_poly(const KPoly& p, int level) const;
    KPoly sigma_poly(const std::string& id, const KPoly& p, int level, bool inverse = false) const;
    KPoly delta_poly(const std::string& id, const KPoly& p, int level) const;

    RationalFunction det_A(const std::string& id, bool inverse) const;

  private:
    JetContext() = default;

    FieldPtr field_;
    SystemPtr sys_;
    std::size_t n_ = 0;
    int max_level_ = 0;
    std::vector<KRingPtr> rings_;
    std::vector<KPoly> dets_;

    struct ActionTable {
        // var id -> image polynomial (stored in the top-level ring)
        std::map<VarId, KPoly> images;
        RationalFunction det_scale; // sigma(det) = det_scale * det
        OperatorSpec coeff_op;      // acts on the coefficients
    };
    std::map<std::string, ActionTable> sigma_, sigma_inv_, delta_;
    friend struct JetContextBuilder;
};

/// Element p / det(X)^e of a filtration level. Canonical form: when e > 0
/// the numerator is not divisible by det (checked by exact division), and
/// the zero element has e = 0.
class FilteredElement {
  public:
    FilteredElement(JetCtxPtr ctx, int level, KPoly poly, std::uint32_t det_power = 0);

    static FilteredElement from_coeff(const JetCtxPtr& ctx, int level, const RationalFunction& c);
    static FilteredElement jet_var(const JetCtxPtr& ctx, int level, std::size_t row, std::size_t col, int order);
    static FilteredElement det(const JetCtxPtr& ctx, int level);

    const JetCtxPtr& ctx() const { return ctx_; }
    int level() const { return level_; }
    const KPoly& poly() const { return poly_; }
    std::uint32_t det_power() const { return det_power_; }
    bool is_zero() const { return poly_.is_zero(); }

    FilteredElement operator+(const FilteredElement& o) const;
    FilteredElement operator-(const FilteredElement& o) const;
    FilteredElement operator*(const FilteredElement& o) const;
    FilteredElement operator-() const;
    /// Division restricted to denominators of the form c * det^k.
    FilteredElement operator/(const FilteredElement& o) const;
    FilteredElement scale(const RationalFunction& c) const;
    bool operator==(const FilteredElement& o) const;
    bool operator!=(const FilteredElement& o) const { return !(*this == o); }

    /// Evaluate at a K-point of the jet space; det must not vanish there.
    RationalFunction evaluate(const std::function<RationalFunction(VarId)>& value) const;

    std::string str() const;

  private:
    JetCtxPtr ctx_;
    int level_;
    KPoly poly_;
    std::uint32_t det_power_;
    void canonicalize();
};

/// Total derivative: level d -> d+1.
FilteredElement d_apply(const FilteredElement& f);
/// Action of the automorphism sigma_id (or its inverse); level preserved.
FilteredElement sigma_apply(const std::string& sigma_id, const FilteredElement& f, bool inverse = false);
/// Action of the derivation delta_id; level preserved.
FilteredElement delta_apply(const std::string& delta_id, const FilteredElement& f);
/// Same element at a higher filtration level.
FilteredElement embed(const FilteredElement& f, int target_level);

/// A det-saturated numerator ideal of a filtration level, carrying its
/// reduced Groebner basis. Built through `saturated`, so the stored
/// presentation always equals its det(X)-saturation.
struct JetIdeal {
    JetCtxPtr ctx;
    int level;
    IdealPresentation<RationalFunction> pres; // the reduced basis of the saturation
    GroebnerBasis<RationalFunction> gb;

    static JetIdeal saturated(const JetCtxPtr& ctx, int level, std::vector<KPoly> gens,
                              const GroebnerOptions& opts = {});

    bool contains(const KPoly& p, const Budget& budget = {}) const;
    bool contains(const FilteredElement& f, const Budget& budget = {}) const;
    bool is_trivial_ideal() const { return is_trivial(gb); }
    /// Re-running saturation is a fixpoint (used by chain checks).
    bool verify_saturated(const GroebnerOptions& opts = {}) const;
};

/// Definition check for a fundamental solution matrix presented modulo a
/// jet ideal: sigma_i(Z) - A_i Z and delta_i(Z) - B_i Z must reduce to 0
/// for every operator. Throws domain_error when det(Z) is not invertible
/// modulo the ideal.
bool verify_fundamental_matrix(const Matrix<FilteredElement>& Z, const JetIdeal& ideal,
                               const GroebnerOptions& opts = {});

} // namespace pvring

#endif
