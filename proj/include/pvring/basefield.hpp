#ifndef PVRING_BASEFIELD_HPP
#define PVRING_BASEFIELD_HPP

#include "pvring/poly.hpp"
#include "pvring/qgcd.hpp"
#include "pvring/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pvring {

/// Element of K = Q(v_1, ..., v_m), kept in canonical fraction form:
/// gcd(num, den) = 1, den integer-primitive with positive leading
/// coefficient (grevlex over the declared variable order). Equality is
/// structural identity of the canonical form.
class RationalFunction {
  public:
    RationalFunction(QPoly num, QPoly den);
    explicit RationalFunction(QPoly num);

    static RationalFunction from_rat(const RingPtr<Rat>& ring, const Rat& r) {
        return RationalFunction(QPoly::constant(ring, r));
    }
    static RationalFunction var(const RingPtr<Rat>& ring, VarId id) {
        return RationalFunction(QPoly::variable(ring, id));
    }

    const QPoly& num() const { return num_; }
    const QPoly& den() const { return den_; }
    const RingPtr<Rat>& base_ring() const { return num_.ring(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_.is_one(); }
    bool is_minus_one() const { return den_.is_one() && (-num_).is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_rational_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction operator-() const;
    RationalFunction& operator+=(const RationalFunction& o) {
        *this = *this + o;
        return *this;
    }
    RationalFunction inv() const;
    RationalFunction pow(std::uint32_t k) const;
    RationalFunction mul_ui(std::uint32_t k) const;

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    /// |.|-style sign splitting for the generic polynomial printer: the
    /// canonical denominator has a positive leading coefficient, so the
    /// fraction's sign is the numerator's leading sign.
    std::optional<RationalFunction> negated_if_negative() const;

    std::string str() const;
    /// Rendering valid inside a product: multi-term parts are parenthesized.
    std::string str_factor() const;

  private:
    void canonicalize();
    QPoly num_, den_;
};

/// Formal partial derivative of a Q-coefficient polynomial.
QPoly formal_derivative(const QPoly& p, VarId v);

enum class OpKind { automorphism, delta_derivation, partial_derivation };

std::string op_kind_name(OpKind k);

/// One operator of the field: an automorphism given by generator images
/// (plus verified inverse images), or a derivation given by generator
/// images and extended by the Leibniz/quotient rules.
struct OperatorSpec {
    OpKind kind;
    std::string id;
    std::map<VarId, RationalFunction> images;
    std::map<VarId, RationalFunction> inverse_images; // automorphisms only
};

/// Action of a single operator on an element of K. Automorphisms act by
/// substitution, derivations by the Leibniz/quotient rules.
RationalFunction apply_operator(const OperatorSpec& op, const RationalFunction& f);

/// Description of the SigmaDeltaPartial-field K with its full operator set.
/// Construction validates: unique operator ids, images for every declared
/// variable, automorphism/inverse pairs composing to the identity on
/// generators, Sigma and Delta not both empty, and exactly one partial
/// derivation (held separately as `partial`).
class FieldDesc {
  public:
    /// Ring of K's numerators/denominators: grevlex over the declared
    /// variable order, first variable greatest. Build operator images over
    /// this ring, then construct the FieldDesc from it.
    static RingPtr<Rat> make_base_ring(const std::vector<std::string>& var_names);

    FieldDesc(RingPtr<Rat> ring, std::vector<OperatorSpec> sigmas, std::vector<OperatorSpec> deltas,
              OperatorSpec partial);

    const RingPtr<Rat>& ring() const { return ring_; }
    const std::vector<std::string>& var_names() const { return var_names_; }
    const std::vector<OperatorSpec>& sigmas() const { return sigmas_; }
    const std::vector<OperatorSpec>& deltas() const { return deltas_; }
    const OperatorSpec& partial() const { return partial_; }

    /// All operators in canonical order: sigmas, deltas, partial.
    std::vector<const OperatorSpec*> all_operators() const;
    const OperatorSpec* find(const std::string& id) const;

    RationalFunction var(const std::string& name) const;
    RationalFunction rf_one() const { return RationalFunction::from_rat(ring_, Rat(1)); }
    RationalFunction rf_zero() const { return RationalFunction::from_rat(ring_, Rat(0)); }

  private:
    RingPtr<Rat> ring_;
    std::vector<OperatorSpec> sigmas_, deltas_;
    OperatorSpec partial_;
    std::vector<std::string> var_names_;
};

using FieldPtr = std::shared_ptr<const FieldDesc>;

struct CommutationFailure {
    std::string op1, op2;
    std::string var;
    RationalFunction lhs; // op1(op2(var))
    RationalFunction rhs; // op2(op1(var))
};

struct CommutationReport {
    std::vector<CommutationFailure> failures;
    bool ok() const { return failures.empty(); }
};

/// Verifies mu(tau(v)) = tau(mu(v)) for every unordered operator pair and
/// every generator v; commutation on generators extends to all of K for
/// these operator kinds.
CommutationReport check_commutation(const FieldDesc& field);

/// True iff sigma(f) = f for every automorphism and delta(f) = 0 for every
/// delta-derivation (the partial derivation is not consulted).
bool is_constant(const FieldDesc& field, const RationalFunction& f);

} // namespace pvring

#endif
