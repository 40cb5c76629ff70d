#ifndef PVRING_LINSYS_HPP
#define PVRING_LINSYS_HPP

#include "pvring/basefield.hpp"
#include "pvring/matrix.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pvring {

/// The linear system sigma_i(Y) = A_i Y, delta_i(Y) = B_i Y over K.
/// Construction validates that the index sets match the field's Sigma and
/// Delta, that every A_i is invertible (exact inverse computed and checked
/// against the identity), and that all matrices are n x n.
class LinearSystem {
  public:
    LinearSystem(FieldPtr field, std::size_t n, std::map<std::string, KMatrix> A, std::map<std::string, KMatrix> B);

    const FieldPtr& field() const { return field_; }
    std::size_t n() const { return n_; }

    const KMatrix& A(const std::string& sigma_id) const;
    const KMatrix& A_inv(const std::string& sigma_id) const;
    const KMatrix& B(const std::string& delta_id) const;
    const RationalFunction& det_A(const std::string& sigma_id) const;

  private:
    FieldPtr field_;
    std::size_t n_;
    std::map<std::string, KMatrix> A_, A_inv_, B_;
    std::map<std::string, RationalFunction> det_A_;
};

using SystemPtr = std::shared_ptr<const LinearSystem>;

/// One verified identity. `residual` is the exact difference of the two
/// sides (right minus left); pass iff it is the zero matrix. For the (SS)
/// condition, when the corrected form fails, `displayed_form_passes`
/// records whether the weaker displayed variant sigma_i(A_j) =
/// sigma_j(A_i) A_j would have passed, so such systems are flagged rather
/// than silently accepted.
struct IntegrabilityCheck {
    std::string condition; // "SS", "SD" or "DD"
    std::string op1, op2;
    bool pass;
    KMatrix residual;
    std::optional<bool> displayed_form_passes;
};

struct IntegrabilityReport {
    std::vector<IntegrabilityCheck> checks;
    bool ok() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Verifies, for all applicable index pairs:
///   (SS) sigma_i(A_j) A_i = sigma_j(A_i) A_j
///   (SD) sigma_i(B_j) A_i = delta_j(A_i) + A_i B_j
///   (DD) delta_i(B_j) + B_j B_i = delta_j(B_i) + B_i B_j
/// These are the commutation identities obtained by expanding
/// mu(tau(Z)) = tau(mu(Z)) on a fundamental solution matrix. Degenerate
/// index sets are fine: with Sigma empty only (DD) runs, with Delta empty
/// only (SS).
IntegrabilityReport check_integrability(const LinearSystem& sys);

} // namespace pvring

#endif
