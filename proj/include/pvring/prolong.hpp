#ifndef PVRING_PROLONG_HPP
#define PVRING_PROLONG_HPP

#include "pvring/jetring.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pvring {

/// A K-point of the jet space, consistent with differentiation:
/// value(i,j,k+1) = partial(value(i,j,k)), det of the order-0 values
/// nonzero. The computable stand-in for residue-field evaluations.
class JetEvaluation {
  public:
    /// Extends an order-0 matrix by repeated application of partial.
    static JetEvaluation from_order0(const JetCtxPtr& ctx, int level, const KMatrix& z0);
    /// Validates a full assignment (consistency and det != 0).
    static JetEvaluation from_values(const JetCtxPtr& ctx, int level, std::map<VarId, RationalFunction> values);

    const JetCtxPtr& ctx() const { return ctx_; }
    int level() const { return level_; }
    const RationalFunction& value(std::size_t row, std::size_t col, int order) const;
    RationalFunction value_of(VarId id) const;

    /// The same point one level higher (differentiating the top values).
    JetEvaluation extended(int target_level) const;

    /// Evaluation of a numerator polynomial at this point.
    RationalFunction evaluate(const KPoly& p) const;

  private:
    JetEvaluation(JetCtxPtr ctx, int level, std::map<VarId, RationalFunction> values);
    JetCtxPtr ctx_;
    int level_;
    std::map<VarId, RationalFunction> values_;
};

/// Kernel ideal { X^(k)[i,j] - value } of the evaluation: prime (a K-point
/// kernel), det-saturated, and closed in the sense of check_closure.
JetIdeal evaluation_kernel(const JetEvaluation& ev, int level, const GroebnerOptions& opts = {});

/// Generators of the prolongation ideal one level up: every generator of
/// `a` together with its total derivative (numerator form).
IdealPresentation<RationalFunction> prolongation_ideal(const JetIdeal& a, const GroebnerOptions& opts = {});

/// Closure hypothesis for prolongation: partial(a'') is contained in a,
/// where a'' is the elimination of a down one level.
bool check_closure(const JetIdeal& a, const GroebnerOptions& opts = {});

/// One derivation step of a triviality witness: `value` lies in the ideal
/// because it equals the stated combination of generators (ref >= 0) and
/// earlier steps (ref < 0 refers to step -(ref+1)).
struct WitnessStep {
    KPoly value;
    std::vector<std::pair<int, KPoly>> combo;
    std::string note;
};

/// Replayable certificate that the (det-saturated) ideal generated by
/// `generators` is the unit ideal: the last step's value is det^det_power
/// (det_power = 0 means literally 1). replay() re-evaluates every step by
/// exact arithmetic.
struct TrivialityWitness {
    std::vector<KPoly> generators;
    std::vector<WitnessStep> steps;
    std::uint32_t det_power = 0;
    std::optional<KPoly> det; // level det polynomial when det_power > 0

    bool replay() const;
};

struct ConsistencyCertificate {
    int level;          // level of the input ideal; b lives one level up
    bool hypothesis_ok; // check_closure of the input
    GroebnerBasis<RationalFunction> basis_of_b;
    bool trivial;
    std::optional<TrivialityWitness> witness; // present when trivial
};

/// Builds b = (a, partial(a)) one level up, saturates by det, reports
/// triviality; extracts a replayable witness from the cofactor-tracked
/// Groebner run when trivial.
ConsistencyCertificate check_consistency(const JetIdeal& a, const GroebnerOptions& opts = {});

/// The two-parameter-derivation failure: over Q(u,v) with partial_1 = d/du
/// and partial_2 = d/dv, the ideal generated by (v*d1(x)+1, d2(x)) and both
/// formal prolongations contains 1. Self-contained six-variable polynomial
/// encoding; the witness replays the three-step derivation.
ConsistencyCertificate counterexample_two_derivations();
/// The single-derivation slice of the same data (only the d1 prolongation):
/// a proper ideal, as the consistency lemma predicts.
ConsistencyCertificate counterexample_single_slice();

/// Certificate check for a level-(d+1) extension: eliminating q' down to
/// level d recovers q, and partial(q) is contained in q'.
bool lemma1_certify(const JetIdeal& q, const JetIdeal& q_prime, const GroebnerOptions& opts = {});

/// Smallest det-saturated ideal containing `gens` and stable under every
/// sigma (both directions) and delta; terminates by the ascending chain
/// condition. raw_gens records the generator list that produced the final
/// ideal (the witness base when it is trivial).
struct ClosureResult {
    JetIdeal ideal;
    std::vector<KPoly> raw_gens;
};
ClosureResult sigma_delta_close(const JetCtxPtr& ctx, int level, std::vector<KPoly> gens,
                                const GroebnerOptions& opts = {});

enum class Maximality { certified, not_attempted };

struct ChainLevelChecks {
    bool consistency_ok = false;
    std::optional<bool> elimination_ok; // levels >= 1
    std::optional<bool> partial_ok;     // levels >= 1
    bool saturation_ok = false;
    bool sigma_delta_closed_ok = false;
    Maximality maximality = Maximality::not_attempted;
    std::string note; // extra diagnostics (e.g. refuted simplicity)
    bool all_ok() const {
        return consistency_ok && saturation_ok && sigma_delta_closed_ok && elimination_ok.value_or(true) &&
               partial_ok.value_or(true);
    }
};

struct ChainLevel {
    int d;
    JetIdeal m;
    ChainLevelChecks checks;
};

struct ChainFailure {
    int level;
    std::string reason;
    std::optional<TrivialityWitness> witness;   // inconsistency certificate
    std::vector<std::string> conflict_elements; // elimination back-compat conflicts
};

struct ChainReport {
    std::vector<ChainLevel> levels;
    std::optional<ChainFailure> failure;
    bool all_ok() const {
        if (failure) return false;
        for (auto& l : levels)
            if (!l.checks.all_ok()) return false;
        return true;
    }
};

/// Level-by-level chain construction: prolong, close under the operators,
/// saturate, verify consistency; splice in per-level seed generators and
/// verify elimination back-compatibility (hard failure with a conflict
/// witness when seeds leak downward). Maximality is certified only on
/// finite-dimensional quotients via the residue-basis simplicity check.
ChainReport build_chain(const JetCtxPtr& ctx, const std::map<int, std::vector<KPoly>>& seeds, int depth,
                        const GroebnerOptions& opts = {});

struct ConstantsResult {
    std::vector<KPoly> classes; // residue representatives, K-combinations of the staircase
    std::vector<Monomial> staircase;
    int degree_bound;
};

/// Bounded search for residue classes r with sigma(r) = r and delta(r) = 0
/// modulo m: unknown coefficients are Q-polynomials of degree <=
/// degree_bound in the base variables over the given denominator
/// candidates; the conditions are Q-linear and solved exactly. Complete
/// only up to the bound. Refuses non-stable or trivial ideals
/// (usage_error) and infinite-dimensional quotients (unsupported_error).
ConstantsResult find_constants(const JetIdeal& m, int degree_bound, const std::vector<QPoly>& denominators = {},
                               const GroebnerOptions& opts = {});

} // namespace pvring

#endif
