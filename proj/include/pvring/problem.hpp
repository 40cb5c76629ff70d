#ifndef PVRING_PROBLEM_HPP
#define PVRING_PROBLEM_HPP

#include "pvring/jetring.hpp"
#include "pvring/linsys.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pvring {

/// Expression tree for the shared polynomial syntax: integers, `p/q`
/// rationals, named base variables, jet variables `X[i,j]` / `X'[i,j]` /
/// `X^(k)[i,j]`, `det`, operators + - * / ^ and parentheses.
struct ExprNode {
    enum class Kind { number, var, jet, det, add, sub, mul, div, neg, pow };
    Kind kind;
    std::string text;                    // number digits or variable name
    std::size_t row = 0, col = 0;        // jet indices (1-based)
    int order = 0;                       // jet order
    std::uint32_t exponent = 0;          // pow
    std::vector<ExprNode> kids;
    int line = 0, column = 0;

    bool uses_jets() const;
    int max_jet_order() const;
};

/// Parses one expression; `line` anchors diagnostics.
ExprNode parse_expression(const std::string& text, int line = 0);

/// Evaluation over the base field (jet tokens are errors here).
RationalFunction eval_field_expr(const ExprNode& e, const RingPtr<Rat>& ring);
/// Evaluation in a jet ring level.
FilteredElement eval_jet_expr(const ExprNode& e, const JetCtxPtr& ctx, int level);

struct ProblemOptions {
    std::uint64_t spair_budget = 100000;
    std::uint64_t degree_cap = 40;
    int max_level = 6;
    int constants_degree_bound = 3;

    Budget budget() const { return Budget{spair_budget, degree_cap}; }
};

struct NamedIdealSpec {
    std::optional<std::vector<std::string>> plain_vars; // plain Q-coefficient ring mode
    std::vector<ExprNode> gens;
    int line = 0;
};

/// Parsed problem file: a field description, an optional linear system,
/// per-level seed generators, named scripting ideals and option overrides.
struct ProblemFile {
    FieldPtr field;
    SystemPtr system; // null when the file has no [system] section
    std::map<int, std::vector<ExprNode>> seeds;
    std::map<std::string, NamedIdealSpec> ideals;
    ProblemOptions options;

    /// Smallest jet level at which every seed expression makes sense.
    int max_seed_order() const;
};

/// Parses and validates the sectioned problem format. Syntax errors carry
/// line/column; semantic violations (duplicate operator ids, non-square or
/// non-invertible matrices, missing images) are reported with the section
/// line. Unknown section names and keys are errors.
ProblemFile parse_problem(const std::string& text);

/// Plain-ring ideal materialization for `[ideal NAME]` sections with a
/// `vars:` line.
struct PlainIdeal {
    RingPtr<Rat> ring;
    std::vector<QPoly> gens;
};
PlainIdeal build_plain_ideal(const NamedIdealSpec& spec);

/// Jet materializations (numerators; a det power on a generator is
/// dropped, which does not change the det-saturated ideal).
std::vector<KPoly> build_jet_polys(const std::vector<ExprNode>& exprs, const JetCtxPtr& ctx, int level);

} // namespace pvring

#endif
