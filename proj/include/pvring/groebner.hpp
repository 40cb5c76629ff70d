#ifndef PVRING_GROEBNER_HPP
#define PVRING_GROEBNER_HPP

#include "pvring/poly.hpp"
#include "pvring/qgcd.hpp"
#include "pvring/rational.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pvring {

/// Hard caps that turn Groebner blowups into explicit budget_error failures
/// instead of unbounded computation. Defaults are CLI-overridable.
struct Budget {
    std::uint64_t max_reductions = 100000;
    std::uint64_t max_degree = 40;
};

struct BudgetMeter {
    Budget limits;
    std::uint64_t reductions = 0;
    void tick() {
        if (++reductions > limits.max_reductions)
            throw budget_error("budget exhausted: more than " + std::to_string(limits.max_reductions) +
                               " reduction steps");
    }
    void check_degree(std::uint64_t d) {
        if (d > limits.max_degree)
            throw budget_error("budget exhausted: intermediate degree " + std::to_string(d) + " exceeds cap " +
                               std::to_string(limits.max_degree));
    }
};

struct GroebnerOptions {
    Budget budget;
    std::ostream* trace = nullptr; // streams each S-pair reduction when set
    bool track_cofactors = false;  // record basis elements over the input generators
};

template <class F>
struct IdealPresentation {
    RingPtr<F> ring;
    std::vector<Poly<F>> gens; // nonzero; order irrelevant to semantics

    IdealPresentation(RingPtr<F> r, std::vector<Poly<F>> g) : ring(std::move(r)) {
        for (auto& p : g) {
            if (p.ring() != ring) throw usage_error("generator from a different ring");
            if (!p.is_zero()) gens.push_back(std::move(p));
        }
    }
};

/// Reduced Groebner basis: monic elements, no term of any element divisible
/// by the leading term of another, sorted ascending by leading monomial;
/// unique for (ideal, order). When cofactors were tracked,
/// basis[i] = sum_j cofactors[i][j] * input[j] holds exactly.
template <class F>
struct GroebnerBasis {
    RingPtr<F> ring;
    std::vector<Poly<F>> basis;
    std::vector<Poly<F>> input;
    std::optional<std::vector<std::vector<Poly<F>>>> cofactors;
};

namespace gb_detail {

// Unit normalization applied during the computation. Over Q, clear to
// integer-primitive form with positive leading coefficient; over fraction
// fields (K = Q(v...)) make the element monic with reduced fractions.
inline void reduction_normalize(Poly<Rat>& p, std::vector<Poly<Rat>>* cof) {
    if (p.is_zero()) return;
    Rat c = int_content(p);
    if (p.leading_coeff().sign() < 0) c = -c;
    Rat inv = c.inv();
    p = p.scale(inv);
    if (cof)
        for (auto& q : *cof) q = q.scale(inv);
}

template <class F>
void reduction_normalize(Poly<F>& p, std::vector<Poly<F>>* cof) {
    if (p.is_zero()) return;
    F inv = p.ring()->coeff_one() / p.leading_coeff();
    p = p.scale(inv);
    if (cof)
        for (auto& q : *cof) q = q.scale(inv);
}

template <class F>
void make_monic(Poly<F>& p, std::vector<Poly<F>>* cof) {
    if (p.is_zero() || p.leading_coeff().is_one()) return;
    F inv = p.ring()->coeff_one() / p.leading_coeff();
    p = p.scale(inv);
    if (cof)
        for (auto& q : *cof) q = q.scale(inv);
}

// One polynomial with its representation over the input generators:
// p = sum_j cof[j] * input[j] (cof empty when not tracking).
template <class F>
struct Tracked {
    Poly<F> p;
    std::vector<Poly<F>> cof;
};

/// Full normal form of `f` modulo `basis`, deterministic (first basis
/// element whose leading term divides is used). When `cof` is given it must
/// satisfy f = sum cof_j * input_j on entry; the invariant
/// (working + remainder) = sum cof_j * input_j is maintained, so on return
/// the remainder is represented by `cof`.
template <class F>
Poly<F> normal_form_tracked(Poly<F> f, const std::vector<Tracked<F>>& basis, BudgetMeter& meter,
                            std::vector<Poly<F>>* cof) {
    const RingPtr<F> ring = f.ring();
    Poly<F> rem = Poly<F>::zero(ring);
    while (!f.is_zero()) {
        meter.check_degree(f.leading_monomial().degree());
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.p.is_zero()) continue;
            if (g.p.leading_monomial().divides(f.leading_monomial())) {
                meter.tick();
                Monomial m = g.p.leading_monomial().divide_into(f.leading_monomial());
                F c = f.leading_coeff() / g.p.leading_coeff();
                f = f - g.p.mul_term(m, c);
                if (cof)
                    for (std::size_t j = 0; j < cof->size(); ++j)
                        (*cof)[j] = (*cof)[j] - g.cof[j].mul_term(m, c);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            Poly<F> lt = Poly<F>::term(ring, f.leading_monomial(), f.leading_coeff());
            rem = rem + lt;
            f = f - lt;
        }
    }
    return rem;
}

} // namespace gb_detail

/// Full normal form modulo a basis (no tracking).
template <class F>
Poly<F> normal_form(const Poly<F>& f, const std::vector<Poly<F>>& basis, const Budget& budget = {}) {
    BudgetMeter meter{budget};
    std::vector<gb_detail::Tracked<F>> tb;
    tb.reserve(basis.size());
    for (auto& b : basis) tb.push_back({b, {}});
    return gb_detail::normal_form_tracked(f, tb, meter, static_cast<std::vector<Poly<F>>*>(nullptr));
}

/// Buchberger's algorithm with the Gebauer-Moeller pair-elimination
/// criteria (both Buchberger criteria) and normal-strategy selection
/// (minimal lcm degree, then lcm under the order, then index pair).
/// Deterministic for fixed (generators, order); returns the reduced basis.
template <class F>
GroebnerBasis<F> buchberger(const IdealPresentation<F>& I, const GroebnerOptions& opts = {}) {
    using gb_detail::Tracked;
    const RingPtr<F>& ring = I.ring;
    if (ring->var_count() == 0) throw usage_error("buchberger needs a ring with at least one variable");
    BudgetMeter meter{opts.budget};
    const bool track = opts.track_cofactors;
    const std::size_t nin = I.gens.size();

    std::vector<Tracked<F>> G;

    struct Pair {
        std::size_t i, j;
        Monomial lcm;
    };
    std::vector<Pair> pending;

    auto pair_less = [&](const Pair& a, const Pair& b) {
        std::uint64_t da = a.lcm.degree(), db = b.lcm.degree();
        if (da != db) return da < db;
        int c = ring->compare(a.lcm, b.lcm);
        if (c != 0) return c < 0;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };

    // Gebauer-Moeller update: install the pairs (i, t) of a freshly added
    // element, pruning old and new pairs with both Buchberger criteria.
    auto update_pairs = [&](std::size_t t) {
        const Monomial& lt_t = G[t].p.leading_monomial();
        std::vector<Pair> kept;
        for (auto& pr : pending) {
            Monomial lit = Monomial::lcm(G[pr.i].p.leading_monomial(), lt_t);
            Monomial ljt = Monomial::lcm(G[pr.j].p.leading_monomial(), lt_t);
            bool drop = lt_t.divides(pr.lcm) && !(lit == pr.lcm) && !(ljt == pr.lcm);
            if (!drop) kept.push_back(pr);
        }
        pending = std::move(kept);

        std::vector<Pair> fresh;
        for (std::size_t i = 0; i < t; ++i) {
            if (G[i].p.is_zero()) continue;
            fresh.push_back({i, t, Monomial::lcm(G[i].p.leading_monomial(), lt_t)});
        }
        // M: drop new pairs whose lcm is a proper multiple of another's.
        std::vector<Pair> stage;
        for (auto& pr : fresh) {
            bool drop = false;
            for (auto& other : fresh)
                if (&other != &pr && other.lcm.divides(pr.lcm) && !(other.lcm == pr.lcm)) {
                    drop = true;
                    break;
                }
            if (!drop) stage.push_back(pr);
        }
        // F + product criterion: one representative per lcm, and the whole
        // group goes if any member has coprime leading terms.
        for (auto& pr : stage) {
            bool seen = false;
            for (auto& r : pending)
                if (r.j == pr.j && r.lcm == pr.lcm && r.j == t) seen = true;
            if (seen) continue;
            bool group_coprime = false;
            for (auto& other : stage)
                if (other.lcm == pr.lcm &&
                    Monomial::coprime(G[other.i].p.leading_monomial(), G[other.j].p.leading_monomial()))
                    group_coprime = true;
            if (group_coprime) {
                if (opts.trace) (*opts.trace) << "skip pair (" << pr.i << "," << pr.j << "): product criterion\n";
                continue;
            }
            pending.push_back(pr);
        }
    };

    for (std::size_t j = 0; j < nin; ++j) {
        Tracked<F> t{I.gens[j], {}};
        if (track) {
            for (std::size_t k = 0; k < nin; ++k)
                t.cof.push_back(k == j ? Poly<F>::one(ring) : Poly<F>::zero(ring));
        }
        gb_detail::reduction_normalize(t.p, track ? &t.cof : nullptr);
        G.push_back(std::move(t));
        update_pairs(G.size() - 1);
    }

    while (!pending.empty()) {
        auto it = std::min_element(pending.begin(), pending.end(), pair_less);
        Pair pr = *it;
        pending.erase(it);
        meter.check_degree(pr.lcm.degree());
        const auto& gi = G[pr.i];
        const auto& gj = G[pr.j];

        Monomial mi = gi.p.leading_monomial().divide_into(pr.lcm);
        Monomial mj = gj.p.leading_monomial().divide_into(pr.lcm);
        F ci = ring->coeff_one() / gi.p.leading_coeff();
        F cj = ring->coeff_one() / gj.p.leading_coeff();
        Poly<F> s = gi.p.mul_term(mi, ci) - gj.p.mul_term(mj, cj);
        std::vector<Poly<F>> scof;
        if (track)
            for (std::size_t k = 0; k < nin; ++k)
                scof.push_back(gi.cof[k].mul_term(mi, ci) - gj.cof[k].mul_term(mj, cj));
        if (opts.trace)
            (*opts.trace) << "spair (" << pr.i << "," << pr.j << ") lcm=" << ring->monomial_str(pr.lcm) << "\n";

        Poly<F> r = gb_detail::normal_form_tracked(s, G, meter, track ? &scof : nullptr);
        if (r.is_zero()) {
            if (opts.trace) (*opts.trace) << "  -> 0\n";
            continue;
        }
        Tracked<F> nt{std::move(r), std::move(scof)};
        gb_detail::reduction_normalize(nt.p, track ? &nt.cof : nullptr);
        if (opts.trace) (*opts.trace) << "  -> basis[" << G.size() << "] = " << nt.p.str() << "\n";
        G.push_back(std::move(nt));
        update_pairs(G.size() - 1);
    }

    // Minimize: drop elements whose leading term is divisible by another's
    // (ties keep the earlier element).
    std::vector<Tracked<F>> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (G[i].p.is_zero()) continue;
        bool redundant = false;
        for (std::size_t j = 0; j < G.size(); ++j) {
            if (i == j || G[j].p.is_zero()) continue;
            const Monomial& li = G[i].p.leading_monomial();
            const Monomial& lj = G[j].p.leading_monomial();
            if (lj.divides(li) && (!(li == lj) || j < i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(G[i]);
    }

    // Tail-reduce every element modulo the others until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            std::vector<Tracked<F>> others;
            for (std::size_t j = 0; j < minimal.size(); ++j)
                if (j != i) others.push_back(minimal[j]);
            std::vector<Poly<F>> ncof = minimal[i].cof;
            Poly<F> r = gb_detail::normal_form_tracked(minimal[i].p, others, meter, track ? &ncof : nullptr);
            if (!(r == minimal[i].p)) {
                changed = true;
                minimal[i].p = std::move(r);
                minimal[i].cof = std::move(ncof);
                if (minimal[i].p.is_zero()) {
                    minimal.erase(minimal.begin() + static_cast<long>(i));
                    --i;
                }
            }
        }
    }

    for (auto& t : minimal) gb_detail::make_monic(t.p, track ? &t.cof : nullptr);
    std::sort(minimal.begin(), minimal.end(), [&](const Tracked<F>& a, const Tracked<F>& b) {
        return ring->compare(a.p.leading_monomial(), b.p.leading_monomial()) < 0;
    });

    GroebnerBasis<F> out;
    out.ring = ring;
    out.input = I.gens;
    for (auto& t : minimal) out.basis.push_back(t.p);
    if (track) {
        std::vector<std::vector<Poly<F>>> cof;
        for (auto& t : minimal) cof.push_back(t.cof);
        out.cofactors = std::move(cof);
    }
    return out;
}

/// True iff the normal form of f modulo G is zero.
template <class F>
bool member(const Poly<F>& f, const GroebnerBasis<F>& G, const Budget& budget = {}) {
    if (f.ring() != G.ring) throw usage_error("member: polynomial from a different ring");
    return normal_form(f, G.basis, budget).is_zero();
}

/// True iff the reduced basis is {1}.
template <class F>
bool is_trivial(const GroebnerBasis<F>& G) {
    return G.basis.size() == 1 && G.basis[0].is_one();
}

/// For f in the ideal: cofactors over G.input with f = sum cof_j*input_j.
/// Requires a basis computed with track_cofactors; nullopt when f is not a
/// member.
template <class F>
std::optional<std::vector<Poly<F>>> member_witness(const Poly<F>& f, const GroebnerBasis<F>& G,
                                                   const Budget& budget = {}) {
    if (!G.cofactors) throw usage_error("member_witness requires a cofactor-tracked basis");
    BudgetMeter meter{budget};
    std::vector<gb_detail::Tracked<F>> tb;
    for (std::size_t i = 0; i < G.basis.size(); ++i) tb.push_back({G.basis[i], (*G.cofactors)[i]});
    // Invariant semantics: on entry f's representation is the given vector;
    // start from zero and flip the sign at the end (f = rem - sum cof*input
    // with rem = 0).
    std::vector<Poly<F>> cof(G.input.size(), Poly<F>::zero(G.ring));
    Poly<F> rem = gb_detail::normal_form_tracked(f, tb, meter, &cof);
    if (!rem.is_zero()) return std::nullopt;
    for (auto& c : cof) c = -c;
    return cof;
}

/// Generators of I intersected with the subring in the `keep` variables,
/// computed under a block elimination order installed internally.
template <class F>
IdealPresentation<F> eliminate(const IdealPresentation<F>& I, const std::vector<VarId>& keep,
                               const GroebnerOptions& opts = {}) {
    const RingPtr<F>& ring = I.ring;
    std::vector<VarId> elim;
    for (auto& d : ring->decls())
        if (std::find(keep.begin(), keep.end(), d.id) == keep.end()) elim.push_back(d.id);
    std::vector<VarId> keep_ordered;
    for (auto& d : ring->decls())
        if (std::find(keep.begin(), keep.end(), d.id) != keep.end()) keep_ordered.push_back(d.id);

    auto elim_ring = PolyRing<F>::create(ring->decls(), TermOrder::elimination(elim, keep_ordered), ring->coeff_one());
    std::vector<Poly<F>> moved;
    for (auto& g : I.gens) moved.push_back(g.transplant(elim_ring));
    GroebnerBasis<F> G = buchberger(IdealPresentation<F>(elim_ring, std::move(moved)), opts);

    std::vector<Poly<F>> kept;
    for (auto& b : G.basis) {
        bool pure = true;
        for (VarId v : elim)
            if (b.uses_var(v)) {
                pure = false;
                break;
            }
        if (pure) kept.push_back(b.transplant(ring));
    }
    std::sort(kept.begin(), kept.end(), [&](const Poly<F>& a, const Poly<F>& b) {
        return ring->compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return IdealPresentation<F>(ring, std::move(kept));
}

/// Saturation I : f^infinity via the auxiliary-variable construction
/// (adjoin w, add 1 - w*f, eliminate w).
template <class F>
IdealPresentation<F> saturate(const IdealPresentation<F>& I, const Poly<F>& f, const GroebnerOptions& opts = {}) {
    if (f.is_zero()) throw domain_error("saturation by zero");
    if (f.ring() != I.ring) throw usage_error("saturate: polynomial from a different ring");
    if (I.gens.empty()) return I; // (0) : f^inf = (0) in a domain
    const RingPtr<F>& ring = I.ring;

    VarId wid = 0;
    for (auto& d : ring->decls()) wid = std::max(wid, d.id + 1);
    std::vector<typename PolyRing<F>::VarDecl> decls;
    decls.push_back({wid, "~w"});
    std::vector<VarId> rest;
    for (auto& d : ring->decls()) {
        decls.push_back(d);
        rest.push_back(d.id);
    }
    auto ext = PolyRing<F>::create(std::move(decls), TermOrder::elimination({wid}, rest), ring->coeff_one());

    std::vector<Poly<F>> gens;
    for (auto& g : I.gens) gens.push_back(g.transplant(ext));
    gens.push_back(Poly<F>::one(ext) - f.transplant(ext).mul_term(Monomial::var(wid), ext->coeff_one()));
    GroebnerBasis<F> G = buchberger(IdealPresentation<F>(ext, std::move(gens)), opts);

    std::vector<Poly<F>> kept;
    for (auto& b : G.basis)
        if (!b.uses_var(wid)) kept.push_back(b.transplant(ring));
    std::sort(kept.begin(), kept.end(), [&](const Poly<F>& a, const Poly<F>& b) {
        return ring->compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return IdealPresentation<F>(ring, std::move(kept));
}

/// Rabinowitsch trick: f lies in the radical of I iff I + (1 - w*f) is the
/// unit ideal in the extended ring.
template <class F>
bool radical_member(const Poly<F>& f, const IdealPresentation<F>& I, const GroebnerOptions& opts = {}) {
    if (f.ring() != I.ring) throw usage_error("radical_member: polynomial from a different ring");
    if (f.is_zero()) return true;
    const RingPtr<F>& ring = I.ring;

    VarId wid = 0;
    for (auto& d : ring->decls()) wid = std::max(wid, d.id + 1);
    std::vector<typename PolyRing<F>::VarDecl> decls;
    decls.push_back({wid, "~w"});
    std::vector<VarId> rest;
    for (auto& d : ring->decls()) {
        decls.push_back(d);
        rest.push_back(d.id);
    }
    auto ext = PolyRing<F>::create(std::move(decls), TermOrder::elimination({wid}, rest), ring->coeff_one());

    std::vector<Poly<F>> gens;
    for (auto& g : I.gens) gens.push_back(g.transplant(ext));
    gens.push_back(Poly<F>::one(ext) - f.transplant(ext).mul_term(Monomial::var(wid), ext->coeff_one()));
    return is_trivial(buchberger(IdealPresentation<F>(ext, std::move(gens)), opts));
}

/// Ideal equality by double inclusion of generators.
template <class F>
bool equal_ideals(const IdealPresentation<F>& A, const IdealPresentation<F>& B, const GroebnerOptions& opts = {}) {
    GroebnerBasis<F> GA = buchberger(A, opts);
    GroebnerBasis<F> GB = buchberger(B, opts);
    for (auto& g : A.gens)
        if (!member(g, GB, opts.budget)) return false;
    for (auto& g : B.gens)
        if (!member(g, GA, opts.budget)) return false;
    return true;
}

} // namespace pvring

#endif
