#ifndef PVRING_POLY_HPP
#define PVRING_POLY_HPP

#include "pvring/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pvring {

using VarId = std::uint32_t;

/// Sparse exponent vector. Entries sorted by variable id, no zero exponents.
class Monomial {
  public:
    using Entry = std::pair<VarId, std::uint32_t>;

    Monomial() = default;
    explicit Monomial(std::vector<Entry> entries) : e_(std::move(entries)) {
        std::sort(e_.begin(), e_.end());
        normalize();
    }
    static Monomial var(VarId id, std::uint32_t exp = 1) {
        Monomial m;
        if (exp) m.e_.push_back({id, exp});
        return m;
    }

    bool is_unit() const { return e_.empty(); }
    const std::vector<Entry>& entries() const { return e_; }

    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (auto& [id, e] : e_) d += e;
        return d;
    }
    std::uint32_t exponent(VarId id) const {
        auto it = std::lower_bound(e_.begin(), e_.end(), Entry{id, 0},
                                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
        return (it != e_.end() && it->first == id) ? it->second : 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.e_.reserve(e_.size() + o.e_.size());
        auto a = e_.begin(), b = o.e_.begin();
        while (a != e_.end() && b != o.e_.end()) {
            if (a->first < b->first)
                r.e_.push_back(*a++);
            else if (b->first < a->first)
                r.e_.push_back(*b++);
            else {
                r.e_.push_back({a->first, a->second + b->second});
                ++a, ++b;
            }
        }
        r.e_.insert(r.e_.end(), a, e_.end());
        r.e_.insert(r.e_.end(), b, o.e_.end());
        return r;
    }

    bool divides(const Monomial& o) const {
        auto a = e_.begin();
        auto b = o.e_.begin();
        while (a != e_.end()) {
            while (b != o.e_.end() && b->first < a->first) ++b;
            if (b == o.e_.end() || b->first != a->first || b->second < a->second) return false;
            ++a;
        }
        return true;
    }

    /// o / *this; requires divides(o).
    Monomial divide_into(const Monomial& o) const {
        Monomial r;
        auto a = e_.begin();
        for (auto& [id, e] : o.e_) {
            std::uint32_t sub = 0;
            while (a != e_.end() && a->first < id) ++a;
            if (a != e_.end() && a->first == id) sub = a->second;
            if (e > sub) r.e_.push_back({id, e - sub});
        }
        return r;
    }

    static Monomial lcm(const Monomial& x, const Monomial& y) {
        Monomial r;
        auto a = x.e_.begin(), b = y.e_.begin();
        while (a != x.e_.end() && b != y.e_.end()) {
            if (a->first < b->first)
                r.e_.push_back(*a++);
            else if (b->first < a->first)
                r.e_.push_back(*b++);
            else {
                r.e_.push_back({a->first, std::max(a->second, b->second)});
                ++a, ++b;
            }
        }
        r.e_.insert(r.e_.end(), a, x.e_.end());
        r.e_.insert(r.e_.end(), b, y.e_.end());
        return r;
    }

    static bool coprime(const Monomial& x, const Monomial& y) {
        auto a = x.e_.begin(), b = y.e_.begin();
        while (a != x.e_.end() && b != y.e_.end()) {
            if (a->first < b->first)
                ++a;
            else if (b->first < a->first)
                ++b;
            else
                return false;
        }
        return true;
    }

    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    bool operator!=(const Monomial& o) const { return e_ != o.e_; }

  private:
    void normalize() {
        std::vector<Entry> out;
        for (auto& [id, e] : e_) {
            if (!e) continue;
            if (!out.empty() && out.back().first == id)
                throw usage_error("duplicate variable in monomial");
            out.push_back({id, e});
        }
        e_ = std::move(out);
    }
    std::vector<Entry> e_;
};

/// Total order on monomials, compatible with multiplication, 1 least.
/// Blocks are listed in precedence order and compared grevlex-first-by-degree
/// within each block; lex and grevlex are the single-block degenerate cases.
struct TermOrder {
    enum class Kind { lex, grevlex, block };
    Kind kind = Kind::grevlex;
    std::vector<std::vector<VarId>> blocks; // block kind only; ids in precedence order

    static TermOrder lex() { return {Kind::lex, {}}; }
    static TermOrder grevlex() { return {Kind::grevlex, {}}; }
    static TermOrder elimination(std::vector<VarId> eliminate, std::vector<VarId> keep) {
        return {Kind::block, {std::move(eliminate), std::move(keep)}};
    }

    bool operator==(const TermOrder& o) const { return kind == o.kind && blocks == o.blocks; }
};

namespace detail {
// (position, exponent) pairs sorted ascending by position; position 0 is the
// greatest variable.
using PosExp = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline int cmp_grevlex(const PosExp& a, const PosExp& b) {
    std::uint64_t da = 0, db = 0;
    for (auto& [p, e] : a) da += e;
    for (auto& [p, e] : b) db += e;
    if (da != db) return da < db ? -1 : 1;
    // Tie-break: scan from the least variable (largest position); the
    // monomial with the smaller exponent at the first difference is greater.
    auto ia = a.rbegin();
    auto ib = b.rbegin();
    while (ia != a.rend() || ib != b.rend()) {
        if (ib == b.rend() || (ia != a.rend() && ia->first > ib->first)) {
            return -1; // a has an extra exponent on a lesser variable
        }
        if (ia == a.rend() || ib->first > ia->first) {
            return 1;
        }
        if (ia->second != ib->second) return ia->second > ib->second ? -1 : 1;
        ++ia, ++ib;
    }
    return 0;
}

inline int cmp_lex(const PosExp& a, const PosExp& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) return 1;
        if (ia == a.end() || ib->first < ia->first) return -1;
        if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
        ++ia, ++ib;
    }
    return 0;
}
} // namespace detail

/// Immutable variable universe + term order. Polynomials hold a shared
/// handle; mixing handles is a usage error. "Adding variables" means
/// building a new ring and transplanting (see Poly::transplant).
template <class F>
class PolyRing {
  public:
    struct VarDecl {
        VarId id;
        std::string name;
    };

    /// `vars` in precedence order: vars[0] is the greatest variable.
    static std::shared_ptr<const PolyRing> create(std::vector<VarDecl> vars, TermOrder order, F one) {
        return std::shared_ptr<const PolyRing>(new PolyRing(std::move(vars), std::move(order), std::move(one)));
    }

    std::size_t var_count() const { return decls_.size(); }
    const std::vector<VarDecl>& decls() const { return decls_; }
    const TermOrder& order() const { return order_; }
    const F& coeff_one() const { return one_; }
    F coeff_zero() const { return one_ - one_; }

    bool has_var(VarId id) const { return pos_of_id_.count(id) != 0; }
    std::uint32_t position(VarId id) const {
        auto it = pos_of_id_.find(id);
        if (it == pos_of_id_.end()) throw usage_error("variable id not declared in this ring");
        return it->second;
    }
    const std::string& name(VarId id) const { return decls_[position(id)].name; }
    std::optional<VarId> id_of(const std::string& name) const {
        auto it = id_of_name_.find(name);
        if (it == id_of_name_.end()) return std::nullopt;
        return it->second;
    }

    /// Three-way comparison under this ring's order; >0 means a > b.
    int compare(const Monomial& a, const Monomial& b) const {
        if (order_.kind == TermOrder::Kind::block) {
            for (std::size_t k = 0; k < order_.blocks.size(); ++k) {
                int c = detail::cmp_grevlex(project(a, k), project(b, k));
                if (c != 0) return c;
            }
            return 0;
        }
        detail::PosExp pa = to_pos(a), pb = to_pos(b);
        return order_.kind == TermOrder::Kind::lex ? detail::cmp_lex(pa, pb) : detail::cmp_grevlex(pa, pb);
    }

    std::string monomial_str(const Monomial& m) const {
        if (m.is_unit()) return "1";
        // Render variables greatest-first.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pe = to_pos(m);
        std::string s;
        for (auto& [pos, exp] : pe) {
            if (!s.empty()) s += "*";
            s += decls_[pos].name;
            if (exp != 1) s += "^" + std::to_string(exp);
        }
        return s;
    }

  private:
    PolyRing(std::vector<VarDecl> vars, TermOrder order, F one)
        : decls_(std::move(vars)), order_(std::move(order)), one_(std::move(one)) {
        for (std::uint32_t p = 0; p < decls_.size(); ++p) {
            if (!pos_of_id_.emplace(decls_[p].id, p).second)
                throw usage_error("duplicate variable id in ring declaration");
            if (!id_of_name_.emplace(decls_[p].name, decls_[p].id).second)
                throw usage_error("duplicate variable name in ring declaration: " + decls_[p].name);
        }
        if (order_.kind == TermOrder::Kind::block) {
            block_of_id_.clear();
            for (std::uint32_t bk = 0; bk < order_.blocks.size(); ++bk)
                for (VarId id : order_.blocks[bk]) block_of_id_[id] = bk;
            for (auto& d : decls_)
                if (!block_of_id_.count(d.id))
                    throw usage_error("block order does not cover variable " + d.name);
        }
    }

    detail::PosExp to_pos(const Monomial& m) const {
        detail::PosExp pe;
        pe.reserve(m.entries().size());
        for (auto& [id, e] : m.entries()) pe.push_back({position(id), e});
        std::sort(pe.begin(), pe.end());
        return pe;
    }
    detail::PosExp project(const Monomial& m, std::size_t block) const {
        detail::PosExp pe;
        for (auto& [id, e] : m.entries())
            if (block_of_id_.at(id) == block) pe.push_back({position(id), e});
        std::sort(pe.begin(), pe.end());
        return pe;
    }

    std::vector<VarDecl> decls_;
    TermOrder order_;
    F one_;
    std::map<VarId, std::uint32_t> pos_of_id_;
    std::map<std::string, VarId> id_of_name_;
    std::map<VarId, std::uint32_t> block_of_id_;
};

template <class F>
using RingPtr = std::shared_ptr<const PolyRing<F>>;

/// Sparse distributed polynomial: terms strictly descending under the ring
/// order, no zero coefficients. Immutable value semantics.
template <class F>
class Poly {
  public:
    struct Term {
        Monomial mono;
        F coeff;
    };

    explicit Poly(RingPtr<F> ring) : ring_(std::move(ring)) { check_ring(); }
    Poly(RingPtr<F> ring, std::vector<Term> terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
        check_ring();
        normalize();
    }

    static Poly zero(const RingPtr<F>& ring) { return Poly(ring); }
    static Poly constant(const RingPtr<F>& ring, F c) {
        Poly p(ring);
        if (!c.is_zero()) p.terms_.push_back({Monomial{}, std::move(c)});
        return p;
    }
    static Poly one(const RingPtr<F>& ring) { return constant(ring, ring->coeff_one()); }
    static Poly variable(const RingPtr<F>& ring, VarId id) {
        ring->position(id); // declared?
        Poly p(ring);
        p.terms_.push_back({Monomial::var(id), ring->coeff_one()});
        return p;
    }
    static Poly term(const RingPtr<F>& ring, Monomial m, F c) {
        Poly p(ring);
        if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
        return p;
    }

    const RingPtr<F>& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_unit()); }
    bool is_one() const { return terms_.size() == 1 && terms_[0].mono.is_unit() && terms_[0].coeff.is_one(); }

    const Monomial& leading_monomial() const {
        require_nonzero();
        return terms_.front().mono;
    }
    const F& leading_coeff() const {
        require_nonzero();
        return terms_.front().coeff;
    }
    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto& t : terms_) d = std::max(d, t.mono.degree());
        return d;
    }
    std::uint32_t degree_in(VarId id) const {
        std::uint32_t d = 0;
        for (auto& t : terms_) d = std::max(d, t.mono.exponent(id));
        return d;
    }
    bool uses_var(VarId id) const {
        for (auto& t : terms_)
            if (t.mono.exponent(id)) return true;
        return false;
    }

    Poly operator+(const Poly& o) const {
        same_ring(o);
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        while (a != terms_.end() && b != o.terms_.end()) {
            int c = ring_->compare(a->mono, b->mono);
            if (c > 0)
                out.push_back(*a++);
            else if (c < 0)
                out.push_back(*b++);
            else {
                F s = a->coeff + b->coeff;
                if (!s.is_zero()) out.push_back({a->mono, std::move(s)});
                ++a, ++b;
            }
        }
        out.insert(out.end(), a, terms_.end());
        out.insert(out.end(), b, o.terms_.end());
        Poly r(ring_);
        r.terms_ = std::move(out);
        return r;
    }
    Poly operator-() const {
        Poly r(ring_);
        r.terms_.reserve(terms_.size());
        for (auto& t : terms_) r.terms_.push_back({t.mono, -t.coeff});
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        same_ring(o);
        Poly acc(ring_);
        for (auto& t : terms_) acc = acc + o.mul_term(t.mono, t.coeff);
        return acc;
    }

    /// this * (c * m), in one pass.
    Poly mul_term(const Monomial& m, const F& c) const {
        Poly r(ring_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (auto& t : terms_) {
            F nc = t.coeff * c;
            if (!nc.is_zero()) r.terms_.push_back({t.mono * m, std::move(nc)});
        }
        // Multiplication by a monomial preserves strict descending order.
        return r;
    }
    Poly scale(const F& c) const { return mul_term(Monomial{}, c); }

    bool operator==(const Poly& o) const {
        if (ring_ != o.ring_) return false;
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (!(terms_[i].mono == o.terms_[i].mono) || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Exact quotient by `d`, or nullopt when `d` does not divide this.
    std::optional<Poly> divide_exact(const Poly& d) const {
        same_ring(d);
        if (d.is_zero()) throw domain_error("division by zero polynomial");
        Poly rem = *this;
        Poly quot(ring_);
        while (!rem.is_zero()) {
            if (!d.leading_monomial().divides(rem.leading_monomial())) return std::nullopt;
            Monomial qm = d.leading_monomial().divide_into(rem.leading_monomial());
            F qc = rem.leading_coeff() / d.leading_coeff();
            quot = quot + Poly::term(ring_, qm, qc);
            rem = rem - d.mul_term(qm, qc);
        }
        return quot;
    }

    /// Substitute every variable through `image` (a homomorphism target in
    /// ring `target`); coefficients pass through `coeff_map`.
    template <class G>
    Poly<G> substitute(const RingPtr<G>& target, const std::function<G(const F&)>& coeff_map,
                       const std::function<Poly<G>(VarId)>& image) const {
        Poly<G> acc = Poly<G>::zero(target);
        for (auto& t : terms_) {
            Poly<G> term = Poly<G>::constant(target, coeff_map(t.coeff));
            for (auto& [id, e] : t.mono.entries()) {
                Poly<G> img = image(id);
                for (std::uint32_t k = 0; k < e; ++k) term = term * img;
            }
            acc = acc + term;
        }
        return acc;
    }

    /// Evaluate at a point: variables map to field values.
    F evaluate(const std::function<F(VarId)>& value) const {
        F acc = ring_->coeff_zero();
        for (auto& t : terms_) {
            F term = t.coeff;
            for (auto& [id, e] : t.mono.entries()) {
                F v = value(id);
                for (std::uint32_t k = 0; k < e; ++k) term = term * v;
            }
            acc = acc + term;
        }
        return acc;
    }

    /// Reinterpret in another ring over the same coefficient field. Every
    /// variable id must exist there; terms are re-sorted under its order.
    Poly transplant(const RingPtr<F>& target) const {
        for (auto& t : terms_)
            for (auto& [id, e] : t.mono.entries())
                if (!target->has_var(id))
                    throw usage_error("transplant: variable " + ring_->name(id) + " missing in target ring");
        Poly r(target);
        r.terms_ = terms_;
        r.normalize();
        return r;
    }

    /// Canonical text: terms descending, explicit '*', '^' powers.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& t : terms_) {
            F c = t.coeff;
            bool negative = false;
            if (auto neg = c.negated_if_negative()) {
                negative = true;
                c = *neg;
            }
            if (first) {
                if (negative) s += "-";
                first = false;
            } else {
                s += negative ? " - " : " + ";
            }
            if (t.mono.is_unit()) {
                s += c.str();
            } else if (c.is_one()) {
                s += ring_->monomial_str(t.mono);
            } else {
                s += c.str_factor();
                s += "*";
                s += ring_->monomial_str(t.mono);
            }
        }
        return s;
    }

  private:
    void require_nonzero() const {
        if (terms_.empty()) throw usage_error("zero polynomial has no leading term");
    }
    void check_ring() const {
        if (!ring_) throw usage_error("polynomial needs a ring");
    }
    void same_ring(const Poly& o) const {
        if (ring_ != o.ring_) throw usage_error("mixed polynomial rings");
    }
    void normalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [&](const Term& x, const Term& y) { return ring_->compare(x.mono, y.mono) > 0; });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (t.coeff.is_zero()) continue;
            if (!out.empty() && out.back().mono == t.mono)
                out.back().coeff += t.coeff;
            else
                out.push_back(t);
            if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
        }
        terms_ = std::move(out);
    }

    RingPtr<F> ring_;
    std::vector<Term> terms_;
};

} // namespace pvring

#endif
