#include "pvring/basefield.hpp"

#include <algorithm>

namespace pvring {

RationalFunction::RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.ring() != den_.ring()) throw usage_error("fraction parts from different rings");
    if (den_.is_zero()) throw domain_error("zero denominator");
    canonicalize();
}

RationalFunction::RationalFunction(QPoly num) : num_(std::move(num)), den_(QPoly::one(num_.ring())) {}

void RationalFunction::canonicalize() {
    if (num_.is_zero()) {
        den_ = QPoly::one(num_.ring());
        return;
    }
    QPoly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
    }
    // Denominator: integer content 1, positive leading coefficient; the
    // numerator absorbs the rational factor.
    Rat c = int_content(den_);
    if (den_.leading_coeff().sign() < 0) c = -c;
    if (!c.is_one()) {
        den_ = den_.scale(c.inv());
        num_ = num_.scale(c.inv());
    }
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}
RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw domain_error("division by zero in K");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}
RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction RationalFunction::inv() const {
    if (is_zero()) throw domain_error("inverse of zero in K");
    return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::pow(std::uint32_t k) const {
    RationalFunction acc = RationalFunction(QPoly::one(base_ring()));
    for (std::uint32_t i = 0; i < k; ++i) acc = acc * *this;
    return acc;
}

RationalFunction RationalFunction::mul_ui(std::uint32_t k) const {
    return RationalFunction(num_.scale(Rat(static_cast<long>(k))), den_);
}

std::optional<RationalFunction> RationalFunction::negated_if_negative() const {
    if (!num_.is_zero() && num_.leading_coeff().sign() < 0) return -*this;
    return std::nullopt;
}

std::string RationalFunction::str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::string RationalFunction::str_factor() const {
    if (den_.is_one()) {
        if (num_.terms().size() == 1) return num_.str();
        return "(" + num_.str() + ")";
    }
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

QPoly formal_derivative(const QPoly& p, VarId v) {
    QPoly acc = QPoly::zero(p.ring());
    for (auto& t : p.terms()) {
        std::uint32_t e = t.mono.exponent(v);
        if (!e) continue;
        Monomial m = Monomial::var(v, 1).divide_into(t.mono);
        acc = acc + QPoly::term(p.ring(), m, t.coeff * Rat(static_cast<long>(e)));
    }
    return acc;
}

std::string op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::automorphism: return "automorphism";
        case OpKind::delta_derivation: return "delta-derivation";
        case OpKind::partial_derivation: return "partial-derivation";
    }
    return "?";
}

namespace {

RationalFunction substitute_poly(const QPoly& p, const OperatorSpec& op) {
    RationalFunction acc = RationalFunction::from_rat(p.ring(), Rat(0));
    for (auto& t : p.terms()) {
        RationalFunction term = RationalFunction::from_rat(p.ring(), t.coeff);
        for (auto& [id, e] : t.mono.entries()) {
            auto it = op.images.find(id);
            if (it == op.images.end()) throw usage_error("operator " + op.id + " lacks an image for a variable");
            term = term * it->second.pow(e);
        }
        acc = acc + term;
    }
    return acc;
}

RationalFunction derive_poly(const QPoly& p, const OperatorSpec& op) {
    RationalFunction acc = RationalFunction::from_rat(p.ring(), Rat(0));
    for (auto& [id, image] : op.images) {
        if (image.is_zero()) continue;
        QPoly dp = formal_derivative(p, id);
        if (dp.is_zero()) continue;
        acc = acc + RationalFunction(dp) * image;
    }
    return acc;
}

} // namespace

RationalFunction apply_operator(const OperatorSpec& op, const RationalFunction& f) {
    if (op.kind == OpKind::automorphism) {
        RationalFunction num = substitute_poly(f.num(), op);
        RationalFunction den = substitute_poly(f.den(), op);
        if (den.is_zero())
            throw domain_error("operator " + op.id + " maps the denominator of " + f.str() + " to zero");
        return num / den;
    }
    // Derivation: (f/g)' = (f'g - fg')/g^2 with p' = sum dp/dv * op(v).
    RationalFunction dnum = derive_poly(f.num(), op);
    RationalFunction dden = derive_poly(f.den(), op);
    RationalFunction den(f.den());
    return (dnum * den - RationalFunction(f.num()) * dden) / (den * den);
}

RingPtr<Rat> FieldDesc::make_base_ring(const std::vector<std::string>& var_names) {
    if (var_names.empty()) throw usage_error("field needs at least one variable");
    std::vector<PolyRing<Rat>::VarDecl> decls;
    for (VarId i = 0; i < var_names.size(); ++i) decls.push_back({i, var_names[i]});
    return PolyRing<Rat>::create(std::move(decls), TermOrder::grevlex(), Rat(1));
}

FieldDesc::FieldDesc(RingPtr<Rat> ring, std::vector<OperatorSpec> sigmas, std::vector<OperatorSpec> deltas,
                     OperatorSpec partial)
    : ring_(std::move(ring)), sigmas_(std::move(sigmas)), deltas_(std::move(deltas)), partial_(std::move(partial)) {
    if (!ring_ || ring_->var_count() == 0) throw usage_error("field needs at least one variable");
    for (auto& d : ring_->decls()) var_names_.push_back(d.name);

    if (sigmas_.empty() && deltas_.empty())
        throw usage_error("Sigma and Delta must not both be empty");
    if (partial_.kind != OpKind::partial_derivation)
        throw usage_error("the partial operator must have kind partial-derivation");

    std::vector<std::string> ids;
    auto check_common = [&](const OperatorSpec& op, OpKind expected) {
        if (op.kind != expected)
            throw usage_error("operator " + op.id + " has kind " + op_kind_name(op.kind) + ", expected " +
                              op_kind_name(expected));
        if (std::find(ids.begin(), ids.end(), op.id) != ids.end())
            throw usage_error("duplicate operator id " + op.id);
        ids.push_back(op.id);
        for (VarId i = 0; i < var_names_.size(); ++i)
            if (!op.images.count(i))
                throw usage_error("operator " + op.id + " lacks an image for " + var_names_[i]);
    };
    for (auto& s : sigmas_) {
        check_common(s, OpKind::automorphism);
        for (VarId i = 0; i < var_names_.size(); ++i)
            if (!s.inverse_images.count(i))
                throw usage_error("automorphism " + s.id + " lacks an inverse image for " + var_names_[i]);
        // Verify sigma(sigma^-1(v)) = v and sigma^-1(sigma(v)) = v.
        OperatorSpec inv{OpKind::automorphism, s.id + "^-1", s.inverse_images, s.images};
        for (VarId i = 0; i < var_names_.size(); ++i) {
            RationalFunction v = RationalFunction::var(ring_, i);
            if (apply_operator(s, apply_operator(inv, v)) != v || apply_operator(inv, apply_operator(s, v)) != v)
                throw usage_error("automorphism " + s.id + ": images and inverse images do not compose to the identity on " +
                                  var_names_[i]);
        }
    }
    for (auto& d : deltas_) check_common(d, OpKind::delta_derivation);
    check_common(partial_, OpKind::partial_derivation);
}

std::vector<const OperatorSpec*> FieldDesc::all_operators() const {
    std::vector<const OperatorSpec*> out;
    for (auto& s : sigmas_) out.push_back(&s);
    for (auto& d : deltas_) out.push_back(&d);
    out.push_back(&partial_);
    return out;
}

const OperatorSpec* FieldDesc::find(const std::string& id) const {
    for (auto* op : all_operators())
        if (op->id == id) return op;
    return nullptr;
}

RationalFunction FieldDesc::var(const std::string& name) const {
    auto id = ring_->id_of(name);
    if (!id) throw usage_error("unknown field variable " + name);
    return RationalFunction::var(ring_, *id);
}

CommutationReport check_commutation(const FieldDesc& field) {
    CommutationReport report;
    auto ops = field.all_operators();
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            for (VarId v = 0; v < field.var_names().size(); ++v) {
                RationalFunction x = RationalFunction::var(field.ring(), v);
                RationalFunction lhs = apply_operator(*ops[i], apply_operator(*ops[j], x));
                RationalFunction rhs = apply_operator(*ops[j], apply_operator(*ops[i], x));
                if (lhs != rhs)
                    report.failures.push_back({ops[i]->id, ops[j]->id, field.var_names()[v], lhs, rhs});
            }
    return report;
}

bool is_constant(const FieldDesc& field, const RationalFunction& f) {
    for (auto& s : field.sigmas())
        if (apply_operator(s, f) != f) return false;
    for (auto& d : field.deltas())
        if (!apply_operator(d, f).is_zero()) return false;
    return true;
}

} // namespace pvring
