#include "pvring/jetring.hpp"

#include <gmpxx.h>

namespace pvring {

namespace {

Rat binom(unsigned long k, unsigned long m) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), k, m);
    return Rat(b);
}

std::string jet_name(std::size_t i, std::size_t j, int k) {
    std::string cell = "[" + std::to_string(i) + "," + std::to_string(j) + "]";
    if (k == 0) return "X" + cell;
    if (k == 1) return "X'" + cell;
    return "X^(" + std::to_string(k) + ")" + cell;
}

// Laplace expansion along the first row; fine at desk scale.
KPoly laplace_det(const std::vector<std::vector<KPoly>>& m, const KRingPtr& ring) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    KPoly acc = KPoly::zero(ring);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<KPoly>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<KPoly> row;
            for (std::size_t cc = 0; cc < n; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(std::move(row));
        }
        KPoly term = m[0][c] * laplace_det(minor, ring);
        acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// Generic derivation of a numerator polynomial: coefficients through
// `coeff_d`, variables through `var_image` (polynomials in `target`).
KPoly derive_poly_generic(const KPoly& p, const KRingPtr& target,
                          const std::function<RationalFunction(const RationalFunction&)>& coeff_d,
                          const std::function<KPoly(VarId)>& var_image) {
    KPoly acc = KPoly::zero(target);
    for (auto& t : p.terms()) {
        RationalFunction dc = coeff_d(t.coeff);
        if (!dc.is_zero()) acc = acc + KPoly::term(target, t.mono, dc);
        for (auto& [v, e] : t.mono.entries()) {
            KPoly img = var_image(v);
            if (img.is_zero()) continue;
            Monomial rest = Monomial::var(v, 1).divide_into(t.mono);
            acc = acc + img.mul_term(rest, t.coeff.mul_ui(e));
        }
    }
    return acc;
}

} // namespace

struct JetContextBuilder {
    static JetCtxPtr build(FieldPtr field, SystemPtr sys, std::size_t n, int max_level) {
        if (!field) throw usage_error("jet context needs a field");
        if (n == 0) throw usage_error("jet context needs n >= 1");
        if (max_level < 0) throw usage_error("jet context needs max_level >= 0");
        if (sys && sys->n() != n) throw usage_error("system size does not match jet context");
        if (sys && sys->field() != field) throw usage_error("system over a different field");

        auto ctx = std::shared_ptr<JetContext>(new JetContext());
        ctx->field_ = field;
        ctx->sys_ = sys;
        ctx->n_ = n;
        ctx->max_level_ = max_level;

        RationalFunction one = RationalFunction::from_rat(field->ring(), Rat(1));
        for (int d = 0; d <= max_level; ++d) {
            std::vector<PolyRing<RationalFunction>::VarDecl> decls;
            for (int k = d; k >= 0; --k)
                for (std::size_t i = 1; i <= n; ++i)
                    for (std::size_t j = 1; j <= n; ++j)
                        decls.push_back({ctx->var_id(i, j, k), jet_name(i, j, k)});
            ctx->rings_.push_back(PolyRing<RationalFunction>::create(std::move(decls), TermOrder::grevlex(), one));
        }

        // Order-0 determinant, written down once per level.
        {
            const KRingPtr& r0 = ctx->rings_[0];
            std::vector<std::vector<KPoly>> X;
            for (std::size_t i = 1; i <= n; ++i) {
                std::vector<KPoly> row;
                for (std::size_t j = 1; j <= n; ++j) row.push_back(KPoly::variable(r0, ctx->var_id(i, j, 0)));
                X.push_back(std::move(row));
            }
            KPoly det0 = laplace_det(X, r0);
            for (int d = 0; d <= max_level; ++d) ctx->dets_.push_back(det0.transplant(ctx->rings_[d]));
        }

        if (sys) {
            const auto& top = ctx->rings_[max_level];
            auto build_table = [&](const OperatorSpec& coeff_op, const KMatrix& M,
                                   const RationalFunction& det_scale) {
                JetContext::ActionTable table{{}, det_scale, coeff_op};
                // partial^m(M) entrywise, m = 0..max_level
                std::vector<KMatrix> dM{M};
                for (int m = 1; m <= max_level; ++m)
                    dM.push_back(kmatrix_apply(field->partial(), dM.back()));
                for (int k = 0; k <= max_level; ++k)
                    for (std::size_t i = 1; i <= n; ++i)
                        for (std::size_t j = 1; j <= n; ++j) {
                            KPoly img = KPoly::zero(top);
                            for (int m = 0; m <= k; ++m) {
                                RationalFunction c = RationalFunction::from_rat(
                                    field->ring(), binom(static_cast<unsigned long>(k), static_cast<unsigned long>(m)));
                                for (std::size_t col = 1; col <= n; ++col) {
                                    RationalFunction coeff = dM[m].at(i - 1, col - 1) * c;
                                    if (coeff.is_zero()) continue;
                                    img = img + KPoly::term(top, Monomial::var(ctx->var_id(col, j, k - m)), coeff);
                                }
                            }
                            table.images.emplace(ctx->var_id(i, j, k), std::move(img));
                        }
                return table;
            };

            for (auto& s : field->sigmas()) {
                ctx->sigma_.emplace(s.id, build_table(s, sys->A(s.id), sys->det_A(s.id)));
                OperatorSpec inv{OpKind::automorphism, s.id + "^-1", s.inverse_images, s.images};
                KMatrix Astar = kmatrix_apply(inv, sys->A_inv(s.id));
                ctx->sigma_inv_.emplace(s.id, build_table(inv, Astar, kmatrix_det(Astar)));
            }
            RationalFunction rf_one = RationalFunction::from_rat(field->ring(), Rat(1));
            for (auto& d : field->deltas()) ctx->delta_.emplace(d.id, build_table(d, sys->B(d.id), rf_one));
        }
        return ctx;
    }
};

JetCtxPtr JetContext::create(FieldPtr field, SystemPtr sys, std::size_t n, int max_level) {
    return JetContextBuilder::build(std::move(field), std::move(sys), n, max_level);
}

const KRingPtr& JetContext::ring(int level) const {
    if (level < 0 || level > max_level_) throw usage_error("jet level out of range");
    return rings_[static_cast<std::size_t>(level)];
}

const KPoly& JetContext::det(int level) const {
    if (level < 0 || level > max_level_) throw usage_error("jet level out of range");
    return dets_[static_cast<std::size_t>(level)];
}

KPoly JetContext::embed_poly(const KPoly& p, int level, int target) const {
    if (target < level) throw usage_error("embed target below current level");
    return p.transplant(ring(target));
}

KPoly JetContext::restrict_poly(const KPoly& p, int target) const { return p.transplant(ring(target)); }

int JetContext::level_of(const KPoly& p) const {
    int lvl = 0;
    for (auto& t : p.terms())
        for (auto& [id, e] : t.mono.entries()) lvl = std::max(lvl, decode(id).order);
    return lvl;
}

KPoly JetContext::d_poly(const KPoly& p, int level) const {
    if (level + 1 > max_level_)
        throw usage_error("jet level cap exceeded (max_level " + std::to_string(max_level_) + ")");
    const KRingPtr& target = ring(level + 1);
    const OperatorSpec& partial = field_->partial();
    return derive_poly_generic(
        p, target, [&](const RationalFunction& c) { return apply_operator(partial, c); },
        [&](VarId v) {
            JetVar jv = decode(v);
            return KPoly::variable(target, var_id(jv.row, jv.col, jv.order + 1));
        });
}

KPoly JetContext::sigma_poly(const std::string& id, const KPoly& p, int level, bool inverse) const {
    const auto& tables = inverse ? sigma_inv_ : sigma_;
    auto it = tables.find(id);
    if (it == tables.end()) throw usage_error("unknown automorphism " + id);
    const ActionTable& tab = it->second;
    const KRingPtr& target = ring(level);
    return p.substitute<RationalFunction>(
        target, [&](const RationalFunction& c) { return apply_operator(tab.coeff_op, c); },
        [&](VarId v) { return tab.images.at(v).transplant(target); });
}

KPoly JetContext::delta_poly(const std::string& id, const KPoly& p, int level) const {
    auto it = delta_.find(id);
    if (it == delta_.end()) throw usage_error("unknown delta-derivation " + id);
    const ActionTable& tab = it->second;
    const KRingPtr& target = ring(level);
    return derive_poly_generic(
        p, target, [&](const RationalFunction& c) { return apply_operator(tab.coeff_op, c); },
        [&](VarId v) { return tab.images.at(v).transplant(target); });
}

RationalFunction JetContext::det_A(const std::string& id, bool inverse) const {
    const auto& tables = inverse ? sigma_inv_ : sigma_;
    auto it = tables.find(id);
    if (it == tables.end()) throw usage_error("unknown automorphism " + id);
    return it->second.det_scale;
}

FilteredElement::FilteredElement(JetCtxPtr ctx, int level, KPoly poly, std::uint32_t det_power)
    : ctx_(std::move(ctx)), level_(level), poly_(std::move(poly)), det_power_(det_power) {
    if (!ctx_) throw usage_error("filtered element needs a context");
    if (poly_.ring() != ctx_->ring(level_)) throw usage_error("polynomial not in the level ring");
    canonicalize();
}

void FilteredElement::canonicalize() {
    if (poly_.is_zero()) {
        det_power_ = 0;
        return;
    }
    const KPoly& det = ctx_->det(level_);
    while (det_power_ > 0) {
        auto q = poly_.divide_exact(det);
        if (!q) break;
        poly_ = *q;
        --det_power_;
    }
}

FilteredElement FilteredElement::from_coeff(const JetCtxPtr& ctx, int level, const RationalFunction& c) {
    return FilteredElement(ctx, level, KPoly::constant(ctx->ring(level), c));
}
FilteredElement FilteredElement::jet_var(const JetCtxPtr& ctx, int level, std::size_t row, std::size_t col,
                                         int order) {
    if (order > level) throw usage_error("jet order above the level");
    return FilteredElement(ctx, level, KPoly::variable(ctx->ring(level), ctx->var_id(row, col, order)));
}
FilteredElement FilteredElement::det(const JetCtxPtr& ctx, int level) {
    return FilteredElement(ctx, level, ctx->det(level));
}

namespace {
std::pair<FilteredElement, FilteredElement> align(const FilteredElement& a, const FilteredElement& b) {
    if (a.ctx() != b.ctx()) throw usage_error("filtered elements from different contexts");
    int lvl = std::max(a.level(), b.level());
    return {embed(a, lvl), embed(b, lvl)};
}
} // namespace

FilteredElement FilteredElement::operator+(const FilteredElement& o) const {
    auto [a, b] = align(*this, o);
    std::uint32_t e = std::max(a.det_power_, b.det_power_);
    const KPoly& det = a.ctx_->det(a.level_);
    KPoly pa = a.poly_, pb = b.poly_;
    for (std::uint32_t k = a.det_power_; k < e; ++k) pa = pa * det;
    for (std::uint32_t k = b.det_power_; k < e; ++k) pb = pb * det;
    return FilteredElement(a.ctx_, a.level_, pa + pb, e);
}
FilteredElement FilteredElement::operator-() const { return FilteredElement(ctx_, level_, -poly_, det_power_); }
FilteredElement FilteredElement::operator-(const FilteredElement& o) const { return *this + (-o); }
FilteredElement FilteredElement::operator*(const FilteredElement& o) const {
    auto [a, b] = align(*this, o);
    return FilteredElement(a.ctx_, a.level_, a.poly_ * b.poly_, a.det_power_ + b.det_power_);
}
FilteredElement FilteredElement::scale(const RationalFunction& c) const {
    return FilteredElement(ctx_, level_, poly_.scale(c), det_power_);
}

FilteredElement FilteredElement::operator/(const FilteredElement& o) const {
    auto [a, b] = align(*this, o);
    if (b.is_zero()) throw domain_error("division by zero filtered element");
    // Denominator must be c * det^k.
    KPoly q = b.poly_;
    const KPoly& det = a.ctx_->det(a.level_);
    std::uint32_t k = 0;
    while (true) {
        auto d = q.divide_exact(det);
        if (!d) break;
        q = *d;
        ++k;
    }
    if (!q.is_constant())
        throw domain_error("division only by coefficients and det powers; denominator is " + b.poly_.str());
    RationalFunction c = q.terms()[0].coeff;
    // a / (c det^k / det^eb) = (a.poly / c) * det^(eb) / det^(ea + k)
    std::int64_t net = static_cast<std::int64_t>(a.det_power_) + k - static_cast<std::int64_t>(b.det_power_);
    KPoly num = a.poly_.scale(c.inv());
    if (net < 0) {
        for (std::int64_t i = 0; i < -net; ++i) num = num * det;
        net = 0;
    }
    return FilteredElement(a.ctx_, a.level_, num, static_cast<std::uint32_t>(net));
}

bool FilteredElement::operator==(const FilteredElement& o) const {
    auto [a, b] = align(*this, o);
    return a.det_power_ == b.det_power_ && a.poly_ == b.poly_;
}

RationalFunction FilteredElement::evaluate(const std::function<RationalFunction(VarId)>& value) const {
    RationalFunction num = poly_.evaluate(value);
    if (det_power_ == 0) return num;
    RationalFunction dv = ctx_->det(level_).evaluate(value);
    if (dv.is_zero()) throw domain_error("det vanishes at the evaluation point");
    RationalFunction den = dv.pow(det_power_);
    return num / den;
}

std::string FilteredElement::str() const {
    if (det_power_ == 0) return poly_.str();
    std::string s = "(" + poly_.str() + ")/det";
    if (det_power_ > 1) s += "^" + std::to_string(det_power_);
    return s;
}

FilteredElement d_apply(const FilteredElement& f) {
    const JetCtxPtr& ctx = f.ctx();
    int level = f.level();
    KPoly dp = ctx->d_poly(f.poly(), level);
    if (f.det_power() == 0) return FilteredElement(ctx, level + 1, dp, 0);
    // (p/det^e)' = (p' det - e p det') / det^(e+1)
    const KPoly& det_next = ctx->det(level + 1);
    KPoly p = ctx->embed_poly(f.poly(), level, level + 1);
    KPoly ddet = ctx->d_poly(ctx->det(level), level);
    KPoly num = dp * det_next - p * ddet.scale(RationalFunction::from_rat(ctx->field()->ring(),
                                                                          Rat(static_cast<long>(f.det_power()))));
    return FilteredElement(ctx, level + 1, num, f.det_power() + 1);
}

FilteredElement sigma_apply(const std::string& sigma_id, const FilteredElement& f, bool inverse) {
    const JetCtxPtr& ctx = f.ctx();
    KPoly sp = ctx->sigma_poly(sigma_id, f.poly(), f.level(), inverse);
    if (f.det_power() == 0) return FilteredElement(ctx, f.level(), sp, 0);
    // sigma(det) = det(A) det, so sigma(p/det^e) = sigma(p) det(A)^-e / det^e.
    RationalFunction scale = ctx->det_A(sigma_id, inverse).pow(f.det_power()).inv();
    return FilteredElement(ctx, f.level(), sp.scale(scale), f.det_power());
}

FilteredElement delta_apply(const std::string& delta_id, const FilteredElement& f) {
    const JetCtxPtr& ctx = f.ctx();
    int level = f.level();
    KPoly dp = ctx->delta_poly(delta_id, f.poly(), level);
    if (f.det_power() == 0) return FilteredElement(ctx, level, dp, 0);
    // delta(p/det^e) = (delta(p) det - e p delta(det)) / det^(e+1); Jacobi
    // makes the division by det exact, restoring power e canonically.
    const KPoly& det = ctx->det(level);
    KPoly ddet = ctx->delta_poly(delta_id, det, level);
    KPoly num = dp * det - f.poly() * ddet.scale(RationalFunction::from_rat(ctx->field()->ring(),
                                                                            Rat(static_cast<long>(f.det_power()))));
    return FilteredElement(ctx, level, num, f.det_power() + 1);
}

FilteredElement embed(const FilteredElement& f, int target_level) {
    if (target_level < f.level()) throw usage_error("embed target below current level");
    if (target_level == f.level()) return f;
    return FilteredElement(f.ctx(), target_level, f.ctx()->embed_poly(f.poly(), f.level(), target_level),
                           f.det_power());
}

JetIdeal JetIdeal::saturated(const JetCtxPtr& ctx, int level, std::vector<KPoly> gens, const GroebnerOptions& opts) {
    const KRingPtr& ring = ctx->ring(level);
    IdealPresentation<RationalFunction> raw(ring, std::move(gens));
    IdealPresentation<RationalFunction> sat = saturate(raw, ctx->det(level), opts);
    GroebnerBasis<RationalFunction> gb = buchberger(sat, opts);
    IdealPresentation<RationalFunction> pres(ring, gb.basis);
    return JetIdeal{ctx, level, std::move(pres), std::move(gb)};
}

bool JetIdeal::contains(const KPoly& p, const Budget& budget) const {
    KPoly q = p.ring() == pres.ring ? p : p.transplant(pres.ring);
    return member(q, gb, budget);
}

bool JetIdeal::contains(const FilteredElement& f, const Budget& budget) const {
    if (f.level() > level) throw usage_error("element above the ideal's level");
    return contains(f.poly(), budget);
}

bool JetIdeal::verify_saturated(const GroebnerOptions& opts) const {
    IdealPresentation<RationalFunction> again = saturate(pres, ctx->det(level), opts);
    return equal_ideals(pres, again, opts);
}

bool verify_fundamental_matrix(const Matrix<FilteredElement>& Z, const JetIdeal& ideal, const GroebnerOptions& opts) {
    const JetCtxPtr& ctx = ideal.ctx;
    const SystemPtr& sys = ctx->system();
    if (!sys) throw usage_error("verify_fundamental_matrix needs a linear system");
    std::size_t n = sys->n();
    if (Z.rows() != n || Z.cols() != n) throw usage_error("candidate matrix has the wrong shape");

    // det(Z) must be invertible modulo the ideal: det^k lies in the
    // det-saturation of (ideal, det(Z)-numerator).
    // Entries are representatives of residue classes: reduce them modulo the
    // ideal first, so the check does not depend on the representative chosen.
    std::vector<std::vector<FilteredElement>> zz;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<FilteredElement> row;
        for (std::size_t j = 0; j < n; ++j) {
            FilteredElement e = embed(Z.at(i, j), ideal.level);
            KPoly nf = normal_form(e.poly(), ideal.gb.basis, opts.budget);
            row.push_back(FilteredElement(ctx, ideal.level, nf, e.det_power()));
        }
        zz.push_back(std::move(row));
    }
    FilteredElement detZ = zz[0][0];
    {
        // Laplace expansion over filtered elements.
        std::function<FilteredElement(const std::vector<std::vector<FilteredElement>>&)> det_of =
            [&](const std::vector<std::vector<FilteredElement>>& m) -> FilteredElement {
            if (m.size() == 1) return m[0][0];
            FilteredElement acc = FilteredElement::from_coeff(ctx, ideal.level,
                                                              RationalFunction::from_rat(ctx->field()->ring(), Rat(0)));
            for (std::size_t c = 0; c < m.size(); ++c) {
                std::vector<std::vector<FilteredElement>> minor;
                for (std::size_t r = 1; r < m.size(); ++r) {
                    std::vector<FilteredElement> row;
                    for (std::size_t cc = 0; cc < m.size(); ++cc)
                        if (cc != c) row.push_back(m[r][cc]);
                    minor.push_back(std::move(row));
                }
                FilteredElement term = m[0][c] * det_of(minor);
                acc = (c % 2 == 0) ? acc + term : acc - term;
            }
            return acc;
        };
        detZ = det_of(zz);
    }
    std::vector<KPoly> with_det = ideal.pres.gens;
    with_det.push_back(detZ.poly());
    IdealPresentation<RationalFunction> J(ideal.pres.ring, std::move(with_det));
    IdealPresentation<RationalFunction> sat = saturate(J, ctx->det(ideal.level), opts);
    bool invertible = sat.gens.size() == 1 && sat.gens[0].is_one();
    if (!invertible) throw domain_error("det of the candidate matrix is not invertible modulo the ideal");

    auto entry_ok = [&](const FilteredElement& e) { return ideal.contains(e, opts.budget); };
    RationalFunction zero = RationalFunction::from_rat(ctx->field()->ring(), Rat(0));

    for (auto& s : ctx->field()->sigmas()) {
        const KMatrix& A = sys->A(s.id);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                FilteredElement lhs = sigma_apply(s.id, zz[i][j]);
                FilteredElement rhs = FilteredElement::from_coeff(ctx, ideal.level, zero);
                for (std::size_t c = 0; c < n; ++c)
                    rhs = rhs + zz[c][j].scale(A.at(i, c));
                if (!entry_ok(lhs - rhs)) return false;
            }
    }
    for (auto& d : ctx->field()->deltas()) {
        const KMatrix& B = sys->B(d.id);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                FilteredElement lhs = delta_apply(d.id, zz[i][j]);
                FilteredElement rhs = FilteredElement::from_coeff(ctx, ideal.level, zero);
                for (std::size_t c = 0; c < n; ++c)
                    rhs = rhs + zz[c][j].scale(B.at(i, c));
                if (!entry_ok(lhs - rhs)) return false;
            }
    }
    return true;
}

} // namespace pvring
