#include "pvring/qgcd.hpp"

#include <algorithm>

namespace pvring {

Rat int_content(const QPoly& p) {
    if (p.is_zero()) return Rat(1);
    mpz_class num_gcd = 0, den_lcm = 1;
    for (auto& t : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.den().get_mpz_t());
    }
    return Rat(mpq_class(num_gcd) / mpq_class(den_lcm));
}

QPoly primitive_part(const QPoly& p) {
    if (p.is_zero()) return p;
    Rat c = int_content(p);
    if (p.leading_coeff().sign() < 0) c = -c;
    return p.scale(c.inv());
}

namespace gcddetail {

std::vector<QPoly> univariate_view(const QPoly& p, VarId x) {
    std::uint32_t d = p.degree_in(x);
    std::vector<QPoly> out(d + 1, QPoly::zero(p.ring()));
    for (auto& t : p.terms()) {
        std::uint32_t e = t.mono.exponent(x);
        Monomial rest = Monomial::var(x, e).divide_into(t.mono);
        out[e] = out[e] + QPoly::term(p.ring(), rest, t.coeff);
    }
    return out;
}

QPoly from_univariate(const std::vector<QPoly>& coeffs, VarId x) {
    if (coeffs.empty()) throw usage_error("empty univariate view");
    QPoly acc = QPoly::zero(coeffs[0].ring());
    for (std::size_t e = 0; e < coeffs.size(); ++e)
        acc = acc + coeffs[e].mul_term(Monomial::var(x, static_cast<std::uint32_t>(e)), coeffs[e].ring()->coeff_one());
    return acc;
}

QPoly pseudo_remainder(const QPoly& a, const QPoly& b, VarId x) {
    std::uint32_t db = b.degree_in(x);
    if (b.is_zero()) throw domain_error("pseudo-remainder by zero");
    QPoly r = a;
    std::uint32_t da = r.degree_in(x);
    if (da < db) {
        // prem = lc(b)^(da-db+1) * a would need a negative power; by
        // convention the callers never request this case.
        throw usage_error("pseudo-remainder with deg a < deg b");
    }
    auto bview = univariate_view(b, x);
    QPoly lcb = bview[db];
    long e = static_cast<long>(da) - static_cast<long>(db) + 1;
    while (!r.is_zero() && r.degree_in(x) >= db) {
        auto rview = univariate_view(r, x);
        std::uint32_t dr = r.degree_in(x);
        QPoly lcr = rview[dr];
        // r := lc(b)*r - lc(r)*x^(dr-db)*b
        r = r * lcb - (lcr.mul_term(Monomial::var(x, dr - db), r.ring()->coeff_one())) * b;
        --e;
    }
    for (; e > 0; --e) r = r * lcb;
    return r;
}

namespace {

// Deterministic main-variable choice: the highest-precedence variable
// actually present in either operand.
std::optional<VarId> pick_main_var(const QPoly& a, const QPoly& b) {
    std::optional<VarId> best;
    std::uint32_t best_pos = 0;
    auto scan = [&](const QPoly& p) {
        for (auto& t : p.terms())
            for (auto& [id, e] : t.mono.entries()) {
                std::uint32_t pos = p.ring()->position(id);
                if (!best || pos < best_pos) {
                    best = id;
                    best_pos = pos;
                }
            }
    };
    scan(a);
    scan(b);
    return best;
}

QPoly gcd_rec(QPoly a, QPoly b);

// Content of p with respect to x: gcd of the univariate coefficients.
QPoly content_in(const QPoly& p, VarId x) {
    auto view = univariate_view(p, x);
    QPoly c = QPoly::zero(p.ring());
    for (auto& q : view) {
        c = gcd_rec(c, q);
        if (c.is_one()) break;
    }
    return c;
}

QPoly exact_div(const QPoly& p, const QPoly& d) {
    auto q = p.divide_exact(d);
    if (!q) throw engine_error("internal: inexact division in gcd");
    return *q;
}

QPoly gcd_rec(QPoly a, QPoly b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return QPoly::one(a.ring());

    auto xo = pick_main_var(a, b);
    VarId x = *xo; // both nonconstant, so some variable is present
    std::uint32_t da = a.degree_in(x), db = b.degree_in(x);
    if (da == 0 || db == 0) {
        // x occurs in only one operand: the gcd cannot involve x.
        if (da == 0) return gcd_rec(a, content_in(b, x));
        return gcd_rec(content_in(a, x), b);
    }

    QPoly ca = content_in(a, x);
    QPoly cb = content_in(b, x);
    QPoly cont = gcd_rec(ca, cb);
    QPoly pa = exact_div(a, ca);
    QPoly pb = exact_div(b, cb);
    if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);

    // Subresultant PRS on the primitive parts.
    QPoly one = QPoly::one(a.ring());
    QPoly g = one, h = one;
    QPoly r0 = pa, r1 = pb;
    while (true) {
        std::uint32_t d0 = r0.degree_in(x), d1 = r1.degree_in(x);
        std::uint32_t delta = d0 - d1;
        QPoly rem = pseudo_remainder(r0, r1, x);
        if (rem.is_zero()) {
            QPoly pp = exact_div(r1, content_in(r1, x));
            return primitive_part(cont * pp);
        }
        if (rem.degree_in(x) == 0) return primitive_part(cont);
        QPoly divisor = g;
        for (std::uint32_t i = 0; i < delta; ++i) divisor = divisor * h;
        r0 = r1;
        r1 = exact_div(rem, divisor);
        g = univariate_view(r0, x)[r0.degree_in(x)];
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            QPoly gd = one;
            for (std::uint32_t i = 0; i < delta; ++i) gd = gd * g;
            QPoly hd = one;
            for (std::uint32_t i = 0; i + 1 < delta; ++i) hd = hd * h;
            h = exact_div(gd, hd);
        }
    }
}

} // namespace
} // namespace gcddetail

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
    if (a.ring() != b.ring()) throw usage_error("gcd across different rings");
    return gcddetail::gcd_rec(a, b);
}

QPoly poly_lcm(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly::zero(a.ring());
    QPoly g = poly_gcd(a, b);
    auto q = (a * b).divide_exact(g);
    if (!q) throw engine_error("internal: gcd does not divide product");
    return primitive_part(*q);
}

} // namespace pvring
