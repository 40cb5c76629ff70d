// Acceptance suite: each numbered criterion runs end to end against its
// frozen expectations and time bound, printing one PASS/FAIL line.

#include "pvring/problem.hpp"
#include "pvring/prolong.hpp"
#include "pvring/report.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace pvring;

namespace {

struct Harness {
    int failures = 0;

    void run(int number, const std::string& name, double limit_seconds, const std::function<bool(std::string&)>& fn) {
        std::string detail;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > limit_seconds) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("exceeded time limit");
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "(%.2f s, limit %.0f s)", secs, limit_seconds);
        std::cout << (ok ? "PASS" : "FAIL") << "  " << number << "  " << name << " " << buf << "\n";
        if (!ok) {
            if (!detail.empty()) std::cout << "      " << detail << "\n";
            ++failures;
        }
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string run_command(const std::string& cmd) {
    std::string full = cmd + " 2>&1";
    FILE* p = popen(full.c_str(), "r");
    if (!p) throw usage_error("popen failed");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int rc = pclose(p);
    out += "\n[exit " + std::to_string(rc) + "]\n";
    return out;
}

ProblemFile load_fixture(const std::string& share, const std::string& name) {
    return parse_problem(slurp(share + "/" + name));
}

// ---- criterion 1 -------------------------------------------------------
bool counterexample_reproduction(std::string& detail) {
    ConsistencyCertificate cert = counterexample_two_derivations();
    if (!cert.trivial || !is_trivial(cert.basis_of_b)) {
        detail = "b is not the unit ideal";
        return false;
    }
    if (!cert.witness || !cert.witness->replay()) {
        detail = "witness missing or does not replay";
        return false;
    }
    const TrivialityWitness& w = *cert.witness;
    if (w.steps.size() != 4 || w.det_power != 0) {
        detail = "witness shape differs from the three-step derivation";
        return false;
    }
    // The derivation: v*d1d2(x) + d1(x), d1d2(x), then d1(x), then 1.
    const KRingPtr& ring = cert.basis_of_b.ring;
    auto v = [&](const char* name) { return KPoly::variable(ring, *ring->id_of(name)); };
    const RingPtr<Rat>& base = ring->coeff_one().base_ring();
    RationalFunction vv = RationalFunction::var(base, *base->id_of("v"));
    KPoly expect0 = v("d1(d2(x))").scale(vv) + v("d1(x)");
    bool shape = w.steps[0].value == expect0 && w.steps[1].value == v("d1(d2(x))") &&
                 w.steps[2].value == v("d1(x)") && w.steps[3].value.is_one();
    if (!shape) detail = "witness steps do not match the derivation";
    return shape;
}

// ---- criterion 2 -------------------------------------------------------
bool kernel_consistency_suite(std::string& detail) {
    auto ring = FieldDesc::make_base_ring({"x", "t"});
    auto one = RationalFunction::from_rat(ring, Rat(1));
    auto zero = RationalFunction::from_rat(ring, Rat(0));
    OperatorSpec delta{OpKind::delta_derivation, "d", {{0, one}, {1, zero}}, {}};
    OperatorSpec partial{OpKind::partial_derivation, "p", {{0, zero}, {1, one}}, {}};
    auto K = std::make_shared<FieldDesc>(ring, std::vector<OperatorSpec>{}, std::vector<OperatorSpec>{delta},
                                         partial);

    std::mt19937_64 rng(0xACCE55);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> deg(0, 3);
    auto random_zt = [&]() {
        QPoly p = QPoly::zero(ring);
        int d = deg(rng);
        for (int k = 0; k <= d; ++k) {
            int c = coeff(rng);
            if (c) p = p + QPoly::term(ring, Monomial::var(1, static_cast<std::uint32_t>(k)), Rat(c));
        }
        return RationalFunction(p);
    };

    int done = 0;
    for (int iter = 0; done < 20 && iter < 200; ++iter) {
        std::size_t n = 1 + (iter % 2);
        int level = iter % 3;
        auto ctx = JetContext::create(K, nullptr, n, level + 1);
        KMatrix z(n, n, zero);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) z.at(i, j) = random_zt();
        if (kmatrix_det(z).is_zero()) continue;

        auto ev = JetEvaluation::from_order0(ctx, level, z);
        JetIdeal a = evaluation_kernel(ev, level);
        if (!check_closure(a)) {
            detail = "check_closure failed on an evaluation kernel";
            return false;
        }
        ConsistencyCertificate cert = check_consistency(a);
        if (!cert.hypothesis_ok || cert.trivial) {
            detail = "consistency certificate wrong on an evaluation kernel";
            return false;
        }
        // Oracle: the extended evaluation annihilates every generator of b.
        auto b = prolongation_ideal(a);
        JetEvaluation ext = ev.extended(level + 1);
        for (auto& g : b.gens)
            if (!ext.evaluate(g).is_zero()) {
                detail = "extended evaluation does not annihilate b";
                return false;
            }
        ++done;
    }
    if (done < 20) {
        detail = "could not build 20 instances";
        return false;
    }
    return true;
}

// ---- criterion 3 -------------------------------------------------------
bool chain_invariants(const std::string& share, const std::string& fixture, std::string& detail) {
    ProblemFile pf = load_fixture(share, fixture);
    GroebnerOptions opts;
    opts.budget = pf.options.budget();
    JetCtxPtr ctx = JetContext::create(pf.field, pf.system, pf.system->n(), std::max(3, pf.max_seed_order()));
    std::map<int, std::vector<KPoly>> seeds;
    for (auto& [lvl, exprs] : pf.seeds) seeds.emplace(lvl, build_jet_polys(exprs, ctx, lvl));
    ChainReport report = build_chain(ctx, seeds, 3, opts);
    if (!report.all_ok() || report.levels.size() != 4) {
        detail = fixture + ": chain checks failed";
        return false;
    }
    // Re-verify the chain conditions directly, both inclusions by
    // membership, independently of the recorded flags.
    for (int d = 0; d < 3; ++d) {
        const JetIdeal& lo = report.levels[static_cast<std::size_t>(d)].m;
        const JetIdeal& hi = report.levels[static_cast<std::size_t>(d) + 1].m;
        std::vector<VarId> keep;
        for (auto& decl : ctx->ring(d + 1)->decls())
            if (ctx->decode(decl.id).order <= d) keep.push_back(decl.id);
        auto elim = eliminate(hi.pres, keep, opts);
        for (auto& g : elim.gens)
            if (!lo.contains(ctx->restrict_poly(g, d))) {
                detail = fixture + ": elimination leaks at level " + std::to_string(d + 1);
                return false;
            }
        for (auto& g : lo.pres.gens) {
            if (!hi.contains(ctx->embed_poly(g, d, d + 1))) {
                detail = fixture + ": m_d not inside m_(d+1)";
                return false;
            }
            if (!hi.contains(ctx->d_poly(g, d))) {
                detail = fixture + ": partial(m_d) not inside m_(d+1)";
                return false;
            }
        }
        if (!hi.verify_saturated(opts)) {
            detail = fixture + ": saturation not a fixpoint";
            return false;
        }
    }
    return true;
}

// ---- criterion 4 -------------------------------------------------------
bool integrability_classifier(const std::string& share, std::string& detail) {
    ProblemFile good = load_fixture(share, "mixed.pv");
    if (!check_integrability(*good.system).ok()) {
        detail = "mixed.pv should pass";
        return false;
    }
    ProblemFile bad = load_fixture(share, "mixed_broken.pv");
    auto rep = check_integrability(*bad.system);
    if (rep.ok()) {
        detail = "mixed_broken.pv should fail";
        return false;
    }
    for (auto& c : rep.checks)
        if (!c.pass) {
            RationalFunction one = RationalFunction::from_rat(bad.field->ring(), Rat(1));
            if (c.condition != "SD" || c.residual.at(0, 0) != one) {
                detail = "expected (SD) failure with residual 1, got " + render_matrix(c.residual);
                return false;
            }
        }
    return true;
}

// ---- criterion 5 -------------------------------------------------------
bool jet_commutation(const std::string& share, const std::string& fixture, std::string& detail) {
    ProblemFile pf = load_fixture(share, fixture);
    if (!check_integrability(*pf.system).ok()) {
        detail = fixture + " is not integrable";
        return false;
    }
    JetCtxPtr ctx = JetContext::create(pf.field, pf.system, pf.system->n(), 3);
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> pw(0, 1);
    std::vector<VarId> vars;
    for (auto& d : ctx->ring(2)->decls()) vars.push_back(d.id);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::uniform_int_distribution<int> exp(0, 2);

    auto random_fe = [&]() {
        KPoly p = KPoly::zero(ctx->ring(2));
        int terms = nterms(rng);
        for (int k = 0; k < terms; ++k) {
            std::vector<Monomial::Entry> entries;
            int budget = 2;
            for (int tries = 0; tries < 2 && budget > 0; ++tries) {
                VarId v = vars[pick(rng)];
                int e = exp(rng) % (budget + 1);
                bool seen = false;
                for (auto& [id, ee] : entries)
                    if (id == v) seen = true;
                if (e > 0 && !seen) {
                    entries.push_back({v, static_cast<std::uint32_t>(e)});
                    budget -= e;
                }
            }
            QPoly cnum = QPoly::zero(pf.field->ring());
            cnum = cnum + QPoly::constant(pf.field->ring(), Rat(coeff(rng)));
            cnum = cnum + QPoly::variable(pf.field->ring(), 1).scale(Rat(coeff(rng)));
            if (cnum.is_zero()) cnum = QPoly::one(pf.field->ring());
            p = p + KPoly::term(ctx->ring(2), Monomial(entries), RationalFunction(cnum));
        }
        return FilteredElement(ctx, 2, p, static_cast<std::uint32_t>(pw(rng)));
    };

    // All operator pairs from Sigma u Delta u {partial}.
    using Action = std::function<FilteredElement(const FilteredElement&)>;
    std::vector<Action> acts;
    std::vector<bool> raises; // partial raises the level
    for (auto& s : pf.field->sigmas()) {
        acts.push_back([id = s.id](const FilteredElement& f) { return sigma_apply(id, f); });
        raises.push_back(false);
    }
    for (auto& d : pf.field->deltas()) {
        acts.push_back([id = d.id](const FilteredElement& f) { return delta_apply(id, f); });
        raises.push_back(false);
    }
    acts.push_back([](const FilteredElement& f) { return d_apply(f); });
    raises.push_back(true);

    for (int iter = 0; iter < 50; ++iter) {
        FilteredElement f = random_fe();
        for (std::size_t i = 0; i < acts.size(); ++i)
            for (std::size_t j = i + 1; j < acts.size(); ++j) {
                FilteredElement ab = acts[i](acts[j](f));
                FilteredElement ba = acts[j](acts[i](f));
                if (ab != ba) {
                    detail = fixture + ": operator pair does not commute on a random jet";
                    return false;
                }
            }
    }
    return true;
}

// ---- criterion 6 -------------------------------------------------------
bool groebner_oracles(const std::string& oracles, std::string& detail) {
    const std::vector<std::string> names = {
        "gb01_circle_pair", "gb02_single", "gb03_unit",    "gb04_parabola_lex", "gb05_cyclic3", "gb06_clo_ch2",
        "gb07_fractions",   "gb08_circle_line_lex", "gb09_monomials", "gb10_twisted",  "gb11_mixed_deg",
        "gb12_dependent"};
    for (auto& name : names) {
        std::istringstream in(slurp(oracles + "/" + name + ".txt"));
        std::string line;
        std::vector<std::string> vars, gens, expected;
        std::string order;
        enum { header, in_gens, in_basis } state = header;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line.rfind("vars: ", 0) == 0) {
                std::istringstream vs(line.substr(6));
                std::string v;
                while (vs >> v) vars.push_back(v);
            } else if (line.rfind("order: ", 0) == 0) {
                order = line.substr(7);
            } else if (line == "gens:") {
                state = in_gens;
            } else if (line == "basis:") {
                state = in_basis;
            } else if (state == in_gens) {
                gens.push_back(line);
            } else if (state == in_basis) {
                expected.push_back(line);
            }
        }
        std::vector<PolyRing<Rat>::VarDecl> decls;
        for (VarId i = 0; i < vars.size(); ++i) decls.push_back({i, vars[i]});
        auto ring = PolyRing<Rat>::create(std::move(decls), order == "lex" ? TermOrder::lex() : TermOrder::grevlex(),
                                          Rat(1));
        std::vector<QPoly> polys;
        for (auto& g : gens) {
            RationalFunction v = eval_field_expr(parse_expression(g), ring);
            polys.push_back(v.num());
        }
        auto G = buchberger(IdealPresentation<Rat>(ring, polys));
        std::vector<std::string> got;
        for (auto& b : G.basis) got.push_back(b.str());
        if (got != expected) {
            detail = name + ": basis mismatch; got [";
            for (auto& g : got) detail += g + "; ";
            detail += "]";
            return false;
        }
    }
    return true;
}

// ---- criterion 7 -------------------------------------------------------
bool constants_guard(const std::string& share, std::string& detail) {
    ProblemFile pf = load_fixture(share, "dz_zero.pv");
    GroebnerOptions opts;
    opts.budget = pf.options.budget();
    JetCtxPtr ctx = JetContext::create(pf.field, pf.system, 1, 3);
    std::map<int, std::vector<KPoly>> seeds;
    for (auto& [lvl, exprs] : pf.seeds) seeds.emplace(lvl, build_jet_polys(exprs, ctx, lvl));
    ChainReport report = build_chain(ctx, seeds, 3, opts);
    if (!report.all_ok()) {
        detail = "chain construction failed";
        return false;
    }
    ConstantsResult res = find_constants(report.levels[3].m, 3, {}, opts);
    if (res.classes.empty()) {
        detail = "expected the K-constants themselves to appear";
        return false;
    }
    for (auto& c : res.classes) {
        if (c.terms().size() != 1 || !c.terms()[0].mono.is_unit()) {
            detail = "class outside K: " + c.str();
            return false;
        }
        if (!is_constant(*pf.field, c.terms()[0].coeff)) {
            detail = "class is not a Sigma-Delta constant of K: " + c.str();
            return false;
        }
    }
    return true;
}

// ---- criterion 8 -------------------------------------------------------
bool determinism(const std::string& cli, const std::string& share, std::string& detail) {
    std::vector<std::string> commands = {
        cli + " check " + share + "/shift_t.pv",
        cli + " check " + share + "/mixed.pv",
        cli + " check " + share + "/mixed_broken.pv",
        cli + " check " + share + "/dz_zero.pv",
        cli + " check --machine " + share + "/mixed.pv",
        cli + " chain --depth 3 " + share + "/dz_zero.pv",
        cli + " chain --depth 3 " + share + "/shift_t.pv",
        cli + " chain --depth 3 " + share + "/mixed.pv",
        cli + " chain --depth 3 --machine " + share + "/dz_zero.pv",
        cli + " prolong --level 0 " + share + "/dz_zero.pv",
        cli + " counterexample",
        cli + " counterexample --machine",
        cli + " groebner --ideal circle " + share + "/kernel.pv",
        cli + " groebner --ideal jets " + share + "/kernel.pv",
        cli + " member --ideal circle --poly y^3 " + share + "/kernel.pv",
        cli + " eliminate --ideal parabola --keep x,y " + share + "/kernel.pv",
        cli + " saturate --ideal monomials --by x " + share + "/kernel.pv",
        cli + " constants --level 3 --degree-bound 3 " + share + "/dz_zero.pv",
        cli + " groebner --trace --ideal circle " + share + "/kernel.pv",
        cli + " chain --depth 2 --trace " + share + "/dz_zero.pv",
    };
    for (auto& cmd : commands) {
        std::string a = run_command(cmd);
        std::string b = run_command(cmd);
        if (a != b) {
            detail = "outputs differ for: " + cmd;
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli, share, oracles;
    for (int i = 1; i + 1 < argc; i += 2) {
        std::string key = argv[i];
        if (key == "--cli") cli = argv[i + 1];
        if (key == "--share") share = argv[i + 1];
        if (key == "--oracles") oracles = argv[i + 1];
    }
    if (cli.empty() || share.empty() || oracles.empty()) {
        std::cerr << "usage: acceptance --cli PATH --share DIR --oracles DIR\n";
        return 2;
    }

    Harness h;
    h.run(1, "counterexample reproduction (1 in b, three-step witness)", 1.0, counterexample_reproduction);
    h.run(2, "consistency certificates on 20 evaluation kernels", 60.0, kernel_consistency_suite);
    h.run(3, "chain invariants: dz_zero.pv", 60.0,
          [&](std::string& d) { return chain_invariants(share, "dz_zero.pv", d); });
    h.run(3, "chain invariants: shift_t.pv", 60.0,
          [&](std::string& d) { return chain_invariants(share, "shift_t.pv", d); });
    h.run(3, "chain invariants: mixed.pv", 60.0,
          [&](std::string& d) { return chain_invariants(share, "mixed.pv", d); });
    h.run(4, "integrability classifier with residual 1", 1.0,
          [&](std::string& d) { return integrability_classifier(share, d); });
    h.run(5, "jet commutation on 50 random elements: shift_t.pv", 30.0,
          [&](std::string& d) { return jet_commutation(share, "shift_t.pv", d); });
    h.run(5, "jet commutation on 50 random elements: dz_zero.pv", 30.0,
          [&](std::string& d) { return jet_commutation(share, "dz_zero.pv", d); });
    h.run(5, "jet commutation on 50 random elements: mixed.pv", 30.0,
          [&](std::string& d) { return jet_commutation(share, "mixed.pv", d); });
    h.run(6, "Groebner kernel vs recorded CAS oracles (byte-exact)", 10.0,
          [&](std::string& d) { return groebner_oracles(oracles, d); });
    h.run(7, "constants guard on the dz_zero chain", 30.0,
          [&](std::string& d) { return constants_guard(share, d); });
    h.run(8, "byte-identical reruns of every command", 120.0,
          [&](std::string& d) { return determinism(cli, share, d); });

    if (h.failures) {
        std::cout << h.failures << " criterion run(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
