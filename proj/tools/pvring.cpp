#include "pvring/problem.hpp"
#include "pvring/prolong.hpp"
#include "pvring/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pvring;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonFlags {
    std::string file;
    bool machine = false;
    bool trace = false;
    std::uint64_t budget = 0;     // 0 = use file/defaults
    std::uint64_t degree_cap = 0; // 0 = use file/defaults
};

GroebnerOptions make_opts(const ProblemFile& pf, const CommonFlags& flags) {
    GroebnerOptions opts;
    opts.budget = pf.options.budget();
    if (flags.budget) opts.budget.max_reductions = flags.budget;
    if (flags.degree_cap) opts.budget.max_degree = flags.degree_cap;
    if (flags.trace) opts.trace = &std::cout;
    return opts;
}

ProblemFile load(const CommonFlags& flags) { return parse_problem(slurp(flags.file)); }

SystemPtr require_system(const ProblemFile& pf) {
    if (!pf.system) throw usage_error("this command needs a [system] section");
    return pf.system;
}

JetCtxPtr make_ctx(const ProblemFile& pf, int needed_level) {
    SystemPtr sys = require_system(pf);
    int lvl = std::max(needed_level, pf.max_seed_order());
    return JetContext::create(pf.field, sys, sys->n(), lvl);
}

// Field commutation and system integrability both hold, or exit 1.
void require_valid(const ProblemFile& pf, bool machine) {
    auto comm = check_commutation(*pf.field);
    if (!comm.ok()) {
        std::cout << render_commutation(comm, machine);
        std::exit(1);
    }
    auto integ = check_integrability(*require_system(pf));
    if (!integ.ok()) {
        std::cout << render_integrability(integ, machine);
        std::exit(1);
    }
}

std::map<int, std::vector<KPoly>> materialize_seeds(const ProblemFile& pf, const JetCtxPtr& ctx, int depth) {
    std::map<int, std::vector<KPoly>> seeds;
    for (auto& [lvl, exprs] : pf.seeds) {
        if (lvl > depth) throw usage_error("seed level " + std::to_string(lvl) + " above the requested depth");
        seeds.emplace(lvl, build_jet_polys(exprs, ctx, lvl));
    }
    return seeds;
}

const NamedIdealSpec& named_ideal(const ProblemFile& pf, const std::string& name) {
    auto it = pf.ideals.find(name);
    if (it == pf.ideals.end()) throw usage_error("no [ideal " + name + "] section in the file");
    return it->second;
}

void print_basis_or_zero(const std::vector<std::string>& lines) {
    if (lines.empty()) {
        std::cout << "0\n";
        return;
    }
    for (auto& l : lines) std::cout << l << "\n";
}

// Dispatch for ideal-valued subcommands over both ring modes.
struct IdealHandle {
    std::optional<PlainIdeal> plain;
    JetCtxPtr ctx; // jet mode
    int level = 0;
    std::vector<KPoly> jet_gens;
};

IdealHandle open_ideal(const ProblemFile& pf, const std::string& name) {
    const NamedIdealSpec& spec = named_ideal(pf, name);
    IdealHandle h;
    if (spec.plain_vars) {
        h.plain = build_plain_ideal(spec);
        return h;
    }
    int order = 0;
    for (auto& e : spec.gens) order = std::max(order, e.max_jet_order());
    h.ctx = make_ctx(pf, order);
    h.level = order;
    h.jet_gens = build_jet_polys(spec.gens, h.ctx, h.level);
    return h;
}

int cmd_check(const CommonFlags& flags) {
    ProblemFile pf = load(flags);
    auto comm = check_commutation(*pf.field);
    std::cout << render_commutation(comm, flags.machine);
    auto integ = check_integrability(*require_system(pf));
    std::cout << render_integrability(integ, flags.machine);
    return comm.ok() && integ.ok() ? 0 : 1;
}

int cmd_prolong(const CommonFlags& flags, int level) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    require_valid(pf, flags.machine);
    auto it = pf.seeds.find(level);
    if (it == pf.seeds.end()) throw usage_error("no [seed " + std::to_string(level) + "] section in the file");
    JetCtxPtr ctx = make_ctx(pf, level + 1);
    std::vector<KPoly> gens = build_jet_polys(it->second, ctx, level);
    JetIdeal a = JetIdeal::saturated(ctx, level, std::move(gens), opts);
    ConsistencyCertificate cert = check_consistency(a, opts);

    if (!flags.machine) {
        std::cout << "prolongation ideal generators (level " << (level + 1) << "):\n";
        auto b = prolongation_ideal(a, opts);
        if (b.gens.empty()) std::cout << "  (zero ideal)\n";
        for (auto& g : b.gens) std::cout << "  " << g.str() << "\n";
    }
    std::cout << render_certificate(cert, flags.machine);
    return cert.hypothesis_ok && !cert.trivial ? 0 : 1;
}

int cmd_chain(const CommonFlags& flags, int depth) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    require_valid(pf, flags.machine);
    if (depth > pf.options.max_level)
        throw usage_error("depth " + std::to_string(depth) + " exceeds max_level " +
                          std::to_string(pf.options.max_level));
    JetCtxPtr ctx = make_ctx(pf, depth);
    auto seeds = materialize_seeds(pf, ctx, depth);
    ChainReport report = build_chain(ctx, seeds, depth, opts);
    std::cout << render_chain(report, flags.machine);
    return report.all_ok() ? 0 : 1;
}

int cmd_counterexample(bool machine) {
    ConsistencyCertificate cert = counterexample_two_derivations();
    std::cout << render_certificate(cert, machine);
    if (!machine) std::cout << "trivial: " << (cert.trivial ? "yes" : "no") << "\n";
    return cert.trivial && cert.witness && cert.witness->replay() ? 0 : 1;
}

int cmd_groebner(const CommonFlags& flags, const std::string& ideal_name) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    IdealHandle h = open_ideal(pf, ideal_name);
    std::vector<std::string> lines;
    if (h.plain) {
        auto G = buchberger(IdealPresentation<Rat>(h.plain->ring, h.plain->gens), opts);
        for (auto& b : G.basis) lines.push_back(b.str());
    } else {
        auto G = buchberger(IdealPresentation<RationalFunction>(h.ctx->ring(h.level), h.jet_gens), opts);
        for (auto& b : G.basis) lines.push_back(b.str());
    }
    print_basis_or_zero(lines);
    return 0;
}

int cmd_member(const CommonFlags& flags, const std::string& ideal_name, const std::string& poly_text) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    IdealHandle h = open_ideal(pf, ideal_name);
    ExprNode e = parse_expression(poly_text);
    bool yes;
    if (h.plain) {
        RationalFunction v = eval_field_expr(e, h.plain->ring);
        if (!v.is_polynomial()) throw usage_error("query is not a polynomial");
        auto G = buchberger(IdealPresentation<Rat>(h.plain->ring, h.plain->gens), opts);
        yes = member(v.num(), G, opts.budget);
    } else {
        int lvl = std::max(h.level, e.max_jet_order());
        JetCtxPtr ctx = lvl == h.level ? h.ctx : make_ctx(pf, lvl);
        std::vector<KPoly> gens;
        for (auto& g : h.jet_gens) gens.push_back(ctx->embed_poly(g, h.level, lvl));
        auto G = buchberger(IdealPresentation<RationalFunction>(ctx->ring(lvl), gens), opts);
        yes = member(eval_jet_expr(e, ctx, lvl).poly(), G, opts.budget);
    }
    std::cout << "member: " << (yes ? "yes" : "no") << "\n";
    return yes ? 0 : 1;
}

int cmd_eliminate(const CommonFlags& flags, const std::string& ideal_name, const std::string& keep_csv,
                  int max_order) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    IdealHandle h = open_ideal(pf, ideal_name);
    std::vector<std::string> lines;
    if (h.plain) {
        if (keep_csv.empty()) throw usage_error("plain ideals need --keep with variable names");
        std::vector<VarId> keep;
        std::stringstream ss(keep_csv);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto id = h.plain->ring->id_of(name);
            if (!id) throw usage_error("unknown variable " + name);
            keep.push_back(*id);
        }
        auto E = eliminate(IdealPresentation<Rat>(h.plain->ring, h.plain->gens), keep, opts);
        for (auto& g : E.gens) lines.push_back(g.str());
    } else {
        if (max_order < 0) throw usage_error("jet ideals need --max-order");
        std::vector<VarId> keep;
        for (auto& d : h.ctx->ring(h.level)->decls())
            if (h.ctx->decode(d.id).order <= max_order) keep.push_back(d.id);
        auto E = eliminate(IdealPresentation<RationalFunction>(h.ctx->ring(h.level), h.jet_gens), keep, opts);
        for (auto& g : E.gens) lines.push_back(g.str());
    }
    print_basis_or_zero(lines);
    return 0;
}

int cmd_saturate(const CommonFlags& flags, const std::string& ideal_name, const std::string& by_text) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    IdealHandle h = open_ideal(pf, ideal_name);
    ExprNode e = parse_expression(by_text);
    std::vector<std::string> lines;
    if (h.plain) {
        RationalFunction v = eval_field_expr(e, h.plain->ring);
        if (!v.is_polynomial()) throw usage_error("--by must be a polynomial");
        auto S = saturate(IdealPresentation<Rat>(h.plain->ring, h.plain->gens), v.num(), opts);
        for (auto& g : S.gens) lines.push_back(g.str());
    } else {
        auto S = saturate(IdealPresentation<RationalFunction>(h.ctx->ring(h.level), h.jet_gens),
                          eval_jet_expr(e, h.ctx, h.level).poly(), opts);
        for (auto& g : S.gens) lines.push_back(g.str());
    }
    print_basis_or_zero(lines);
    return 0;
}

int cmd_constants(const CommonFlags& flags, int level, int bound) {
    ProblemFile pf = load(flags);
    GroebnerOptions opts = make_opts(pf, flags);
    require_valid(pf, flags.machine);
    JetCtxPtr ctx = make_ctx(pf, level);
    auto seeds = materialize_seeds(pf, ctx, level);
    ChainReport report = build_chain(ctx, seeds, level, opts);
    if (!report.all_ok()) {
        std::cout << render_chain(report, flags.machine);
        return 1;
    }
    int b = bound >= 0 ? bound : pf.options.constants_degree_bound;
    ConstantsResult res = find_constants(report.levels.back().m, b, {}, opts);
    std::cout << render_constants(res, flags.machine);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for difference-differential linear systems: prolongation ideals,\n"
                 "consistency certificates, chain construction and constants searches"};
    app.require_subcommand(1);

    CommonFlags flags;
    int level = 0, depth = 0, degree_bound = -1, max_order = -1;
    std::string ideal_name, poly_text, keep_csv, by_text;

    auto add_common = [&](CLI::App* cmd, bool with_file = true) {
        if (with_file) cmd->add_option("file", flags.file, "problem file")->required();
        cmd->add_flag("--machine", flags.machine, "flat key=value output");
        cmd->add_flag("--trace", flags.trace, "stream Groebner reduction steps");
        cmd->add_option("--budget", flags.budget, "max reduction steps (default 100000)");
        cmd->add_option("--degree-cap", flags.degree_cap, "max intermediate degree (default 40)");
    };

    auto* c_check = app.add_subcommand("check", "field commutation + integrability report");
    add_common(c_check);

    auto* c_prolong = app.add_subcommand("prolong", "prolongation, closure and consistency of a seed level");
    add_common(c_prolong);
    c_prolong->add_option("--level", level, "seed level d")->required();

    auto* c_chain = app.add_subcommand("chain", "build the ideal chain m_0..m_D with all certificates");
    add_common(c_chain);
    c_chain->add_option("--depth", depth, "chain depth D (must not exceed max_level, default 6)")->required();

    auto* c_counter = app.add_subcommand("counterexample", "two-derivation failure: certifies 1 in b");
    c_counter->add_flag("--machine", flags.machine, "flat key=value output");

    auto* c_gb = app.add_subcommand("groebner", "reduced Groebner basis of a named ideal");
    add_common(c_gb);
    c_gb->add_option("--ideal", ideal_name, "ideal name")->required();

    auto* c_member = app.add_subcommand("member", "ideal membership of a polynomial");
    add_common(c_member);
    c_member->add_option("--ideal", ideal_name, "ideal name")->required();
    c_member->add_option("--poly", poly_text, "query polynomial")->required();

    auto* c_elim = app.add_subcommand("eliminate", "elimination ideal of a named ideal");
    add_common(c_elim);
    c_elim->add_option("--ideal", ideal_name, "ideal name")->required();
    c_elim->add_option("--keep", keep_csv, "comma-separated variables to keep (plain ideals)");
    c_elim->add_option("--max-order", max_order, "keep jet variables of order <= this (jet ideals)");

    auto* c_sat = app.add_subcommand("saturate", "saturation of a named ideal");
    add_common(c_sat);
    c_sat->add_option("--ideal", ideal_name, "ideal name")->required();
    c_sat->add_option("--by", by_text, "saturating polynomial")->required();

    auto* c_const = app.add_subcommand("constants", "bounded constants search on the chain ideal m_d");
    add_common(c_const);
    c_const->add_option("--level", level, "chain level d")->required();
    c_const->add_option("--degree-bound", degree_bound, "coefficient degree bound (constants_degree_bound default 3)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_check) return cmd_check(flags);
        if (*c_prolong) return cmd_prolong(flags, level);
        if (*c_chain) return cmd_chain(flags, depth);
        if (*c_counter) return cmd_counterexample(flags.machine);
        if (*c_gb) return cmd_groebner(flags, ideal_name);
        if (*c_member) return cmd_member(flags, ideal_name, poly_text);
        if (*c_elim) return cmd_eliminate(flags, ideal_name, keep_csv, max_order);
        if (*c_sat) return cmd_saturate(flags, ideal_name, by_text);
        if (*c_const) return cmd_constants(flags, level, degree_bound);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const unsupported_error& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 4;
    } catch (const engine_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
