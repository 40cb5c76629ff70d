#include "pvring/problem.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pvring {

namespace {

struct Token {
    enum class Kind { ident, number, sym, arrow, end };
    Kind kind;
    std::string text;
    int line, col;
};

class Lexer {
  public:
    Lexer(const std::string& s, int line, int col0 = 1) : s_(s), line_(line), col0_(col0) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }
    bool at_sym(const char* c) const { return tok_.kind == Token::Kind::sym && tok_.text == c; }
    bool at_end() const { return tok_.kind == Token::Kind::end; }

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, tok_.line, tok_.col); }

    Token expect_sym(const char* c) {
        if (!at_sym(c)) fail(std::string("expected '") + c + "'");
        return take();
    }
    Token expect_ident() {
        if (tok_.kind != Token::Kind::ident) fail("expected an identifier");
        return take();
    }
    Token expect_number() {
        if (tok_.kind != Token::Kind::number) fail("expected an integer");
        return take();
    }

  private:
    void next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        int col = col0_ + static_cast<int>(pos_);
        if (pos_ >= s_.size()) {
            tok_ = {Token::Kind::end, "", line_, col};
            return;
        }
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            tok_ = {Token::Kind::ident, s_.substr(start, pos_ - start), line_, col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            tok_ = {Token::Kind::number, s_.substr(start, pos_ - start), line_, col};
            return;
        }
        if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
            pos_ += 2;
            tok_ = {Token::Kind::arrow, "->", line_, col};
            return;
        }
        static const std::string symbols = "+-*/^()[],':";
        if (symbols.find(c) != std::string::npos) {
            ++pos_;
            tok_ = {Token::Kind::sym, std::string(1, c), line_, col};
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", line_, col);
    }

    const std::string& s_;
    int line_, col0_;
    std::size_t pos_ = 0;
    Token tok_{Token::Kind::end, "", 0, 0};
};

// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := '-' factor | primary ('^' number)?
// primary := number | det | jetvar | ident | '(' expr ')'
ExprNode parse_expr(Lexer& lx);

ExprNode parse_primary(Lexer& lx) {
    Token t = lx.peek();
    ExprNode n;
    n.line = t.line;
    n.column = t.col;
    if (t.kind == Token::Kind::number) {
        lx.take();
        n.kind = ExprNode::Kind::number;
        n.text = t.text;
        return n;
    }
    if (lx.at_sym("(")) {
        lx.take();
        ExprNode inner = parse_expr(lx);
        lx.expect_sym(")");
        return inner;
    }
    if (t.kind == Token::Kind::ident) {
        lx.take();
        if (t.text == "det") {
            n.kind = ExprNode::Kind::det;
            return n;
        }
        if (t.text == "X") {
            n.kind = ExprNode::Kind::jet;
            n.order = 0;
            while (lx.at_sym("'")) {
                lx.take();
                ++n.order;
            }
            if (n.order == 0 && lx.at_sym("^")) {
                lx.take();
                lx.expect_sym("(");
                Token k = lx.expect_number();
                n.order = std::stoi(k.text);
                lx.expect_sym(")");
            }
            lx.expect_sym("[");
            Token i = lx.expect_number();
            lx.expect_sym(",");
            Token j = lx.expect_number();
            lx.expect_sym("]");
            n.row = static_cast<std::size_t>(std::stoul(i.text));
            n.col = static_cast<std::size_t>(std::stoul(j.text));
            if (n.row == 0 || n.col == 0) lx.fail("jet indices are 1-based");
            return n;
        }
        n.kind = ExprNode::Kind::var;
        n.text = t.text;
        return n;
    }
    lx.fail("expected a number, variable, jet variable, det or '('");
}

ExprNode parse_factor(Lexer& lx) {
    if (lx.at_sym("-")) {
        Token t = lx.take();
        ExprNode n;
        n.kind = ExprNode::Kind::neg;
        n.line = t.line;
        n.column = t.col;
        n.kids.push_back(parse_factor(lx));
        return n;
    }
    ExprNode base = parse_primary(lx);
    if (lx.at_sym("^")) {
        Token t = lx.take();
        Token e = lx.expect_number();
        ExprNode n;
        n.kind = ExprNode::Kind::pow;
        n.line = t.line;
        n.column = t.col;
        n.exponent = static_cast<std::uint32_t>(std::stoul(e.text));
        n.kids.push_back(std::move(base));
        return n;
    }
    return base;
}

ExprNode parse_term(Lexer& lx) {
    ExprNode acc = parse_factor(lx);
    while (lx.at_sym("*") || lx.at_sym("/")) {
        Token t = lx.take();
        ExprNode n;
        n.kind = t.text == "*" ? ExprNode::Kind::mul : ExprNode::Kind::div;
        n.line = t.line;
        n.column = t.col;
        n.kids.push_back(std::move(acc));
        n.kids.push_back(parse_factor(lx));
        acc = std::move(n);
    }
    return acc;
}

ExprNode parse_expr(Lexer& lx) {
    ExprNode acc = parse_term(lx);
    while (lx.at_sym("+") || lx.at_sym("-")) {
        Token t = lx.take();
        ExprNode n;
        n.kind = t.text == "+" ? ExprNode::Kind::add : ExprNode::Kind::sub;
        n.line = t.line;
        n.column = t.col;
        n.kids.push_back(std::move(acc));
        n.kids.push_back(parse_term(lx));
        acc = std::move(n);
    }
    return acc;
}

} // namespace

bool ExprNode::uses_jets() const {
    if (kind == Kind::jet || kind == Kind::det) return true;
    for (auto& k : kids)
        if (k.uses_jets()) return true;
    return false;
}

int ExprNode::max_jet_order() const {
    int m = kind == Kind::jet ? order : 0;
    for (auto& k : kids) m = std::max(m, k.max_jet_order());
    return m;
}

ExprNode parse_expression(const std::string& text, int line) {
    Lexer lx(text, line);
    ExprNode e = parse_expr(lx);
    if (!lx.at_end()) lx.fail("trailing input after expression");
    return e;
}

RationalFunction eval_field_expr(const ExprNode& e, const RingPtr<Rat>& ring) {
    switch (e.kind) {
        case ExprNode::Kind::number:
            return RationalFunction::from_rat(ring, Rat::from_decimal(e.text));
        case ExprNode::Kind::var: {
            auto id = ring->id_of(e.text);
            if (!id) throw parse_error("unknown variable " + e.text, e.line, e.column);
            return RationalFunction::var(ring, *id);
        }
        case ExprNode::Kind::jet:
        case ExprNode::Kind::det:
            throw parse_error("jet variables are not allowed in this context", e.line, e.column);
        case ExprNode::Kind::add:
            return eval_field_expr(e.kids[0], ring) + eval_field_expr(e.kids[1], ring);
        case ExprNode::Kind::sub:
            return eval_field_expr(e.kids[0], ring) - eval_field_expr(e.kids[1], ring);
        case ExprNode::Kind::mul:
            return eval_field_expr(e.kids[0], ring) * eval_field_expr(e.kids[1], ring);
        case ExprNode::Kind::div: {
            RationalFunction d = eval_field_expr(e.kids[1], ring);
            if (d.is_zero()) throw parse_error("division by zero", e.line, e.column);
            return eval_field_expr(e.kids[0], ring) / d;
        }
        case ExprNode::Kind::neg:
            return -eval_field_expr(e.kids[0], ring);
        case ExprNode::Kind::pow:
            return eval_field_expr(e.kids[0], ring).pow(e.exponent);
    }
    throw engine_error("internal: unhandled expression node");
}

FilteredElement eval_jet_expr(const ExprNode& e, const JetCtxPtr& ctx, int level) {
    switch (e.kind) {
        case ExprNode::Kind::number:
            return FilteredElement::from_coeff(ctx, level,
                                               RationalFunction::from_rat(ctx->field()->ring(), Rat::from_decimal(e.text)));
        case ExprNode::Kind::var: {
            auto id = ctx->field()->ring()->id_of(e.text);
            if (!id) throw parse_error("unknown variable " + e.text, e.line, e.column);
            return FilteredElement::from_coeff(ctx, level, RationalFunction::var(ctx->field()->ring(), *id));
        }
        case ExprNode::Kind::jet: {
            if (e.order > level)
                throw parse_error("jet order " + std::to_string(e.order) + " above level " + std::to_string(level),
                                  e.line, e.column);
            if (e.row > ctx->n() || e.col > ctx->n())
                throw parse_error("jet index out of range for n = " + std::to_string(ctx->n()), e.line, e.column);
            return FilteredElement::jet_var(ctx, level, e.row, e.col, e.order);
        }
        case ExprNode::Kind::det:
            return FilteredElement::det(ctx, level);
        case ExprNode::Kind::add:
            return eval_jet_expr(e.kids[0], ctx, level) + eval_jet_expr(e.kids[1], ctx, level);
        case ExprNode::Kind::sub:
            return eval_jet_expr(e.kids[0], ctx, level) - eval_jet_expr(e.kids[1], ctx, level);
        case ExprNode::Kind::mul:
            return eval_jet_expr(e.kids[0], ctx, level) * eval_jet_expr(e.kids[1], ctx, level);
        case ExprNode::Kind::div: {
            FilteredElement d = eval_jet_expr(e.kids[1], ctx, level);
            try {
                return eval_jet_expr(e.kids[0], ctx, level) / d;
            } catch (const domain_error& err) {
                throw parse_error(err.what(), e.line, e.column);
            }
        }
        case ExprNode::Kind::neg:
            return -eval_jet_expr(e.kids[0], ctx, level);
        case ExprNode::Kind::pow: {
            FilteredElement b = eval_jet_expr(e.kids[0], ctx, level);
            FilteredElement acc = FilteredElement::from_coeff(ctx, level, RationalFunction::from_rat(
                                                                              ctx->field()->ring(), Rat(1)));
            for (std::uint32_t i = 0; i < e.exponent; ++i) acc = acc * b;
            return acc;
        }
    }
    throw engine_error("internal: unhandled expression node");
}

int ProblemFile::max_seed_order() const {
    int m = 0;
    for (auto& [lvl, exprs] : seeds) {
        m = std::max(m, lvl);
        for (auto& e : exprs) m = std::max(m, e.max_jet_order());
    }
    return m;
}

namespace {

struct RawSection {
    std::string header;
    int line;
    std::vector<std::pair<int, std::string>> lines; // (line number, text)
};

std::vector<RawSection> split_sections(const std::string& text) {
    std::vector<RawSection> sections;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(a, b - a + 1);
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') throw parse_error("unterminated section header", lineno, 1);
            sections.push_back({trimmed.substr(1, trimmed.size() - 2), lineno, {}});
        } else {
            if (sections.empty()) throw parse_error("content before the first section", lineno, 1);
            sections.back().lines.push_back({lineno, trimmed});
        }
    }
    return sections;
}

std::vector<std::string> split_names(const std::string& s, int line) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    for (char c : s) {
        if (c == ',') {
            flush();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            cur += c;
        } else {
            throw parse_error(std::string("unexpected character '") + c + "' in name list", line, 1);
        }
    }
    flush();
    return out;
}

KMatrix parse_matrix(Lexer& lx, const RingPtr<Rat>& ring) {
    lx.expect_sym("[");
    std::vector<std::vector<RationalFunction>> rows;
    while (true) {
        lx.expect_sym("[");
        std::vector<RationalFunction> row;
        while (true) {
            row.push_back(eval_field_expr(parse_expr(lx), ring));
            if (lx.at_sym(",")) {
                lx.take();
                continue;
            }
            break;
        }
        lx.expect_sym("]");
        rows.push_back(std::move(row));
        if (lx.at_sym(",")) {
            lx.take();
            continue;
        }
        break;
    }
    lx.expect_sym("]");
    std::size_t r = rows.size(), c = rows[0].size();
    for (auto& row : rows)
        if (row.size() != c) lx.fail("ragged matrix rows");
    KMatrix M(r, c, rows[0][0]);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) M.at(i, j) = rows[i][j];
    return M;
}

} // namespace

ProblemFile parse_problem(const std::string& text) {
    std::vector<RawSection> sections = split_sections(text);

    std::vector<std::string> vars;
    std::string partial_var;
    int field_line = 0;
    struct OpSection {
        std::string id;
        int line;
        std::vector<std::pair<int, std::string>> lines;
        bool is_sigma;
    };
    std::vector<OpSection> op_sections;
    std::optional<RawSection> system_section;
    std::map<int, std::vector<ExprNode>> seeds;
    std::map<std::string, NamedIdealSpec> ideals;
    ProblemOptions options;

    bool seen_field = false;
    for (auto& sec : sections) {
        Lexer hl(sec.header, sec.line);
        Token kind = hl.expect_ident();
        if (kind.text == "field") {
            if (seen_field) throw parse_error("duplicate [field] section", sec.line, 1);
            seen_field = true;
            field_line = sec.line;
            for (auto& [ln, l] : sec.lines) {
                auto colon = l.find(':');
                if (colon == std::string::npos) throw parse_error("expected 'key: value'", ln, 1);
                std::string key = l.substr(0, colon);
                key.erase(key.find_last_not_of(" \t") + 1);
                std::string val = l.substr(colon + 1);
                if (key == "vars") {
                    vars = split_names(val, ln);
                    if (vars.empty()) throw parse_error("vars list is empty", ln, 1);
                } else if (key == "partial") {
                    auto names = split_names(val, ln);
                    if (names.size() != 1) throw parse_error("partial takes exactly one variable", ln, 1);
                    partial_var = names[0];
                } else {
                    throw parse_error("unknown key '" + key + "' in [field]", ln, 1);
                }
            }
            if (vars.empty()) throw parse_error("[field] needs a vars line", sec.line, 1);
            if (partial_var.empty()) throw parse_error("[field] needs a partial line", sec.line, 1);
            for (auto& v : vars)
                if (v == "X" || v == "det")
                    throw parse_error("variable name '" + v + "' is reserved", sec.line, 1);
        } else if (kind.text == "sigma" || kind.text == "delta") {
            Token id = hl.expect_ident();
            if (!hl.at_end()) hl.fail("trailing input in section header");
            op_sections.push_back({id.text, sec.line, sec.lines, kind.text == "sigma"});
        } else if (kind.text == "system") {
            if (system_section) throw parse_error("duplicate [system] section", sec.line, 1);
            system_section = sec;
        } else if (kind.text == "seed") {
            Token lvl = hl.expect_number();
            int level = std::stoi(lvl.text);
            for (auto& [ln, l] : sec.lines) seeds[level].push_back(parse_expression(l, ln));
        } else if (kind.text == "ideal") {
            Token name = hl.expect_ident();
            if (ideals.count(name.text)) throw parse_error("duplicate ideal name " + name.text, sec.line, 1);
            NamedIdealSpec spec;
            spec.line = sec.line;
            for (auto& [ln, l] : sec.lines) {
                if (l.rfind("vars:", 0) == 0) {
                    if (!spec.gens.empty()) throw parse_error("vars must precede the generators", ln, 1);
                    spec.plain_vars = split_names(l.substr(5), ln);
                    continue;
                }
                spec.gens.push_back(parse_expression(l, ln));
            }
            ideals.emplace(name.text, std::move(spec));
        } else if (kind.text == "options") {
            for (auto& [ln, l] : sec.lines) {
                auto colon = l.find(':');
                if (colon == std::string::npos) throw parse_error("expected 'key: value'", ln, 1);
                std::string key = l.substr(0, colon);
                key.erase(key.find_last_not_of(" \t") + 1);
                std::string val = l.substr(colon + 1);
                std::size_t p = val.find_first_not_of(" \t");
                if (p == std::string::npos) throw parse_error("missing value", ln, 1);
                val = val.substr(p);
                try {
                    if (key == "spair_budget")
                        options.spair_budget = std::stoull(val);
                    else if (key == "degree_cap")
                        options.degree_cap = std::stoull(val);
                    else if (key == "max_level")
                        options.max_level = std::stoi(val);
                    else if (key == "constants_degree_bound")
                        options.constants_degree_bound = std::stoi(val);
                    else
                        throw parse_error("unknown key '" + key + "' in [options]", ln, 1);
                } catch (const std::invalid_argument&) {
                    throw parse_error("value for " + key + " is not a number", ln, 1);
                }
            }
        } else {
            throw parse_error("unknown section [" + sec.header + "]", sec.line, 1);
        }
    }
    if (!seen_field) throw parse_error("missing [field] section", 1, 1);

    // Build the field description.
    auto ring = FieldDesc::make_base_ring(vars);
    if (!ring->id_of(partial_var)) throw parse_error("partial variable " + partial_var + " is not in vars", field_line, 1);

    auto eval_image = [&](const std::string& rhs, int ln) {
        Lexer lx(rhs, ln);
        ExprNode e = parse_expr(lx);
        if (!lx.at_end()) lx.fail("trailing input after expression");
        return eval_field_expr(e, ring);
    };

    std::vector<OperatorSpec> sigmas, deltas;
    for (auto& os : op_sections) {
        OperatorSpec op{os.is_sigma ? OpKind::automorphism : OpKind::delta_derivation, os.id, {}, {}};
        for (auto& [ln, l] : os.lines) {
            Lexer lx(l, ln);
            Token first = lx.expect_ident();
            bool inverse = false;
            std::string var_name = first.text;
            if (first.text == "inverse") {
                if (!os.is_sigma) lx.fail("inverse images only apply to sigma sections");
                inverse = true;
                var_name = lx.expect_ident().text;
            }
            auto vid = ring->id_of(var_name);
            if (!vid) lx.fail("unknown variable " + var_name);
            if (lx.peek().kind != Token::Kind::arrow) lx.fail("expected '->'");
            lx.take();
            ExprNode e = parse_expr(lx);
            if (!lx.at_end()) lx.fail("trailing input after expression");
            RationalFunction img = eval_field_expr(e, ring);
            auto& target = inverse ? op.inverse_images : op.images;
            if (target.count(*vid)) lx.fail("duplicate image for " + var_name);
            target.emplace(*vid, std::move(img));
        }
        (os.is_sigma ? sigmas : deltas).push_back(std::move(op));
    }

    std::map<VarId, RationalFunction> partial_images;
    for (VarId i = 0; i < vars.size(); ++i)
        partial_images.emplace(i, RationalFunction::from_rat(ring, Rat(vars[i] == partial_var ? 1 : 0)));
    OperatorSpec partial{OpKind::partial_derivation, "partial", std::move(partial_images), {}};

    ProblemFile pf;
    try {
        pf.field = std::make_shared<FieldDesc>(ring, std::move(sigmas), std::move(deltas), std::move(partial));
    } catch (const engine_error& err) {
        throw parse_error(err.what(), field_line, 1);
    }

    // Build the linear system.
    if (system_section) {
        std::size_t n = 0;
        std::map<std::string, KMatrix> A, B;
        for (auto& [ln, l] : system_section->lines) {
            Lexer lx(l, ln);
            Token key = lx.expect_ident();
            if (key.text == "n") {
                lx.expect_sym(":");
                n = std::stoul(lx.expect_number().text);
                if (!lx.at_end()) lx.fail("trailing input");
            } else if (key.text == "A" || key.text == "B") {
                Token id = lx.expect_ident();
                lx.expect_sym(":");
                KMatrix M = parse_matrix(lx, ring);
                if (!lx.at_end()) lx.fail("trailing input after matrix");
                if (M.rows() != M.cols()) throw parse_error("matrix for " + id.text + " is not square", ln, 1);
                auto& target = key.text == "A" ? A : B;
                if (target.count(id.text)) throw parse_error("duplicate matrix for " + id.text, ln, 1);
                target.emplace(id.text, std::move(M));
            } else {
                lx.fail("unknown key '" + key.text + "' in [system]");
            }
        }
        if (n == 0) throw parse_error("[system] needs 'n: <size>'", system_section->line, 1);
        try {
            pf.system = std::make_shared<LinearSystem>(pf.field, n, std::move(A), std::move(B));
        } catch (const domain_error& err) {
            throw parse_error(std::string(err.what()) + " (A must be invertible)", system_section->line, 1);
        } catch (const usage_error& err) {
            throw parse_error(err.what(), system_section->line, 1);
        }
    }

    pf.seeds = std::move(seeds);
    pf.ideals = std::move(ideals);
    pf.options = options;
    return pf;
}

PlainIdeal build_plain_ideal(const NamedIdealSpec& spec) {
    if (!spec.plain_vars) throw usage_error("ideal has no vars line");
    std::vector<PolyRing<Rat>::VarDecl> decls;
    for (VarId i = 0; i < spec.plain_vars->size(); ++i) decls.push_back({i, (*spec.plain_vars)[i]});
    auto ring = PolyRing<Rat>::create(std::move(decls), TermOrder::grevlex(), Rat(1));
    std::vector<QPoly> gens;
    for (auto& e : spec.gens) {
        RationalFunction v = eval_field_expr(e, ring);
        if (!v.is_polynomial())
            throw parse_error("generator is not a polynomial", e.line, e.column);
        gens.push_back(v.num());
    }
    return PlainIdeal{ring, std::move(gens)};
}

std::vector<KPoly> build_jet_polys(const std::vector<ExprNode>& exprs, const JetCtxPtr& ctx, int level) {
    std::vector<KPoly> out;
    for (auto& e : exprs) {
        FilteredElement f = eval_jet_expr(e, ctx, level);
        out.push_back(f.poly());
    }
    return out;
}

} // namespace pvring
