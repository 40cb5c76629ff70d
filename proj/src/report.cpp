#include "pvring/report.hpp"

#include <sstream>

namespace pvring {

namespace {

const char* yn(bool b) { return b ? "yes" : "no"; }
const char* passfail(bool b) { return b ? "pass" : "FAIL"; }

std::string render_combo(const TrivialityWitness& w, const WitnessStep& step) {
    std::string s;
    for (std::size_t i = 0; i < step.combo.size(); ++i) {
        auto& [ref, mult] = step.combo[i];
        if (i) s += " + ";
        s += "(" + mult.str() + ")*";
        if (ref >= 0)
            s += "g" + std::to_string(ref + 1);
        else
            s += "step" + std::to_string(-(ref + 1) + 1);
    }
    (void)w;
    return s;
}

std::string witness_text(const TrivialityWitness& w, const std::string& indent) {
    std::ostringstream out;
    out << indent << "generators:\n";
    for (std::size_t i = 0; i < w.generators.size(); ++i)
        out << indent << "  g" << (i + 1) << " = " << w.generators[i].str() << "\n";
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        const WitnessStep& st = w.steps[i];
        out << indent << "step " << (i + 1) << ": " << st.value.str() << " = " << render_combo(w, st);
        if (!st.note.empty()) out << "   # " << st.note;
        out << "\n";
    }
    out << indent << "replay: " << (w.replay() ? "exact" : "MISMATCH") << "\n";
    return out.str();
}

void witness_machine(const TrivialityWitness& w, const std::string& prefix, std::ostringstream& out) {
    for (std::size_t i = 0; i < w.generators.size(); ++i)
        out << prefix << "gen." << i << "=" << w.generators[i].str() << "\n";
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        out << prefix << "step." << i << ".value=" << w.steps[i].value.str() << "\n";
        out << prefix << "step." << i << ".combo=" << render_combo(w, w.steps[i]) << "\n";
        if (!w.steps[i].note.empty()) out << prefix << "step." << i << ".note=" << w.steps[i].note << "\n";
    }
    out << prefix << "det_power=" << w.det_power << "\n";
    out << prefix << "replay=" << yn(w.replay()) << "\n";
}

} // namespace

std::string render_matrix(const KMatrix& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) s += ", ";
        s += "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += m.at(i, j).str();
        }
        s += "]";
    }
    return s + "]";
}

std::string render_commutation(const CommutationReport& r, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "commutation.ok=" << yn(r.ok()) << "\n";
        for (std::size_t i = 0; i < r.failures.size(); ++i) {
            auto& f = r.failures[i];
            out << "commutation.failure." << i << "=" << f.op1 << "," << f.op2 << "," << f.var << ","
                << f.lhs.str() << "," << f.rhs.str() << "\n";
        }
        return out.str();
    }
    out << "operator commutation: " << (r.ok() ? "pass" : "FAIL") << "\n";
    for (auto& f : r.failures)
        out << "  " << f.op1 << " vs " << f.op2 << " on " << f.var << ": " << f.op1 << "(" << f.op2 << "(" << f.var
            << ")) = " << f.lhs.str() << ", " << f.op2 << "(" << f.op1 << "(" << f.var << ")) = " << f.rhs.str()
            << "\n";
    return out.str();
}

std::string render_integrability(const IntegrabilityReport& r, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "integrability.ok=" << yn(r.ok()) << "\n";
        for (std::size_t i = 0; i < r.checks.size(); ++i) {
            auto& c = r.checks[i];
            out << "integrability.check." << i << ".condition=" << c.condition << "\n";
            out << "integrability.check." << i << ".ops=" << c.op1 << "," << c.op2 << "\n";
            out << "integrability.check." << i << ".pass=" << yn(c.pass) << "\n";
            if (!c.pass) out << "integrability.check." << i << ".residual=" << render_matrix(c.residual) << "\n";
            if (c.displayed_form_passes)
                out << "integrability.check." << i << ".displayed_form_passes=" << yn(*c.displayed_form_passes)
                    << "\n";
        }
        return out.str();
    }
    out << "integrability: " << (r.ok() ? "pass" : "FAIL") << "\n";
    for (auto& c : r.checks) {
        out << "  (" << c.condition << ") " << c.op1 << "," << c.op2 << ": " << passfail(c.pass);
        if (!c.pass) out << "  residual = " << render_matrix(c.residual);
        if (c.displayed_form_passes && *c.displayed_form_passes)
            out << "  [satisfies only the displayed uncorrected form]";
        out << "\n";
    }
    return out.str();
}

std::string render_certificate(const ConsistencyCertificate& c, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "certificate.level=" << c.level << "\n";
        out << "certificate.hypothesis_ok=" << yn(c.hypothesis_ok) << "\n";
        out << "certificate.trivial=" << yn(c.trivial) << "\n";
        for (std::size_t i = 0; i < c.basis_of_b.basis.size(); ++i)
            out << "certificate.basis." << i << "=" << c.basis_of_b.basis[i].str() << "\n";
        if (c.witness) witness_machine(*c.witness, "certificate.witness.", out);
        return out.str();
    }
    out << "consistency certificate (level " << c.level << " -> " << (c.level + 1) << ")\n";
    out << "  hypothesis partial(a'') in a: " << (c.hypothesis_ok ? "holds" : "VIOLATED") << "\n";
    out << "  reduced basis of the prolongation ideal b:\n";
    if (c.basis_of_b.basis.empty()) out << "    (zero ideal)\n";
    for (auto& b : c.basis_of_b.basis) out << "    " << b.str() << "\n";
    if (c.trivial && c.witness) {
        out << "  witness:\n" << witness_text(*c.witness, "    ");
        if (c.witness->det_power > 0)
            out << "  result: det^" << c.witness->det_power << " in the numerator ideal, hence 1 in b\n";
        else
            out << "  result: 1 in b\n";
    } else if (c.trivial) {
        out << "  result: 1 in b\n";
    } else {
        out << "  result: 1 not in b\n";
    }
    return out.str();
}

std::string render_chain(const ChainReport& r, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "chain.levels=" << r.levels.size() << "\n";
        for (auto& lvl : r.levels) {
            std::string p = "chain.level." + std::to_string(lvl.d) + ".";
            for (std::size_t i = 0; i < lvl.m.pres.gens.size(); ++i)
                out << p << "basis." << i << "=" << lvl.m.pres.gens[i].str() << "\n";
            out << p << "consistency_ok=" << yn(lvl.checks.consistency_ok) << "\n";
            if (lvl.checks.elimination_ok) out << p << "elimination_ok=" << yn(*lvl.checks.elimination_ok) << "\n";
            if (lvl.checks.partial_ok) out << p << "partial_ok=" << yn(*lvl.checks.partial_ok) << "\n";
            out << p << "saturation_ok=" << yn(lvl.checks.saturation_ok) << "\n";
            out << p << "sigma_delta_closed_ok=" << yn(lvl.checks.sigma_delta_closed_ok) << "\n";
            out << p << "maximality="
                << (lvl.checks.maximality == Maximality::certified ? "certified" : "not-attempted") << "\n";
            if (!lvl.checks.note.empty()) out << p << "note=" << lvl.checks.note << "\n";
        }
        if (r.failure) {
            out << "chain.failure.level=" << r.failure->level << "\n";
            out << "chain.failure.reason=" << r.failure->reason << "\n";
            if (r.failure->witness) witness_machine(*r.failure->witness, "chain.failure.witness.", out);
            for (std::size_t i = 0; i < r.failure->conflict_elements.size(); ++i)
                out << "chain.failure.conflict." << i << "=" << r.failure->conflict_elements[i] << "\n";
        }
        out << "chain.all_ok=" << yn(r.all_ok()) << "\n";
        return out.str();
    }
    out << "chain report (" << r.levels.size() << " level" << (r.levels.size() == 1 ? "" : "s") << " built)\n";
    for (auto& lvl : r.levels) {
        out << "level " << lvl.d << ":\n";
        out << "  reduced basis of m_" << lvl.d << ":\n";
        if (lvl.m.pres.gens.empty()) out << "    (zero ideal)\n";
        for (auto& g : lvl.m.pres.gens) out << "    " << g.str() << "\n";
        out << "  consistency (1 not in m): " << passfail(lvl.checks.consistency_ok) << "\n";
        out << "  elimination back-compatibility: "
            << (lvl.checks.elimination_ok ? passfail(*lvl.checks.elimination_ok) : "n/a") << "\n";
        out << "  partial-compatibility: " << (lvl.checks.partial_ok ? passfail(*lvl.checks.partial_ok) : "n/a")
            << "\n";
        out << "  det-saturation fixpoint: " << passfail(lvl.checks.saturation_ok) << "\n";
        out << "  sigma-delta closure: " << passfail(lvl.checks.sigma_delta_closed_ok) << "\n";
        out << "  maximality: " << (lvl.checks.maximality == Maximality::certified ? "certified" : "not-attempted")
            << "\n";
        if (!lvl.checks.note.empty()) out << "  note: " << lvl.checks.note << "\n";
    }
    if (r.failure) {
        out << "FAILURE at level " << r.failure->level << ": " << r.failure->reason << "\n";
        if (r.failure->witness) out << witness_text(*r.failure->witness, "  ");
        for (auto& c : r.failure->conflict_elements) out << "  conflict: " << c << " leaks below\n";
    }
    out << "summary: " << (r.all_ok() ? "all checks passed" : "CHECKS FAILED") << "\n";
    return out.str();
}

std::string render_constants(const ConstantsResult& r, bool machine) {
    std::ostringstream out;
    if (machine) {
        out << "constants.degree_bound=" << r.degree_bound << "\n";
        out << "constants.staircase_dim=" << r.staircase.size() << "\n";
        out << "constants.count=" << r.classes.size() << "\n";
        for (std::size_t i = 0; i < r.classes.size(); ++i)
            out << "constants.class." << i << "=" << r.classes[i].str() << "\n";
        return out.str();
    }
    out << "constants search (coefficient degree bound " << r.degree_bound << ")\n";
    out << "  staircase dimension over K: " << r.staircase.size() << "\n";
    out << "  spanning classes found: " << r.classes.size() << "\n";
    for (std::size_t i = 0; i < r.classes.size(); ++i)
        out << "  class " << (i + 1) << ": " << r.classes[i].str() << "\n";
    out << "  note: complete only up to the declared bound\n";
    return out.str();
}

} // namespace pvring
