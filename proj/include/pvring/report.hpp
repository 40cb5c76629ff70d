#ifndef PVRING_REPORT_HPP
#define PVRING_REPORT_HPP

#include "pvring/linsys.hpp"
#include "pvring/prolong.hpp"

#include <string>

namespace pvring {

/// Deterministic renderings of engine results: a human-readable text form
/// and a flat key=value machine form. Identical inputs produce
/// byte-identical output.
std::string render_commutation(const CommutationReport& r, bool machine);
std::string render_integrability(const IntegrabilityReport& r, bool machine);
std::string render_certificate(const ConsistencyCertificate& c, bool machine);
std::string render_chain(const ChainReport& r, bool machine);
std::string render_constants(const ConstantsResult& r, bool machine);
std::string render_matrix(const KMatrix& m);

} // namespace pvring

#endif
