#include "pvring/linsys.hpp"

namespace pvring {

LinearSystem::LinearSystem(FieldPtr field, std::size_t n, std::map<std::string, KMatrix> A,
                           std::map<std::string, KMatrix> B)
    : field_(std::move(field)), n_(n), A_(std::move(A)), B_(std::move(B)) {
    if (n_ == 0) throw usage_error("system size n must be at least 1");

    auto check_shape = [&](const std::string& id, const KMatrix& M) {
        if (M.rows() != n_ || M.cols() != n_)
            throw usage_error("matrix for operator " + id + " is not " + std::to_string(n_) + "x" +
                              std::to_string(n_));
    };

    for (auto& s : field_->sigmas())
        if (!A_.count(s.id)) throw usage_error("missing matrix A for automorphism " + s.id);
    for (auto& [id, M] : A_) {
        const OperatorSpec* op = field_->find(id);
        if (!op || op->kind != OpKind::automorphism)
            throw usage_error("matrix A keyed by unknown automorphism " + id);
        check_shape(id, M);
        RationalFunction d = kmatrix_det(M);
        if (d.is_zero()) throw domain_error("A for " + id + " must be invertible over K");
        KMatrix inv = kmatrix_inverse(M);
        KMatrix prod = M * inv;
        RationalFunction one = RationalFunction::from_rat(field_->ring(), Rat(1));
        RationalFunction zero = RationalFunction::from_rat(field_->ring(), Rat(0));
        if (prod != KMatrix::identity(n_, one, zero))
            throw engine_error("internal: inverse check failed for " + id);
        A_inv_.emplace(id, std::move(inv));
        det_A_.emplace(id, std::move(d));
    }
    for (auto& d : field_->deltas())
        if (!B_.count(d.id)) throw usage_error("missing matrix B for derivation " + d.id);
    for (auto& [id, M] : B_) {
        const OperatorSpec* op = field_->find(id);
        if (!op || op->kind != OpKind::delta_derivation)
            throw usage_error("matrix B keyed by unknown delta-derivation " + id);
        check_shape(id, M);
    }
}

const KMatrix& LinearSystem::A(const std::string& id) const {
    auto it = A_.find(id);
    if (it == A_.end()) throw usage_error("unknown automorphism " + id);
    return it->second;
}
const KMatrix& LinearSystem::A_inv(const std::string& id) const {
    auto it = A_inv_.find(id);
    if (it == A_inv_.end()) throw usage_error("unknown automorphism " + id);
    return it->second;
}
const KMatrix& LinearSystem::B(const std::string& id) const {
    auto it = B_.find(id);
    if (it == B_.end()) throw usage_error("unknown delta-derivation " + id);
    return it->second;
}
const RationalFunction& LinearSystem::det_A(const std::string& id) const {
    auto it = det_A_.find(id);
    if (it == det_A_.end()) throw usage_error("unknown automorphism " + id);
    return it->second;
}

IntegrabilityReport check_integrability(const LinearSystem& sys) {
    const FieldDesc& K = *sys.field();
    IntegrabilityReport report;
    const auto& sigmas = K.sigmas();
    const auto& deltas = K.deltas();

    for (std::size_t i = 0; i < sigmas.size(); ++i)
        for (std::size_t j = i + 1; j < sigmas.size(); ++j) {
            const auto& si = sigmas[i];
            const auto& sj = sigmas[j];
            KMatrix lhs = kmatrix_apply(si, sys.A(sj.id)) * sys.A(si.id);
            KMatrix rhs = kmatrix_apply(sj, sys.A(si.id)) * sys.A(sj.id);
            KMatrix residual = rhs - lhs;
            IntegrabilityCheck chk{"SS", si.id, sj.id, residual.is_zero(), residual, std::nullopt};
            if (!chk.pass) {
                KMatrix disp = kmatrix_apply(sj, sys.A(si.id)) * sys.A(sj.id) - kmatrix_apply(si, sys.A(sj.id));
                chk.displayed_form_passes = disp.is_zero();
            }
            report.checks.push_back(std::move(chk));
        }

    for (auto& si : sigmas)
        for (auto& dj : deltas) {
            KMatrix lhs = kmatrix_apply(si, sys.B(dj.id)) * sys.A(si.id);
            KMatrix rhs = kmatrix_apply(dj, sys.A(si.id)) + sys.A(si.id) * sys.B(dj.id);
            KMatrix residual = rhs - lhs;
            report.checks.push_back({"SD", si.id, dj.id, residual.is_zero(), residual, std::nullopt});
        }

    for (std::size_t i = 0; i < deltas.size(); ++i)
        for (std::size_t j = i + 1; j < deltas.size(); ++j) {
            const auto& di = deltas[i];
            const auto& dj = deltas[j];
            KMatrix lhs = kmatrix_apply(di, sys.B(dj.id)) + sys.B(dj.id) * sys.B(di.id);
            KMatrix rhs = kmatrix_apply(dj, sys.B(di.id)) + sys.B(di.id) * sys.B(dj.id);
            KMatrix residual = rhs - lhs;
            report.checks.push_back({"DD", di.id, dj.id, residual.is_zero(), residual, std::nullopt});
        }

    return report;
}

} // namespace pvring
