#include "gptv/quantum.hpp"

#include <cmath>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

void require_square(const Cmat& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw ValidationError(std::string(what) + ": matrix must be square");
}

double hermiticity_defect(const Cmat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Cmat& m) {
    Eigen::SelfAdjointEigenSolver<Cmat> es(m);
    return es.eigenvalues().minCoeff();
}

} // namespace

Cmat tensor(const Cmat& x, const Cmat& y) {
    Cmat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) =
                x(i, j) * y;
    return out;
}

Cvec tensor(const Cvec& x, const Cvec& y) {
    Cvec out(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out.segment(i * y.size(), y.size()) = x(i) * y;
    return out;
}

Cmat partial_trace_a(const Cmat& m, int da, int db) {
    if (m.rows() != da * db || m.cols() != da * db)
        throw ValidationError("partial trace: dimension mismatch");
    Cmat out = Cmat::Zero(db, db);
    for (int b1 = 0; b1 < db; ++b1)
        for (int b2 = 0; b2 < db; ++b2)
            for (int a = 0; a < da; ++a)
                out(b1, b2) += m(a * db + b1, a * db + b2);
    return out;
}

Cmat partial_trace_b(const Cmat& m, int da, int db) {
    if (m.rows() != da * db || m.cols() != da * db)
        throw ValidationError("partial trace: dimension mismatch");
    Cmat out = Cmat::Zero(da, da);
    for (int a1 = 0; a1 < da; ++a1)
        for (int a2 = 0; a2 < da; ++a2)
            for (int b = 0; b < db; ++b)
                out(a1, a2) += m(a1 * db + b, a2 * db + b);
    return out;
}

Cmat projector(const Cvec& v) {
    const double n = v.norm();
    if (n <= 1e-12) throw ValidationError("cannot project onto the zero vector");
    const Cvec u = v / n;
    return u * u.adjoint();
}

DensityMatrix::DensityMatrix(Cmat m) : m_(std::move(m)) {
    require_square(m_, "density matrix");
    if (hermiticity_defect(m_) > kHermTol)
        throw ValidationError("density matrix is not Hermitian");
    if (std::fabs(m_.trace().real() - 1.0) > kHermTol ||
        std::fabs(m_.trace().imag()) > kHermTol)
        throw ValidationError("density matrix trace is not 1");
    if (min_eigenvalue(m_) < -kPsdTol)
        throw ValidationError("density matrix has a negative eigenvalue");
}

bool is_pure(const DensityMatrix& rho, double eps) {
    return (rho.matrix() * rho.matrix()).trace().real() >= 1.0 - eps;
}

Povm::Povm(std::vector<Cmat> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw ValidationError("empty POVM");
    require_square(effects_[0], "POVM effect");
    Cmat sum = Cmat::Zero(effects_[0].rows(), effects_[0].cols());
    for (const auto& e : effects_) {
        if (e.rows() != effects_[0].rows() || e.cols() != effects_[0].cols())
            throw ValidationError("POVM effects differ in dimension");
        if (hermiticity_defect(e) > kHermTol)
            throw ValidationError("POVM effect is not Hermitian");
        if (min_eigenvalue(e) < -kPsdTol)
            throw ValidationError("POVM effect has a negative eigenvalue");
        sum += e;
    }
    if ((sum - Cmat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() >
        kHermTol)
        throw ValidationError("POVM effects do not sum to the identity");
}

bool is_projective(const Povm& p, double tol) {
    for (const auto& e : p.effects())
        if ((e * e - e).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

QuantumScenario::QuantumScenario(int da, int db, DensityMatrix joint,
                                 Povm povm_a, Povm povm_b,
                                 std::vector<std::string> labels_a,
                                 std::vector<std::string> labels_b)
    : da_(da),
      db_(db),
      joint_(std::move(joint)),
      povm_a_(std::move(povm_a)),
      povm_b_(std::move(povm_b)),
      labels_a_(std::move(labels_a)),
      labels_b_(std::move(labels_b)) {
    if (da_ < 1 || da_ > 4 || db_ < 1 || db_ > 4)
        throw ValidationError("per-side dimensions must be between 1 and 4");
    if (joint_.dim() != da_ * db_)
        throw ValidationError("joint state dimension is not dA*dB");
    if (povm_a_.dim() != da_ || povm_b_.dim() != db_)
        throw ValidationError("POVM dimension does not match its side");
    if (labels_a_.size() != povm_a_.size() || labels_b_.size() != povm_b_.size())
        throw ValidationError("outcome label count does not match the POVM");
}

JointTable born_table(const QuantumScenario& s) {
    if (s.povm_a().size() != 2 || s.povm_b().size() != 2)
        throw PreconditionError("table compilation needs binary tests");
    double p[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            p[i][j] = (tensor(s.povm_a().effect(static_cast<std::size_t>(i)),
                              s.povm_b().effect(static_cast<std::size_t>(j))) *
                       s.joint().matrix())
                          .trace()
                          .real();
    const Purity purity =
        is_pure(s.joint()) ? Purity::DeclaredPure : Purity::DeclaredMixed;
    return JointTable(p[0][0], p[0][1], p[1][0], p[1][1], purity);
}

std::vector<Cmat> steered_operators(const QuantumScenario& s) {
    const Cmat ida = Cmat::Identity(s.da(), s.da());
    std::vector<Cmat> out;
    for (std::size_t j = 0; j < s.povm_b().size(); ++j)
        out.push_back(partial_trace_b(
            tensor(ida, s.povm_b().effect(j)) * s.joint().matrix(), s.da(),
            s.db()));
    return out;
}

std::optional<SharpSupports> quantum_sharp_states(const Povm& prop) {
    if (prop.size() != 2 || !is_projective(prop)) return std::nullopt;
    return SharpSupports{prop.effect(0), prop.effect(1)};
}

bool is_sharp_for(const DensityMatrix& rho, const SharpSupports& s, double eps) {
    // Support containment in a projector's range is exactly unit trace
    // against it; containment in the complement is exactly zero trace.
    const double v = (s.p0 * rho.matrix()).trace().real();
    return v <= eps || v >= 1.0 - eps;
}

namespace {

int subspace_dim(const Cmat& proj) {
    return static_cast<int>(std::lround(proj.trace().real()));
}

// Trivial intersection of two projector ranges: rank of the stacked
// bases equals the dimension sum.
bool intersection_trivial(const Cmat& p, const Cmat& q) {
    const int dp = subspace_dim(p);
    const int dq = subspace_dim(q);
    if (dp == 0 || dq == 0) return true;
    Cmat stacked(p.rows(), dp + dq);
    // Orthonormal bases from the eigenvectors at eigenvalue 1.
    auto basis_into = [&](const Cmat& proj, int cols, Eigen::Index offset) {
        Eigen::SelfAdjointEigenSolver<Cmat> es(proj);
        int written = 0;
        for (Eigen::Index k = es.eigenvalues().size() - 1;
             k >= 0 && written < cols; --k) {
            if (es.eigenvalues()(k) < 0.5) break;
            stacked.col(offset + written) = es.eigenvectors().col(k);
            ++written;
        }
        if (written != cols)
            throw InternalInconsistencyError("projector rank disagrees with trace");
    };
    basis_into(p, dp, 0);
    basis_into(q, dq, dp);
    Eigen::ColPivHouseholderQR<Cmat> qr(stacked);
    qr.setThreshold(1e-7);
    return qr.rank() == dp + dq;
}

} // namespace

bool are_complementary(const Povm& a, const Povm& b, double eps) {
    const auto sa = quantum_sharp_states(a);
    const auto sb = quantum_sharp_states(b);
    if (!sa || !sb)
        throw PreconditionError(
            "sharpness analysis supports binary projective tests only");
    (void)eps;
    const Cmat* pa[2] = {&sa->p0, &sa->p1};
    const Cmat* pb[2] = {&sb->p0, &sb->p1};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!intersection_trivial(*pa[i], *pb[j])) return false;
    return true;
}

std::optional<std::pair<Cmat, double>> quantum_conclusive_discrimination(
    const DensityMatrix& alpha0, const DensityMatrix& alpha1, double eps) {
    if (alpha0.dim() != alpha1.dim())
        throw ValidationError("states differ in dimension");
    Eigen::SelfAdjointEigenSolver<Cmat> es(alpha0.matrix());
    Cmat kernel_proj = Cmat::Zero(alpha0.dim(), alpha0.dim());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) <= kPsdTol)
            kernel_proj += es.eigenvectors().col(k) *
                           es.eigenvectors().col(k).adjoint();
    const double value = (kernel_proj * alpha1.matrix()).trace().real();
    if (value <= eps) return std::nullopt;
    return std::make_pair(kernel_proj, value);
}

CatScenarios cat_scenarios() {
    Cvec alive(2), dead(2), up(2), down(2);
    alive << 1, 0;
    dead << 0, 1;
    up << 1, 0;
    down << 0, 1;
    const Cvec psi_plus = (dead + alive) / std::sqrt(2.0);
    const Cvec psi_minus = (dead - alive) / std::sqrt(2.0);

    const Povm cat_test({projector(alive), projector(dead)});
    const Povm superposition_test({projector(psi_plus), projector(psi_minus)});
    const Povm z_test({projector(up), projector(down)});

    SingleSystemPair v1{cat_test,
                        superposition_test,
                        {"alive", "dead"},
                        {"psi+", "psi-"}};

    const Cvec joint2 =
        (tensor(alive, up) + tensor(dead, down)) / std::sqrt(2.0);
    QuantumScenario v2(2, 2, DensityMatrix(projector(joint2)), cat_test,
                       z_test, {"alive", "dead"}, {"up", "down"});

    const Cvec joint3 =
        (tensor(alive, up) + tensor(psi_plus, down)) / std::sqrt(2.0);
    QuantumScenario v3(2, 2, DensityMatrix(projector(joint3)), cat_test,
                       z_test, {"alive", "dead"}, {"up", "down"});

    return {std::move(v1), std::move(v2), std::move(v3)};
}

Cvec random_pure_state(int dim, std::mt19937_64& eng) {
    Cvec v(dim);
    for (int k = 0; k < dim; ++k)
        v(k) = std::complex<double>(gaussian(eng), gaussian(eng));
    if (v.norm() <= 1e-12) v(0) = 1.0; // astronomically unlikely
    return v / v.norm();
}

Povm random_projective_binary(int dim, std::mt19937_64& eng) {
    const Cmat p = projector(random_pure_state(dim, eng));
    return Povm({p, Cmat::Identity(dim, dim) - p});
}

QuantumScenario random_two_qubit_scenario(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    const Cvec joint = random_pure_state(4, eng);
    return QuantumScenario(2, 2, DensityMatrix(projector(joint)),
                           random_projective_binary(2, eng),
                           random_projective_binary(2, eng), {"0", "1"},
                           {"0", "1"});
}

} // namespace gptv
