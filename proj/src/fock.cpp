// fock.cpp — occupation bases, ladder and Schwinger operators

#include "becgrad/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace becgrad {

namespace {

bool satisfies(const Occupation& occ, const SectorConstraint& c) {
    std::size_t sum = 0;
    for (auto m : c.modes) sum += occ[m];
    return c.kind == SectorConstraint::Kind::exactly ? sum == c.total : sum <= c.total;
}

// Occupations only grow along the recursion, so a constraint whose total is
// already exceeded by the assigned prefix can never be satisfied.
bool exceeds(const Occupation& occ, std::size_t assigned, const std::vector<SectorConstraint>& sectors) {
    for (const auto& c : sectors) {
        std::size_t sum = 0;
        for (auto m : c.modes)
            if (m < assigned) sum += occ[m];
        if (sum > c.total) return true;
    }
    return false;
}

void enumerate(Occupation& occ, std::size_t mode, std::size_t remaining,
               const std::vector<SectorConstraint>& sectors, std::vector<Occupation>& out) {
    if (mode == occ.size()) {
        for (const auto& c : sectors)
            if (!satisfies(occ, c)) return;
        out.push_back(occ);
        return;
    }
    for (std::size_t n = 0; n <= remaining; ++n) {
        occ[mode] = n;
        if (exceeds(occ, mode + 1, sectors)) break;
        enumerate(occ, mode + 1, remaining - n, sectors, out);
    }
    occ[mode] = 0;
}

}  // namespace

FockBasis::FockBasis(std::size_t modes, std::size_t max_total, std::vector<SectorConstraint> sectors)
    : modes_(modes), max_total_(max_total), sectors_(std::move(sectors)) {
    if (modes_ == 0) throw std::invalid_argument("FockBasis: at least one mode is required");
    for (const auto& c : sectors_) {
        if (c.modes.empty()) throw std::invalid_argument("FockBasis: sector constraint without modes");
        auto sorted = c.modes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("FockBasis: sector constraint repeats a mode");
        for (auto m : c.modes)
            if (m >= modes_)
                throw std::invalid_argument("FockBasis: sector constraint references mode " +
                                            std::to_string(m) + " of a " +
                                            std::to_string(modes_) + "-mode basis");
    }
    Occupation occ(modes_, 0);
    enumerate(occ, 0, max_total_, sectors_, states_);
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> FockBasis::index_of(const Occupation& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool FockBasis::same_space(const FockBasis& other) const {
    return this == &other || (modes_ == other.modes_ && states_ == other.states_);
}

BasisPtr build_basis(std::size_t modes, std::size_t max_total, std::vector<SectorConstraint> sectors) {
    return std::make_shared<const FockBasis>(modes, max_total, std::move(sectors));
}

BasisPtr tensor_product(const FockBasis& a, const FockBasis& b) {
    std::vector<SectorConstraint> sectors;
    std::vector<std::size_t> a_modes(a.modes()), b_modes(b.modes());
    std::iota(a_modes.begin(), a_modes.end(), 0);
    std::iota(b_modes.begin(), b_modes.end(), a.modes());
    sectors.push_back(SectorConstraint::at_most(a_modes, a.max_total()));
    sectors.push_back(SectorConstraint::at_most(b_modes, b.max_total()));
    for (const auto& c : a.sectors()) sectors.push_back(c);
    for (auto c : b.sectors()) {
        for (auto& m : c.modes) m += a.modes();
        sectors.push_back(std::move(c));
    }
    auto product = build_basis(a.modes() + b.modes(), a.max_total() + b.max_total(), std::move(sectors));
    if (product->size() != a.size() * b.size())
        throw std::logic_error("tensor_product: factor bases are not closed under their constraints");
    return product;
}

Operator::Operator(BasisPtr basis, CMatrix elements) : basis_(std::move(basis)), elements_(std::move(elements)) {
    if (!basis_) throw std::invalid_argument("Operator: null basis");
    const auto n = static_cast<Eigen::Index>(basis_->size());
    if (elements_.rows() != n || elements_.cols() != n)
        throw std::invalid_argument("Operator: matrix dimension does not match basis size");
}

Operator Operator::zero(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    return {std::move(basis), CMatrix::Zero(n, n)};
}

Operator Operator::identity(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    return {std::move(basis), CMatrix::Identity(n, n)};
}

Operator Operator::adjoint() const { return {basis_, elements_.adjoint()}; }

double Operator::hermiticity_defect() const { return max_norm(elements_ - elements_.adjoint()); }

bool Operator::is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

void Operator::require_same_basis(const Operator& other) const {
    if (!basis_->same_space(*other.basis_))
        throw std::invalid_argument("Operator: operands live on different bases");
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_basis(rhs);
    elements_ += rhs.elements_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_basis(rhs);
    elements_ -= rhs.elements_;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    elements_ *= s;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_basis(b);
    return {a.basis_, a.elements_ * b.elements_};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_norm(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Operator annihilation(const BasisPtr& basis, std::size_t mode) {
    if (mode >= basis->modes()) throw std::invalid_argument("annihilation: mode out of range");
    auto op = Operator::zero(basis);
    CMatrix m = op.matrix();
    for (std::size_t col = 0; col < basis->size(); ++col) {
        Occupation occ = basis->state(col);
        const std::size_t n = occ[mode];
        if (n == 0) continue;
        occ[mode] = n - 1;
        if (auto row = basis->index_of(occ))
            m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = std::sqrt(static_cast<double>(n));
    }
    return {basis, std::move(m)};
}

Operator creation(const BasisPtr& basis, std::size_t mode) { return annihilation(basis, mode).adjoint(); }

Operator number(const BasisPtr& basis, std::size_t mode) {
    if (mode >= basis->modes()) throw std::invalid_argument("number: mode out of range");
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size()));
    for (std::size_t i = 0; i < basis->size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(basis->state(i)[mode]);
    return {basis, std::move(m)};
}

Operator transfer(const BasisPtr& basis, std::size_t to_mode, std::size_t from_mode) {
    if (to_mode >= basis->modes() || from_mode >= basis->modes())
        throw std::invalid_argument("transfer: mode out of range");
    if (to_mode == from_mode) return number(basis, to_mode);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size()));
    for (std::size_t col = 0; col < basis->size(); ++col) {
        Occupation occ = basis->state(col);
        const std::size_t n_from = occ[from_mode];
        if (n_from == 0) continue;
        const std::size_t n_to = occ[to_mode];
        occ[from_mode] = n_from - 1;
        occ[to_mode] = n_to + 1;
        if (auto row = basis->index_of(occ))
            m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) =
                std::sqrt(static_cast<double>(n_from) * static_cast<double>(n_to + 1));
    }
    return {basis, std::move(m)};
}

SpinOperators schwinger_spin(const BasisPtr& basis, std::size_t mode_e, std::size_t mode_g) {
    if (mode_e == mode_g) throw std::invalid_argument("schwinger_spin: modes must differ");
    const Operator raise = transfer(basis, mode_e, mode_g);  // e^dag g
    const Operator lower = raise.adjoint();                  // g^dag e
    const cplx half{0.5, 0.0};
    const cplx minus_half_i{0.0, -0.5};
    return {
        half * (raise + lower),
        minus_half_i * (raise - lower),
        half * (number(basis, mode_e) - number(basis, mode_g)),
    };
}

Operator kron(const Operator& a, const Operator& b, const BasisPtr& product) {
    const auto da = a.matrix().rows();
    const auto db = b.matrix().rows();
    CMatrix m(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return {product, std::move(m)};
}

}  // namespace becgrad
