// fock.hpp — truncated bosonic Fock bases, mode operators and Schwinger spins

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace becgrad {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

using Occupation = std::vector<std::size_t>;

// Restricts the summed occupation of a subset of modes.
struct SectorConstraint {
    enum class Kind { exactly, at_most };

    std::vector<std::size_t> modes;
    Kind kind{Kind::exactly};
    std::size_t total{0};

    static SectorConstraint exactly(std::vector<std::size_t> modes, std::size_t total) {
        return {std::move(modes), Kind::exactly, total};
    }
    static SectorConstraint at_most(std::vector<std::size_t> modes, std::size_t total) {
        return {std::move(modes), Kind::at_most, total};
    }

    bool operator==(const SectorConstraint&) const = default;
};

/// Occupation-number basis of `modes` bosonic modes holding at most
/// `max_total` atoms in total, optionally restricted by sector constraints.
///
/// States are stored in ascending lexicographic order of their occupation
/// tuples. For a basis whose constraints factor into two disjoint groups of
/// leading/trailing modes, this order coincides with the Kronecker order of
/// the two factor bases (see tensor_product).
class FockBasis {
public:
    FockBasis(std::size_t modes, std::size_t max_total,
              std::vector<SectorConstraint> sectors = {});

    std::size_t modes() const { return modes_; }
    std::size_t max_total() const { return max_total_; }
    std::size_t size() const { return states_.size(); }
    const std::vector<SectorConstraint>& sectors() const { return sectors_; }
    const std::vector<Occupation>& states() const { return states_; }
    const Occupation& state(std::size_t i) const { return states_.at(i); }

    std::optional<std::size_t> index_of(const Occupation& occ) const;

    // Same modes and the same ordered state list.
    bool same_space(const FockBasis& other) const;

private:
    std::size_t modes_;
    std::size_t max_total_;
    std::vector<SectorConstraint> sectors_;
    std::vector<Occupation> states_;
    std::map<Occupation, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(std::size_t modes, std::size_t max_total,
                     std::vector<SectorConstraint> sectors = {});

// Basis of the concatenated modes of `a` followed by `b`, ordered so that
// index(a_i, b_j) = i * b.size() + j.
BasisPtr tensor_product(const FockBasis& a, const FockBasis& b);

/// Dense operator on a Fock basis.
class Operator {
public:
    Operator(BasisPtr basis, CMatrix elements);

    static Operator zero(BasisPtr basis);
    static Operator identity(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    const CMatrix& matrix() const { return elements_; }
    std::size_t dim() const { return static_cast<std::size_t>(elements_.rows()); }

    Operator adjoint() const;
    double hermiticity_defect() const;  // max |A - A^dagger|
    bool is_hermitian(double tol = 1e-12) const;

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx s);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    void require_same_basis(const Operator& other) const;

    BasisPtr basis_;
    CMatrix elements_;
};

Operator commutator(const Operator& a, const Operator& b);
double max_norm(const CMatrix& m);

Operator annihilation(const BasisPtr& basis, std::size_t mode);
Operator creation(const BasisPtr& basis, std::size_t mode);
Operator number(const BasisPtr& basis, std::size_t mode);

// a_to^dagger a_from, built from direct matrix elements so that it is exact
// on fixed-number sectors where the intermediate state is not representable.
Operator transfer(const BasisPtr& basis, std::size_t to_mode, std::size_t from_mode);

struct SpinOperators {
    Operator x;
    Operator y;
    Operator z;

    Operator casimir() const { return x * x + y * y + z * z; }
};

/// Jx = (e^dag g + g^dag e)/2, Jy = (e^dag g - g^dag e)/(2i), Jz = (n_e - n_g)/2.
SpinOperators schwinger_spin(const BasisPtr& basis, std::size_t mode_e, std::size_t mode_g);

// Embed an operator or state of a factor space into a product space.
Operator kron(const Operator& a, const Operator& b, const BasisPtr& product);

}  // namespace becgrad
