// helpers.hpp — independent reference constructions shared by the unit tests

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "becgrad/fock.hpp"

namespace testing {

using becgrad::CMatrix;
using becgrad::cplx;
using becgrad::Occupation;

// Every occupation tuple with entries in [0, max_total] that passes `keep`,
// in lexicographic order.
inline std::vector<Occupation> brute_force_states(std::size_t modes, std::size_t max_total,
                                                  const std::function<bool(const Occupation&)>& keep) {
    std::vector<Occupation> out;
    Occupation occ(modes, 0);
    while (true) {
        std::size_t total = 0;
        for (auto n : occ) total += n;
        if (total <= max_total && keep(occ)) out.push_back(occ);
        std::size_t k = modes;
        while (k > 0) {
            --k;
            if (occ[k] < max_total) {
                ++occ[k];
                for (std::size_t r = k + 1; r < modes; ++r) occ[r] = 0;
                break;
            }
            if (k == 0) return out;
        }
    }
}

// <out| a_to^dag a_from |in> by direct element rules on an explicit state list.
inline CMatrix hop_matrix(const std::vector<Occupation>& states, std::size_t to, std::size_t from) {
    const auto d = static_cast<Eigen::Index>(states.size());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        Occupation s = states[static_cast<std::size_t>(c)];
        if (to == from) {
            m(c, c) = static_cast<double>(s[to]);
            continue;
        }
        if (s[from] == 0) continue;
        const double amp = std::sqrt(static_cast<double>(s[from]) * static_cast<double>(s[to] + 1));
        --s[from];
        ++s[to];
        for (Eigen::Index r = 0; r < d; ++r)
            if (states[static_cast<std::size_t>(r)] == s) m(r, c) = amp;
    }
    return m;
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::srand(seed);
    return CMatrix::Random(rows, cols);
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
