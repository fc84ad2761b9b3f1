#pragma once

// Brute-force vertex enumeration over an LpProblem. Test oracle for the
// simplex: shares only the problem type, none of the pivoting machinery.

#include <optional>
#include <vector>

#include "wshsa/lp.hpp"
#include "wshsa/rational.hpp"

namespace wshsa {

namespace detail {

/// Solve the square rational system M x = r. Returns nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m,
                                                         std::vector<Rational> r) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        Rational d = m[col][col];
        for (std::size_t j = 0; j < n; ++j) m[col][j] /= d;
        r[col] /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m[i][col] == 0) continue;
            Rational f = m[i][col];
            for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[col][j];
            r[i] -= f * r[col];
        }
    }
    return r;
}

}  // namespace detail

/// Minimum objective over all vertices of {x : Ax >= b, x >= 0}, by solving
/// every n-subset of tight constraints. Returns nullopt when no vertex is
/// feasible. Intended for problems with a handful of variables.
inline std::optional<Rational> enumerate_vertex_optimum(const LpProblem& lp,
                                                        std::vector<std::vector<Rational>>* vertices = nullptr) {
    const std::size_t n = lp.num_vars();
    const std::size_t total = lp.rows.size() + n;  // rows then axis constraints x_j >= 0

    auto constraint = [&](std::size_t c) {
        std::vector<Rational> coeffs(n, Rational(0));
        Rational rhs = 0;
        if (c < lp.rows.size()) {
            coeffs = lp.rows[c].coeffs;
            rhs = lp.rows[c].rhs;
        } else {
            coeffs[c - lp.rows.size()] = 1;
        }
        return std::make_pair(coeffs, rhs);
    };

    std::optional<Rational> best;
    // Iterate over all n-combinations of constraint indices.
    std::vector<std::size_t> comb(n);
    for (std::size_t i = 0; i < n; ++i) comb[i] = i;
    if (n == 0 || total < n) return std::nullopt;
    auto next_comb = [&]() -> bool {
        std::size_t i = n;
        while (i-- > 0) {
            if (comb[i] < total - n + i) {
                ++comb[i];
                for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    for (;;) {
        std::vector<std::vector<Rational>> m;
        std::vector<Rational> r;
        for (std::size_t i : comb) {
            auto [coeffs, rhs] = constraint(i);
            m.push_back(std::move(coeffs));
            r.push_back(rhs);
        }
        if (auto x = detail::solve_square(std::move(m), std::move(r))) {
            bool feasible = true;
            for (const auto& v : *x)
                if (v < 0) feasible = false;
            if (feasible)
                for (const auto& row : lp.rows) {
                    Rational lhs = 0;
                    for (std::size_t j = 0; j < n; ++j) lhs += row.coeffs[j] * (*x)[j];
                    if (lhs < row.rhs) {
                        feasible = false;
                        break;
                    }
                }
            if (feasible) {
                Rational val = objective_value(lp, *x);
                if (!best || val < *best) best = val;
                if (vertices) vertices->push_back(*x);
            }
        }
        if (!next_comb()) break;
    }
    return best;
}

}  // namespace wshsa
