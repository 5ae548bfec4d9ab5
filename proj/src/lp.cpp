#include "qif/lp.hpp"

#include <cstddef>

#include "qif/error.hpp"

namespace qif {

// Phase-1 simplex over exact rationals. The tableau carries the n structural
// columns, m artificial columns and the rhs; the objective row tracks reduced
// costs for minimizing the sum of artificials. Bland's rule guarantees
// termination without any tolerance.
LpResult solve_eq_nonneg(const std::vector<std::vector<Rat>>& a,
                         const std::vector<Rat>& c) {
    std::size_t m = a.size();
    std::size_t n = m == 0 ? 0 : a[0].size();
    if (c.size() != m) throw DomainError("lp: rhs size mismatch");

    // rows with negative rhs are flipped so artificials can start feasible
    std::vector<bool> flipped(m, false);
    std::size_t width = n + m + 1;
    std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(width, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) throw DomainError("lp: ragged matrix");
        flipped[i] = sgn(c[i]) < 0;
        for (std::size_t j = 0; j < n; ++j)
            t[i][j] = flipped[i] ? -a[i][j] : a[i][j];
        t[i][n + i] = 1;
        t[i][width - 1] = flipped[i] ? -c[i] : c[i];
    }
    // objective row: reduced costs of minimizing sum of artificials, with the
    // artificial basis priced out: row_0 = -(sum of constraint rows) on
    // structural columns and rhs, zero on artificial columns.
    auto& obj = t[m];
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) obj[j] -= t[i][j];
        obj[width - 1] -= t[i][width - 1];
    }

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    for (;;) {
        // Bland: entering column = lowest index with negative reduced cost
        std::size_t enter = width - 1;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (sgn(obj[j]) < 0) { enter = j; break; }
        }
        if (enter == width - 1) break; // optimal

        // ratio test; ties broken by lowest basis index (Bland)
        std::size_t leave = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(t[i][enter]) <= 0) continue;
            if (leave == m) { leave = i; continue; }
            Rat cur = t[i][width - 1] / t[i][enter];
            Rat best = t[leave][width - 1] / t[leave][enter];
            if (cur < best || (cur == best && basis[i] < basis[leave])) leave = i;
        }
        if (leave == m)
            throw Error("lp: phase-1 unbounded, which cannot happen");

        // pivot
        Rat piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || sgn(t[i][enter]) == 0) continue;
            Rat f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j)
                t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    LpResult res;
    // phase-1 optimum: -obj[rhs] is the residual infeasibility
    Rat residual = -obj[width - 1];
    if (sgn(residual) == 0) {
        res.feasible = true;
        res.x.assign(n, Rat(0));
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) res.x[basis[i]] = t[i][width - 1];
        return res;
    }

    // infeasible: simplex multipliers give the Farkas certificate. The
    // reduced cost of artificial k is 1 - y_k, so y_k = 1 - obj[n+k]; undo
    // the row flips on the way out.
    res.feasible = false;
    res.farkas.assign(m, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
        Rat y = Rat(1) - obj[n + i];
        res.farkas[i] = flipped[i] ? -y : y;
    }
    // exact self-check: yT A <= 0 componentwise and yT c > 0
    for (std::size_t j = 0; j < n; ++j) {
        Rat dot = 0;
        for (std::size_t i = 0; i < m; ++i) dot += res.farkas[i] * a[i][j];
        if (sgn(dot) > 0) throw Error("lp: invalid Farkas certificate (column)");
    }
    Rat rhs_dot = 0;
    for (std::size_t i = 0; i < m; ++i) rhs_dot += res.farkas[i] * c[i];
    if (sgn(rhs_dot) <= 0) throw Error("lp: invalid Farkas certificate (rhs)");
    return res;
}

} // namespace qif
