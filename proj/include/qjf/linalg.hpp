#pragma once
#include <vector>
#include "qjf/rational.hpp"

namespace qjf {

enum class SolveStatus { unique, inconsistent, underdetermined };

struct SolveResult {
    SolveStatus status = SolveStatus::unique;
    std::vector<Rat> x;                       // a solution when one exists
    std::vector<std::vector<Rat>> kernel;     // basis of the homogeneous solutions
    int rank = 0;
};

// exact Gaussian elimination on rows a with right-hand side b
inline SolveResult solve_exact(std::vector<std::vector<Rat>> a, std::vector<Rat> b,
                               bool want_kernel = false) {
    SolveResult res;
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && is_zero(a[p][c])) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        Rat inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(a[i][c])) continue;
            Rat f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    res.rank = static_cast<int>(r);
    for (size_t i = r; i < rows; ++i)
        if (!is_zero(b[i])) {
            res.status = SolveStatus::inconsistent;
            return res;
        }
    res.x.assign(cols, Rat(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) res.x[pivot_col[i]] = b[i];
    if (res.rank < static_cast<int>(cols)) {
        res.status = SolveStatus::underdetermined;
        if (want_kernel) {
            std::vector<bool> is_pivot(cols, false);
            for (int pc : pivot_col) is_pivot[pc] = true;
            for (size_t f = 0; f < cols; ++f) {
                if (is_pivot[f]) continue;
                std::vector<Rat> v(cols, Rat(0));
                v[f] = 1;
                for (size_t i = 0; i < pivot_col.size(); ++i)
                    v[pivot_col[i]] = -a[i][f];
                res.kernel.push_back(std::move(v));
            }
        }
    }
    return res;
}

}  // namespace qjf
