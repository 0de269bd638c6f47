#include "vertex/linalg.hpp"

#include <utility>

namespace vertex {

int row_reduce(RationalMatrix& m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        Rational inv = 1 / m[r][c];
        for (size_t k = c; k < cols; ++k) m[r][k] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
        }
        ++r;
    }
    return static_cast<int>(r);
}

int rank(RationalMatrix m) { return row_reduce(m); }

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    const size_t n = m.size();
    RationalMatrix aug(n, std::vector<Rational>(2 * n));
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) return std::nullopt;
        for (size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    row_reduce(aug);
    RationalMatrix out(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i) {
        if (aug[i][i] != 1) return std::nullopt;
        for (size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    }
    return out;
}

}  // namespace vertex
