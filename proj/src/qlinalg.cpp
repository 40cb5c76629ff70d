#include "pvring/qlinalg.hpp"

namespace pvring {

std::vector<std::vector<Rat>> QLinearSystem::nullspace_basis() const {
    std::vector<std::vector<Rat>> m = rows_;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < m.size(); ++c) {
        std::size_t sel = m.size();
        for (std::size_t i = r; i < m.size(); ++i)
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        Rat inv = m[r][c].inv();
        for (std::size_t j = c; j < cols_; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols_; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }

    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivot_col) is_pivot[c] = true;

    std::vector<std::vector<Rat>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> v(cols_, Rat(0));
        v[f] = Rat(1);
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace pvring
