#ifndef PVRING_QLINALG_HPP
#define PVRING_QLINALG_HPP

#include "pvring/errors.hpp"
#include "pvring/rational.hpp"

#include <vector>

namespace pvring {

/// Dense exact linear algebra over Q, enough for nullspace computations.
/// Rows are equations, columns unknowns.
class QLinearSystem {
  public:
    explicit QLinearSystem(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rows() const { return rows_.size(); }

    void add_row(std::vector<Rat> row) {
        if (row.size() != cols_) throw usage_error("row width mismatch");
        rows_.push_back(std::move(row));
    }

    /// Basis of the solution space of A x = 0, in reduced column-echelon
    /// form (each vector has a leading 1 in a distinct pivot position);
    /// deterministic.
    std::vector<std::vector<Rat>> nullspace_basis() const;

  private:
    std::size_t cols_;
    std::vector<std::vector<Rat>> rows_;
};

} // namespace pvring

#endif
