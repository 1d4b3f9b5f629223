#pragma once

// Exact linear algebra over Gaussian rationals, plus the glue that turns
// "find constants c with sum c_i E_i == 0" into a matrix nullspace.

#include "wdvv/algebra.hpp"

#include <optional>
#include <vector>

namespace wdvv {

using Vec = std::vector<Coefficient>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Coefficient& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Coefficient& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    void append_row(const Vec& row);
    Vec column(std::size_t j) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    Matrix scaled(const Coefficient& s) const;
    friend bool operator==(const Matrix& a, const Matrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }
    bool is_zero() const;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Coefficient> a_;
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m);
std::size_t rank(Matrix m);
/// Basis of {v : m v = 0}; each vector has a 1 at its free column.
std::vector<Vec> nullspace(Matrix m);
std::optional<Vec> solve(const Matrix& a, const Vec& b);
std::optional<Matrix> inverse(const Matrix& m);

/// Constants c (not all zero) with sum_i c_i * items[i] == 0 componentwise.
/// Every item must have the same number of components.
std::vector<Vec> linear_relations(const std::vector<std::vector<NormalForm>>& items, std::size_t* equations = nullptr);
inline std::vector<Vec> linear_relations(const std::vector<NormalForm>& items, std::size_t* equations = nullptr) {
    std::vector<std::vector<NormalForm>> v;
    v.reserve(items.size());
    for (const auto& e : items) v.push_back({e});
    return linear_relations(v, equations);
}

/// Constants c with sum_i c_i * basis[i] == target, if any.
std::optional<Vec> express_in(const std::vector<std::vector<NormalForm>>& basis, const std::vector<NormalForm>& target);

}  // namespace wdvv
