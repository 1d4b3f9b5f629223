#include "wdvv/linalg.hpp"

#include <algorithm>
#include <unordered_map>

namespace wdvv {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Coefficient(1);
    return m;
}

void Matrix::append_row(const Vec& row) {
    if (r_ == 0 && c_ == 0) c_ = row.size();
    if (row.size() != c_) throw std::invalid_argument("row length mismatch");
    a_.insert(a_.end(), row.begin(), row.end());
    ++r_;
}

Vec Matrix::column(std::size_t j) const {
    Vec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix shape mismatch");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t k = 0; k < a.c_; ++k) {
            const Coefficient& x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.c_; ++j)
                if (!b(k, j).is_zero()) m(i, j) += x * b(k, j);
        }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix m = a;
    for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] += b.a_[i];
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + b.scaled(Coefficient(-1)); }

Matrix Matrix::scaled(const Coefficient& s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x = x * s;
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        const Coefficient inv = m(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            const Coefficient f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(i, j) = m(i, j) - f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(Matrix m) { return rref(m).size(); }

std::vector<Vec> nullspace(Matrix m) {
    const std::vector<std::size_t> piv = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<Vec> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v(m.cols());
        v[free] = Coefficient(1);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, free);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    const auto piv = rref(aug);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    Vec x(a.cols());
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, a.cols());
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = Coefficient(1);
    }
    const auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

namespace {

// Numerators over a common denominator for one component across all items.
std::vector<Poly> common_numerators(const std::vector<const NormalForm*>& col) {
    std::vector<DenFactor> lcm;
    for (const NormalForm* a : col)
        for (const DenFactor& f : a->den()) {
            auto it = std::find_if(lcm.begin(), lcm.end(), [&](const DenFactor& g) { return g.poly == f.poly; });
            if (it == lcm.end())
                lcm.push_back(f);
            else
                it->mult = std::max(it->mult, f.mult);
        }
    std::vector<Poly> out;
    out.reserve(col.size());
    for (const NormalForm* a : col) {
        Poly p = a->num();
        if (p.is_zero()) {
            out.push_back(p);
            continue;
        }
        for (const DenFactor& g : lcm) {
            int have = 0;
            for (const DenFactor& f : a->den())
                if (f.poly == g.poly) have = f.mult;
            if (g.mult > have) p = p * g.poly.pow(static_cast<unsigned>(g.mult - have));
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::vector<Vec> linear_relations(const std::vector<std::vector<NormalForm>>& items, std::size_t* equations) {
    const std::size_t n = items.size();
    if (n == 0) return {};
    const std::size_t comps = items[0].size();
    std::vector<Vec> rows;
    for (std::size_t c = 0; c < comps; ++c) {
        std::vector<const NormalForm*> col;
        for (const auto& it : items) {
            if (it.size() != comps) throw std::invalid_argument("component count mismatch");
            col.push_back(&it[c]);
        }
        const std::vector<Poly> nums = common_numerators(col);
        std::unordered_map<Monomial, std::size_t, MonomialHash> where;
        for (std::size_t i = 0; i < n; ++i)
            for (const Term& t : nums[i].terms()) {
                auto [it, fresh] = where.emplace(t.mono, rows.size());
                if (fresh) rows.emplace_back(n);
                rows[it->second][i] += t.coeff;
            }
    }
    if (equations) *equations = rows.size();
    Matrix m(0, n);
    for (auto& r : rows) m.append_row(r);
    return nullspace(std::move(m));
}

std::optional<Vec> express_in(const std::vector<std::vector<NormalForm>>& basis, const std::vector<NormalForm>& target) {
    std::vector<std::vector<NormalForm>> items = basis;
    items.push_back(target);
    const std::size_t last = basis.size();
    for (const Vec& v : linear_relations(items)) {
        if (v[last].is_zero()) continue;
        const Coefficient s = -v[last].inverse();
        Vec c(last);
        for (std::size_t i = 0; i < last; ++i) c[i] = v[i] * s;
        return c;
    }
    return std::nullopt;
}

}  // namespace wdvv
