#pragma once

// Dense exact rational linear algebra. Every rank used anywhere in lexseq is
// computed here, over Q, from reduced row-echelon forms.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lexseq/errors.hpp"

namespace lexseq {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;
using Vector = std::vector<Rational>;

/// Renders a rational as a terminating decimal when it has one ("1.5", "-3"),
/// otherwise as "p/q".
inline std::string format_rational(const Rational& q) {
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    Integer d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) {
        return num.str() + "/" + den.str();
    }
    if (den == 1) return num.str();
    const int digits = std::max(twos, fives);
    Integer scale = 1;
    for (int k = 0; k < digits; ++k) scale *= 10;
    Integer scaled = num * (scale / den);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) <= digits) {
        s.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(s.size())), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return negative ? "-" + s : s;
}

inline bool is_integer(const Rational& q) {
    return boost::multiprecision::denominator(q) == 1;
}

inline Vector zero_vector(std::size_t n) { return Vector(n, Rational(0)); }

inline Vector unit_vector(std::size_t n, std::size_t k) {
    Vector v = zero_vector(n);
    v.at(k) = 1;
    return v;
}

inline bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    /// Rows must all have length `cols`; `cols` is needed when `rows` is empty.
    static RationalMatrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
        RationalMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw dimension_error("row length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
        }
        return m;
    }

    static RationalMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
        RationalMatrix m(rows.size(), cols);
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != cols) throw dimension_error("row length mismatch");
            std::size_t c = 0;
            for (long x : row) m.at(r, c++) = x;
            ++r;
        }
        return m;
    }

    static RationalMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows) {
        RationalMatrix m(rows, columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].size() != rows) throw dimension_error("column length mismatch");
            for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = columns[c][r];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    const Rational& at(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    Vector row(std::size_t r) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }
    Vector column(std::size_t c) const {
        Vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
        return v;
    }
    std::vector<Vector> row_list() const {
        std::vector<Vector> out;
        for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
        return out;
    }
    std::vector<Vector> column_list() const {
        std::vector<Vector> out;
        for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
        return out;
    }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    Vector operator*(const Vector& v) const {
        if (v.size() != cols_) throw dimension_error("matrix-vector dimension mismatch");
        Vector out = zero_vector(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (at(r, c) != 0 && v[c] != 0) out[r] += at(r, c) * v[c];
        return out;
    }

    RationalMatrix operator*(const RationalMatrix& other) const {
        if (cols_ != other.rows_) throw dimension_error("matrix product dimension mismatch");
        RationalMatrix out(rows_, other.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(r, k) == 0) continue;
                for (std::size_t c = 0; c < other.cols_; ++c)
                    if (other.at(k, c) != 0) out.at(r, c) += at(r, k) * other.at(k, c);
            }
        return out;
    }

    bool operator==(const RationalMatrix& other) const = default;

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t r = 0; r < rows_; ++r) {
            os << "[";
            for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << format_rational(at(r, c));
            os << "]\n";
        }
        return os.str();
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row-echelon form together with its pivot columns.
struct Echelon {
    RationalMatrix reduced;
    std::vector<std::size_t> pivots;
};

inline Echelon row_reduce(RationalMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
        std::size_t pick = lead_row;
        while (pick < m.rows() && m.at(pick, c) == 0) ++pick;
        if (pick == m.rows()) continue;
        if (pick != lead_row)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(pick, k), m.at(lead_row, k));
        const Rational inv = 1 / m.at(lead_row, c);
        for (std::size_t k = c; k < m.cols(); ++k) m.at(lead_row, k) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row || m.at(r, c) == 0) continue;
            const Rational f = m.at(r, c);
            for (std::size_t k = c; k < m.cols(); ++k) m.at(r, k) -= f * m.at(lead_row, k);
        }
        pivots.push_back(c);
        ++lead_row;
    }
    return {std::move(m), std::move(pivots)};
}

/// A linear subspace of Q^n stored by its canonical reduced row-echelon basis,
/// so equal subspaces compare equal structurally.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

    static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
        Subspace s(ambient_dim);
        if (vectors.empty()) return s;
        Echelon e = row_reduce(RationalMatrix::from_rows(vectors, ambient_dim));
        for (std::size_t r = 0; r < e.pivots.size(); ++r) s.basis_.push_back(e.reduced.row(r));
        s.pivots_ = std::move(e.pivots);
        return s;
    }

    static Subspace whole(std::size_t ambient_dim) {
        std::vector<Vector> units;
        for (std::size_t k = 0; k < ambient_dim; ++k) units.push_back(unit_vector(ambient_dim, k));
        return span(ambient_dim, units);
    }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vector>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Vector& v) const {
        if (v.size() != ambient_dim_) throw dimension_error("vector does not match subspace ambient dimension");
        return is_zero(reduce(v));
    }

    /// Remainder of v after eliminating every pivot coordinate.
    Vector reduce(Vector v) const {
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            const Rational f = v[pivots_[r]];
            if (f == 0) continue;
            for (std::size_t k = 0; k < ambient_dim_; ++k)
                if (basis_[r][k] != 0) v[k] -= f * basis_[r][k];
        }
        return v;
    }

    Subspace operator+(const Subspace& other) const {
        if (other.ambient_dim_ != ambient_dim_) throw dimension_error("subspace sum of different ambient dimension");
        std::vector<Vector> all = basis_;
        all.insert(all.end(), other.basis_.begin(), other.basis_.end());
        return span(ambient_dim_, all);
    }

    bool contains(const Subspace& other) const {
        return std::all_of(other.basis_.begin(), other.basis_.end(),
                           [this](const Vector& v) { return contains(v); });
    }

    bool operator==(const Subspace& other) const {
        return ambient_dim_ == other.ambient_dim_ && basis_ == other.basis_;
    }

private:
    std::size_t ambient_dim_ = 0;
    std::vector<Vector> basis_;
    std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const RationalMatrix& m) { return row_reduce(m).pivots.size(); }

inline Subspace kernel_basis(const RationalMatrix& m) {
    Echelon e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> vectors;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v = unit_vector(m.cols(), free);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced.at(r, free);
        vectors.push_back(std::move(v));
    }
    return Subspace::span(m.cols(), vectors);
}

inline Subspace image_basis(const RationalMatrix& m) {
    return Subspace::span(m.rows(), m.column_list());
}

inline bool member(const Subspace& s, const Vector& v) { return s.contains(v); }

/// Inverse of a square matrix; throws when singular.
inline RationalMatrix inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw dimension_error("inverse of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return m;
    RationalMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    Echelon e = row_reduce(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw dimension_error("matrix is singular");
    RationalMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = e.reduced.at(r, n + c);
    return inv;
}

/// One solution of m x = b (free variables zero), or nothing when inconsistent.
inline std::optional<Vector> solve(const RationalMatrix& m, const Vector& b) {
    if (b.size() != m.rows()) throw dimension_error("right-hand side length mismatch");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = b[r];
    }
    Echelon e = row_reduce(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    Vector x = zero_vector(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced.at(r, m.cols());
    return x;
}

/// Units completing a subspace to the whole ambient space plus the projection
/// onto them along the subspace.
struct Cokernel {
    Subspace representatives;
    std::vector<std::size_t> representative_units;
    RationalMatrix projection;  // representatives x ambient
};

/// Quotient of Q^n by `killed`, with the listed unit vectors as representatives.
/// The units must complete `killed` to a basis of Q^n.
inline RationalMatrix quotient_projection(const Subspace& killed, const std::vector<std::size_t>& units) {
    const std::size_t n = killed.ambient_dim();
    if (killed.dim() + units.size() != n) throw dimension_error("representatives do not complete the subspace");
    std::vector<Vector> columns = killed.basis();
    for (std::size_t u : units) columns.push_back(unit_vector(n, u));
    const RationalMatrix inv = inverse(RationalMatrix::from_columns(columns, n));
    RationalMatrix proj(units.size(), n);
    for (std::size_t k = 0; k < units.size(); ++k)
        for (std::size_t c = 0; c < n; ++c) proj.at(k, c) = inv.at(killed.dim() + k, c);
    return proj;
}

inline Cokernel cokernel(const RationalMatrix& m) {
    const Subspace im = image_basis(m);
    std::vector<bool> is_pivot(m.rows(), false);
    for (std::size_t p : im.pivots()) is_pivot[p] = true;
    std::vector<std::size_t> units;
    std::vector<Vector> reps;
    for (std::size_t k = 0; k < m.rows(); ++k) {
        if (is_pivot[k]) continue;
        units.push_back(k);
        reps.push_back(unit_vector(m.rows(), k));
    }
    return {Subspace::span(m.rows(), reps), units, quotient_projection(im, units)};
}

/// Earliest-first units that stay independent modulo `killed`.
inline std::vector<std::size_t> greedy_complement(const Subspace& killed) {
    const std::size_t n = killed.ambient_dim();
    std::vector<std::size_t> picked;
    Subspace current = killed;
    for (std::size_t k = 0; k < n && current.dim() < n; ++k) {
        const Vector e = unit_vector(n, k);
        if (current.contains(e)) continue;
        picked.push_back(k);
        current = current + Subspace::span(n, {e});
    }
    return picked;
}

}  // namespace lexseq
