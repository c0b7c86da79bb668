#pragma once

// The exterior algebra H*(T^n) = Λ(dx^1, ..., dx^n) and its dual homology
// basis of coordinate subtori.
//
// Sign convention: a multi-index written out of order denotes the sorted one
// times the sign of the sorting permutation, so s42 = -s24 and L31 = -L13.

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"

namespace lexseq {

/// Strictly increasing 1-based coordinate indices.
using Indices = std::vector<int>;

/// Sorts `raw` in place and returns the permutation sign, or 0 on a repeated index.
inline int sort_with_sign(Indices& raw) {
    int sign = 1;
    for (std::size_t i = 1; i < raw.size(); ++i)
        for (std::size_t j = i; j > 0 && raw[j - 1] >= raw[j]; --j) {
            if (raw[j - 1] == raw[j]) return 0;
            std::swap(raw[j - 1], raw[j]);
            sign = -sign;
        }
    return sign;
}

/// All k-subsets of {1..n} in lexicographic order (the coordinate basis of Λ^k).
inline std::vector<Indices> basis_tuples(int n, int k) {
    std::vector<Indices> out;
    if (k < 0 || k > n) return out;
    Indices cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline std::size_t binomial(int n, int k) { return basis_tuples(n, k).size(); }

inline std::string index_string(const Indices& idx) {
    std::string s;
    for (int i : idx) s += std::to_string(i);
    return s;
}

struct FormTag {};
struct CycleTag {};

/// Homogeneous element of Λ^degree(n) (forms) or of the dual homology (cycles).
template <class Tag>
class Alternating {
public:
    Alternating() = default;
    Alternating(int n, int degree) : n_(n), degree_(degree) {
        if (degree < 0 || degree > n) throw degree_error("degree out of range for torus dimension");
    }

    /// Coefficient times the (possibly unsorted) basis element.
    static Alternating basis(int n, Indices raw, const Rational& coeff = 1) {
        Alternating a(n, static_cast<int>(raw.size()));
        for (int i : raw)
            if (i < 1 || i > n) throw dimension_error("index outside 1.." + std::to_string(n));
        const int sign = sort_with_sign(raw);
        if (sign == 0) return a;
        a.add_term(raw, coeff * sign);
        return a;
    }

    static Alternating from_coordinates(int n, int degree, const Vector& coords) {
        Alternating a(n, degree);
        const auto tuples = basis_tuples(n, degree);
        if (coords.size() != tuples.size()) throw dimension_error("coordinate vector length mismatch");
        for (std::size_t k = 0; k < tuples.size(); ++k) a.add_term(tuples[k], coords[k]);
        return a;
    }

    int n() const { return n_; }
    int degree() const { return degree_; }
    const std::map<Indices, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Indices& sorted) const {
        auto it = terms_.find(sorted);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Vector coordinates() const {
        const auto tuples = basis_tuples(n_, degree_);
        Vector v(tuples.size());
        for (std::size_t k = 0; k < tuples.size(); ++k) v[k] = coefficient(tuples[k]);
        return v;
    }

    void add_term(const Indices& sorted, const Rational& c) {
        if (c == 0) return;
        Rational& slot = terms_[sorted];
        slot += c;
        if (slot == 0) terms_.erase(sorted);
    }

    Alternating& operator+=(const Alternating& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Alternating& operator-=(const Alternating& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend Alternating operator+(Alternating a, const Alternating& b) { return a += b; }
    friend Alternating operator-(Alternating a, const Alternating& b) { return a -= b; }
    friend Alternating operator-(Alternating a) {
        for (auto& [k, c] : a.terms_) c = -c;
        return a;
    }
    friend Alternating operator*(const Rational& s, Alternating a) {
        if (s == 0) return Alternating(a.n_, a.degree_);
        for (auto& [k, c] : a.terms_) c *= s;
        return a;
    }

    /// Applies a coordinate map i -> image[i-1] (a relabelling into a torus of
    /// dimension `target_n`), re-sorting with signs.
    Alternating relabel(const std::vector<int>& image, int target_n) const {
        Alternating out(target_n, degree_);
        for (const auto& [k, c] : terms_) {
            Indices mapped;
            for (int i : k) mapped.push_back(image.at(static_cast<std::size_t>(i - 1)));
            const int sign = sort_with_sign(mapped);
            if (sign == 0) throw dimension_error("relabelling is not injective on a term");
            out.add_term(mapped, c * sign);
        }
        return out;
    }

    bool operator==(const Alternating& o) const = default;
    std::weak_ordering operator<=>(const Alternating& o) const = default;

private:
    void check_compatible(const Alternating& o) const {
        if (o.n_ != n_) throw dimension_error("torus dimension mismatch");
        if (o.degree_ != degree_ && !o.is_zero() && !is_zero()) throw degree_error("degree mismatch");
    }

    int n_ = 0;
    int degree_ = 0;
    std::map<Indices, Rational> terms_;
};

using Form = Alternating<FormTag>;
using Cycle = Alternating<CycleTag>;

inline Form sigma(int n, Indices raw, const Rational& coeff = 1) { return Form::basis(n, std::move(raw), coeff); }
inline Cycle torus(int n, Indices raw, const Rational& coeff = 1) { return Cycle::basis(n, std::move(raw), coeff); }

inline Form wedge(const Form& a, const Form& b) {
    if (a.n() != b.n()) throw dimension_error("wedge of forms on different tori");
    const int degree = a.degree() + b.degree();
    Form out(a.n(), std::min(degree, a.n()));
    if (degree > a.n()) return out;
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            Indices joined = ia;
            joined.insert(joined.end(), ib.begin(), ib.end());
            const int sign = sort_with_sign(joined);
            if (sign != 0) out.add_term(joined, ca * cb * sign);
        }
    return out;
}

inline Rational pair(const Form& f, const Cycle& c) {
    if (f.n() != c.n()) throw dimension_error("pairing across different tori");
    if (f.degree() != c.degree()) throw degree_error("pairing of a degree-" + std::to_string(f.degree()) +
                                                     " form with a degree-" + std::to_string(c.degree()) + " cycle");
    Rational total = 0;
    for (const auto& [k, v] : f.terms()) total += v * c.coefficient(k);
    return total;
}

/// Matrix of e∧ : Λ^k -> Λ^{k+2} in the sorted-tuple bases; k may be negative
/// (zero columns) or large (zero rows).
inline RationalMatrix wedge_map_matrix(const Form& e, int k) {
    const int n = e.n();
    const auto from = basis_tuples(n, k);
    const auto to = basis_tuples(n, k + e.degree());
    RationalMatrix m(to.size(), from.size());
    for (std::size_t c = 0; c < from.size(); ++c) {
        const Form image = wedge(e, Form::basis(n, from[c]));
        for (std::size_t r = 0; r < to.size(); ++r) m.at(r, c) = image.coefficient(to[r]);
    }
    return m;
}

/// Degree-k cycles pairing to zero with every listed form, in Λ_k coordinates.
inline Subspace annihilator(int n, int k, const std::vector<Form>& forms) {
    std::vector<Vector> rows;
    for (const Form& f : forms) {
        if (f.n() != n) throw dimension_error("form on a different torus");
        if (f.degree() != k && !f.is_zero()) throw degree_error("annihilator form of wrong degree");
        rows.push_back(f.is_zero() ? zero_vector(binomial(n, k)) : f.coordinates());
    }
    return kernel_basis(RationalMatrix::from_rows(rows, binomial(n, k)));
}

inline std::vector<Cycle> cycles_of(int n, int k, const Subspace& s) {
    std::vector<Cycle> out;
    for (const Vector& v : s.basis()) out.push_back(Cycle::from_coordinates(n, k, v));
    return out;
}

namespace detail {

inline std::string render_terms(const std::map<Indices, Rational>& terms, char letter, bool spaced) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += spaced ? (c < 0 ? " - " : " + ") : (c < 0 ? "-" : "+");
        }
        if (mag != 1) out += format_rational(mag) + "*";
        out += k.empty() ? std::string("1") : std::string(1, letter) + index_string(k);
        first = false;
    }
    return out;
}

/// Parses an optional exact coefficient: integer, p/q or terminating decimal.
inline Rational parse_rational(std::string_view text) {
    if (text.empty()) throw parse_error("empty number");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    auto digits = [&](std::size_t& p) {
        std::size_t start = p;
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
        return std::string(text.substr(start, p - start));
    };
    std::string whole = digits(pos);
    Rational value;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::string den = digits(pos);
        if (whole.empty() || den.empty() || pos != text.size()) throw parse_error("malformed fraction '" + std::string(text) + "'");
        if (Integer(den) == 0) throw parse_error("zero denominator");
        value = Rational(Integer(whole), Integer(den));
    } else if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::string frac = digits(pos);
        if ((whole.empty() && frac.empty()) || pos != text.size())
            throw parse_error("malformed decimal '" + std::string(text) + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value = Rational(Integer(whole.empty() ? "0" : whole)) + Rational(Integer(frac.empty() ? "0" : frac), scale);
    } else {
        if (whole.empty() || pos != text.size()) throw parse_error("malformed number '" + std::string(text) + "'");
        value = Rational(Integer(whole));
    }
    return negative ? Rational(-value) : value;
}

template <class T>
T parse_alternating(std::string_view text, int n, char letter) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw parse_error("empty expression");
    if (s == "0") return T(n, 0);
    std::vector<std::pair<Indices, Rational>> terms;
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!terms.empty()) {
            throw parse_error("expected '+' or '-' in '" + s + "'");
        }
        std::size_t coef_end = s.find(letter, pos);
        if (coef_end == std::string::npos) throw parse_error("expected '" + std::string(1, letter) + "' in '" + s + "'");
        Rational coeff = 1;
        if (coef_end > pos) {
            std::string c = s.substr(pos, coef_end - pos);
            if (c.back() == '*') c.pop_back();
            coeff = parse_rational(c);
        }
        pos = coef_end + 1;
        Indices idx;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) idx.push_back(s[pos++] - '0');
        if (idx.empty()) throw parse_error("missing indices after '" + std::string(1, letter) + "'");
        terms.emplace_back(idx, coeff * sign);
    }
    const int degree = static_cast<int>(terms.front().first.size());
    T out(n, degree);
    for (auto& [idx, c] : terms) {
        if (static_cast<int>(idx.size()) != degree) throw parse_error("inhomogeneous expression '" + s + "'");
        Indices sorted = idx;
        if (sort_with_sign(sorted) == 0) throw parse_error("repeated index in '" + s + "'");
        out += T::basis(n, idx, c);
    }
    return out;
}

}  // namespace detail

/// "s24", "-s13 - s24"; `spaced = false` yields "-s13-s24".
inline std::string to_string(const Form& f, bool spaced = true) { return detail::render_terms(f.terms(), 's', spaced); }
inline std::string to_string(const Cycle& c, bool spaced = true) { return detail::render_terms(c.terms(), 'L', spaced); }

/// Grammar: term ([+-] term)*, term = [coef[*]] s<digits>; "0" is the zero form.
inline Form parse_form(std::string_view text, int n) { return detail::parse_alternating<Form>(text, n, 's'); }
inline Cycle parse_cycle(std::string_view text, int n) { return detail::parse_alternating<Cycle>(text, n, 'L'); }

/// Poincaré dual of the coordinate torus L_I in T^n: the form pairing to ±1 with
/// the complementary coordinates, i.e. σ_{complement(I)}.
inline Form poincare_dual(const Cycle& t) {
    if (t.terms().size() != 1) throw degree_error("Poincaré dual is only provided for a single coordinate torus");
    const auto& [idx, c] = *t.terms().begin();
    Indices comp;
    for (int i = 1; i <= t.n(); ++i)
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) comp.push_back(i);
    Indices all = idx;
    all.insert(all.end(), comp.begin(), comp.end());
    const int sign = sort_with_sign(all);
    return Form::basis(t.n(), comp, c * sign);
}

}  // namespace lexseq
