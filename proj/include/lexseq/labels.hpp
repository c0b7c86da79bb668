#pragma once

// Structured generator names and homology presentations.
//
// A LabeledSpace is a presentation of one homology group: a list of named
// generators plus the subspace of relations among them in their formal span.

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/torus_forms.hpp"

namespace lexseq {

enum class Side { minus, plus };

inline char side_char(Side s) { return s == Side::minus ? '-' : '+'; }
inline Side flip(Side s) { return s == Side::minus ? Side::plus : Side::minus; }

/// Coordinate subtorus L_I lifted into the level set at `level`.
struct LevelTorus {
    Indices indices;
    Rational level;
    std::weak_ordering operator<=>(const LevelTorus&) const = default;
};

/// The circle fiber swept over L_I (I empty: the fiber itself).
struct FiberClass {
    Indices indices;
    Rational level;
    std::weak_ordering operator<=>(const FiberClass&) const = default;
};

/// Lift of a multi-term base cycle, such as (L13-L24)^3.5.
struct CombinationLift {
    Cycle cycle;
    Rational level;
    std::weak_ordering operator<=>(const CombinationLift&) const = default;
};

/// Coordinate subtorus of the critical torus at `lambda`.
struct FixedTorus {
    Indices indices;
    Rational lambda;
    std::weak_ordering operator<=>(const FixedTorus&) const = default;
};

/// Section of the normal sphere bundle over the coordinate subtorus I.
struct SphereSection {
    Indices indices;
    Rational lambda;
    Side side;
    std::weak_ordering operator<=>(const SphereSection&) const = default;
};

/// Sphere-bundle fiber swept over I (I empty: a single fiber).
struct SphereFiber {
    Indices indices;
    Rational lambda;
    Side side;
    std::weak_ordering operator<=>(const SphereFiber&) const = default;
};

/// Torus swept by a loop under the gradient flow and closed up by the gluing.
/// `fiber` marks loops running along the circle coordinate.
struct GradientTorus {
    Indices indices;
    bool fiber = false;
    std::weak_ordering operator<=>(const GradientTorus&) const = default;
};

/// Invariant sphere joining the critical tori at `from` and `to`.
struct InvariantSphere {
    Rational from;
    Rational to;
    std::weak_ordering operator<=>(const InvariantSphere&) const = default;
};

struct Loop {
    std::string name;
    std::weak_ordering operator<=>(const Loop&) const = default;
};

enum class Site { level, fixed, sphere };

/// Degree-zero class of a connected piece.
struct Point {
    Site site;
    Rational value;
    Side side = Side::minus;
    std::weak_ordering operator<=>(const Point&) const = default;
};

using GeneratorLabel = std::variant<LevelTorus, FiberClass, CombinationLift, FixedTorus, SphereSection, SphereFiber,
                                    GradientTorus, InvariantSphere, Loop, Point>;

inline std::string display(const GeneratorLabel& label) {
    struct Visitor {
        std::string operator()(const LevelTorus& l) const {
            return "L" + index_string(l.indices) + "^" + format_rational(l.level);
        }
        std::string operator()(const FiberClass& f) const {
            return "L" + index_string(f.indices) + "F^" + format_rational(f.level);
        }
        std::string operator()(const CombinationLift& c) const {
            return "(" + to_string(c.cycle, false) + ")^" + format_rational(c.level);
        }
        std::string operator()(const FixedTorus& z) const {
            return "Z" + index_string(z.indices) + "^" + format_rational(z.lambda);
        }
        std::string operator()(const SphereSection& z) const {
            return "Z" + index_string(z.indices) + "^" + format_rational(z.lambda) + side_char(z.side);
        }
        std::string operator()(const SphereFiber& z) const {
            return "Z" + index_string(z.indices) + "F^" + format_rational(z.lambda) + side_char(z.side);
        }
        std::string operator()(const GradientTorus& t) const {
            std::string s = "T";
            for (std::size_t k = 0; k < t.indices.size(); ++k) s += (k ? "+" : "") + std::to_string(t.indices[k]);
            if (t.fiber) s += t.indices.empty() ? "F" : "+F";
            return s;
        }
        std::string operator()(const InvariantSphere& g) const {
            const auto digit = [](const Rational& q) { return is_integer(q) && q >= 0 && q <= 9; };
            if (digit(g.from) && digit(g.to)) return "G" + format_rational(g.from) + format_rational(g.to);
            return "G(" + format_rational(g.from) + "," + format_rational(g.to) + ")";
        }
        std::string operator()(const Loop& l) const { return l.name; }
        std::string operator()(const Point& p) const {
            switch (p.site) {
                case Site::level: return "pt^" + format_rational(p.value);
                case Site::fixed: return "ptZ^" + format_rational(p.value);
                case Site::sphere: return "ptZ^" + format_rational(p.value) + side_char(p.side);
            }
            return "pt";
        }
    };
    return std::visit(Visitor{}, label);
}

/// Kind name used by rule tables and reports.
inline std::string kind_name(const GeneratorLabel& label) {
    static const char* names[] = {"LevelTorus",    "FiberClass",    "CombinationLift", "FixedTorus", "SphereSection",
                                  "SphereFiber",   "GradientTorus", "InvariantSphere", "Loop",       "Point"};
    return names[label.index()];
}

/// Level (or critical value) a label lives at, when it has one.
inline std::optional<Rational> label_level(const GeneratorLabel& label) {
    if (auto* p = std::get_if<LevelTorus>(&label)) return p->level;
    if (auto* p = std::get_if<FiberClass>(&label)) return p->level;
    if (auto* p = std::get_if<CombinationLift>(&label)) return p->level;
    if (auto* p = std::get_if<Point>(&label); p && p->site == Site::level) return p->value;
    return std::nullopt;
}

/// Formal linear combination of generator labels.
class Combination {
public:
    Combination() = default;
    Combination(const GeneratorLabel& label, const Rational& c = 1) { add(label, c); }

    const std::map<GeneratorLabel, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const GeneratorLabel& label, const Rational& c) {
        if (c == 0) return;
        Rational& slot = terms_[label];
        slot += c;
        if (slot == 0) terms_.erase(label);
    }

    Combination& operator+=(const Combination& o) {
        for (const auto& [l, c] : o.terms_) add(l, c);
        return *this;
    }
    Combination& operator-=(const Combination& o) {
        for (const auto& [l, c] : o.terms_) add(l, -c);
        return *this;
    }
    friend Combination operator+(Combination a, const Combination& b) { return a += b; }
    friend Combination operator-(Combination a, const Combination& b) { return a -= b; }
    friend Combination operator-(const Combination& a) { return Combination() - a; }
    friend Combination operator*(const Rational& s, const Combination& a) {
        Combination out;
        for (const auto& [l, c] : a.terms_) out.add(l, s * c);
        return out;
    }

    bool operator==(const Combination&) const = default;

private:
    std::map<GeneratorLabel, Rational> terms_;
};

/// Human form: "L13^1.5 - Z24^2", "0" for the empty combination.
inline std::string render(const Combination& c) {
    if (c.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [label, coeff] : c.terms()) {
        const Rational mag = coeff < 0 ? Rational(-coeff) : coeff;
        if (first)
            out += coeff < 0 ? "-" : "";
        else
            out += coeff < 0 ? " - " : " + ";
        if (mag != 1) out += format_rational(mag) + "*";
        out += display(label);
        first = false;
    }
    return out;
}

/// Single-token form for machine reports: "1*L13^1.5;-1*Z24^2".
inline std::string render_machine(const Combination& c) {
    if (c.is_zero()) return "0";
    std::string out;
    for (const auto& [label, coeff] : c.terms()) {
        if (!out.empty()) out += ";";
        out += format_rational(coeff) + "*" + display(label);
    }
    return out;
}

namespace detail {

inline Indices digits_of(const std::string& s) {
    Indices out;
    for (char ch : s) out.push_back(ch - '0');
    return out;
}

/// Sorts the parsed indices, returning the permutation sign; rejects repeats.
inline int signed_sort(Indices& idx, const std::string& text) {
    const int sign = sort_with_sign(idx);
    if (sign == 0) throw parse_error("repeated index in label '" + text + "'");
    return sign;
}

}  // namespace detail

/// Parses a label name, returning the orientation sign picked up by sorting
/// its indices (so "L31^7" is -L13^7). `n` is the base torus dimension.
inline std::pair<int, GeneratorLabel> parse_label(const std::string& text, int n) {
    static const std::string lv = R"((-?\d+(?:\.\d+)?(?:/\d+)?))";
    static const std::regex point_re("^pt\\^" + lv + "$");
    static const std::regex point_z_re("^ptZ\\^" + lv + "([+-]?)$");
    static const std::regex fiber_re("^L(\\d*)F\\^" + lv + "$");
    static const std::regex level_re("^L(\\d+)\\^" + lv + "$");
    static const std::regex comb_re("^\\((.+)\\)\\^" + lv + "$");
    static const std::regex sfiber_re("^Z(\\d*)F\\^" + lv + "([+-])$");
    static const std::regex ssection_re("^Z(\\d+)\\^" + lv + "([+-])$");
    static const std::regex fixed_re("^Z(\\d+)\\^" + lv + "$");
    static const std::regex grad_re("^T((?:\\d\\+)*\\d)?(\\+?F)?$");
    static const std::regex sphere_short_re("^G(\\d)(\\d)$");
    static const std::regex sphere_long_re("^G\\(" + lv + "," + lv + "\\)$");
    static const std::regex loop_re("^[a-z][a-z0-9_]*$");

    auto num = [](const std::string& s) { return detail::parse_rational(s); };
    auto side = [](const std::string& s) { return s == "-" ? Side::minus : Side::plus; };
    auto check_range = [&](const Indices& idx) {
        for (int i : idx)
            if (i < 1 || i > n) throw parse_error("index outside 1.." + std::to_string(n) + " in label '" + text + "'");
    };

    std::smatch m;
    if (std::regex_match(text, m, point_re)) return {1, Point{Site::level, num(m[1]), Side::minus}};
    if (std::regex_match(text, m, point_z_re)) {
        if (m[2].length() == 0) return {1, Point{Site::fixed, num(m[1]), Side::minus}};
        return {1, Point{Site::sphere, num(m[1]), side(m[2])}};
    }
    if (std::regex_match(text, m, fiber_re)) {
        Indices idx = detail::digits_of(m[1]);
        check_range(idx);
        const int s = detail::signed_sort(idx, text);
        return {s, FiberClass{idx, num(m[2])}};
    }
    if (std::regex_match(text, m, level_re)) {
        Indices idx = detail::digits_of(m[1]);
        check_range(idx);
        const int s = detail::signed_sort(idx, text);
        return {s, LevelTorus{idx, num(m[2])}};
    }
    if (std::regex_match(text, m, comb_re)) {
        Cycle c = parse_cycle(m[1].str(), n);
        return {1, CombinationLift{c, num(m[2])}};
    }
    if (std::regex_match(text, m, sfiber_re)) {
        Indices idx = detail::digits_of(m[1]);
        check_range(idx);
        const int s = detail::signed_sort(idx, text);
        return {s, SphereFiber{idx, num(m[2]), side(m[3])}};
    }
    if (std::regex_match(text, m, ssection_re)) {
        Indices idx = detail::digits_of(m[1]);
        check_range(idx);
        const int s = detail::signed_sort(idx, text);
        return {s, SphereSection{idx, num(m[2]), side(m[3])}};
    }
    if (std::regex_match(text, m, fixed_re)) {
        Indices idx = detail::digits_of(m[1]);
        check_range(idx);
        const int s = detail::signed_sort(idx, text);
        return {s, FixedTorus{idx, num(m[2])}};
    }
    if (text.size() > 1 && std::regex_match(text, m, grad_re)) {
        Indices idx;
        for (char ch : m[1].str())
            if (ch != '+') idx.push_back(ch - '0');
        check_range(idx);
        Indices sorted = idx;
        if (sort_with_sign(sorted) == 0) throw parse_error("repeated index in label '" + text + "'");
        return {1, GradientTorus{sorted, m[2].length() > 0}};
    }
    if (std::regex_match(text, m, sphere_short_re)) return {1, InvariantSphere{num(m[1]), num(m[2])}};
    if (std::regex_match(text, m, sphere_long_re)) return {1, InvariantSphere{num(m[1]), num(m[2])}};
    if (std::regex_match(text, m, loop_re)) return {1, Loop{text}};
    throw parse_error("unrecognised generator label '" + text + "'");
}

/// Whitespace-separated combination: ["-"]term (("+"|"-") term)*, each term
/// "[coef*]label". Operators must stand alone because labels such as ZF^1+
/// end in a sign; a leading minus may be glued to the first term.
inline Combination parse_combination(const std::string& text, int n) {
    std::vector<std::string> tokens;
    {
        std::string cur;
        for (char ch : text) {
            if (std::isspace(static_cast<unsigned char>(ch))) {
                if (!cur.empty()) tokens.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) tokens.push_back(cur);
    }
    if (tokens.empty()) throw parse_error("empty combination");
    if (tokens.size() == 1 && tokens[0] == "0") return {};
    Combination out;
    int pending = 1;
    bool expect_term = true;
    for (const std::string& tok : tokens) {
        if (tok == "+" || tok == "-") {
            if (expect_term && !out.is_zero()) throw parse_error("doubled operator in '" + text + "'");
            if (expect_term) {
                pending *= tok == "-" ? -1 : 1;
            } else {
                pending = tok == "-" ? -1 : 1;
            }
            expect_term = true;
            continue;
        }
        if (!expect_term) throw parse_error("missing operator between terms in '" + text + "'");
        std::string body = tok;
        int sign = pending;
        if (body.size() > 1 && body[0] == '-' && body[1] != '-') {
            sign = -sign;
            body.erase(0, 1);
        }
        Rational coeff = 1;
        if (auto star = body.find('*'); star != std::string::npos) {
            coeff = detail::parse_rational(body.substr(0, star));
            body.erase(0, star + 1);
        }
        auto [s, label] = parse_label(body, n);
        out.add(label, coeff * sign * s);
        pending = 1;
        expect_term = false;
    }
    if (expect_term) throw parse_error("dangling operator in '" + text + "'");
    return out;
}

/// One homology group as named generators modulo a relation subspace.
class LabeledSpace {
public:
    LabeledSpace() = default;
    LabeledSpace(int degree, std::vector<GeneratorLabel> labels)
        : degree_(degree), labels_(std::move(labels)), relations_(labels_.size()) {
        index_labels();
    }
    LabeledSpace(int degree, std::vector<GeneratorLabel> labels, Subspace relations)
        : degree_(degree), labels_(std::move(labels)), relations_(std::move(relations)) {
        if (relations_.ambient_dim() != labels_.size()) throw dimension_error("relation space does not match label count");
        index_labels();
    }

    int degree() const { return degree_; }
    const std::vector<GeneratorLabel>& labels() const { return labels_; }
    const Subspace& relations() const { return relations_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t rank() const { return labels_.size() - relations_.dim(); }

    std::optional<std::size_t> index_of(const GeneratorLabel& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool has(const GeneratorLabel& label) const { return index_.count(label) > 0; }

    Vector coordinates(const Combination& c) const {
        Vector v = zero_vector(labels_.size());
        for (const auto& [label, coeff] : c.terms()) {
            auto k = index_of(label);
            if (!k) throw dimension_error("label " + display(label) + " is not a generator here");
            v[*k] += coeff;
        }
        return v;
    }

    Combination combination(const Vector& v) const {
        if (v.size() != labels_.size()) throw dimension_error("coordinate vector length mismatch");
        Combination c;
        for (std::size_t k = 0; k < v.size(); ++k) c.add(labels_[k], v[k]);
        return c;
    }

    bool vanishes(const Combination& c) const { return relations_.contains(coordinates(c)); }
    bool equal(const Combination& a, const Combination& b) const { return vanishes(a - b); }

    /// Earliest labels that form a basis of the quotient.
    std::vector<std::size_t> generator_indices() const { return greedy_complement(relations_); }

    std::vector<GeneratorLabel> generators() const {
        std::vector<GeneratorLabel> out;
        for (std::size_t k : generator_indices()) out.push_back(labels_[k]);
        return out;
    }

    /// Quotient coordinates (in the greedy generator basis) of every label.
    RationalMatrix quotient_matrix() const { return quotient_projection(relations_, generator_indices()); }

    /// Rewrites `c` in the greedy generators.
    Combination express(const Combination& c) const {
        const auto gens = generator_indices();
        const Vector q = quotient_matrix() * coordinates(c);
        Combination out;
        for (std::size_t k = 0; k < gens.size(); ++k) out.add(labels_[gens[k]], q[k]);
        return out;
    }

    /// Relation basis rendered as combinations that vanish.
    std::vector<Combination> relation_combinations() const {
        std::vector<Combination> out;
        for (const Vector& v : relations_.basis()) out.push_back(combination(v));
        return out;
    }

private:
    void index_labels() {
        index_.clear();
        for (std::size_t k = 0; k < labels_.size(); ++k)
            if (!index_.emplace(labels_[k], k).second)
                throw inconsistent_model("duplicate generator label " + display(labels_[k]));
    }

    int degree_ = 0;
    std::vector<GeneratorLabel> labels_;
    Subspace relations_;
    std::map<GeneratorLabel, std::size_t> index_;
};

/// Labels of `a` followed by those of `b`, relations side by side.
inline LabeledSpace disjoint_union(const LabeledSpace& a, const LabeledSpace& b) {
    if (a.degree() != b.degree()) throw degree_error("disjoint union of different degrees");
    std::vector<GeneratorLabel> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    const std::size_t n = labels.size();
    std::vector<Vector> rel;
    for (const Vector& v : a.relations().basis()) {
        Vector w = zero_vector(n);
        std::copy(v.begin(), v.end(), w.begin());
        rel.push_back(w);
    }
    for (const Vector& v : b.relations().basis()) {
        Vector w = zero_vector(n);
        std::copy(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(a.size()));
        rel.push_back(w);
    }
    return LabeledSpace(a.degree(), std::move(labels), Subspace::span(n, rel));
}

/// Where each label of a source space goes, as a combination in some target.
using LabelMap = std::map<GeneratorLabel, Combination>;

/// Matrix (target.size x source.size) of a label map; unmapped labels go to 0.
inline RationalMatrix map_matrix(const LabelMap& map, const LabeledSpace& source, const LabeledSpace& target) {
    RationalMatrix m(target.size(), source.size());
    for (std::size_t c = 0; c < source.size(); ++c) {
        auto it = map.find(source.labels()[c]);
        if (it == map.end()) continue;
        const Vector col = target.coordinates(it->second);
        for (std::size_t r = 0; r < target.size(); ++r) m.at(r, c) = col[r];
    }
    return m;
}

inline LabelMap identity_map(const LabeledSpace& s) {
    LabelMap m;
    for (const auto& l : s.labels()) m.emplace(l, Combination(l));
    return m;
}

/// Applies a signed relabelling label -> (sign, label') to a whole presentation.
using Relabel = std::function<std::pair<int, GeneratorLabel>(const GeneratorLabel&)>;

inline Combination relabel(const Combination& c, const Relabel& f) {
    Combination out;
    for (const auto& [l, coeff] : c.terms()) {
        auto [s, image] = f(l);
        out.add(image, coeff * s);
    }
    return out;
}

inline LabeledSpace relabel(const LabeledSpace& s, const Relabel& f) {
    std::vector<GeneratorLabel> labels;
    std::vector<int> signs;
    for (const auto& l : s.labels()) {
        auto [sign, image] = f(l);
        labels.push_back(image);
        signs.push_back(sign);
    }
    std::vector<Vector> rel;
    for (Vector v : s.relations().basis()) {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] *= signs[k];
        rel.push_back(v);
    }
    return LabeledSpace(s.degree(), std::move(labels), Subspace::span(s.size(), rel));
}

/// Same label set and the same relation subspace, regardless of label order.
inline bool same_presentation(const LabeledSpace& a, const LabeledSpace& b) {
    if (a.degree() != b.degree() || a.size() != b.size()) return false;
    for (const auto& l : b.labels())
        if (!a.has(l)) return false;
    std::vector<Vector> moved;
    for (const Vector& v : b.relations().basis()) moved.push_back(a.coordinates(b.combination(v)));
    return Subspace::span(a.size(), moved) == a.relations();
}

}  // namespace lexseq
