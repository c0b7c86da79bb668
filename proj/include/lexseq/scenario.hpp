#pragma once

// Scenario files: line-oriented "key = value" records describing one semifree
// circle action by its moment intervals, Euler classes and gluing.
//
//   name = mcduff
//   base_dim = 4
//   range = 0 7
//   split = 3.5
//   symmetry = reverse            # or "none"
//   sample 1.5 = -s42             # Euler class of the level at a regular value
//   critical 1 = L13              # critical torus value and image cycle
//   gluing = 3 4 1 2              # output coordinate k takes input coordinate p_k
//   twist = 0 0 0                 # optional, extra clutching winding per eigenline
//   lift W = (T1+3, 2, L1^0 + L3^0 - L1^3.5 - L3^3.5)

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "lexseq/cobordism.hpp"
#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/labels.hpp"
#include "lexseq/mayer_vietoris.hpp"
#include "lexseq/torus_forms.hpp"

namespace lexseq {

struct CriticalLevel {
    Rational lambda;
    Indices image;
    bool operator==(const CriticalLevel&) const = default;
};

struct Scenario {
    std::string name = "scenario";
    int base_dim = 0;
    Rational lo, hi, split;
    bool symmetric = false;
    std::map<Rational, Form> samples;
    std::vector<CriticalLevel> criticals;  // sorted by value
    std::vector<int> gluing;
    std::vector<long> twists;
    LiftTable lifts;

    /// Reflection s ↦ lo + hi - s of the moment interval.
    Rational mirror(const Rational& s) const { return lo + hi - s; }
    const Form& euler_at(const Rational& s) const { return samples.at(s); }
    std::optional<CriticalLevel> critical_in(const Rational& a, const Rational& b) const {
        for (const auto& c : criticals)
            if (a < c.lambda && c.lambda < b) return c;
        return std::nullopt;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
    const Rational q = parse_rational(s);
    if (!is_integer(q)) throw parse_error(what + " must be an integer, got '" + s + "'");
    return static_cast<int>(numerator(q));
}

inline Indices image_of(const std::string& text, int n) {
    const Cycle c = parse_cycle(text, n);
    if (c.terms().size() != 1 || c.terms().begin()->second != 1 || c.degree() != 2)
        throw parse_error("critical image must be a single torus L<i><j>, got '" + text + "'");
    return c.terms().begin()->first;
}

inline Indices mirror_indices(const Indices& idx, int n, int& sign) {
    Indices out;
    for (int i : idx) out.push_back(n + 1 - i);
    sign = sort_with_sign(out);
    return out;
}

}  // namespace detail

/// Rejects scenarios whose data cannot describe a semifree action of the
/// modelled kind. Throws inconsistent_scenario.
inline void validate(const Scenario& s) {
    auto fail = [&](const std::string& what) { throw inconsistent_scenario(s.name + ": " + what); };
    if (s.base_dim < 2) fail("base_dim must be at least 2");
    if (!(s.lo < s.split && s.split < s.hi)) fail("need lo < split < hi");
    for (Rational v : {s.lo, s.split, s.hi})
        if (!s.samples.count(v)) fail("missing sample at " + format_rational(v));
    for (const auto& [v, e] : s.samples) {
        if (v < s.lo || v > s.hi) fail("sample " + format_rational(v) + " outside the range");
        if (e.n() != s.base_dim) fail("Euler class at " + format_rational(v) + " lives on the wrong torus");
        CircleBundle check(s.base_dim, e, v);
    }
    for (std::size_t k = 0; k < s.criticals.size(); ++k) {
        const auto& c = s.criticals[k];
        if (!(s.lo < c.lambda && c.lambda < s.hi)) fail("critical value " + format_rational(c.lambda) + " outside the range");
        if (s.samples.count(c.lambda)) fail("critical value " + format_rational(c.lambda) + " is also a sample");
        if (k > 0 && !(s.criticals[k - 1].lambda < c.lambda)) fail("critical values must be distinct and increasing");
    }
    // Every regular interval carries a sample, and samples on one interval
    // see the same bundle.
    std::vector<Rational> cuts{s.lo};
    for (const auto& c : s.criticals) cuts.push_back(c.lambda);
    cuts.push_back(s.hi);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        std::optional<Form> first;
        for (const auto& [v, e] : s.samples) {
            if (!(cuts[k] <= v && v <= cuts[k + 1])) continue;
            if (first && *first != e) fail("Euler class changes inside a regular interval at " + format_rational(v));
            first = e;
        }
        if (!first) fail("regular interval (" + format_rational(cuts[k]) + "," + format_rational(cuts[k + 1]) + ") has no sample");
    }
    // Jump across each critical value: the Poincaré dual of the image torus.
    for (const auto& c : s.criticals) {
        std::optional<Rational> below, above;
        for (const auto& [v, e] : s.samples) {
            if (v < c.lambda) below = v;
            if (v > c.lambda && !above) above = v;
        }
        const Form jump = s.euler_at(*above) - s.euler_at(*below);
        const Form dual = poincare_dual(Cycle::basis(s.base_dim, c.image));
        if (jump != dual && jump != -dual)
            fail("Euler class jump " + to_string(jump) + " at " + format_rational(c.lambda) + " is not ±" + to_string(dual));
        normal_chern(s.euler_at(*below), s.euler_at(*above), c.image);
    }
    if (s.gluing.size() != static_cast<std::size_t>(s.base_dim)) fail("gluing must list " + std::to_string(s.base_dim) + " coordinates");
    std::vector<int> seen(s.gluing.size(), 0);
    for (int p : s.gluing) {
        if (p < 1 || p > s.base_dim) fail("gluing coordinate " + std::to_string(p) + " out of range");
        ++seen[static_cast<std::size_t>(p - 1)];
    }
    if (std::count(seen.begin(), seen.end(), 1) != s.base_dim) fail("gluing is not a permutation");
    for (int k = 1; k <= s.base_dim; ++k)
        if (s.gluing[static_cast<std::size_t>(s.gluing[static_cast<std::size_t>(k - 1)] - 1)] != k) fail("gluing is not an involution");
    // The gluing identifies the two ends, so their bundles must match.
    {
        Form moved(s.base_dim, 2);
        for (const auto& [idx, c] : s.euler_at(s.lo).terms()) {
            Indices img;
            for (int i : idx) img.push_back(s.gluing[static_cast<std::size_t>(i - 1)]);
            moved += sigma(s.base_dim, img, c);
        }
        if (moved != s.euler_at(s.hi) && !(s.euler_at(s.lo).is_zero() && s.euler_at(s.hi).is_zero()))
            fail("gluing does not carry the Euler class at " + format_rational(s.lo) + " to the one at " + format_rational(s.hi));
    }
    if (s.symmetric) {
        for (const auto& [v, e] : s.samples) {
            auto it = s.samples.find(s.mirror(v));
            if (it == s.samples.end()) fail("symmetry: no sample at " + format_rational(s.mirror(v)));
            Form m(s.base_dim, 2);
            for (const auto& [idx, c] : e.terms()) {
                int sign = 1;
                Indices img = detail::mirror_indices(idx, s.base_dim, sign);
                m += sigma(s.base_dim, img, sign * c);
            }
            // The reflection also reverses the action, which negates the Euler class.
            if (m != -it->second) fail("symmetry: Euler class at " + format_rational(v) + " does not mirror");
        }
        for (const auto& c : s.criticals) {
            int sign = 1;
            const Indices img = detail::mirror_indices(c.image, s.base_dim, sign);
            const bool found = std::any_of(s.criticals.begin(), s.criticals.end(), [&](const CriticalLevel& o) {
                return o.lambda == s.mirror(c.lambda) && o.image == img;
            });
            if (!found) fail("symmetry: no mirror of the critical torus at " + format_rational(c.lambda));
        }
    }
}

inline Scenario parse_scenario(std::istream& in) {
    Scenario s;
    static const std::regex lift_re(R"(^\(\s*([^,]+?)\s*,\s*(-?\d+)\s*,\s*(.*?)\s*\)$)");
    std::vector<std::pair<std::string, std::string>> deferred;  // lifts need base_dim first
    bool have_range = false, have_split = false, have_gluing = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw parse_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::vector<std::string> key = detail::words(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (key.empty()) throw parse_error(where + "missing key");
        try {
            if (key[0] == "name" && key.size() == 1) {
                s.name = value;
            } else if (key[0] == "base_dim" && key.size() == 1) {
                s.base_dim = detail::parse_int(value, "base_dim");
            } else if (key[0] == "range" && key.size() == 1) {
                const auto w = detail::words(value);
                if (w.size() != 2) throw parse_error("range needs two values");
                s.lo = detail::parse_rational(w[0]);
                s.hi = detail::parse_rational(w[1]);
                have_range = true;
            } else if (key[0] == "split" && key.size() == 1) {
                s.split = detail::parse_rational(value);
                have_split = true;
            } else if (key[0] == "symmetry" && key.size() == 1) {
                if (value != "reverse" && value != "none") throw parse_error("symmetry must be 'reverse' or 'none'");
                s.symmetric = value == "reverse";
            } else if (key[0] == "sample" && key.size() == 2) {
                if (s.base_dim == 0) throw parse_error("base_dim must come before samples");
                const Rational v = detail::parse_rational(key[1]);
                Form e = value == "0" ? Form(s.base_dim, 2) : parse_form(value, s.base_dim);
                if (e.is_zero()) e = Form(s.base_dim, 2);
                if (!s.samples.emplace(v, e).second) throw parse_error("duplicate sample " + key[1]);
            } else if (key[0] == "critical" && key.size() == 2) {
                if (s.base_dim == 0) throw parse_error("base_dim must come before critical levels");
                s.criticals.push_back({detail::parse_rational(key[1]), detail::image_of(value, s.base_dim)});
            } else if (key[0] == "gluing" && key.size() == 1) {
                for (const auto& w : detail::words(value)) s.gluing.push_back(detail::parse_int(w, "gluing entry"));
                have_gluing = true;
            } else if (key[0] == "twist" && key.size() == 1) {
                for (const auto& w : detail::words(value)) s.twists.push_back(detail::parse_int(w, "twist"));
            } else if (key[0] == "lift" && key.size() == 2) {
                deferred.emplace_back(key[1], value);
            } else {
                throw parse_error("unknown key '" + detail::trim(line.substr(0, eq)) + "'");
            }
        } catch (const parse_error& e) {
            const std::string msg = e.what();
            throw parse_error(msg.rfind("line ", 0) == 0 ? msg : where + msg);
        }
    }
    if (s.base_dim == 0) throw parse_error("missing base_dim");
    if (!have_range) throw parse_error("missing range");
    if (!have_split) throw parse_error("missing split");
    if (!have_gluing) throw parse_error("missing gluing");
    for (const auto& [stage, text] : deferred) {
        std::smatch m;
        if (!std::regex_match(text, m, lift_re)) throw parse_error("lift must read (label, degree, boundary): '" + text + "'");
        auto [sign, label] = parse_label(m[1].str(), s.base_dim);
        if (sign != 1) throw parse_error("lift label must be written in sorted form: '" + m[1].str() + "'");
        const int degree = detail::parse_int(m[2].str(), "lift degree");
        const Combination boundary = parse_combination(m[3].str(), s.base_dim);
        s.lifts[stage].push_back({label, degree, boundary});
    }
    std::sort(s.criticals.begin(), s.criticals.end(),
              [](const CriticalLevel& a, const CriticalLevel& b) { return a.lambda < b.lambda; });
    validate(s);
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open scenario file " + path);
    return parse_scenario(in);
}

/// McDuff's semifree circle action on a six-manifold with four critical tori.
inline const char* mcduff_text() {
    return R"(name = mcduff
base_dim = 4
range = 0 7
split = 3.5
symmetry = reverse
sample 0 = 0
sample 1.5 = -s42
sample 3.5 = -s31 - s42
sample 5.5 = -s31
sample 7 = 0
critical 1 = L13
critical 2 = L24
critical 5 = L13
critical 6 = L24
gluing = 3 4 1 2
lift cob[0,1.5]/attach2 = (L24^0, 2, ZF^1+)
lift cob[5.5,7]/attach1 = (L13^7, 2, -ZF^6-)
lift W = (T1+3, 2, L1^0 + L3^0 - L1^3.5 - L3^3.5)
lift W = (T2+4, 2, L2^0 + L4^0 - L2^3.5 - L4^3.5)
lift W = (G61, 2, LF^0)
lift W = (gamma, 1, -pt^0 + pt^3.5)
)";
}

/// T^4 x S^1 with a trivial action on the interval: W = T^5 x S^1.
inline const char* trivial_text() {
    return R"(name = trivial
base_dim = 4
range = 0 7
split = 3.5
symmetry = reverse
sample 0 = 0
sample 3.5 = 0
sample 7 = 0
gluing = 1 2 3 4
lift W = (T1, 2, L1^0 - L1^3.5)
lift W = (T2, 2, L2^0 - L2^3.5)
lift W = (T3, 2, L3^0 - L3^3.5)
lift W = (T4, 2, L4^0 - L4^3.5)
lift W = (TF, 2, LF^0 - LF^3.5)
lift W = (gamma, 1, -pt^0 + pt^3.5)
)";
}

inline Scenario mcduff() { return parse_scenario(std::string(mcduff_text())); }
inline Scenario trivial_scenario() { return parse_scenario(std::string(trivial_text())); }

}  // namespace lexseq
