#pragma once

// One degree of a Mayer–Vietoris sequence solved on presentations:
//
//   H_n(A∩A') --(i,j)--> H_n(A) ⊕ H_n(A') --k-l--> H_n(Y) --∂--> H_{n-1}(A∩A') --(i,j)--> ...
//
// H_n(Y) is presented by the labels of A and A' modulo their own relations and
// i(x) = j(x) for every x, plus one caller-declared generator per basis vector
// of ker (i,j)_{n-1}. Boundary lifts are never invented here.

#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/labels.hpp"

namespace lexseq {

/// A generator of H_n(Y) whose boundary is a known cycle of A∩A'.
struct DeclaredLift {
    GeneratorLabel label;
    int degree = 0;
    Combination boundary;
};

/// An identity lhs = rhs holding in some stage's homology, possibly only
/// modulo the listed classes.
struct Relation {
    std::string stage;
    int degree = 0;
    Combination lhs;
    Combination rhs;
    std::vector<Combination> modulus;
    bool retired = false;  // both sides already vanish in the stage's homology
};

inline std::string render(const Relation& r) {
    std::string s = render(r.lhs) + " = " + render(r.rhs);
    if (!r.modulus.empty()) {
        s += "  (mod <";
        for (std::size_t k = 0; k < r.modulus.size(); ++k) s += (k ? ", " : "") + render(r.modulus[k]);
        s += ">)";
    }
    if (r.retired) s += "  [retired]";
    return s;
}

struct MVProblem {
    std::string stage;
    int degree = 0;
    LabeledSpace inter, a, a_prime;              // degree n
    LabeledSpace inter_low, a_low, a_prime_low;  // degree n-1
    LabelMap i, j, i_low, j_low;
    std::vector<DeclaredLift> lifts;
};

struct MVSolution {
    LabeledSpace homology;
    std::vector<Relation> ledger;
    std::vector<DeclaredLift> boundary_generators;
    std::size_t rank_ij = 0;      // rank of (i,j)_n on homology classes
    std::size_t rank_ij_low = 0;  // rank of (i,j)_{n-1}
    std::size_t kernel_low = 0;   // dim ker (i,j)_{n-1}
    bool exact = false;           // exactness audit outcome
};

namespace detail {

struct PairMap {
    RationalMatrix stacked;  // (|A| + |A'|) x |A∩A'|, columns (i(x), j(x))
    Subspace relations;      // R_A ⊕ R_A'
};

inline Subspace stacked_relations(const LabeledSpace& a, const LabeledSpace& b) {
    const std::size_t n = a.size() + b.size();
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
    return Subspace::span(n, rel);
}

inline PairMap pair_map(const std::string& stage, const LabeledSpace& inter, const LabeledSpace& a,
                        const LabeledSpace& b, const LabelMap& i, const LabelMap& j) {
    const RationalMatrix mi = map_matrix(i, inter, a);
    const RationalMatrix mj = map_matrix(j, inter, b);
    RationalMatrix stacked(a.size() + b.size(), inter.size());
    for (std::size_t c = 0; c < inter.size(); ++c) {
        for (std::size_t r = 0; r < a.size(); ++r) stacked.at(r, c) = mi.at(r, c);
        for (std::size_t r = 0; r < b.size(); ++r) stacked.at(a.size() + r, c) = mj.at(r, c);
    }
    PairMap pm{stacked, stacked_relations(a, b)};
    for (const Vector& r : inter.relations().basis())
        if (!pm.relations.contains(stacked * r))
            throw inconsistent_model(stage + ": (i,j) does not respect the relation " +
                                     render(inter.combination(r)) + " = 0 in degree " +
                                     std::to_string(inter.degree()));
    return pm;
}

/// Rank of the induced map on quotients.
inline std::size_t induced_rank(const PairMap& pm) {
    std::vector<Vector> all = pm.relations.basis();
    for (const Vector& v : pm.stacked.column_list()) all.push_back(v);
    return Subspace::span(pm.relations.ambient_dim(), all).dim() - pm.relations.dim();
}

/// {x : (i,j)(x) vanishes in H(A) ⊕ H(A')}, as a subspace of the formal span.
inline Subspace formal_kernel(const PairMap& pm) {
    const RationalMatrix q = quotient_projection(pm.relations, greedy_complement(pm.relations));
    return kernel_basis(q * pm.stacked);
}

}  // namespace detail

inline MVSolution solve_mv(const MVProblem& p) {
    if (p.inter.degree() != p.degree || p.a.degree() != p.degree || p.a_prime.degree() != p.degree)
        throw degree_error(p.stage + ": degree-" + std::to_string(p.degree) + " spaces expected");
    MVSolution sol;

    const detail::PairMap top = detail::pair_map(p.stage, p.inter, p.a, p.a_prime, p.i, p.j);
    sol.rank_ij = detail::induced_rank(top);

    const detail::PairMap low = detail::pair_map(p.stage, p.inter_low, p.a_low, p.a_prime_low, p.i_low, p.j_low);
    sol.rank_ij_low = detail::induced_rank(low);
    const Subspace kernel = detail::formal_kernel(low);
    sol.kernel_low = kernel.dim() - p.inter_low.relations().dim();

    // Declared lifts must have boundaries that form a basis of ker (i,j)_{n-1}.
    std::vector<Vector> spanned = p.inter_low.relations().basis();
    for (const DeclaredLift& lift : p.lifts) {
        if (lift.degree != p.degree)
            throw degree_error(p.stage + ": lift " + display(lift.label) + " declared for degree " +
                               std::to_string(lift.degree));
        const Vector b = p.inter_low.coordinates(lift.boundary);
        if (!kernel.contains(b))
            throw underdetermined_boundary(p.stage + ": boundary of " + display(lift.label) + " = " +
                                           render(lift.boundary) + " is not in ker (i,j) in degree " +
                                           std::to_string(p.degree - 1));
        spanned.push_back(b);
    }
    const std::size_t spanned_dim = Subspace::span(p.inter_low.size(), spanned).dim();
    if (spanned_dim != p.inter_low.relations().dim() + p.lifts.size())
        throw underdetermined_boundary(p.stage + ": declared boundaries in degree " + std::to_string(p.degree - 1) +
                                       " are linearly dependent");
    if (spanned_dim != kernel.dim())
        throw underdetermined_boundary(p.stage + ": declared lifts span " + std::to_string(p.lifts.size()) +
                                       " of " + std::to_string(sol.kernel_low) + " dimensions of ker (i,j) in degree " +
                                       std::to_string(p.degree - 1));

    // Formal presentation on A ⊔ A' ⊔ lifts.
    const std::size_t na = p.a.size(), nb = p.a_prime.size(), nl = p.lifts.size();
    const std::size_t total = na + nb + nl;
    std::vector<Vector> rel;
    for (const Vector& v : top.relations.basis()) {
        Vector w = zero_vector(total);
        std::copy(v.begin(), v.end(), w.begin());
        rel.push_back(w);
    }
    for (std::size_t c = 0; c < p.inter.size(); ++c) {
        Vector w = zero_vector(total);
        for (std::size_t r = 0; r < na; ++r) w[r] = top.stacked.at(r, c);
        for (std::size_t r = 0; r < nb; ++r) w[na + r] = -top.stacked.at(na + r, c);
        rel.push_back(w);
    }
    const std::size_t unmerged_rank = total - Subspace::span(total, rel).dim();

    // Merge labels that name the same class on both sides.
    std::vector<GeneratorLabel> formal = p.a.labels();
    formal.insert(formal.end(), p.a_prime.labels().begin(), p.a_prime.labels().end());
    for (const DeclaredLift& lift : p.lifts) formal.push_back(lift.label);
    std::vector<GeneratorLabel> merged;
    std::map<GeneratorLabel, std::size_t> where;
    std::vector<std::size_t> slot(total);
    for (std::size_t k = 0; k < total; ++k) {
        auto [it, fresh] = where.emplace(formal[k], merged.size());
        if (fresh) merged.push_back(formal[k]);
        slot[k] = it->second;
    }
    std::vector<Vector> merged_rel;
    for (const Vector& v : rel) {
        Vector w = zero_vector(merged.size());
        for (std::size_t k = 0; k < total; ++k) w[slot[k]] += v[k];
        merged_rel.push_back(w);
    }
    const std::size_t msize = merged.size();
    sol.homology = LabeledSpace(p.degree, std::move(merged), Subspace::span(msize, merged_rel));
    if (sol.homology.rank() != unmerged_rank) {
        std::string names;
        std::vector<bool> seen(msize, false);
        for (std::size_t k = 0; k < total; ++k) {
            if (seen[slot[k]]) names += " " + display(formal[k]);
            seen[slot[k]] = true;
        }
        throw inconsistent_model(p.stage + ": identifying same-named labels changes the rank (from " +
                                 std::to_string(unmerged_rank) + " to " + std::to_string(sol.homology.rank()) +
                                 "); shared labels:" + names);
    }

    sol.exact = sol.homology.rank() == p.a.rank() + p.a_prime.rank() - sol.rank_ij + sol.kernel_low &&
                p.lifts.size() == sol.kernel_low;
    if (!sol.exact) throw inconsistent_model(p.stage + ": exactness audit failed in degree " + std::to_string(p.degree));

    for (const auto& x : p.inter.labels()) {
        Relation r;
        r.stage = p.stage;
        r.degree = p.degree;
        if (auto it = p.i.find(x); it != p.i.end()) r.lhs = it->second;
        if (auto it = p.j.find(x); it != p.j.end()) r.rhs = it->second;
        r.retired = sol.homology.vanishes(r.lhs) && sol.homology.vanishes(r.rhs) && !(r.lhs.is_zero() && r.rhs.is_zero());
        sol.ledger.push_back(std::move(r));
    }
    sol.boundary_generators = p.lifts;
    return sol;
}

/// Equality closure of a ledger: single-label equalities are merged
/// union-find style; everything else is kept as an affine relation.
struct EqualityClass {
    std::vector<GeneratorLabel> members;  // in order of first appearance
    bool zero = false;                    // the class also equals 0
};

struct RelationClosure {
    std::vector<EqualityClass> classes;
    std::vector<Relation> affine;

    /// Class containing `label`, if the label occurs in any single-label equality.
    const EqualityClass* class_of(const GeneratorLabel& label) const {
        for (const auto& c : classes)
            for (const auto& m : c.members)
                if (m == label) return &c;
        return nullptr;
    }
};

namespace detail {

inline std::optional<GeneratorLabel> single_label(const Combination& c) {
    if (c.terms().size() == 1 && c.terms().begin()->second == 1) return c.terms().begin()->first;
    return std::nullopt;
}

}  // namespace detail

/// Throws contradiction_error when the ledger forces a nonzero combination of
/// `surviving` labels to vanish (x = x + c with c surviving).
inline RelationClosure relation_closure(const std::vector<Relation>& ledger,
                                        const std::vector<GeneratorLabel>& surviving = {}) {
    std::vector<GeneratorLabel> labels;
    std::map<GeneratorLabel, std::size_t> index;
    auto intern = [&](const GeneratorLabel& l) {
        auto [it, fresh] = index.emplace(l, labels.size());
        if (fresh) labels.push_back(l);
        return it->second;
    };
    for (const Relation& r : ledger) {
        for (const auto& [l, c] : r.lhs.terms()) intern(l);
        for (const auto& [l, c] : r.rhs.terms()) intern(l);
        for (const auto& m : r.modulus)
            for (const auto& [l, c] : m.terms()) intern(l);
    }
    for (const auto& l : surviving) intern(l);

    // Linear consistency against the surviving labels.
    const std::size_t n = labels.size();
    auto vec = [&](const Combination& c) {
        Vector v = zero_vector(n);
        for (const auto& [l, k] : c.terms()) v[index.at(l)] += k;
        return v;
    };
    std::vector<Vector> rel;
    for (const Relation& r : ledger) {
        rel.push_back(vec(r.lhs - r.rhs));
        for (const auto& m : r.modulus) rel.push_back(vec(m));
    }
    const Subspace r_space = Subspace::span(n, rel);
    std::vector<Vector> surv;
    for (const auto& l : surviving) surv.push_back(unit_vector(n, index.at(l)));
    const Subspace s_space = Subspace::span(n, surv);
    if ((r_space + s_space).dim() < r_space.dim() + s_space.dim()) {
        for (const Relation& r : ledger) {
            const Vector d = vec(r.lhs - r.rhs);
            if (!s_space.contains(d) || is_zero(d)) continue;
            throw contradiction_error("ledger entry " + render(r) + " kills a surviving generator");
        }
        throw contradiction_error("ledger forces a relation among surviving generators");
    }

    // Union-find over labels plus a sentinel for 0.
    const std::size_t zero = n;
    std::vector<std::size_t> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a == zero || (b != zero && a > b)) std::swap(a, b);
        parent[b] = a;
    };
    std::vector<bool> touched(n, false);
    RelationClosure out;
    for (const Relation& r : ledger) {
        auto l = detail::single_label(r.lhs);
        auto rr = detail::single_label(r.rhs);
        const bool lz = r.lhs.is_zero(), rz = r.rhs.is_zero();
        if (l && rr) {
            unite(index.at(*l), index.at(*rr));
            touched[index.at(*l)] = touched[index.at(*rr)] = true;
        } else if (l && rz) {
            unite(zero, index.at(*l));
            touched[index.at(*l)] = true;
        } else if (rr && lz) {
            unite(zero, index.at(*rr));
            touched[index.at(*rr)] = true;
        } else if (!(lz && rz)) {
            out.affine.push_back(r);
        }
    }
    std::map<std::size_t, std::size_t> class_slot;
    for (std::size_t k = 0; k < n; ++k) {
        if (!touched[k]) continue;
        const std::size_t root = find(k);
        const std::size_t key = find(zero) == root ? zero : root;
        auto [it, fresh] = class_slot.emplace(key, out.classes.size());
        if (fresh) out.classes.push_back(EqualityClass{{}, key == zero});
        out.classes[it->second].members.push_back(labels[k]);
    }
    return out;
}

/// Declared boundary lifts keyed by stage name ("W", "cob[0,1.5]/attach2", ...).
using LiftTable = std::map<std::string, std::vector<DeclaredLift>>;

inline std::vector<DeclaredLift> lifts_for(const LiftTable& table, const std::string& stage, int degree) {
    std::vector<DeclaredLift> out;
    if (auto it = table.find(stage); it != table.end())
        for (const auto& l : it->second)
            if (l.degree == degree) out.push_back(l);
    return out;
}

/// Exactness bookkeeping of one solved problem, kept for audits and reports.
struct MVAudit {
    std::string stage;
    int degree = 0;
    std::size_t rank_ij = 0;
    std::size_t rank_ij_low = 0;
    std::size_t kernel_low = 0;
    std::size_t rank = 0;
    bool exact = false;
};

/// Presentations of H_0, H_1, H_2 of one piece, with the ledger that built them.
struct StageHomology {
    std::string name;
    std::array<LabeledSpace, 3> h;
    std::vector<Relation> ledger;
    std::vector<DeclaredLift> lifts;
    std::vector<MVAudit> audits;

    const LabeledSpace& operator[](int d) const { return h.at(static_cast<std::size_t>(d)); }
};

/// Per-degree ingredients of a Mayer–Vietoris stage.
struct MVStageInput {
    std::string name;
    std::function<LabeledSpace(int)> inter, a, a_prime;  // must return empty spaces for degree -1
    std::function<LabelMap(const LabeledSpace&, int)> i, j;
};

inline StageHomology mv_stage(const MVStageInput& in, const LiftTable& lifts) {
    StageHomology out;
    out.name = in.name;
    for (int d = 0; d <= 2; ++d) {
        MVProblem p;
        p.stage = in.name;
        p.degree = d;
        p.inter = in.inter(d);
        p.a = in.a(d);
        p.a_prime = in.a_prime(d);
        p.inter_low = in.inter(d - 1);
        p.a_low = in.a(d - 1);
        p.a_prime_low = in.a_prime(d - 1);
        p.i = in.i(p.inter, d);
        p.j = in.j(p.inter, d);
        p.i_low = in.i(p.inter_low, d - 1);
        p.j_low = in.j(p.inter_low, d - 1);
        p.lifts = lifts_for(lifts, in.name, d);
        MVSolution sol = solve_mv(p);
        out.audits.push_back({in.name, d, sol.rank_ij, sol.rank_ij_low, sol.kernel_low, sol.homology.rank(), sol.exact});
        out.ledger.insert(out.ledger.end(), sol.ledger.begin(), sol.ledger.end());
        out.lifts.insert(out.lifts.end(), sol.boundary_generators.begin(), sol.boundary_generators.end());
        out.h[static_cast<std::size_t>(d)] = std::move(sol.homology);
    }
    return out;
}

/// Degree accessor that hands back empty spaces outside 0..2.
inline std::function<LabeledSpace(int)> degrees_of(const StageHomology& s) {
    return [&s](int d) { return d < 0 || d > 2 ? LabeledSpace(d, {}) : s[d]; };
}

}  // namespace lexseq
