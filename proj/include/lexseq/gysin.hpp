#pragma once

// Low-degree homology of a principal circle bundle P -> T^n read off the Gysin
// sequence. Dualising H^p(T^n) --e∧--> H^{p+2}(T^n) gives, in degree d,
//
//   H_d(P) = ann(im e∧: Λ^{d-2} -> Λ^d)        lifted base cycles
//          ⊕ Λ_{d-1} / ann(ker e∧: Λ^{d-1} -> Λ^{d+1})   fibers swept over (d-1)-cycles

#include <string>
#include <utility>
#include <vector>

#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/labels.hpp"
#include "lexseq/torus_forms.hpp"

namespace lexseq {

struct CircleBundle {
    int n = 0;
    Form euler;
    Rational level;

    CircleBundle() = default;
    CircleBundle(int n_, Form euler_, Rational level_ = 0) : n(n_), euler(std::move(euler_)), level(std::move(level_)) {
        if (euler.n() != n) throw dimension_error("Euler class lives on a different torus");
        if (!euler.is_zero() && euler.degree() != 2) throw degree_error("Euler class must have degree 2");
        if (euler.is_zero()) euler = Form(n, 2);
        for (const auto& [idx, c] : euler.terms())
            if (!is_integer(c)) throw inconsistent_scenario("Euler class " + to_string(euler) + " is not integral");
    }
};

/// Label for a lifted base cycle: a plain torus when the cycle is one basis
/// torus with coefficient 1, otherwise a named combination.
inline GeneratorLabel lift_label(const Cycle& c, const Rational& level) {
    if (c.terms().size() == 1 && c.terms().begin()->second == 1) return LevelTorus{c.terms().begin()->first, level};
    return CombinationLift{c, level};
}

/// Base cycles of degree d that lift to P, as an echelon basis.
inline std::vector<Cycle> liftable_cycles(const CircleBundle& p, int d) {
    const RationalMatrix w = wedge_map_matrix(p.euler, d - 2);
    std::vector<Form> image;
    const Subspace im = image_basis(w);
    for (const Vector& v : im.basis()) image.push_back(Form::from_coordinates(p.n, d, v));
    return cycles_of(p.n, d, annihilator(p.n, d, image));
}

/// Degree-(d-1) cycles whose swept fiber dies in H_d(P).
inline Subspace dead_fiber_cycles(const CircleBundle& p, int d) {
    const Subspace ker = kernel_basis(wedge_map_matrix(p.euler, d - 1));
    std::vector<Form> forms;
    for (const Vector& v : ker.basis()) forms.push_back(Form::from_coordinates(p.n, d - 1, v));
    return annihilator(p.n, d - 1, forms);
}

inline LabeledSpace bundle_homology(const CircleBundle& p, int d) {
    if (d > 2) throw unsupported_degree("circle-bundle homology is provided in degrees 0..2 only, got " + std::to_string(d));
    if (d < 0) return LabeledSpace(d, {});
    if (d == 0) return LabeledSpace(0, {Point{Site::level, p.level, Side::minus}});

    std::vector<GeneratorLabel> labels;
    for (const Cycle& c : liftable_cycles(p, d)) labels.push_back(lift_label(c, p.level));
    const std::size_t lifts = labels.size();
    const auto fiber_basis = basis_tuples(p.n, d - 1);
    for (const Indices& idx : fiber_basis) labels.push_back(FiberClass{idx, p.level});

    std::vector<Vector> rel;
    const Subspace dead = dead_fiber_cycles(p, d);
    for (const Vector& v : dead.basis()) {
        Vector w = zero_vector(labels.size());
        std::copy(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(lifts));
        rel.push_back(w);
    }
    const std::size_t total = labels.size();
    return LabeledSpace(d, std::move(labels), Subspace::span(total, rel));
}

/// Pairs {i,j} over which the bundle is trivial, so that L_ij lifts.
inline std::vector<std::pair<int, int>> liftable_tori(const CircleBundle& p) {
    std::vector<std::pair<int, int>> out;
    for (const Indices& idx : basis_tuples(p.n, 2))
        if (pair(p.euler, Cycle::basis(p.n, idx)) == 0) out.emplace_back(idx[0], idx[1]);
    return out;
}

/// FiberClass(i) in the degree-2 presentation, reduced modulo its relations
/// (zero exactly when the swept fiber dies).
inline Vector fiber_class_image(const CircleBundle& p, int i) {
    if (i < 1 || i > p.n) throw dimension_error("fiber index outside 1.." + std::to_string(p.n));
    const LabeledSpace h2 = bundle_homology(p, 2);
    const Vector unit = h2.coordinates(Combination(FiberClass{{i}, p.level}));
    return h2.relations().reduce(unit);
}

/// Base projection of a label as a cycle of T^n (fibers project to zero).
/// Returns nothing for labels that do not live over the base.
inline std::optional<Cycle> base_projection(const GeneratorLabel& label, int n, int degree) {
    if (auto* l = std::get_if<LevelTorus>(&label)) return Cycle::basis(n, l->indices);
    if (auto* c = std::get_if<CombinationLift>(&label)) return c->cycle;
    if (std::holds_alternative<FiberClass>(label) || std::holds_alternative<SphereFiber>(label)) return Cycle(n, degree);
    if (auto* z = std::get_if<FixedTorus>(&label)) return Cycle::basis(n, z->indices);
    if (auto* z = std::get_if<SphereSection>(&label)) return Cycle::basis(n, z->indices);
    if (std::holds_alternative<Point>(label)) return Cycle::basis(n, {});
    return std::nullopt;
}

/// Matrix of the projection to H_d(T^n) on the formal span of a presentation.
inline RationalMatrix projection_matrix(const LabeledSpace& s, int n) {
    const int d = s.degree();
    const std::size_t rows = binomial(n, d);
    RationalMatrix m(rows, s.size());
    for (std::size_t c = 0; c < s.size(); ++c) {
        auto cyc = base_projection(s.labels()[c], n, d);
        if (!cyc) throw wrong_rule("label " + display(s.labels()[c]) + " has no base projection");
        if (cyc->is_zero()) continue;
        if (cyc->degree() != d) throw degree_error("projection of " + display(s.labels()[c]) + " has the wrong degree");
        const Vector v = cyc->coordinates();
        for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = v[r];
    }
    return m;
}

}  // namespace lexseq
