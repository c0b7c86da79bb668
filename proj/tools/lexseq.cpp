// lexseq: homology of circle-bundle level sets, cobordisms and glued manifolds.
//
//   lexseq gysin --euler "-s31 - s42" --degree 2
//   lexseq cobordism --from 1.5 --to 3.5 [--scenario FILE]
//   lexseq run scenarios/mcduff.scn --emit-ledger
//   lexseq mcduff --format machine --check

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lexseq.hpp"

namespace {

using namespace lexseq;

enum class Format { text, machine };

struct Options {
    std::string format = "text";
    bool ledger = false;
    bool check = false;
    Format fmt() const { return format == "machine" ? Format::machine : Format::text; }
};

void print_space(std::ostream& os, const std::string& stage, const LabeledSpace& h, Format f) {
    const int d = h.degree();
    if (f == Format::machine) {
        os << "RANK " << stage << ":H" << d << " " << h.rank() << "\n";
        for (const auto& g : h.generators()) os << "GEN " << stage << ":H" << d << " " << display(g) << "\n";
        for (const auto& r : h.relation_combinations()) os << "REL " << stage << " " << render_machine(r) << " 0\n";
        return;
    }
    os << "H" << d << " rank " << h.rank() << ":";
    for (const auto& g : h.generators()) os << " " << display(g);
    os << "\n";
    for (const auto& r : h.relation_combinations()) os << "  " << render(r) << " = 0\n";
}

void print_ledger(std::ostream& os, const std::vector<Relation>& ledger, Format f) {
    for (const auto& r : ledger) {
        if (is_trivial(r)) continue;
        if (f == Format::machine)
            os << machine_relation(r) << "\n";
        else
            os << "  [" << r.stage << " H" << r.degree << "] " << render(r) << "\n";
    }
}

int report(const PipelineResult& res, const Options& o) {
    if (o.fmt() == Format::machine)
        render_machine(std::cout, res.report, o.ledger, o.check);
    else
        render_text(std::cout, res.report, o.ledger, o.check);
    return o.check && !res.report.all_checks_pass() ? 1 : 0;
}

Scenario pick_scenario(const std::string& path) { return path.empty() ? mcduff() : load_scenario(path); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homology of semifree circle actions from moment-map level sets"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    app.add_flag("--emit-ledger", o.ledger, "print every relation of every stage");
    app.add_flag("--check", o.check, "run the invariant audits and fail on any violation");

    auto* gysin = app.add_subcommand("gysin", "homology of a circle bundle over T^n");
    std::string euler = "0", level = "0";
    int n = 4, degree = -1;
    gysin->add_option("--euler", euler, "Euler class, e.g. \"-s31 - s42\"");
    gysin->add_option("--base-dim", n, "dimension of the base torus")->check(CLI::Range(1, 9));
    gysin->add_option("--degree", degree, "homology degree (all of 0..2 when omitted)");
    gysin->add_option("--level", level, "moment value used in labels");

    auto* cob = app.add_subcommand("cobordism", "one cobordism between consecutive samples of a scenario");
    std::string from, to, cob_scenario;
    cob->add_option("--from", from, "lower sample value")->required();
    cob->add_option("--to", to, "upper sample value")->required();
    cob->add_option("--scenario", cob_scenario, "scenario file (built-in McDuff scenario when omitted)");

    auto* run_cmd = app.add_subcommand("run", "full pipeline on a scenario file");
    std::string path;
    run_cmd->add_option("scenario", path, "scenario file")->required()->check(CLI::ExistingFile);

    auto* mc = app.add_subcommand("mcduff", "full pipeline on the built-in McDuff scenario");
    bool trivial = false;
    mc->add_flag("--trivial", trivial, "use the built-in product scenario T^5 x S^1 instead");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gysin) {
            const Form e = euler == "0" ? Form(n, 2) : parse_form(euler, n);
            const CircleBundle p(n, e, detail::parse_rational(level));
            const std::string stage = level_name(p.level);
            if (o.fmt() == Format::text) std::cout << stage << "  e = " << (e.is_zero() ? "0" : to_string(e)) << "\n";
            for (int d = 0; d <= 2; ++d)
                if (degree < 0 || degree == d) print_space(std::cout, stage, bundle_homology(p, d), o.fmt());
            if (degree > 2) bundle_homology(p, degree);
            return 0;
        }
        if (*cob) {
            const Scenario sc = pick_scenario(cob_scenario);
            const Rational a = detail::parse_rational(from), b = detail::parse_rational(to);
            const PipelineResult res = run(sc);
            for (const auto& c : res.cobordisms) {
                if (c.a != a || c.b != b) continue;
                if (o.fmt() == Format::text) std::cout << c.name() << "\n";
                for (int d = 0; d <= 2; ++d) print_space(std::cout, c.name(), c[d], o.fmt());
                if (o.fmt() == Format::text) std::cout << "relations\n";
                print_ledger(std::cout, c.homology.ledger, o.fmt());
                if (o.check) {
                    const bool ok = projection_audit(c.homology.ledger, sc.base_dim);
                    std::cout << (o.fmt() == Format::machine ? "CHECK projection:" : "check projection:") << c.name()
                              << " " << (ok ? "pass" : "fail") << "\n";
                    return ok ? 0 : 1;
                }
                return 0;
            }
            std::cerr << "no cobordism " << cobordism_name(a, b) << " between consecutive samples\n";
            return 2;
        }
        if (*run_cmd) return report(run(load_scenario(path)), o);
        if (*mc) return report(run(trivial ? trivial_scenario() : mcduff()), o);
    } catch (const stage_error& e) {
        std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
        return 2;
    } catch (const lexseq::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
