#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <string>

#include "backorb/compare.hpp"
#include "backorb/family.hpp"
#include "backorb/kms.hpp"
#include "backorb/orbit.hpp"
#include "backorb/parse.hpp"
#include "backorb/verify.hpp"

using json = nlohmann::json;
using namespace backorb;

namespace {

struct CommonOpts {
    std::string map_text;
    std::string point_text = "0";
    int depth = -1;
    double beta = 0.0;
    int truncation = 40;
    double tol = 1e-9;
    int precision_bits = 53;
    std::string format = "json";
    std::uint64_t seed = 12345;
    int jobs = 1;
    int m = 3;
    std::string map_a, map_b;
};

Tolerances make_tols(const CommonOpts& o) {
    Tolerances t;
    t.dedup_tol = o.tol;
    t.precision_bits = o.precision_bits;
    validate(t);
    return t;
}

int default_depth(int degree) {
    // Largest depth with degree^depth <= 4096.
    int d = 0;
    long long v = 1;
    while (v * degree <= 4096) {
        v *= degree;
        ++d;
    }
    return d;
}

void emit(const json& j, const CommonOpts& o, const std::vector<std::string>& csv_lines) {
    if (o.format == "csv") {
        for (const auto& line : csv_lines) std::cout << line << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

json point_json(const SpherePoint& p) { return format_point(p); }

json bseq_json(const BSequence& b) {
    json a = json::array();
    for (long long v : b) a.push_back(v);
    return a;
}

int cmd_critical(const CommonOpts& o) {
    RationalMap map = parse_map(o.map_text, make_tols(o));
    RiemannHurwitzReport rh = map.verify_riemann_hurwitz();
    json j;
    j["command"] = "critical";
    j["map"] = print_map(map);
    j["degree"] = map.degree();
    json pts = json::array();
    std::vector<std::string> csv{"point,branch_index"};
    for (const auto& cp : rh.points) {
        pts.push_back({{"point", point_json(cp.location)}, {"branch_index", cp.branch_index}});
        csv.push_back(format_point(cp.location) + "," + std::to_string(cp.branch_index));
    }
    j["points"] = pts;
    j["riemann_hurwitz"] = {{"sum", rh.sum_e_minus_1}, {"expected", rh.expected}, {"pass", rh.pass}};
    emit(j, o, csv);
    return 0;
}

int cmd_fiber(const CommonOpts& o) {
    RationalMap map = parse_map(o.map_text, make_tols(o));
    SpherePoint y = parse_point(o.point_text);
    Fiber f = map.fiber(y);
    json j;
    j["command"] = "fiber";
    j["map"] = print_map(map);
    j["target"] = point_json(y);
    j["total_index"] = f.total_index();
    json ms = json::array();
    std::vector<std::string> csv{"point,branch_index"};
    for (const auto& m : f.members) {
        ms.push_back({{"point", point_json(m.location)}, {"branch_index", m.branch_index}});
        csv.push_back(format_point(m.location) + "," + std::to_string(m.branch_index));
    }
    j["members"] = ms;
    emit(j, o, csv);
    return 0;
}

int cmd_orbit(const CommonOpts& o) {
    RationalMap map = parse_map(o.map_text, make_tols(o));
    SpherePoint z = parse_point(o.point_text);
    int depth = o.depth >= 0 ? o.depth : default_depth(map.degree());
    OrbitLevels lv = backward_levels(map, z, depth, o.jobs);
    json j;
    j["command"] = "orbit";
    j["map"] = print_map(map);
    j["point"] = point_json(z);
    j["depth"] = depth;
    j["tol"] = map.tols().dedup_tol;
    j["counts"] = bseq_json(lv.counts);
    json levels = json::array();
    for (const auto& level : lv.levels) {
        json one = json::array();
        for (const auto& p : level) one.push_back(point_json(p));
        levels.push_back(one);
    }
    j["levels"] = levels;
    std::vector<std::string> csv{"n,count"};
    for (size_t n = 0; n < lv.counts.size(); ++n)
        csv.push_back(std::to_string(n) + "," + std::to_string(lv.counts[n]));
    emit(j, o, csv);
    return 0;
}

int cmd_kms(const CommonOpts& o) {
    RationalMap map = parse_map(o.map_text, make_tols(o));
    SpherePoint z = parse_point(o.point_text);
    int depth = o.depth >= 0 ? o.depth : 6;
    KmsParams params = KmsParams::create(o.beta, o.truncation, map);
    CSequence cs = c_sequence(map, z, params, depth + 1);
    RecoveredB rec = recover_bseq(cs.values, o.beta);
    BSequence reference = backward_levels(map, z, depth, o.jobs).counts;
    Normalizer norm = normalizer(map, z, params);

    json j;
    j["command"] = "kms";
    j["map"] = print_map(map);
    j["point"] = point_json(z);
    j["beta"] = o.beta;
    j["truncation"] = o.truncation;
    j["depth"] = depth;
    j["m"] = norm.m;
    j["m_enclosure"] = {norm.lower, norm.upper};
    j["tail_bound"] = params.tail_bound;
    j["c_sequence"] = cs.values;
    BSequence recovered(rec.values.begin(), rec.values.begin() + depth + 1);
    j["recovered_b"] = bseq_json(recovered);
    j["reference_b"] = bseq_json(reference);
    j["max_residual"] = rec.max_residual;
    j["cross_checked"] = cs.cross_checked;
    if (cs.cross_checked) j["route_discrepancy"] = cs.max_route_discrepancy;
    if (o.beta <= map.degree())
        j["warning"] = "beta is inside the convergence domain (beta > log N) but outside the "
                       "stated regime beta > N";
    std::vector<std::string> csv{"n,c_n,recovered_b,reference_b"};
    for (size_t n = 0; n < cs.values.size(); ++n) {
        std::string line = std::to_string(n) + "," + format_double(cs.values[n]);
        if (n < recovered.size()) {
            line += "," + std::to_string(recovered[n]) + "," + std::to_string(reference[n]);
        } else {
            line += ",,";
        }
        csv.push_back(line);
    }
    emit(j, o, csv);
    return 0;
}

int cmd_family(const CommonOpts& o) {
    FamilyParameter fp = solve_cm(o.m);
    CriticalOrbitReport orbit_rep = verify_critical_orbit(o.m);
    int depth = o.depth >= 0 ? o.depth : o.m + 2;
    BSequence b = family_bseq(o.m, depth, make_tols(o));

    json j;
    j["command"] = "family";
    j["m"] = fp.m;
    json coeffs = json::array();
    for (const auto& c : fp.f.coeffs()) coeffs.push_back(c.real());
    j["coefficients"] = coeffs;
    j["c"] = fp.c;
    j["bracket"] = {fp.bracket_lo, fp.bracket_hi};
    j["residual"] = fp.residual;
    j["orbit_residuals"] = orbit_rep.forward_abs;
    j["orbit_pass"] = orbit_rep.pass;
    j["b_sequence"] = bseq_json(b);
    std::vector<std::string> csv{"key,value"};
    csv.push_back("m," + std::to_string(fp.m));
    csv.push_back("c," + format_double(fp.c));
    csv.push_back("bracket_lo," + format_double(fp.bracket_lo));
    csv.push_back("bracket_hi," + format_double(fp.bracket_hi));
    for (size_t n = 0; n < b.size(); ++n)
        csv.push_back("b_" + std::to_string(n) + "," + std::to_string(b[n]));
    emit(j, o, csv);
    return 0;
}

int cmd_compare(const CommonOpts& o) {
    Tolerances tols = make_tols(o);
    RationalMap a = parse_map(o.map_a, tols);
    RationalMap b = parse_map(o.map_b, tols);
    int depth = o.depth >= 0 ? o.depth : 6;
    OrbitInvariant ia = invariant(a, depth, "a");
    OrbitInvariant ib = invariant(b, depth, "b");
    Verdict v = compare_invariants(ia, ib);

    auto inv_json = [](const OrbitInvariant& inv) {
        json entries = json::array();
        for (const auto& e : inv.entries)
            entries.push_back({{"point", format_point(e.critical_point)},
                               {"branch_index", e.branch_index},
                               {"counts", bseq_json(e.counts)}});
        return entries;
    };
    json j;
    j["command"] = "compare";
    j["map_a"] = print_map(a);
    j["map_b"] = print_map(b);
    j["depth"] = depth;
    j["invariant_a"] = inv_json(ia);
    j["invariant_b"] = inv_json(ib);
    j["verdict"] = v.equal_multiset ? "EQUAL" : "DISTINGUISHED";
    j["set_verdict"] = v.equal_set ? "EQUAL" : "DISTINGUISHED";
    std::vector<std::string> csv;
    csv.push_back("verdict," + std::string(v.equal_multiset ? "EQUAL" : "DISTINGUISHED"));
    if (!v.equal_multiset) {
        j["witness"] = {{"sequence", bseq_json(v.witness)},
                        {"closest", bseq_json(v.witness_best)},
                        {"first_differing_index", v.witness_index},
                        {"side", v.witness_side}};
        std::string w = "witness,";
        for (size_t i = 0; i < v.witness.size(); ++i)
            w += (i ? " " : "") + std::to_string(v.witness[i]);
        csv.push_back(w);
        csv.push_back("first_differing_index," + std::to_string(v.witness_index));
    }
    emit(j, o, csv);
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    auto results = run_verification(o.seed, o.jobs, make_tols(o));
    bool all = true;
    json checks = json::array();
    std::vector<std::string> csv{"name,pass"};
    for (const auto& r : results) {
        all = all && r.pass;
        checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        csv.push_back(r.name + "," + (r.pass ? "true" : "false"));
    }
    json j;
    j["command"] = "verify";
    j["seed"] = o.seed;
    j["checks"] = checks;
    j["pass"] = all;
    emit(j, o, csv);
    return all ? 0 : 1;
}

void add_common(CLI::App* sub, CommonOpts& o, bool with_map, bool with_point) {
    if (with_map) sub->add_option("--map", o.map_text, "map expression, e.g. \"z^2 - 1\"")->required();
    if (with_point) sub->add_option("--point", o.point_text, "sphere point: a+bi or inf");
    sub->add_option("--tol", o.tol, "chordal dedup tolerance");
    sub->add_option("--precision-bits", o.precision_bits, "root-finder working precision (53-64)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "seed for property sampling");
    sub->add_option("--jobs", o.jobs, "fiber-solve parallelism (output order unaffected)")
        ->check(CLI::Range(1, 256));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"backward-orbit invariants of rational maps on the Riemann sphere"};
    app.require_subcommand(1);
    CommonOpts o;

    CLI::App* critical = app.add_subcommand("critical", "branched points and Riemann-Hurwitz check");
    add_common(critical, o, true, false);

    CLI::App* fiber = app.add_subcommand("fiber", "preimages of a point with branch indices");
    add_common(fiber, o, true, true);

    CLI::App* orbit = app.add_subcommand("orbit", "backward-orbit levels and the b-sequence");
    add_common(orbit, o, true, true);
    orbit->add_option("--depth", o.depth, "number of backward levels");

    CLI::App* kms = app.add_subcommand("kms", "KMS trace sequence c_n and b-recovery");
    add_common(kms, o, true, true);
    kms->add_option("--beta", o.beta, "inverse temperature (> log N)")->required();
    kms->add_option("--truncation", o.truncation, "series truncation K")->check(CLI::Range(1, 10000));
    kms->add_option("--depth", o.depth, "largest n reported");

    CLI::App* family = app.add_subcommand("family", "quadratic family parameter c_m");
    add_common(family, o, false, false);
    family->add_option("--m", o.m, "period of the critical orbit")->required()->check(CLI::Range(2, 13));
    family->add_option("--depth", o.depth, "b-sequence depth");

    CLI::App* compare = app.add_subcommand("compare", "compare backward-orbit invariants of two maps");
    add_common(compare, o, false, false);
    compare->add_option("--map-a", o.map_a, "first map")->required();
    compare->add_option("--map-b", o.map_b, "second map")->required();
    compare->add_option("--depth", o.depth, "truncation depth");

    CLI::App* verify = app.add_subcommand("verify", "run the full reproduction suite");
    add_common(verify, o, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (critical->parsed()) return cmd_critical(o);
        if (fiber->parsed()) return cmd_fiber(o);
        if (orbit->parsed()) return cmd_orbit(o);
        if (kms->parsed()) return cmd_kms(o);
        if (family->parsed()) return cmd_family(o);
        if (compare->parsed()) return cmd_compare(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
