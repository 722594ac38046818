#include "spine3/angles.hpp"
#include "spine3/errors.hpp"
#include "spine3/haken.hpp"
#include "spine3/json_writer.hpp"
#include "spine3/lobachevsky.hpp"
#include "spine3/nzform.hpp"
#include "spine3/thurston.hpp"
#include "spine3/triangulation.hpp"
#include "spine3/volopt.hpp"
#include "spine3/z2taut.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace spine3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    Triangulation tri;
    IncidenceTable inc;
    NZMatrix nz;
};

Loaded load(const std::string& path) {
    Loaded l;
    l.tri = parse_and_validate(read_file(path));
    l.inc = build_incidence(l.tri);
    l.nz = build_forms(l.tri, l.inc);
    return l;
}

JsonValue counts_json(const Triangulation& tri) {
    auto j = JsonValue::object();
    j.set("V", tri.vertex_count);
    j.set("E", tri.edge_count);
    j.set("F", tri.face_count);
    j.set("T", tri.tet_count);
    j.set("chi", tri.euler_characteristic());
    return j;
}

JsonValue qvec_json(const QVec& v) {
    auto a = JsonValue::array();
    for (const auto& x : v)
        a.push(rat_str(x));
    return a;
}

JsonValue dvec_json(const std::vector<double>& v) {
    auto a = JsonValue::array();
    for (double x : v)
        a.push(x);
    return a;
}

JsonValue ivec_json(const std::vector<int>& v) {
    auto a = JsonValue::array();
    for (int x : v)
        a.push(x);
    return a;
}

JsonValue complex_json(const std::complex<double>& z) {
    auto a = JsonValue::array();
    a.push(z.real());
    a.push(z.imag());
    return a;
}

JsonValue two_quad_json(const TwoQuadSolution& s) {
    auto j = JsonValue::object();
    j.set("support", ivec_json(s.support));
    j.set("partners", ivec_json(s.partners));
    j.set("vector", qvec_json(s.vector.values));
    return j;
}

JsonValue volume_report_json(const VolumeReport& rep) {
    auto j = JsonValue::object();
    j.set("volume", rep.volume);
    j.set("grad_norm_in_tas", rep.grad_norm_in_tas);
    j.set("classification", classification_name(rep.classification));
    j.set("theta", dvec_json(rep.point));
    j.set("flat_quads", ivec_json(rep.flats.flat_quads));
    j.set("flat_tets", ivec_json(rep.flats.flat_tets));
    j.set("partially_flat_tets", ivec_json(rep.flats.partially_flat_tets));
    j.set("restart_index", rep.restart_index);
    j.set("iterations", rep.iterations);
    auto flags = JsonValue::array();
    if (rep.hit_max_iterations)
        flags.push("MaxIterations");
    if (rep.near_singular)
        flags.push("NearSingular");
    j.set("flags", std::move(flags));
    return j;
}

JsonValue residual_report_json(const ResidualReport& rr) {
    auto j = JsonValue::object();
    j.set("mode", rr.mode == ResidualMode::Strict ? "strict" : "generalized");
    j.set("max_relation_residual", rr.max_relation);
    j.set("max_edge_residual", rr.max_edge);
    j.set("pass", rr.pass);
    auto prods = JsonValue::array();
    for (const auto& p : rr.edge_products)
        prods.push(complex_json(p));
    j.set("edge_products", std::move(prods));
    j.set("tet_relation_residuals", dvec_json(rr.tet_relation));
    j.set("edge_residuals", dvec_json(rr.edge));
    return j;
}

void emit(const JsonValue& j) { std::cout << j.dump(1) << "\n"; }

int cmd_validate(const std::string& file) {
    Loaded l = load(file);
    emit(counts_json(l.tri));
    return 0;
}

int cmd_report(const std::string& file) {
    Loaded l = load(file);
    auto j = counts_json(l.tri);
    auto orient = JsonValue::array();
    for (int s : l.tri.orientation)
        orient.push(s);
    j.set("orientation", std::move(orient));
    auto degs = JsonValue::array();
    for (int e = 0; e < l.tri.edge_count; ++e)
        degs.push(l.tri.edge_degree(e));
    j.set("edge_degrees", std::move(degs));
    auto links = JsonValue::array();
    for (int v = 0; v < l.tri.vertex_count; ++v)
        links.push(l.tri.vertex_link_chi(v));
    j.set("vertex_link_chi", std::move(links));
    auto inc = JsonValue::array();
    for (const auto& row : l.inc.i) {
        auto r = JsonValue::array();
        for (int x : row)
            r.push(x);
        inc.push(std::move(r));
    }
    j.set("incidence", std::move(inc));
    emit(j);
    return 0;
}

int cmd_tas(const std::string& file) {
    Loaded l = load(file);
    TASBasis basis = tas_basis(l.tri, l.inc);
    DimensionCheck dc = dimension_check(l.tri, l.inc);
    auto j = JsonValue::object();
    j.set("dim_tas", dc.actual);
    j.set("chi", l.tri.euler_characteristic());
    j.set("expected_dim", dc.expected);
    j.set("match", dc.match);
    auto b = JsonValue::array();
    for (const auto& v : basis.basis)
        b.push(qvec_json(v));
    j.set("basis", std::move(b));
    emit(j);
    return 0;
}

int cmd_sas_init(const std::string& file) {
    Loaded l = load(file);
    SasInitResult init = sas_init(l.tri, l.inc);
    DimensionCheck dc = dimension_check(l.tri, l.inc);
    SasResiduals res = sas_residuals(l.tri, l.inc, init.theta);
    auto j = JsonValue::object();
    j.set("theta", dvec_json(init.theta));
    j.set("dim_tas", dc.actual);
    j.set("chi", l.tri.euler_characteristic());
    j.set("theta_over_pi", qvec_json(init.theta_over_pi));
    j.set("used_lattice", init.used_lattice);
    j.set("max_congruence_residual", res.max());
    emit(j);
    return 0;
}

int cmd_nz_selftest(const std::string& file) {
    Loaded l = load(file);
    IdentityReport rep = pairing_identities(l.tri, l.inc, l.nz);
    ExactnessReport ex = chain_analysis(l.tri, l.inc, l.nz);
    auto j = JsonValue::object();
    auto entry = [&](const std::string& name, bool ok) {
        auto e = JsonValue::object();
        e.set("status", ok ? "ok" : "violated");
        auto viol = JsonValue::array();
        for (const auto& v : rep.violations)
            if (v.identity == name) {
                auto rec = JsonValue::object();
                auto idx = JsonValue::array();
                for (long i : v.indices)
                    idx.push(i);
                rec.set("indices", std::move(idx));
                rec.set("detail", v.detail);
                viol.push(std::move(rec));
            }
        e.set("violations", std::move(viol));
        j.set(name, std::move(e));
    };
    for (const auto& [name, ok] : rep.status)
        entry(name, ok);
    entry("BA_zero", ex.BA_zero);
    entry("im_A_eq_ker_B", ex.im_A_eq_ker_B);
    entry("B_surjective", ex.B_surjective);
    entry("B_star_injective", ex.B_star_injective);
    entry("AstarBstar_zero", ex.AstarBstar_zero);
    entry("ker_Astar_eq_im_Bstar", ex.ker_Astar_eq_im_Bstar);
    entry("isotropic", ex.isotropic);
    emit(j);
    if (!rep.all_ok() || !ex.all_ok())
        throw Error(ErrorCode::IdentityViolation, "nz-selftest found violations");
    return 0;
}

int cmd_haken(const std::string& file, bool basis, const std::string& two_quad,
              bool clusters) {
    Loaded l = load(file);
    MatchingSystems ms = matching_systems(l.tri, l.inc, l.nz);
    SolutionBases sb = solution_bases(l.tri, l.inc, l.nz);
    auto j = JsonValue::object();
    j.set("standard_rows", static_cast<long>(ms.standard.rows()));
    j.set("standard_cols", static_cast<long>(ms.standard.cols()));
    j.set("quad_rows", static_cast<long>(ms.quad.rows()));
    j.set("quad_cols", static_cast<long>(ms.quad.cols()));
    j.set("dim_sns", static_cast<long>(sb.sns_basis.size()));
    j.set("dim_tas_perp", static_cast<long>(sb.tas_perp_basis.size()));
    j.set("duality_ok", sb.duality_ok);
    if (basis) {
        auto b = JsonValue::array();
        for (const auto& v : sb.sns_basis)
            b.push(qvec_json(v));
        j.set("sns_basis", std::move(b));
        auto tp = JsonValue::array();
        for (const auto& v : sb.tas_perp_basis)
            tp.push(qvec_json(v));
        j.set("tas_perp_basis", std::move(tp));
    }
    if (!two_quad.empty()) {
        auto colon = two_quad.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "--two-quad wants <tet>:<type>");
        int tet = std::stoi(two_quad.substr(0, colon));
        int type = std::stoi(two_quad.substr(colon + 1));
        if (tet < 0 || tet >= l.tri.num_tets() || type < 0 || type > 2)
            throw Error(ErrorCode::InvalidInput, "--two-quad indices out of range");
        auto sols = two_quad_search(l.tri, ms, sb, 3 * tet + type);
        auto arr = JsonValue::array();
        for (const auto& s : sols)
            arr.push(two_quad_json(s));
        j.set("two_quad_target", 3 * tet + type);
        j.set("two_quad_solutions", std::move(arr));
    }
    if (clusters) {
        auto cs = cluster_search(l.tri, ms, sb);
        auto arr = JsonValue::array();
        for (const auto& c : cs) {
            auto cj = JsonValue::object();
            cj.set("tet", c.tet);
            cj.set("distinct_count", c.distinct_count);
            auto sols = JsonValue::array();
            for (const auto& s : c.solutions)
                sols.push(two_quad_json(s));
            cj.set("solutions", std::move(sols));
            arr.push(std::move(cj));
        }
        j.set("clusters", std::move(arr));
    }
    emit(j);
    return 0;
}

JsonValue flattening_path_json(const FlatteningPath& path) {
    auto j = JsonValue::object();
    j.set("applicable", true);
    j.set("vol_start", path.vol_start);
    j.set("vol_end", path.vol_end);
    j.set("theta_start", dvec_json(path.start));
    j.set("theta_end", dvec_json(path.end));
    auto legs = JsonValue::array();
    for (const auto& leg : path.legs) {
        auto lj = JsonValue::object();
        auto v = JsonValue::array();
        for (long x : leg.v)
            v.push(x);
        lj.set("v", std::move(v));
        lj.set("t0", leg.t0);
        lj.set("n_before", leg.n_before);
        lj.set("n_after", leg.n_after);
        lj.set("max_vol_deviation", leg.max_vol_deviation);
        legs.push(std::move(lj));
    }
    j.set("legs", std::move(legs));
    return j;
}

int cmd_maximize(const std::string& file, int restarts, std::uint64_t seed,
                 double tol, const std::string& emit_path) {
    Loaded l = load(file);
    VolOptContext ctx = make_volopt_context(l.tri, l.inc, l.nz);
    SasInitResult init = sas_init(l.tri, l.inc);
    MaximizeConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.grad_tol = tol;
    VolumeReport rep = maximize(ctx, init.theta, cfg);
    emit(volume_report_json(rep));
    if (!emit_path.empty()) {
        JsonValue pj = JsonValue::object();
        try {
            FlatteningPath path = fg_flatten(ctx, rep);
            pj = flattening_path_json(path);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotApplicable)
                throw;
            pj.set("applicable", false);
            pj.set("reason", e.what());
        }
        std::ofstream out(emit_path);
        if (!out)
            throw Error(ErrorCode::InvalidInput, "cannot write " + emit_path);
        out << pj.dump(1) << "\n";
    }
    return 0;
}

int cmd_extract(const std::string& file, int restarts, std::uint64_t seed, double tol) {
    Loaded l = load(file);
    VolOptContext ctx = make_volopt_context(l.tri, l.inc, l.nz);
    SasInitResult init = sas_init(l.tri, l.inc);
    MaximizeConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.grad_tol = tol;
    VolumeReport rep = maximize(ctx, init.theta, cfg);
    auto j = JsonValue::object();
    j.set("report", volume_report_json(rep));
    if (rep.classification == Classification::NonCritical) {
        j.set("extraction", nullptr);
        emit(j);
        return 0;
    }
    MatchingSystems ms = matching_systems(l.tri, l.inc, l.nz);
    SolutionBases sb = solution_bases(l.tri, l.inc, l.nz);
    ExtractionResult ex = classify_and_extract(ctx, rep, ms, sb);
    auto ej = JsonValue::object();
    ej.set("smooth", ex.smooth);
    if (ex.smooth) {
        auto zs = JsonValue::array();
        for (const auto& z : ex.z)
            zs.push(complex_json(z));
        ej.set("z", std::move(zs));
        ej.set("residuals", residual_report_json(ex.residual_report));
        ej.set("extraction_mismatch", ex.extraction_mismatch);
    } else {
        auto sols = JsonValue::array();
        for (const auto& s : ex.two_quad_solutions)
            sols.push(two_quad_json(s));
        ej.set("two_quad_solutions", std::move(sols));
        auto cl = JsonValue::array();
        for (const auto& c : ex.clusters) {
            auto cj = JsonValue::object();
            cj.set("tet", c.tet);
            cj.set("distinct_count", c.distinct_count);
            auto ss = JsonValue::array();
            for (const auto& s : c.solutions)
                ss.push(two_quad_json(s));
            cj.set("solutions", std::move(ss));
            cl.push(std::move(cj));
        }
        ej.set("clusters", std::move(cl));
    }
    j.set("extraction", std::move(ej));
    emit(j);
    return 0;
}

int cmd_thurston_check(const std::string& file, const std::string& shapes_file,
                       const std::string& mode, bool refine) {
    Loaded l = load(file);
    nlohmann::json sj;
    try {
        sj = nlohmann::json::parse(read_file(shapes_file));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad shapes JSON: ") + e.what());
    }
    ShapeAssignment z;
    try {
        for (const auto& pair : sj.at("z"))
            z.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("bad shapes JSON: ") + e.what());
    }
    if (static_cast<int>(z.size()) != l.tri.num_quads())
        throw Error(ErrorCode::InvalidInput, "expected one shape per quad");
    ResidualMode rm =
        mode == "generalized" ? ResidualMode::Generalized : ResidualMode::Strict;
    auto j = JsonValue::object();
    j.set("residuals", residual_report_json(residuals(l.tri, l.inc, z, rm)));
    if (refine) {
        NewtonResult nr = newton_refine(l.tri, l.inc, z);
        auto rj = JsonValue::object();
        rj.set("converged", nr.converged);
        rj.set("iterations", nr.iterations);
        rj.set("rejected_steps", nr.rejected_steps);
        if (!nr.flag.empty())
            rj.set("flag", nr.flag);
        auto zs = JsonValue::array();
        for (const auto& s : nr.z)
            zs.push(complex_json(s));
        rj.set("z", std::move(zs));
        rj.set("residuals", residual_report_json(nr.report));
        j.set("refined", std::move(rj));
    }
    ShapeVolume sv = shape_volume(l.tri, l.inc, z);
    auto vj = JsonValue::object();
    vj.set("volume", sv.volume);
    vj.set("in_WT", sv.in_WT);
    j.set("shape_volume", std::move(vj));
    emit(j);
    return 0;
}

int cmd_z2taut(const std::string& file, long long limit, bool count_exact) {
    Loaded l = load(file);
    TautEnumeration res = enumerate_taut(l.tri, l.inc, limit, count_exact);
    auto j = JsonValue::object();
    j.set("count", res.count);
    j.set("count_exact", res.count_exact);
    auto arr = JsonValue::array();
    for (const auto& s : res.structures)
        arr.push(ivec_json(s.support(l.tri.num_tets())));
    j.set("structures", std::move(arr));
    if (res.count == 0 && res.deepest_fail_depth >= 0) {
        auto d = JsonValue::object();
        d.set("deepest_tet", res.deepest_fail_depth);
        d.set("failing_edges", ivec_json(res.deepest_fail_edges));
        j.set("deepest_failure", std::move(d));
    }
    emit(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spine3: normal surfaces, angle structures and gluing "
                 "equations on triangulated pseudo 3-manifolds"};
    app.require_subcommand(1);

    std::string file, shapes_file, two_quad, emit_path, mode = "strict";
    int restarts = 20;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    long long limit = 100;
    bool basis = false, clusters = false, refine = false, count_exact = false;

    auto* validate = app.add_subcommand("validate", "parse and validate a triangulation");
    validate->add_option("file", file)->required();

    auto* report = app.add_subcommand("report", "counts, orientation, links, incidence");
    report->add_option("file", file)->required();

    auto* tas = app.add_subcommand("tas", "tangential angle structure basis");
    tas->add_option("file", file)->required();

    auto* sas = app.add_subcommand("sas-init", "construct a circle-valued angle structure");
    sas->add_option("file", file)->required();

    auto* nz = app.add_subcommand("nz-selftest", "exact Neumann-Zagier identity suite");
    nz->add_option("file", file)->required();

    auto* haken = app.add_subcommand("haken", "normal surface solution spaces");
    haken->add_option("file", file)->required();
    haken->add_flag("--basis", basis, "emit exact solution bases");
    haken->add_option("--two-quad", two_quad, "search pairs for quad <tet>:<type>");
    haken->add_flag("--clusters", clusters, "search clusters of 2-quad solutions");

    auto* maxc = app.add_subcommand("maximize", "maximize volume over angle structures");
    maxc->add_option("file", file)->required();
    maxc->add_option("--restarts", restarts, "multi-start count");
    maxc->add_option("--seed", seed, "RNG seed");
    maxc->add_option("--tol", tol, "gradient norm tolerance");
    maxc->add_option("--emit-path", emit_path, "write the flattening path JSON here");

    auto* extract = app.add_subcommand("extract", "maximize, then extract shapes or "
                                                  "two-quad solutions");
    extract->add_option("file", file)->required();
    extract->add_option("--restarts", restarts, "multi-start count");
    extract->add_option("--seed", seed, "RNG seed");
    extract->add_option("--tol", tol, "gradient norm tolerance");

    auto* thur = app.add_subcommand("thurston-check", "evaluate gluing equation residuals");
    thur->add_option("file", file)->required();
    thur->add_option("shapes", shapes_file, "JSON file {\"z\": [[re,im],...]}")->required();
    thur->add_option("--mode", mode)->check(CLI::IsMember({"strict", "generalized"}));
    thur->add_flag("--refine", refine, "run Newton refinement");

    auto* z2 = app.add_subcommand("z2taut", "enumerate Z2-taut structures");
    z2->add_option("file", file)->required();
    z2->add_option("--limit", limit, "max structures to list");
    z2->add_flag("--count-exact", count_exact, "force a full count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed())
            return cmd_validate(file);
        if (report->parsed())
            return cmd_report(file);
        if (tas->parsed())
            return cmd_tas(file);
        if (sas->parsed())
            return cmd_sas_init(file);
        if (nz->parsed())
            return cmd_nz_selftest(file);
        if (haken->parsed())
            return cmd_haken(file, basis, two_quad, clusters);
        if (maxc->parsed())
            return cmd_maximize(file, restarts, seed, tol, emit_path);
        if (extract->parsed())
            return cmd_extract(file, restarts, seed, tol);
        if (thur->parsed())
            return cmd_thurston_check(file, shapes_file, mode, refine);
        if (z2->parsed())
            return cmd_z2taut(file, limit, count_exact);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return is_sentinel(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
