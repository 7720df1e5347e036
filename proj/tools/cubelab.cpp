// cubelab: exact computations on cube groups of filtered abelian 2-groups,
// sampling measures, exchangeability checks, consistency subgroups and
// fibration verification. Batch-driven: JSON in, JSON out.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "cubelab/json_io.hpp"
#include "cubelab/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace cubelab;

constexpr int kExitOk = 0;
constexpr int kExitBudget = 2;
constexpr int kExitBadInput = 3;

struct CommonOpts {
    std::string out_path;
    std::string mode = "exact";
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::uint64_t budget = default_budget();
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mode = true) {
    cmd->add_option("--out", o.out_path, "output file (stdout if omitted)");
    if (with_mode) {
        cmd->add_option("--mode", o.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
        cmd->add_option("--N", o.n_samples, "Monte Carlo sample count");
        cmd->add_option("--seed", o.seed, "Monte Carlo seed (required in mc mode)")
            ->each([&o](const std::string&) { o.seed_set = true; });
    }
    cmd->add_option("--jobs", o.jobs, "worker shards (default 1)");
    cmd->add_option("--budget", o.budget, "enumeration budget in iterations");
}

SampleSpec spec_of(const CommonOpts& o) {
    if (o.mode == "exact") {
        SampleSpec s = exact_spec(o.budget, o.jobs);
        return s;
    }
    if (!o.seed_set) throw std::invalid_argument("mc mode requires --seed");
    return mc_spec(o.n_samples, o.seed, o.jobs);
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

Json config_echo(const CLI::App* cmd, const CommonOpts& o) {
    Json cfg;
    cfg["version"] = kVersion;
    cfg["command"] = cmd->get_name();
    cfg["mode"] = o.mode;
    if (o.mode == "mc") {
        cfg["N"] = o.n_samples;
        cfg["seed"] = o.seed;
    }
    cfg["jobs"] = o.jobs;
    cfg["budget"] = o.budget;
    return cfg;
}

void emit_text(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write " + o.out_path);
        out << text;
    }
}

void emit(const CommonOpts& o, Json j) {
    emit_text(o, j.dump(2) + "\n");
}

std::string distribution_csv(const FiniteDistribution& d) {
    std::ostringstream os;
    os << "outcome,probability\n";
    if (d.is_exact()) {
        for (const auto& [outcome, p] : d.exact) {
            for (std::size_t i = 0; i < outcome.size(); ++i)
                os << (i ? ":" : "") << d.alphabet.at(outcome[i]);
            os << "," << rational_to_string(p) << "\n";
        }
    } else {
        for (const auto& [outcome, p] : d.estimated) {
            for (std::size_t i = 0; i < outcome.size(); ++i)
                os << (i ? ":" : "") << d.alphabet.at(outcome[i]);
            os << "," << p << "\n";
        }
    }
    return os.str();
}

int wrapped(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubelab: exact cube-group computations over F_2 filtrations"};
    app.set_version_flag("--version", cubelab::kVersion);
    app.require_subcommand(1);

    // ---- sample-measure ----
    auto* sm = app.add_subcommand("sample-measure",
                                  "distribution of f at a linear form system under a random "
                                  "affine map");
    CommonOpts sm_o;
    std::string sm_function, sm_forms;
    bool sm_csv = false;
    sm->add_option("--function", sm_function, "FunctionTable JSON")->required();
    sm->add_option("--forms", sm_forms, "LinearFormSystem JSON")->required();
    sm->add_flag("--csv", sm_csv, "emit the distribution table as CSV instead of JSON");
    add_common(sm, sm_o);

    // ---- zeta ----
    auto* ze = app.add_subcommand("zeta", "limit-object marginal on a form system");
    CommonOpts ze_o;
    std::string ze_limit, ze_forms;
    bool ze_csv = false;
    ze->add_option("--limit", ze_limit, "LimitObject JSON")->required();
    ze->add_option("--forms", ze_forms, "LinearFormSystem JSON")->required();
    ze->add_flag("--csv", ze_csv, "emit the distribution table as CSV instead of JSON");
    add_common(ze, ze_o);

    // ---- converge ----
    auto* cv = app.add_subcommand("converge", "pairwise distances along a function sequence");
    CommonOpts cv_o;
    std::vector<std::string> cv_functions, cv_forms;
    std::string cv_reference;
    cv->add_option("--functions", cv_functions, "FunctionTable JSON files, in sequence order")
        ->required()
        ->expected(-1);
    cv->add_option("--forms", cv_forms, "LinearFormSystem JSON files (one or more)")
        ->required()
        ->expected(-1);
    cv->add_option("--reference", cv_reference, "optional LimitObject JSON reference");
    add_common(cv, cv_o);

    // ---- exch ----
    auto* ex = app.add_subcommand("exch", "exchangeability / independence checks on a window");
    CommonOpts ex_o;
    std::string ex_dist, ex_check = "affine";
    int ex_m = 1;
    ex->add_option("--dist", ex_dist, "WindowDistribution JSON")->required();
    ex->add_option("--check", ex_check, "affine, cubic or independence")
        ->check(CLI::IsMember({"affine", "cubic", "independence"}));
    ex->add_option("--m", ex_m, "sub-cube dimension for the cubic check");
    add_common(ex, ex_o, /*with_mode=*/false);

    // ---- consistency ----
    auto* co = app.add_subcommand("consistency", "membership in the consistency subgroup");
    CommonOpts co_o;
    std::string co_forms, co_tuple;
    int co_k = 1, co_r = 0;
    co->add_option("--forms", co_forms, "LinearFormSystem JSON")->required();
    co->add_option("--k", co_k, "degree bound")->required();
    co->add_option("--r", co_r, "depth bound")->required();
    co->add_option("--tuple", co_tuple, "comma-separated residues, one per form")->required();
    add_common(co, co_o, /*with_mode=*/false);

    // ---- fib ----
    auto* fb = app.add_subcommand("fib", "morphism / cube-surjectivity / fibration checks");
    CommonOpts fb_o;
    std::string fb_domain, fb_codomain, fb_map, fb_check = "fibration";
    fb->add_option("--domain", fb_domain, "FilteredGroup JSON")->required();
    fb->add_option("--codomain", fb_codomain, "FilteredGroup JSON")->required();
    fb->add_option("--map", fb_map, "map JSON (value table)")->required();
    fb->add_option("--check", fb_check, "morphism, cube-surjective or fibration")
        ->check(CLI::IsMember({"morphism", "cube-surjective", "fibration"}));
    add_common(fb, fb_o, /*with_mode=*/false);

    // ---- calibrate ----
    auto* ca = app.add_subcommand("calibrate", "empirical depth-convention pairing table");
    CommonOpts ca_o;
    int ca_kmax = 3, ca_nmax = 2;
    ca->add_option("--kmax", ca_kmax, "largest degree calibrated");
    ca->add_option("--nmax", ca_nmax, "largest arity used in the exhaustive comparison");
    add_common(ca, ca_o, /*with_mode=*/false);

    // ---- cube-count ----
    auto* cc = app.add_subcommand("cube-count", "|C^n(Z)| by the coefficient-count formula");
    CommonOpts cc_o;
    std::string cc_group;
    int cc_n = 1;
    cc->add_option("--group", cc_group, "FilteredGroup JSON")->required();
    cc->add_option("--n", cc_n, "cube dimension")->required();
    add_common(cc, cc_o, /*with_mode=*/false);

    // ---- complete-corner ----
    auto* cr = app.add_subcommand("complete-corner", "unique corner completion");
    CommonOpts cr_o;
    std::string cr_group, cr_cube;
    cr->add_option("--group", cr_group, "FilteredGroup JSON")->required();
    cr->add_option("--cube", cr_cube, "CubePoint JSON with one null vertex")->required();
    add_common(cr, cr_o, /*with_mode=*/false);

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    // jobs governs sharding; keep the thread pool in line with it
    CommonOpts* active = nullptr;
    for (CommonOpts* o : {&sm_o, &ze_o, &cv_o, &ex_o, &co_o, &fb_o, &ca_o, &cc_o, &cr_o})
        if (o->jobs > 1) active = o;
    if (active) omp_set_num_threads(active->jobs);
#endif

    if (sm->parsed())
        return wrapped([&] {
            FunctionTable f = function_from_json(load_json(sm_function));
            LinearFormSystem l = forms_from_json(load_json(sm_forms));
            FiniteDistribution d = sample_measure(f, l, spec_of(sm_o));
            if (sm_csv) {
                emit_text(sm_o, distribution_csv(d));
                return;
            }
            Json j;
            j["config"] = config_echo(sm, sm_o);
            j["distribution"] = distribution_to_json(d);
            emit(sm_o, j);
        });

    if (ze->parsed())
        return wrapped([&] {
            LimitObject lim = limit_object_from_json(load_json(ze_limit));
            LinearFormSystem l = forms_from_json(load_json(ze_forms));
            FiniteDistribution d = zeta_marginal(lim, l, spec_of(ze_o));
            if (ze_csv) {
                emit_text(ze_o, distribution_csv(d));
                return;
            }
            Json j;
            j["config"] = config_echo(ze, ze_o);
            j["distribution"] = distribution_to_json(d);
            emit(ze_o, j);
        });

    if (cv->parsed())
        return wrapped([&] {
            std::vector<FunctionTable> fs;
            for (const auto& path : cv_functions) fs.push_back(function_from_json(load_json(path)));
            std::vector<LinearFormSystem> systems;
            for (const auto& path : cv_forms) systems.push_back(forms_from_json(load_json(path)));
            LimitObject ref;
            bool has_ref = !cv_reference.empty();
            if (has_ref) ref = limit_object_from_json(load_json(cv_reference));
            ConvergenceReport rep =
                convergence_report(fs, systems, spec_of(cv_o), has_ref ? &ref : nullptr);
            Json j;
            j["config"] = config_echo(cv, cv_o);
            Json rows = Json::array();
            for (const auto& row : rep.rows) {
                Json rj;
                rj["forms"] = forms_to_json(row.system);
                Json cons = Json::array();
                for (const auto& tv : row.consecutive) cons.push_back(tv_to_json(tv));
                rj["consecutive"] = cons;
                if (rep.has_reference) {
                    Json refs = Json::array();
                    for (const auto& tv : row.against_reference) refs.push_back(tv_to_json(tv));
                    rj["against_reference"] = refs;
                }
                rows.push_back(rj);
            }
            j["systems"] = rows;
            emit(cv_o, j);
        });

    if (ex->parsed())
        return wrapped([&] {
            WindowDistribution w = window_from_json(load_json(ex_dist));
            ExchReport rep;
            if (ex_check == "affine")
                rep = check_affine_exchangeable(w);
            else if (ex_check == "cubic")
                rep = check_cubic_exchangeable(w, ex_m);
            else
                rep = check_independence_property(w);
            Json j;
            j["config"] = config_echo(ex, ex_o);
            j["check"] = ex_check;
            j["report"] = exch_report_to_json(rep);
            emit(ex_o, j);
        });

    if (co->parsed())
        return wrapped([&] {
            LinearFormSystem l = forms_from_json(load_json(co_forms));
            std::vector<std::uint32_t> tuple;
            std::stringstream ss(co_tuple);
            std::string part;
            while (std::getline(ss, part, ',')) tuple.push_back(std::stoul(part));
            DepthConvention conv = calibrate_depth_convention(std::max(co_k, 3), 2);
            bool verdict = is_consistent(tuple, l, co_k, co_r, conv);
            auto ell = conv.ell_for(co_k, co_r);
            GroupPtr target = make_canonical(co_k, *ell);
            ConsistencySubgroup sub(target, l);
            Json j;
            j["config"] = config_echo(co, co_o);
            j["k"] = co_k;
            j["r"] = co_r;
            j["ell"] = *ell;
            j["target_order"] = target->moduli()[0];
            j["consistent"] = verdict;
            j["subgroup_order"] = sub.subgroup_order().get_str();
            Json pivots = Json::array();
            for (const auto& p : sub.pivots()) {
                Json pj;
                pj["row"] = p.row;
                pj["valuation"] = p.valuation;
                pj["column"] = p.column;
                pivots.push_back(pj);
            }
            j["reduced_generators"] = pivots;
            emit(co_o, j);
        });

    if (fb->parsed())
        return wrapped([&] {
            GroupPtr dom = group_from_json(load_json(fb_domain));
            GroupPtr cod = group_from_json(load_json(fb_codomain));
            GroupNilspaceMap phi = map_from_json(load_json(fb_map), dom, cod);
            Json j;
            j["config"] = config_echo(fb, fb_o);
            j["check"] = fb_check;
            if (fb_check == "morphism") {
                MorphismCheck mc = is_morphism(phi, -1, fb_o.budget);
                j["verdict"] = mc.ok;
                j["cube_checked_dims"] = mc.cube_checked_dims;
                j["used_difference_route"] = mc.used_difference_route;
            } else if (fb_check == "cube-surjective") {
                int nmax = std::max(dom->degree(), cod->degree()) + 1;
                j["verdict"] = is_cube_surjective(phi, nmax, fb_o.budget);
                j["nmax"] = nmax;
            } else {
                MorphismCheck mc = is_morphism(phi, -1, fb_o.budget);
                if (!mc.ok) throw std::invalid_argument("fib: map is not a morphism");
                j["verdict"] = is_fibration(phi);
            }
            emit(fb_o, j);
        });

    if (ca->parsed())
        return wrapped([&] {
            DepthConvention conv = calibrate_depth_convention(ca_kmax, ca_nmax);
            Json j;
            j["config"] = config_echo(ca, ca_o);
            j["convention"] = depth_convention_to_json(conv);
            emit(ca_o, j);
        });

    if (cc->parsed())
        return wrapped([&] {
            GroupPtr z = group_from_json(load_json(cc_group));
            Json j;
            j["config"] = config_echo(cc, cc_o);
            j["group"] = group_to_json(z);
            j["n"] = cc_n;
            j["count"] = cube_count(z, cc_n).get_str();
            emit(cc_o, j);
        });

    if (cr->parsed())
        return wrapped([&] {
            GroupPtr z = group_from_json(load_json(cr_group));
            std::optional<std::uint32_t> missing;
            CubePoint partial = cube_point_from_json(load_json(cr_cube), z, &missing);
            if (!missing) throw std::invalid_argument("complete-corner: no missing vertex");
            CubePoint full = complete_corner(partial, *missing);
            Json j;
            j["config"] = config_echo(cr, cr_o);
            j["missing_vertex"] = *missing;
            j["cube"] = cube_point_to_json(full);
            emit(cr_o, j);
        });

    return kExitOk;
}
